#pragma once

#include <cstdint>
#include <vector>

#include "arglt/adjacency.hpp"
#include "arglt/features.hpp"
#include "arglt/masks.hpp"
#include "arglt/matrix.hpp"

namespace arglt {

/// Weights of the two-layer GCN plus their initialization snapshot Θ⁰.
/// The snapshot is fixed at construction.
class GcnState {
 public:
  GcnState(Eigen::Index features, Eigen::Index hidden, Eigen::Index classes, std::uint64_t seed);
  /// Restores a saved model; `init_w0`/`init_w1` become the snapshot.
  GcnState(Matrix w0, Matrix w1, Matrix init_w0, Matrix init_w1);

  Matrix w0;  // F x H
  Matrix w1;  // H x C

  const Matrix& init_w0() const { return init_w0_; }
  const Matrix& init_w1() const { return init_w1_; }

  Eigen::Index num_features() const { return w0.rows(); }
  Eigen::Index hidden_dim() const { return w0.cols(); }
  Eigen::Index num_classes() const { return w1.cols(); }
  std::size_t num_weights() const { return static_cast<std::size_t>(w0.size() + w1.size()); }

  /// Copies Θ⁰ back into the live weights.
  void rewind();

  /// True when the live weights equal Θ⁰ bit for bit.
  bool at_initialization() const;

 private:
  Matrix init_w0_;
  Matrix init_w1_;
};

/// Intermediates of Z = softmax(Â relu(Â X (M0⊙W0)) (M1⊙W1)).
/// Holds pointers to the inputs, which must outlive it.
struct GcnForward {
  const NormalizedAdjacency* adj = nullptr;
  const NodeFeatures* x = nullptr;
  const GcnState* gcn = nullptr;
  const WeightMasks* masks = nullptr;

  Matrix w0_eff;
  Matrix w1_eff;
  Matrix xw;      // X W0eff
  Matrix pre;     // Â X W0eff
  Matrix hidden;  // relu(pre)
  Matrix hw;      // hidden W1eff
  Matrix logits;  // Â hidden W1eff
  Matrix probs;   // row softmax
};

struct GcnGradients {
  Matrix w0;
  Matrix w1;
  Matrix mask_w0;
  Matrix mask_w1;
  std::vector<double> edge_mask;  // aligned to the adjacency's edge list
};

GcnForward gcn_forward(const NormalizedAdjacency& adj, const NodeFeatures& x, const GcnState& gcn,
                       const WeightMasks& masks);

/// Backpropagates ∂L/∂logits through the cached forward pass. The edge-mask
/// gradient includes the path through the degree normalization; skip it with
/// `with_edge_grad = false` when masks are frozen.
GcnGradients gcn_backward(const GcnForward& fwd, const Matrix& logits_grad,
                          bool with_edge_grad = true);

/// Argmax class per node (smallest class id on ties).
std::vector<int> predict(const Matrix& probs);

/// Fraction of `nodes` whose argmax prediction equals the label.
double accuracy(const Matrix& probs, const std::vector<int>& labels, std::span<const NodeId> nodes);

}  // namespace arglt
