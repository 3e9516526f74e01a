#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "arglt/graph.hpp"
#include "arglt/mlp.hpp"

namespace arglt {

struct PseudoLabel {
  NodeId node = 0;
  int label = 0;
  double confidence = 0.0;  // max softmax probability
};

/// High-confidence MLP predictions on test nodes, sorted by node id.
struct PseudoLabels {
  std::vector<PseudoLabel> entries;
  double threshold = 0.8;

  bool empty() const { return entries.empty(); }
  std::size_t size() const { return entries.size(); }
};

struct MlpTrainConfig {
  int epochs = 200;
  double lr = 1e-2;
  int patience = 30;
  /// Requested width; the trained width is min(hidden, 4 * F).
  Eigen::Index hidden = 1024;
};

Eigen::Index effective_mlp_hidden(Eigen::Index requested, Eigen::Index num_features);

/// Trains the MLP with Adam on summed cross-entropy over train nodes using
/// features only. Keeps the weights of the best validation epoch, ranked by
/// accuracy then by lower validation cross-entropy (patience `cfg.patience`);
/// without validation nodes the final weights are kept.
MlpState train_mlp(const Graph& g, const NodeSplit& split, const MlpTrainConfig& cfg,
                   std::uint64_t seed);

/// Test nodes whose max class probability is >= tau. Label is the argmax
/// (smallest class id on ties).
PseudoLabels select_pseudo_labels(const MlpState& mlp, const Graph& g, const NodeSplit& split,
                                  double tau);

/// Fraction of pseudo labels matching the true labels (0 when empty).
double pseudo_label_accuracy(const PseudoLabels& pseudo, const std::vector<int>& labels);

/// Writes [{"node":..,"label":..,"confidence":..}, ...].
void save_pseudo_labels(const std::filesystem::path& path, const PseudoLabels& pseudo);

}  // namespace arglt
