#pragma once

#include <span>
#include <vector>

#include "arglt/graph.hpp"
#include "arglt/matrix.hpp"

namespace arglt {

/// Differentiable edge mask over the surviving edges of a (perturbed) edge
/// list. Pruned edges are dropped from storage, so `edge_ids` only names
/// edges still in play; `initial_count` is the edge count before any pruning.
struct EdgeMask {
  std::vector<std::size_t> edge_ids;
  std::vector<double> values;
  std::size_t initial_count = 0;

  static EdgeMask ones(std::size_t edge_count);

  std::size_t size() const { return values.size(); }
  /// Edges named by `edge_ids`, looked up in the full edge list.
  std::vector<Edge> select(std::span<const Edge> all_edges) const;
};

/// Weight masks shaped like W0 (F x H) and W1 (H x C).
struct WeightMasks {
  Matrix w0;
  Matrix w1;

  static WeightMasks ones(Eigen::Index features, Eigen::Index hidden, Eigen::Index classes);
  std::size_t size() const { return static_cast<std::size_t>(w0.size() + w1.size()); }
};

struct MaskPair {
  EdgeMask edges;
  WeightMasks weights;
};

/// 1 - (nonzero entries) / (entries at initialization).
double graph_sparsity(const EdgeMask& mask);
double model_sparsity(const WeightMasks& masks);

}  // namespace arglt
