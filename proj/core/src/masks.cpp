#include "arglt/masks.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace arglt {

EdgeMask EdgeMask::ones(std::size_t edge_count) {
  EdgeMask m;
  m.edge_ids.resize(edge_count);
  std::iota(m.edge_ids.begin(), m.edge_ids.end(), std::size_t{0});
  m.values.assign(edge_count, 1.0);
  m.initial_count = edge_count;
  return m;
}

std::vector<Edge> EdgeMask::select(std::span<const Edge> all_edges) const {
  std::vector<Edge> out;
  out.reserve(edge_ids.size());
  for (std::size_t id : edge_ids) {
    if (id >= all_edges.size()) throw std::out_of_range("edge mask id beyond edge list");
    out.push_back(all_edges[id]);
  }
  return out;
}

WeightMasks WeightMasks::ones(Eigen::Index features, Eigen::Index hidden, Eigen::Index classes) {
  return {Matrix::Ones(features, hidden), Matrix::Ones(hidden, classes)};
}

double graph_sparsity(const EdgeMask& mask) {
  if (mask.initial_count == 0) return 0.0;
  const auto nnz = std::count_if(mask.values.begin(), mask.values.end(),
                                 [](double v) { return v != 0.0; });
  return 1.0 - static_cast<double>(nnz) / static_cast<double>(mask.initial_count);
}

double model_sparsity(const WeightMasks& masks) {
  const auto total = masks.size();
  if (total == 0) return 0.0;
  const auto nnz = (masks.w0.array() != 0.0).count() + (masks.w1.array() != 0.0).count();
  return 1.0 - static_cast<double>(nnz) / static_cast<double>(total);
}

}  // namespace arglt
