#pragma once

#include <span>
#include <vector>

#include "arglt/graph.hpp"
#include "arglt/matrix.hpp"

namespace arglt {

/// Symmetric normalized adjacency with self-loops over weighted edges:
///
///   Â_ii = 1 / d_i,  Â_uv = w_e / sqrt(d_u d_v),  d_i = 1 + Σ_{e ∋ i} w_e.
///
/// Weights are edge-mask values (or relaxed attack weights). Both directions
/// of an edge read the same stored entry, so Â is symmetric by construction.
/// Weights may be negative, but every degree must stay positive.
class NormalizedAdjacency {
 public:
  NormalizedAdjacency(std::size_t num_nodes, std::span<const Edge> edges,
                      std::span<const double> weights);

  std::size_t num_nodes() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const double> weights() const { return weights_; }
  std::span<const double> degrees() const { return degree_; }

  double diagonal(std::size_t i) const { return diag_[i]; }
  double off_diagonal(std::size_t e) const { return off_[e]; }

  /// Returns Â x.
  Matrix multiply(const Matrix& x) const;

  /// Chain rule through the normalization. Inputs are the gradient of a
  /// scalar with respect to Â, folded per edge as (∂/∂Â_uv + ∂/∂Â_vu) and per
  /// node as ∂/∂Â_ii. Returns the gradient with respect to each edge weight,
  /// including the path through both endpoint degrees.
  std::vector<double> weight_gradient(std::span<const double> edge_sym_grad,
                                      std::span<const double> diag_grad) const;

  Matrix to_dense() const;

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
  std::vector<double> weights_;
  std::vector<double> degree_;
  std::vector<double> inv_sqrt_degree_;
  std::vector<double> diag_;
  std::vector<double> off_;
  // CSR over both directions; entry k points at neighbor col_[k] via edge entry_edge_[k].
  std::vector<std::size_t> row_ptr_;
  std::vector<NodeId> col_;
  std::vector<std::size_t> entry_edge_;
};

}  // namespace arglt
