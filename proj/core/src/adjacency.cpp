#include "arglt/adjacency.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace arglt {

NormalizedAdjacency::NormalizedAdjacency(std::size_t num_nodes, std::span<const Edge> edges,
                                         std::span<const double> weights)
    : n_(num_nodes), edges_(edges.begin(), edges.end()), weights_(weights.begin(), weights.end()) {
  if (edges.size() != weights.size()) {
    throw std::invalid_argument("adjacency: " + std::to_string(weights.size()) +
                                " weights for " + std::to_string(edges.size()) + " edges");
  }
  degree_.assign(n_, 1.0);
  std::vector<std::size_t> count(n_ + 1, 0);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& ed = edges_[e];
    if (ed.u < 0 || ed.v < 0 || static_cast<std::size_t>(ed.u) >= n_ ||
        static_cast<std::size_t>(ed.v) >= n_ || ed.u == ed.v) {
      throw std::invalid_argument("adjacency: invalid edge endpoints");
    }
    degree_[ed.u] += weights_[e];
    degree_[ed.v] += weights_[e];
    ++count[ed.u + 1];
    ++count[ed.v + 1];
  }
  inv_sqrt_degree_.resize(n_);
  diag_.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    if (!(degree_[i] > 0.0)) {
      throw std::runtime_error("adjacency: non-positive degree " + std::to_string(degree_[i]) +
                               " at node " + std::to_string(i) + " (diverging edge mask)");
    }
    inv_sqrt_degree_[i] = 1.0 / std::sqrt(degree_[i]);
    diag_[i] = 1.0 / degree_[i];
  }
  off_.resize(edges_.size());
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    off_[e] = weights_[e] * inv_sqrt_degree_[edges_[e].u] * inv_sqrt_degree_[edges_[e].v];
  }

  row_ptr_.resize(n_ + 1);
  for (std::size_t i = 0; i < n_; ++i) count[i + 1] += count[i];
  row_ptr_.assign(count.begin(), count.end());
  col_.resize(2 * edges_.size());
  entry_edge_.resize(2 * edges_.size());
  std::vector<std::size_t> fill(row_ptr_.begin(), row_ptr_.end() - 1);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& ed = edges_[e];
    col_[fill[ed.u]] = ed.v;
    entry_edge_[fill[ed.u]++] = e;
    col_[fill[ed.v]] = ed.u;
    entry_edge_[fill[ed.v]++] = e;
  }
}

Matrix NormalizedAdjacency::multiply(const Matrix& x) const {
  if (static_cast<std::size_t>(x.rows()) != n_) {
    throw std::invalid_argument("adjacency: multiply shape mismatch");
  }
  Matrix y(x.rows(), x.cols());
  for (std::size_t i = 0; i < n_; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    y.row(r).noalias() = diag_[i] * x.row(r);
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      y.row(r).noalias() += off_[entry_edge_[k]] * x.row(col_[k]);
    }
  }
  return y;
}

std::vector<double> NormalizedAdjacency::weight_gradient(std::span<const double> edge_sym_grad,
                                                         std::span<const double> diag_grad) const {
  if (edge_sym_grad.size() != edges_.size() || diag_grad.size() != n_) {
    throw std::invalid_argument("adjacency: gradient shape mismatch");
  }
  // Â_ij = w_ij s_i s_j with s = d^{-1/2} and w_ii = 1, so
  //   ∂L/∂s_k = q_k / s_k,  q_k = Σ_j (g_kj + g_jk) Â_kj  (diagonal counted twice),
  //   ∂L/∂d_k = -q_k / (2 d_k).
  std::vector<double> q(n_);
  for (std::size_t i = 0; i < n_; ++i) q[i] = 2.0 * diag_grad[i] * diag_[i];
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const double c = edge_sym_grad[e] * off_[e];
    q[edges_[e].u] += c;
    q[edges_[e].v] += c;
  }
  std::vector<double> grad_degree(n_);
  for (std::size_t i = 0; i < n_; ++i) grad_degree[i] = -q[i] / (2.0 * degree_[i]);

  std::vector<double> grad(edges_.size());
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& ed = edges_[e];
    grad[e] = edge_sym_grad[e] * inv_sqrt_degree_[ed.u] * inv_sqrt_degree_[ed.v] +
              grad_degree[ed.u] + grad_degree[ed.v];
  }
  return grad;
}

Matrix NormalizedAdjacency::to_dense() const {
  const auto n = static_cast<Eigen::Index>(n_);
  Matrix a = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < n_; ++i) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = diag_[i];
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    a(edges_[e].u, edges_[e].v) = off_[e];
    a(edges_[e].v, edges_[e].u) = off_[e];
  }
  return a;
}

}  // namespace arglt
