#include "arglt/gcn.hpp"

#include <stdexcept>

#include "arglt/init.hpp"
#include "arglt/seeds.hpp"

namespace arglt {

GcnState::GcnState(Eigen::Index features, Eigen::Index hidden, Eigen::Index classes,
                   std::uint64_t seed)
    : w0(init_weights(features, hidden, derive_seed(seed, "gcn-w0"))),
      w1(init_weights(hidden, classes, derive_seed(seed, "gcn-w1"))),
      init_w0_(w0),
      init_w1_(w1) {}

GcnState::GcnState(Matrix w0_in, Matrix w1_in, Matrix init_w0, Matrix init_w1)
    : w0(std::move(w0_in)), w1(std::move(w1_in)), init_w0_(std::move(init_w0)),
      init_w1_(std::move(init_w1)) {
  if (w0.cols() != w1.rows() || w0.rows() != init_w0_.rows() || w0.cols() != init_w0_.cols() ||
      w1.rows() != init_w1_.rows() || w1.cols() != init_w1_.cols()) {
    throw std::invalid_argument("gcn: inconsistent weight shapes");
  }
}

void GcnState::rewind() {
  w0 = init_w0_;
  w1 = init_w1_;
}

bool GcnState::at_initialization() const {
  return w0.size() == init_w0_.size() && w1.size() == init_w1_.size() &&
         std::equal(w0.data(), w0.data() + w0.size(), init_w0_.data()) &&
         std::equal(w1.data(), w1.data() + w1.size(), init_w1_.data());
}

GcnForward gcn_forward(const NormalizedAdjacency& adj, const NodeFeatures& x, const GcnState& gcn,
                       const WeightMasks& masks) {
  if (static_cast<std::size_t>(x.rows()) != adj.num_nodes() || x.cols() != gcn.w0.rows()) {
    throw std::invalid_argument("gcn_forward: feature shape mismatch");
  }
  if (masks.w0.rows() != gcn.w0.rows() || masks.w0.cols() != gcn.w0.cols() ||
      masks.w1.rows() != gcn.w1.rows() || masks.w1.cols() != gcn.w1.cols()) {
    throw std::invalid_argument("gcn_forward: weight mask shape mismatch");
  }
  GcnForward f;
  f.adj = &adj;
  f.x = &x;
  f.gcn = &gcn;
  f.masks = &masks;
  f.w0_eff = masks.w0.cwiseProduct(gcn.w0);
  f.w1_eff = masks.w1.cwiseProduct(gcn.w1);
  f.xw = x.times(f.w0_eff);
  f.pre = adj.multiply(f.xw);
  f.hidden = f.pre.cwiseMax(0.0);
  f.hw.noalias() = f.hidden * f.w1_eff;
  f.logits = adj.multiply(f.hw);
  require_finite(f.logits, "gcn logits");
  f.probs = softmax_rows(f.logits);
  return f;
}

GcnGradients gcn_backward(const GcnForward& f, const Matrix& logits_grad, bool with_edge_grad) {
  if (f.adj == nullptr || logits_grad.rows() != f.logits.rows() ||
      logits_grad.cols() != f.logits.cols()) {
    throw std::invalid_argument("gcn_backward: gradient does not match the forward cache");
  }
  const NormalizedAdjacency& adj = *f.adj;
  GcnGradients g;

  Matrix d_hw = adj.multiply(logits_grad);
  Matrix d_w1_eff = f.hidden.transpose() * d_hw;
  Matrix d_pre = d_hw * f.w1_eff.transpose();
  d_pre = d_pre.cwiseProduct((f.pre.array() > 0.0).cast<double>().matrix());
  Matrix d_xw = adj.multiply(d_pre);
  Matrix d_w0_eff = f.x->transpose_times(d_xw);

  g.w0 = d_w0_eff.cwiseProduct(f.masks->w0);
  g.w1 = d_w1_eff.cwiseProduct(f.masks->w1);
  g.mask_w0 = d_w0_eff.cwiseProduct(f.gcn->w0);
  g.mask_w1 = d_w1_eff.cwiseProduct(f.gcn->w1);

  if (with_edge_grad) {
    // ∂L/∂Â_ij = G_i·HW_j (output layer) + D_i·XW_j (hidden layer).
    const auto edges = adj.edges();
    std::vector<double> sym(edges.size());
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const auto u = edges[e].u;
      const auto v = edges[e].v;
      sym[e] = logits_grad.row(u).dot(f.hw.row(v)) + logits_grad.row(v).dot(f.hw.row(u)) +
               d_pre.row(u).dot(f.xw.row(v)) + d_pre.row(v).dot(f.xw.row(u));
    }
    std::vector<double> diag(adj.num_nodes());
    for (std::size_t i = 0; i < diag.size(); ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      diag[i] = logits_grad.row(r).dot(f.hw.row(r)) + d_pre.row(r).dot(f.xw.row(r));
    }
    g.edge_mask = adj.weight_gradient(sym, diag);
  }
  return g;
}

std::vector<int> predict(const Matrix& probs) {
  std::vector<int> out(static_cast<std::size_t>(probs.rows()));
  for (Eigen::Index r = 0; r < probs.rows(); ++r) out[r] = row_argmax(probs, r);
  return out;
}

double accuracy(const Matrix& probs, const std::vector<int>& labels, std::span<const NodeId> nodes) {
  if (nodes.empty()) throw std::invalid_argument("accuracy: empty node set");
  std::size_t hits = 0;
  for (NodeId i : nodes) {
    if (row_argmax(probs, i) == labels[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(nodes.size());
}

}  // namespace arglt
