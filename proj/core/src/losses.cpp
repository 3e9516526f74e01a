#include "arglt/losses.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace arglt {
namespace {

double neg_log(double p) { return -std::log(p < kProbabilityFloor ? kProbabilityFloor : p); }

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

void add_row_grad(const Matrix& probs, Eigen::Index row, int label, double coef, Matrix& grad) {
  // d(-ln p_y)/dlogits = p - onehot(y); zero once the clamp is active.
  if (probs(row, label) < kProbabilityFloor) return;
  grad.row(row) += coef * probs.row(row);
  grad(row, label) -= coef;
}

}  // namespace

void LossWeights::validate() const {
  for (double v : {alpha, beta, gamma, eta, zeta, lambda1, lambda2}) {
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument("loss weights must be finite and non-negative");
    }
  }
}

double ce_train(const Matrix& probs, const std::vector<int>& labels, std::span<const NodeId> train) {
  if (train.empty()) throw std::invalid_argument("ce_train: empty train index set");
  double loss = 0.0;
  for (NodeId l : train) loss += neg_log(probs(l, labels[l]));
  return loss;
}

double ce_pseudo(const Matrix& probs, const PseudoLabels& pseudo) {
  double loss = 0.0;
  for (const auto& p : pseudo.entries) loss += neg_log(probs(p.node, p.label));
  return loss;
}

void add_ce_train_grad(const Matrix& probs, const std::vector<int>& labels,
                       std::span<const NodeId> train, double coef, Matrix& grad) {
  if (coef == 0.0) return;
  for (NodeId l : train) add_row_grad(probs, l, labels[l], coef, grad);
}

void add_ce_pseudo_grad(const Matrix& probs, const PseudoLabels& pseudo, double coef,
                        Matrix& grad) {
  if (coef == 0.0) return;
  for (const auto& p : pseudo.entries) add_row_grad(probs, p.node, p.label, coef, grad);
}

std::vector<double> edge_feature_differences(std::span<const Edge> edges, const Matrix& features,
                                             bool row_normalize) {
  std::vector<double> out(edges.size());
  if (!row_normalize) {
    for (std::size_t e = 0; e < edges.size(); ++e) {
      out[e] = feature_distance_sq(features, edges[e].u, edges[e].v);
    }
    return out;
  }
  Matrix normalized = features;
  for (Eigen::Index r = 0; r < normalized.rows(); ++r) {
    const double s = normalized.row(r).cwiseAbs().sum();
    if (s > 0.0) normalized.row(r) /= s;
  }
  for (std::size_t e = 0; e < edges.size(); ++e) {
    out[e] = feature_distance_sq(normalized, edges[e].u, edges[e].v);
  }
  return out;
}

double feature_smoothness(std::span<const double> mask, std::span<const double> edge_diffs) {
  if (mask.size() != edge_diffs.size()) {
    throw std::invalid_argument("feature_smoothness: mask/edge size mismatch");
  }
  double total = 0.0;
  for (std::size_t e = 0; e < mask.size(); ++e) total += mask[e] * edge_diffs[e];
  return total;
}

LossBreakdown args_total(double l0, double lfs, double l1, const LossWeights& w,
                         std::span<const double> edge_mask, const WeightMasks& weight_masks) {
  LossBreakdown b;
  b.l0 = l0;
  b.lfs = lfs;
  b.l1 = l1;
  for (double m : edge_mask) b.reg_g += std::abs(m);
  b.reg_theta = weight_masks.w0.cwiseAbs().sum() + weight_masks.w1.cwiseAbs().sum();
  b.total = w.alpha * b.l0 + w.beta * b.lfs + w.gamma * b.l1 + w.lambda1 * b.reg_g +
            w.lambda2 * b.reg_theta;
  return b;
}

double retrain_loss(const Matrix& probs, const std::vector<int>& labels,
                    std::span<const NodeId> train, const PseudoLabels& pseudo, double eta,
                    double zeta) {
  return eta * ce_train(probs, labels, train) + zeta * ce_pseudo(probs, pseudo);
}

namespace {

void check_inputs(const ObjectiveInputs& in, std::span<const double> edge_mask) {
  if (in.features == nullptr || in.labels == nullptr || in.pseudo == nullptr) {
    throw std::invalid_argument("objective: missing inputs");
  }
  if (edge_mask.size() != in.edges.size() || in.edge_diffs.size() != in.edges.size()) {
    throw std::invalid_argument("objective: edge mask has " + std::to_string(edge_mask.size()) +
                                " entries for " + std::to_string(in.edges.size()) + " edges");
  }
}

}  // namespace

ObjectiveResult args_objective(const ObjectiveInputs& in, const GcnState& gcn,
                               std::span<const double> edge_mask, const WeightMasks& weight_masks,
                               const LossWeights& w) {
  check_inputs(in, edge_mask);
  const NormalizedAdjacency adj(in.num_nodes, in.edges, edge_mask);
  GcnForward fwd = gcn_forward(adj, *in.features, gcn, weight_masks);

  const double l0 = ce_train(fwd.probs, *in.labels, in.train);
  const double l1 = ce_pseudo(fwd.probs, *in.pseudo);
  const double lfs = feature_smoothness(edge_mask, in.edge_diffs);

  ObjectiveResult r;
  r.loss = args_total(l0, lfs, l1, w, edge_mask, weight_masks);
  if (!std::isfinite(r.loss.total)) throw std::runtime_error("objective: non-finite loss");

  Matrix logits_grad = Matrix::Zero(fwd.logits.rows(), fwd.logits.cols());
  add_ce_train_grad(fwd.probs, *in.labels, in.train, w.alpha, logits_grad);
  add_ce_pseudo_grad(fwd.probs, *in.pseudo, w.gamma, logits_grad);
  r.grad = gcn_backward(fwd, logits_grad, true);

  for (std::size_t e = 0; e < edge_mask.size(); ++e) {
    r.grad.edge_mask[e] += w.beta * in.edge_diffs[e] + w.lambda1 * sign(edge_mask[e]);
  }
  if (w.lambda2 != 0.0) {
    r.grad.mask_w0 += w.lambda2 * weight_masks.w0.unaryExpr([](double v) { return sign(v); });
    r.grad.mask_w1 += w.lambda2 * weight_masks.w1.unaryExpr([](double v) { return sign(v); });
  }
  r.probs = std::move(fwd.probs);
  return r;
}

ObjectiveResult retrain_objective(const ObjectiveInputs& in, const GcnState& gcn,
                                  std::span<const double> edge_mask,
                                  const WeightMasks& weight_masks, double eta, double zeta) {
  check_inputs(in, edge_mask);
  const NormalizedAdjacency adj(in.num_nodes, in.edges, edge_mask);
  GcnForward fwd = gcn_forward(adj, *in.features, gcn, weight_masks);

  ObjectiveResult r;
  r.loss.l0 = ce_train(fwd.probs, *in.labels, in.train);
  r.loss.l1 = ce_pseudo(fwd.probs, *in.pseudo);
  r.loss.total = eta * r.loss.l0 + zeta * r.loss.l1;
  if (!std::isfinite(r.loss.total)) throw std::runtime_error("retraining: non-finite loss");

  Matrix logits_grad = Matrix::Zero(fwd.logits.rows(), fwd.logits.cols());
  add_ce_train_grad(fwd.probs, *in.labels, in.train, eta, logits_grad);
  add_ce_pseudo_grad(fwd.probs, *in.pseudo, zeta, logits_grad);
  r.grad = gcn_backward(fwd, logits_grad, false);
  r.probs = std::move(fwd.probs);
  return r;
}

}  // namespace arglt
