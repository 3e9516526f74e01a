#include "arglt/mlp.hpp"

#include <stdexcept>

#include "arglt/init.hpp"
#include "arglt/seeds.hpp"

namespace arglt {

MlpState::MlpState(Eigen::Index features, Eigen::Index hidden, Eigen::Index classes,
                   std::uint64_t seed)
    : v0(init_weights(features, hidden, derive_seed(seed, "mlp-v0"))),
      v1(init_weights(hidden, classes, derive_seed(seed, "mlp-v1"))) {}

MlpState::MlpState(Matrix v0_in, Matrix v1_in) : v0(std::move(v0_in)), v1(std::move(v1_in)) {
  if (v0.cols() != v1.rows()) throw std::invalid_argument("mlp: inconsistent weight shapes");
}

MlpForward mlp_forward(const NodeFeatures& x, const MlpState& mlp) {
  MlpForward f;
  f.pre = x.times(mlp.v0);
  f.hidden = f.pre.cwiseMax(0.0);
  f.logits.noalias() = f.hidden * mlp.v1;
  require_finite(f.logits, "mlp logits");
  f.probs = softmax_rows(f.logits);
  return f;
}

Matrix mlp_forward(const Matrix& x_rows, const MlpState& mlp) {
  if (x_rows.cols() != mlp.v0.rows()) throw std::invalid_argument("mlp_forward: shape mismatch");
  return mlp_forward(NodeFeatures(x_rows), mlp).probs;
}

MlpGradients mlp_backward(const NodeFeatures& x, const MlpState& mlp, const MlpForward& f,
                          const Matrix& logits_grad) {
  if (logits_grad.rows() != f.logits.rows() || logits_grad.cols() != f.logits.cols()) {
    throw std::invalid_argument("mlp_backward: gradient shape mismatch");
  }
  MlpGradients g;
  g.v1 = f.hidden.transpose() * logits_grad;
  Matrix d_pre = logits_grad * mlp.v1.transpose();
  d_pre = d_pre.cwiseProduct((f.pre.array() > 0.0).cast<double>().matrix());
  g.v0 = x.transpose_times(d_pre);
  return g;
}

}  // namespace arglt
