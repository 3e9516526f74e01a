#pragma once

#include <cstdint>

#include "arglt/features.hpp"
#include "arglt/matrix.hpp"

namespace arglt {

/// Two-layer perceptron softmax(relu(X V0) V1); no bias terms.
struct MlpState {
  Matrix v0;  // F x H
  Matrix v1;  // H x C

  MlpState(Eigen::Index features, Eigen::Index hidden, Eigen::Index classes, std::uint64_t seed);
  MlpState(Matrix v0_in, Matrix v1_in);

  Eigen::Index hidden_dim() const { return v0.cols(); }
};

/// Class probabilities for each row of `x_rows`.
Matrix mlp_forward(const Matrix& x_rows, const MlpState& mlp);

struct MlpForward {
  Matrix pre;
  Matrix hidden;
  Matrix logits;
  Matrix probs;
};

MlpForward mlp_forward(const NodeFeatures& x, const MlpState& mlp);

struct MlpGradients {
  Matrix v0;
  Matrix v1;
};

MlpGradients mlp_backward(const NodeFeatures& x, const MlpState& mlp, const MlpForward& fwd,
                          const Matrix& logits_grad);

}  // namespace arglt
