#pragma once

#include <cstdint>
#include <span>

#include <Eigen/Core>

namespace arglt {

/// Dense row-major matrix used for features, activations and weights.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using NodeId = std::int32_t;

inline std::span<double> flat(Matrix& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}
inline std::span<const double> flat(const Matrix& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}

/// Throws std::runtime_error naming `what` if any entry is NaN or infinite.
void require_finite(const Matrix& m, const char* what);

/// Row-wise softmax with per-row max subtraction.
Matrix softmax_rows(const Matrix& logits);

/// Index of the largest entry in row r; ties go to the smallest index.
int row_argmax(const Matrix& m, Eigen::Index r);

}  // namespace arglt
