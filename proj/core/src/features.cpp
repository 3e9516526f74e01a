#include "arglt/features.hpp"

#include <stdexcept>

namespace arglt {
namespace {
constexpr double kSparseDensity = 0.25;
}

NodeFeatures::NodeFeatures(const Matrix& x) : rows_(x.rows()), cols_(x.cols()) {
  const auto nnz = (x.array() != 0.0).count();
  sparse_ = x.size() > 0 && static_cast<double>(nnz) < kSparseDensity * static_cast<double>(x.size());
  if (sparse_) {
    csr_ = x.sparseView();
    csr_.makeCompressed();
  } else {
    dense_ = x;
  }
}

NodeFeatures NodeFeatures::gather(const Matrix& x, std::span<const NodeId> rows) {
  Matrix sub(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    sub.row(static_cast<Eigen::Index>(k)) = x.row(rows[k]);
  }
  return NodeFeatures(sub);
}

Matrix NodeFeatures::times(const Matrix& w) const {
  if (w.rows() != cols_) throw std::invalid_argument("features: times shape mismatch");
  Matrix out(rows_, w.cols());
  if (sparse_) {
    out.noalias() = csr_ * w;
  } else {
    out.noalias() = dense_ * w;
  }
  return out;
}

Matrix NodeFeatures::transpose_times(const Matrix& g) const {
  if (g.rows() != rows_) throw std::invalid_argument("features: transpose_times shape mismatch");
  Matrix out(cols_, g.cols());
  if (sparse_) {
    out.noalias() = csr_.transpose() * g;
  } else {
    out.noalias() = dense_.transpose() * g;
  }
  return out;
}

}  // namespace arglt
