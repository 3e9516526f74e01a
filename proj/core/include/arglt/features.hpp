#pragma once

#include <span>

#include <Eigen/SparseCore>

#include "arglt/matrix.hpp"

namespace arglt {

/// Read-only node feature operator. Stores a sparse copy when the matrix is
/// mostly zeros (bag-of-words datasets) and a dense copy otherwise; results
/// do not depend on the choice beyond floating-point summation order.
class NodeFeatures {
 public:
  explicit NodeFeatures(const Matrix& x);

  /// Feature rows `rows` of x, same representation policy.
  static NodeFeatures gather(const Matrix& x, std::span<const NodeId> rows);

  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }
  bool is_sparse() const { return sparse_; }

  /// x * w
  Matrix times(const Matrix& w) const;
  /// xᵀ * g
  Matrix transpose_times(const Matrix& g) const;

 private:
  Eigen::Index rows_;
  Eigen::Index cols_;
  bool sparse_;
  Matrix dense_;
  Eigen::SparseMatrix<double, Eigen::RowMajor> csr_;
};

}  // namespace arglt
