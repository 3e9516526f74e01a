#include "arglt/matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace arglt {

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw std::runtime_error(std::string("non-finite values in ") + what);
  }
}

Matrix softmax_rows(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const double mx = logits.row(r).maxCoeff();
    double total = 0.0;
    for (Eigen::Index c = 0; c < logits.cols(); ++c) {
      const double e = std::exp(logits(r, c) - mx);
      out(r, c) = e;
      total += e;
    }
    out.row(r) /= total;
  }
  return out;
}

int row_argmax(const Matrix& m, Eigen::Index r) {
  Eigen::Index best = 0;
  for (Eigen::Index c = 1; c < m.cols(); ++c) {
    if (m(r, c) > m(r, best)) best = c;
  }
  return static_cast<int>(best);
}

}  // namespace arglt
