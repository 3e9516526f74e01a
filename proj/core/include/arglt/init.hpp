#pragma once

#include <cmath>
#include <cstdint>

#include "arglt/matrix.hpp"

namespace arglt {

/// Glorot-uniform matrix: entries in ±sqrt(6 / (rows + cols)), seeded.
Matrix init_weights(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed);

inline double glorot_limit(Eigen::Index rows, Eigen::Index cols) {
  return std::sqrt(6.0 / static_cast<double>(rows + cols));
}

}  // namespace arglt
