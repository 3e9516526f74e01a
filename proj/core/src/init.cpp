#include "arglt/init.hpp"

#include <cmath>
#include <stdexcept>

#include "arglt/seeds.hpp"

namespace arglt {

Matrix init_weights(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  if (rows <= 0 || cols <= 0) throw std::invalid_argument("init_weights: dims must be positive");
  const double limit = glorot_limit(rows, cols);
  Rng rng(seed);
  Matrix w(rows, cols);
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    w.data()[k] = (2.0 * uniform_unit(rng) - 1.0) * limit;
  }
  return w;
}

}  // namespace arglt
