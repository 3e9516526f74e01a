#include "arglt/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace arglt {

std::size_t AdamState::add_group(std::size_t size, double lr) {
  groups_.push_back({lr, std::vector<double>(size, 0.0), std::vector<double>(size, 0.0)});
  return groups_.size() - 1;
}

void AdamState::apply(std::size_t group, std::span<double> params, std::span<const double> grads) {
  Group& g = groups_.at(group);
  if (params.size() != g.m.size() || grads.size() != g.m.size()) {
    throw std::invalid_argument("adam: parameter/gradient shape mismatch");
  }
  if (step_ == 0) throw std::logic_error("adam: apply() before next_step()");
  const double t = static_cast<double>(step_);
  const double bc1 = 1.0 - std::pow(hyper_.beta1, t);
  const double bc2 = 1.0 - std::pow(hyper_.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    g.m[k] = hyper_.beta1 * g.m[k] + (1.0 - hyper_.beta1) * grads[k];
    g.v[k] = hyper_.beta2 * g.v[k] + (1.0 - hyper_.beta2) * grads[k] * grads[k];
    const double m_hat = g.m[k] / bc1;
    const double v_hat = g.v[k] / bc2;
    params[k] -= g.lr * m_hat / (std::sqrt(v_hat) + hyper_.eps);
  }
}

}  // namespace arglt
