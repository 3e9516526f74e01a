#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace arglt {

struct AdamHyper {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Adam with bias correction and one learning rate per parameter group.
///
/// Usage per iteration: `next_step()` once, then `apply()` for each group.
/// Update: p -= lr * m̂ / (sqrt(v̂) + eps).
class AdamState {
 public:
  explicit AdamState(AdamHyper hyper = {}) : hyper_(hyper) {}

  /// Registers a group of `size` parameters; returns its id.
  std::size_t add_group(std::size_t size, double lr);

  void next_step() { ++step_; }
  std::uint64_t step_count() const { return step_; }
  double learning_rate(std::size_t group) const { return groups_.at(group).lr; }

  void apply(std::size_t group, std::span<double> params, std::span<const double> grads);

 private:
  struct Group {
    double lr;
    std::vector<double> m;
    std::vector<double> v;
  };
  AdamHyper hyper_;
  std::vector<Group> groups_;
  std::uint64_t step_ = 0;
};

}  // namespace arglt
