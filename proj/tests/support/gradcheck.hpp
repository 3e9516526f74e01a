#pragma once

// Finite-difference check of the pruning objective's analytic gradients on
// random small instances. Differences are taken on the dense oracle.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "arglt/features.hpp"
#include "arglt/gcn.hpp"
#include "arglt/losses.hpp"
#include "oracle.hpp"

namespace oracle {

struct Instance {
  std::size_t n = 0;
  std::vector<Edge> edges;
  Matrix x;
  std::vector<int> labels;
  std::vector<NodeId> train;
  arglt::PseudoLabels pseudo;
  Params params;
  Weights weights;
};

/// Pre-activations closer than this to 0 are resampled so the ReLU is smooth
/// within the difference step.
inline constexpr double kKinkMargin = 1e-3;

inline Instance random_instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  std::normal_distribution<double> normal(0.0, 1.0);

  Instance in;
  in.n = static_cast<std::size_t>(pick(4, 20));
  const int f = pick(1, 6), h = pick(1, 8), c = pick(2, 4);
  for (std::size_t i = 0; i < in.n; ++i) {
    for (std::size_t j = i + 1; j < in.n; ++j) {
      if (uni(0, 1) < 0.3) in.edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j)});
    }
  }
  if (in.edges.empty()) in.edges.push_back({0, 1});
  in.x = Matrix(static_cast<Eigen::Index>(in.n), f);
  for (Eigen::Index i = 0; i < in.x.size(); ++i) in.x.data()[i] = normal(rng);
  for (std::size_t i = 0; i < in.n; ++i) in.labels.push_back(pick(0, c - 1));

  std::vector<NodeId> order(in.n);
  for (std::size_t i = 0; i < in.n; ++i) order[i] = static_cast<NodeId>(i);
  std::shuffle(order.begin(), order.end(), rng);
  const std::size_t n_train = std::max<std::size_t>(1, in.n / 3);
  in.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::sort(in.train.begin(), in.train.end());
  for (std::size_t k = n_train; k < in.n; ++k) {
    if (uni(0, 1) < 0.5) in.pseudo.entries.push_back({order[k], pick(0, c - 1), 0.9});
  }
  std::sort(in.pseudo.entries.begin(), in.pseudo.entries.end(),
            [](const auto& a, const auto& b) { return a.node < b.node; });

  in.weights = {uni(0.5, 1.5), uni(0.0, 0.2), uni(0.5, 1.5), uni(0.0, 0.05), uni(0.0, 0.05)};
  auto fill = [&](Matrix& m, Eigen::Index r, Eigen::Index cols, double lo, double hi) {
    m = Matrix(r, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = uni(lo, hi);
  };
  for (int attempt = 0;; ++attempt) {
    fill(in.params.w0, f, h, -1.0, 1.0);
    fill(in.params.w1, h, c, -1.0, 1.0);
    fill(in.params.m0, f, h, 0.1, 1.0);
    fill(in.params.m1, h, c, 0.1, 1.0);
    in.params.edge_mask.resize(in.edges.size());
    for (double& m : in.params.edge_mask) m = uni(0.1, 1.0);
    const Matrix adj = dense_adjacency(in.n, in.edges, in.params.edge_mask);
    if (dense_pre(adj, in.x, in.params).cwiseAbs().minCoeff() > kKinkMargin) break;
  }
  return in;
}

struct GradCheck {
  double worst = 0.0;         // largest relative error over all coordinates
  std::string worst_at;       // parameter group and flat index
  double loss_error = 0.0;    // relative mismatch of the objective value
  std::size_t coordinates = 0;
};

inline GradCheck check_gradients(const Instance& in, double h, double floor) {
  const arglt::NodeFeatures xf(in.x);
  std::vector<double> diffs;
  for (const Edge& e : in.edges) diffs.push_back((in.x.row(e.u) - in.x.row(e.v)).squaredNorm());
  const arglt::ObjectiveInputs inputs{in.n, in.edges, diffs, &xf, &in.labels, in.train, &in.pseudo};
  const arglt::GcnState gcn(in.params.w0, in.params.w1, in.params.w0, in.params.w1);
  const arglt::WeightMasks masks{in.params.m0, in.params.m1};
  const arglt::LossWeights w{in.weights.alpha, in.weights.beta, in.weights.gamma, 1.0, 1.0,
                             in.weights.lambda1, in.weights.lambda2};
  const arglt::ObjectiveResult r = arglt::args_objective(inputs, gcn, in.params.edge_mask, masks, w);

  auto loss = [&](const Params& p) {
    return dense_args(in.n, in.edges, in.x, in.labels, in.train, in.pseudo, p, in.weights).total;
  };
  GradCheck out;
  out.loss_error = rel_error(r.loss.total, loss(in.params), 1e-12);

  auto sweep = [&](const char* name, auto&& coord, std::span<const double> analytic) {
    for (std::size_t k = 0; k < analytic.size(); ++k) {
      Params plus = in.params, minus = in.params;
      coord(plus, k) += h;
      coord(minus, k) -= h;
      const double fd = (loss(plus) - loss(minus)) / (2.0 * h);
      const double err = rel_error(analytic[k], fd, floor);
      ++out.coordinates;
      if (err > out.worst) {
        out.worst = err;
        out.worst_at = std::string(name) + "[" + std::to_string(k) + "]";
      }
    }
  };
  sweep("W0", [](Params& p, std::size_t k) -> double& { return p.w0.data()[k]; }, arglt::flat(r.grad.w0));
  sweep("W1", [](Params& p, std::size_t k) -> double& { return p.w1.data()[k]; }, arglt::flat(r.grad.w1));
  sweep("M0", [](Params& p, std::size_t k) -> double& { return p.m0.data()[k]; }, arglt::flat(r.grad.mask_w0));
  sweep("M1", [](Params& p, std::size_t k) -> double& { return p.m1.data()[k]; }, arglt::flat(r.grad.mask_w1));
  sweep("m_g", [](Params& p, std::size_t k) -> double& { return p.edge_mask[k]; }, r.grad.edge_mask);
  return out;
}

}  // namespace oracle
