#include "arglt/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "arglt/adam.hpp"
#include "arglt/gcn.hpp"
#include "arglt/losses.hpp"
#include "arglt/seeds.hpp"

namespace arglt {
namespace {

bool is_sorted_unique(const std::vector<Edge>& edges) {
  return std::adjacent_find(edges.begin(), edges.end(),
                            [](const Edge& a, const Edge& b) { return !(a < b); }) == edges.end();
}

std::uint64_t pair_count(std::size_t n) {
  return static_cast<std::uint64_t>(n) * (n == 0 ? 0 : n - 1) / 2;
}

// Index of the first pair in row i when pairs (i, j), i < j, are listed row-major.
std::uint64_t row_offset(std::uint64_t n, std::uint64_t i) { return i * (2 * n - i - 1) / 2; }

Edge decode_pair(std::uint64_t n, std::uint64_t index) {
  std::uint64_t lo = 0;
  std::uint64_t hi = n - 1;
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (row_offset(n, mid) <= index) lo = mid; else hi = mid;
  }
  const std::uint64_t j = lo + 1 + (index - row_offset(n, lo));
  return {static_cast<NodeId>(lo), static_cast<NodeId>(j)};
}

// Floyd's algorithm: k distinct values from [0, total), returned sorted.
std::vector<std::uint64_t> sample_distinct(std::uint64_t total, std::uint64_t k, Rng& rng) {
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(static_cast<std::size_t>(k) * 2);
  for (std::uint64_t j = total - k; j < total; ++j) {
    const std::uint64_t t = uniform_index(rng, j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::uint64_t> out(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

PerturbedGraph from_flips(const Graph& g, const std::vector<Edge>& flips) {
  PerturbedGraph pg;
  pg.base = g;
  for (const Edge& e : flips) (g.has_edge(e) ? pg.removed : pg.added).push_back(e);
  std::sort(pg.added.begin(), pg.added.end());
  std::sort(pg.removed.begin(), pg.removed.end());
  return pg;
}

GcnState train_surrogate(const Graph& g, const NodeSplit& split, const SurrogateConfig& cfg,
                         std::uint64_t seed) {
  const auto F = static_cast<Eigen::Index>(g.num_features());
  GcnState gcn(F, cfg.hidden, g.num_classes, derive_seed(seed, "surrogate"));
  const std::vector<double> ones(g.num_edges(), 1.0);
  const NormalizedAdjacency adj(g.num_nodes, g.edges, ones);
  const NodeFeatures x(g.features);
  const WeightMasks masks = WeightMasks::ones(F, cfg.hidden, g.num_classes);
  const double coef = 1.0 / static_cast<double>(split.train.size());

  AdamState adam;
  const auto g0 = adam.add_group(static_cast<std::size_t>(gcn.w0.size()), cfg.lr);
  const auto g1 = adam.add_group(static_cast<std::size_t>(gcn.w1.size()), cfg.lr);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const GcnForward fwd = gcn_forward(adj, x, gcn, masks);
    Matrix logits_grad = Matrix::Zero(fwd.logits.rows(), fwd.logits.cols());
    add_ce_train_grad(fwd.probs, g.labels, split.train, coef, logits_grad);
    GcnGradients grad = gcn_backward(fwd, logits_grad, false);
    grad.w0 += cfg.weight_decay * gcn.w0;
    grad.w1 += cfg.weight_decay * gcn.w1;
    adam.next_step();
    adam.apply(g0, flat(gcn.w0), flat(grad.w0));
    adam.apply(g1, flat(gcn.w1), flat(grad.w1));
  }
  return gcn;
}

struct PairSpace {
  std::vector<Edge> pairs;
  std::vector<double> present;  // A_p in {0, 1}
};

PairSpace candidate_pairs(const Graph& g, const AttackConfig& cfg, std::size_t budget) {
  PairSpace space;
  const std::size_t n = g.num_nodes;
  if (n <= cfg.full_candidate_limit) {
    space.pairs.reserve(static_cast<std::size_t>(pair_count(n)));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        space.pairs.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j)});
      }
    }
  } else {
    // Large graph: a random pair sample plus every existing edge.
    Rng rng(derive_seed(cfg.seed, "pgd-candidates"));
    const std::uint64_t total = pair_count(n);
    const std::uint64_t k =
        std::min<std::uint64_t>(total, static_cast<std::uint64_t>(budget) * cfg.sampled_candidates_per_flip);
    std::vector<Edge> sampled;
    sampled.reserve(static_cast<std::size_t>(k));
    for (std::uint64_t idx : sample_distinct(total, k, rng)) sampled.push_back(decode_pair(n, idx));
    std::set_union(sampled.begin(), sampled.end(), g.edges.begin(), g.edges.end(),
                   std::back_inserter(space.pairs));
  }
  space.present.assign(space.pairs.size(), 0.0);
  std::size_t k = 0;
  for (std::size_t p = 0; p < space.pairs.size() && k < g.edges.size(); ++p) {
    while (k < g.edges.size() && g.edges[k] < space.pairs[p]) ++k;
    if (k < g.edges.size() && g.edges[k] == space.pairs[p]) space.present[p] = 1.0;
  }
  return space;
}

// Mean train CE of a fixed model on weights over `pairs`, plus ∂/∂weights when asked.
double weighted_loss(const Graph& g, const NodeSplit& split, const GcnState& gcn,
                     const NodeFeatures& x, const WeightMasks& masks, const std::vector<Edge>& pairs,
                     const std::vector<double>& weights, std::vector<double>* weight_grad) {
  const NormalizedAdjacency adj(g.num_nodes, pairs, weights);
  const GcnForward fwd = gcn_forward(adj, x, gcn, masks);
  const double coef = 1.0 / static_cast<double>(split.train.size());
  const double loss = coef * ce_train(fwd.probs, g.labels, split.train);
  if (weight_grad != nullptr) {
    Matrix logits_grad = Matrix::Zero(fwd.logits.rows(), fwd.logits.cols());
    add_ce_train_grad(fwd.probs, g.labels, split.train, coef, logits_grad);
    *weight_grad = std::move(gcn_backward(fwd, logits_grad, true).edge_mask);
  }
  return loss;
}

}  // namespace

std::vector<Edge> PerturbedGraph::edges() const {
  std::vector<Edge> kept;
  kept.reserve(base.edges.size() - removed.size());
  std::set_difference(base.edges.begin(), base.edges.end(), removed.begin(), removed.end(),
                      std::back_inserter(kept));
  std::vector<Edge> out;
  out.reserve(kept.size() + added.size());
  std::merge(kept.begin(), kept.end(), added.begin(), added.end(), std::back_inserter(out));
  return out;
}

std::vector<std::uint8_t> PerturbedGraph::adversarial_flags() const {
  const std::vector<Edge> all = edges();
  std::vector<std::uint8_t> flags(all.size(), 0);
  for (std::size_t k = 0; k < all.size(); ++k) {
    flags[k] = std::binary_search(added.begin(), added.end(), all[k]) ? 1 : 0;
  }
  return flags;
}

void PerturbedGraph::validate(std::size_t budget) const {
  if (!is_sorted_unique(added) || !is_sorted_unique(removed)) {
    throw std::invalid_argument("attack: flip lists must be sorted and unique");
  }
  for (const Edge& e : added) {
    if (e.u < 0 || e.u >= e.v || static_cast<std::size_t>(e.v) >= base.num_nodes) {
      throw std::invalid_argument("attack: added pair out of range");
    }
    if (base.has_edge(e)) throw std::invalid_argument("attack: added pair is already an edge");
  }
  for (const Edge& e : removed) {
    if (!base.has_edge(e)) throw std::invalid_argument("attack: removed pair is not an edge");
  }
  if (budget_used() > budget) {
    throw std::invalid_argument("attack: " + std::to_string(budget_used()) +
                                " flips exceed the budget of " + std::to_string(budget));
  }
}

PerturbedGraph PerturbedGraph::clean(Graph g) {
  PerturbedGraph pg;
  pg.base = std::move(g);
  return pg;
}

std::size_t attack_budget(std::size_t edge_count, double rate) {
  if (!(rate >= 0.0 && rate <= 1.0)) throw std::invalid_argument("perturbation rate not in [0,1]");
  return static_cast<std::size_t>(std::floor(rate * static_cast<double>(edge_count)));
}

void AttackConfig::validate() const {
  if (!(rate >= 0.0 && rate <= 1.0)) throw std::invalid_argument("perturbation rate not in [0,1]");
  if (steps < 0) throw std::invalid_argument("attack steps must be >= 0");
  if (!(step_size > 0.0)) throw std::invalid_argument("attack step size must be > 0");
  if (sample_trials < 1) throw std::invalid_argument("attack sample trials must be >= 1");
  if (sampled_candidates_per_flip < 1) throw std::invalid_argument("candidate factor must be >= 1");
}

int project_to_budget(std::span<double> s, double budget) {
  double sum = 0.0;
  for (double& v : s) {
    v = std::clamp(v, 0.0, 1.0);
    sum += v;
  }
  if (sum <= budget) return 0;
  auto shifted_sum = [&](double mu) {
    double total = 0.0;
    for (double v : s) total += std::clamp(v - mu, 0.0, 1.0);
    return total;
  };
  double lo = -1.0;  // Σ clamp(s + 1) = m > budget
  double hi = 1.0;   // Σ clamp(s - 1) = 0 <= budget
  int iter = 0;
  for (; iter < 64 && hi - lo > 1e-12; ++iter) {
    const double mu = 0.5 * (lo + hi);
    if (shifted_sum(mu) > budget) lo = mu; else hi = mu;
  }
  for (double& v : s) v = std::clamp(v - hi, 0.0, 1.0);
  return iter;
}

PerturbedGraph pgd_structure_attack(const Graph& g, const NodeSplit& split,
                                    const SurrogateConfig& surrogate, const AttackConfig& cfg) {
  cfg.validate();
  split.validate(g.num_nodes);
  if (split.train.empty()) throw std::invalid_argument("pgd attack: empty train set");
  const std::size_t budget = attack_budget(g.num_edges(), cfg.rate);
  if (budget == 0 || g.num_nodes < 2) return PerturbedGraph::clean(g);

  const GcnState gcn = train_surrogate(g, split, surrogate, cfg.seed);
  const NodeFeatures x(g.features);
  const WeightMasks masks = WeightMasks::ones(gcn.num_features(), gcn.hidden_dim(), gcn.num_classes());
  const PairSpace space = candidate_pairs(g, cfg, budget);
  const std::size_t m = space.pairs.size();

  std::vector<double> s(m, 0.0);
  std::vector<double> w(m);
  std::vector<double> dw;
  for (int t = 0; t < cfg.steps; ++t) {
    for (std::size_t p = 0; p < m; ++p) w[p] = space.present[p] + (1.0 - 2.0 * space.present[p]) * s[p];
    weighted_loss(g, split, gcn, x, masks, space.pairs, w, &dw);
    const double lr = cfg.step_size / std::sqrt(static_cast<double>(t) + 1.0);
    for (std::size_t p = 0; p < m; ++p) s[p] += lr * (1.0 - 2.0 * space.present[p]) * dw[p];
    project_to_budget(s, static_cast<double>(budget));
  }

  Rng rng(derive_seed(cfg.seed, "pgd-sample"));
  std::vector<std::size_t> best;
  double best_loss = -std::numeric_limits<double>::infinity();
  bool found = false;
  std::vector<std::size_t> trial;
  for (int k = 0; k < cfg.sample_trials; ++k) {
    trial.clear();
    for (std::size_t p = 0; p < m; ++p) {
      if (uniform_unit(rng) < s[p]) trial.push_back(p);
    }
    if (trial.size() > budget) continue;
    w = space.present;
    for (std::size_t p : trial) w[p] = 1.0 - w[p];
    const double loss = weighted_loss(g, split, gcn, x, masks, space.pairs, w, nullptr);
    if (!found || loss > best_loss) {
      best_loss = loss;
      best = trial;
      found = true;
    }
  }
  if (!found) {
    // Every draw overshot the budget: take the `budget` largest relaxed entries.
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return s[a] > s[b]; });
    best.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(std::min(budget, m)));
  }

  std::vector<Edge> flips;
  flips.reserve(best.size());
  for (std::size_t p : best) flips.push_back(space.pairs[p]);
  PerturbedGraph pg = from_flips(g, flips);
  pg.validate(budget);
  return pg;
}

double surrogate_train_loss(const PerturbedGraph& pg, const NodeSplit& split,
                            const SurrogateConfig& surrogate, std::uint64_t seed) {
  if (split.train.empty()) throw std::invalid_argument("surrogate loss: empty train set");
  const GcnState gcn = train_surrogate(pg.base, split, surrogate, seed);
  const NodeFeatures x(pg.base.features);
  const WeightMasks masks = WeightMasks::ones(gcn.num_features(), gcn.hidden_dim(), gcn.num_classes());
  const std::vector<Edge> edges = pg.edges();
  const std::vector<double> ones(edges.size(), 1.0);
  return weighted_loss(pg.base, split, gcn, x, masks, edges, ones, nullptr);
}

PerturbedGraph random_flip_attack(const Graph& g, const AttackConfig& cfg) {
  cfg.validate();
  const std::uint64_t total = pair_count(g.num_nodes);
  const std::uint64_t budget = std::min<std::uint64_t>(attack_budget(g.num_edges(), cfg.rate), total);
  Rng rng(derive_seed(cfg.seed, "random-flip"));
  std::vector<Edge> flips;
  flips.reserve(static_cast<std::size_t>(budget));
  for (std::uint64_t idx : sample_distinct(total, budget, rng)) {
    flips.push_back(decode_pair(g.num_nodes, idx));
  }
  return from_flips(g, flips);
}

PerturbedGraph dissimilar_edge_attack(const Graph& g, const AttackConfig& cfg) {
  cfg.validate();
  const std::uint64_t non_edges = pair_count(g.num_nodes) - g.num_edges();
  const auto budget = static_cast<std::size_t>(
      std::min<std::uint64_t>(attack_budget(g.num_edges(), cfg.rate), non_edges));
  if (budget == 0) return PerturbedGraph::clean(g);

  struct Candidate {
    double dist;
    Edge e;
  };
  // Heap top is the weakest kept candidate: smallest distance, then largest pair.
  auto stronger = [](const Candidate& a, const Candidate& b) {
    return a.dist > b.dist || (a.dist == b.dist && a.e < b.e);
  };
  std::priority_queue<Candidate, std::vector<Candidate>, decltype(stronger)> heap(stronger);
  std::size_t next_edge = 0;
  for (std::size_t i = 0; i < g.num_nodes; ++i) {
    for (std::size_t j = i + 1; j < g.num_nodes; ++j) {
      const Edge e{static_cast<NodeId>(i), static_cast<NodeId>(j)};
      while (next_edge < g.edges.size() && g.edges[next_edge] < e) ++next_edge;
      if (next_edge < g.edges.size() && g.edges[next_edge] == e) continue;
      const Candidate c{feature_distance_sq(g.features, e.u, e.v), e};
      if (heap.size() < budget) {
        heap.push(c);
      } else if (stronger(c, heap.top())) {
        heap.pop();
        heap.push(c);
      }
    }
  }
  PerturbedGraph pg;
  pg.base = g;
  while (!heap.empty()) {
    pg.added.push_back(heap.top().e);
    heap.pop();
  }
  std::sort(pg.added.begin(), pg.added.end());
  return pg;
}

FeatureDiffHistogram feature_diff_histogram(const PerturbedGraph& pg, std::size_t bins,
                                            bool row_normalize) {
  if (bins == 0) throw std::invalid_argument("histogram needs at least one bin");
  std::vector<Edge> clean;
  std::set_difference(pg.base.edges.begin(), pg.base.edges.end(), pg.removed.begin(),
                      pg.removed.end(), std::back_inserter(clean));
  auto distances = [&](const std::vector<Edge>& edges) {
    std::vector<double> d(edges.size());
    for (std::size_t k = 0; k < edges.size(); ++k) {
      d[k] = feature_distance_sq(pg.base.features, edges[k].u, edges[k].v, row_normalize);
    }
    return d;
  };
  const std::vector<double> dc = distances(clean);
  const std::vector<double> da = distances(pg.added);

  double hi = 0.0;
  for (double v : dc) hi = std::max(hi, v);
  for (double v : da) hi = std::max(hi, v);

  FeatureDiffHistogram h;
  h.bin_edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) {
    h.bin_edges[b] = hi * static_cast<double>(b) / static_cast<double>(bins);
  }
  auto fill = [&](const std::vector<double>& d, std::vector<double>& out, double& mean) {
    out.assign(bins, 0.0);
    if (d.empty()) return;
    for (double v : d) {
      auto b = hi > 0.0 ? static_cast<std::size_t>(v / hi * static_cast<double>(bins)) : 0;
      out[std::min(b, bins - 1)] += 1.0;
      mean += v;
    }
    for (double& c : out) c /= static_cast<double>(d.size());
    mean /= static_cast<double>(d.size());
  };
  fill(dc, h.clean, h.clean_mean);
  fill(da, h.adversarial, h.adversarial_mean);
  h.adversarial_empty = da.empty();
  return h;
}

EdgeCategoryCounts edge_category_counts(const PerturbedGraph& pg, const NodeSplit& split,
                                        const EdgeMask& mask) {
  const std::vector<Edge> all = pg.edges();
  const std::vector<std::uint8_t> flags = pg.adversarial_flags();
  const std::vector<NodeRole> roles = node_roles(split, pg.base.num_nodes);
  EdgeCategoryCounts c;
  for (std::size_t k = 0; k < mask.size(); ++k) {
    const std::size_t id = mask.edge_ids[k];
    if (id >= all.size()) throw std::out_of_range("edge mask refers to a missing edge");
    if (mask.values[k] == 0.0 || flags[id] == 0) continue;
    const bool a = roles[all[id].u] == NodeRole::kTrain;
    const bool b = roles[all[id].v] == NodeRole::kTrain;
    if (a && b) ++c.train_train;
    else if (a || b) ++c.train_test;
    else ++c.test_test;
  }
  return c;
}

}  // namespace arglt
