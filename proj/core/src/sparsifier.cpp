#include "arglt/sparsifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "arglt/adam.hpp"
#include "arglt/seeds.hpp"

namespace arglt {
namespace {

void require_rate(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) throw std::invalid_argument(std::string(name) + " must lie in (0, 1)");
}

std::vector<double> select_values(const std::vector<double>& all, const EdgeMask& mask) {
  std::vector<double> out(mask.size());
  for (std::size_t k = 0; k < mask.size(); ++k) out[k] = all[mask.edge_ids[k]];
  return out;
}

double accuracy_or_zero(const Matrix& probs, const std::vector<int>& labels,
                        std::span<const NodeId> nodes) {
  return nodes.empty() ? 0.0 : accuracy(probs, labels, nodes);
}

void check_problem(const ArgsProblem& p) {
  if (p.graph == nullptr || p.split == nullptr || p.pseudo == nullptr) {
    throw std::invalid_argument("ARGS problem is missing the graph, split or pseudo labels");
  }
  p.split->validate(p.graph->base.num_nodes);
  if (p.split->train.empty()) throw std::invalid_argument("ARGS needs at least one train node");
}

Matrix support_of(const Matrix& m) {
  return m.unaryExpr([](double v) { return v != 0.0 ? 1.0 : 0.0; });
}

}  // namespace

void ArgsConfig::validate() const {
  weights.validate();
  require_rate(p_g, "p_g");
  require_rate(p_theta, "p_theta");
  require_rate(s_g, "s_g");
  require_rate(s_theta, "s_theta");
  if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (patience < 1) throw std::invalid_argument("patience must be >= 1");
  for (double lr : {lr_weights, lr_edge_mask, lr_weight_mask}) {
    if (!(lr > 0.0) || !std::isfinite(lr)) throw std::invalid_argument("learning rates must be > 0");
  }
  if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("tau must lie in [0, 1]");
  if (hidden < 1) throw std::invalid_argument("hidden width must be >= 1");
}

int max_rounds(double prune_rate, double target) {
  require_rate(prune_rate, "prune rate");
  if (target <= 0.0) return 0;
  return static_cast<int>(std::ceil(std::log(1.0 - target) / std::log(1.0 - prune_rate))) + 1;
}

std::size_t prune_lowest(std::span<double> values, std::span<const std::uint8_t> live_flags,
                         double p) {
  require_rate(p, "prune rate");
  if (live_flags.size() != values.size()) throw std::invalid_argument("prune: live flags size mismatch");
  std::vector<std::size_t> live;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (live_flags[i] != 0) live.push_back(i); else values[i] = 0.0;
  }
  if (live.empty()) return 0;
  // The epsilon keeps products such as 0.29 * 100 from flooring one short.
  auto k = static_cast<std::size_t>(std::floor(p * static_cast<double>(live.size()) + 1e-9));
  k = std::clamp<std::size_t>(k, 1, live.size());
  auto lower = [&](std::size_t a, std::size_t b) {
    const double x = std::abs(values[a]);
    const double y = std::abs(values[b]);
    return x < y || (x == y && a < b);
  };
  std::nth_element(live.begin(), live.begin() + static_cast<std::ptrdiff_t>(k - 1), live.end(), lower);
  for (std::size_t r = 0; r < live.size(); ++r) values[live[r]] = r < k ? 0.0 : 1.0;
  return k;
}

std::size_t prune_lowest(std::span<double> values, double p) {
  std::vector<std::uint8_t> live(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) live[i] = values[i] != 0.0 ? 1 : 0;
  return prune_lowest(values, live, p);
}

namespace {

std::vector<double> concat(const WeightMasks& m) {
  std::vector<double> all(m.size());
  const auto n0 = static_cast<std::size_t>(m.w0.size());
  std::copy_n(m.w0.data(), n0, all.begin());
  std::copy_n(m.w1.data(), m.w1.size(), all.begin() + static_cast<std::ptrdiff_t>(n0));
  return all;
}

void scatter(const std::vector<double>& all, WeightMasks& m) {
  const auto n0 = static_cast<std::size_t>(m.w0.size());
  std::copy_n(all.begin(), n0, m.w0.data());
  std::copy(all.begin() + static_cast<std::ptrdiff_t>(n0), all.end(), m.w1.data());
}

EdgeMask compact_edges(const EdgeMask& pruned) {
  EdgeMask out;
  out.initial_count = pruned.initial_count;
  for (std::size_t k = 0; k < pruned.size(); ++k) {
    if (pruned.values[k] != 0.0) {
      out.edge_ids.push_back(pruned.edge_ids[k]);
      out.values.push_back(1.0);
    }
  }
  return out;
}

}  // namespace

std::size_t prune_weight_masks(WeightMasks& masks, double p) {
  std::vector<double> all = concat(masks);
  const std::size_t pruned = prune_lowest(all, p);
  scatter(all, masks);
  return pruned;
}

MaskPair prune_masks(const MaskPair& m, double p_g, double p_theta) {
  MaskPair out = m;
  prune_lowest(out.edges.values, p_g);
  out.edges = compact_edges(out.edges);
  prune_weight_masks(out.weights, p_theta);
  return out;
}

MaskPair prune_masks(const MaskPair& m, const WeightMasks& support, double p_g, double p_theta) {
  MaskPair out = m;
  const std::vector<std::uint8_t> all_live(out.edges.size(), 1);
  prune_lowest(out.edges.values, all_live, p_g);
  out.edges = compact_edges(out.edges);

  std::vector<double> values = concat(out.weights);
  const std::vector<double> sup = concat(support);
  std::vector<std::uint8_t> live(sup.size());
  for (std::size_t i = 0; i < sup.size(); ++i) live[i] = sup[i] != 0.0 ? 1 : 0;
  prune_lowest(values, live, p_theta);
  scatter(values, out.weights);
  return out;
}

void rewind(GcnState& gcn) { gcn.rewind(); }

RetrainResult retrain_ticket(const ArgsProblem& problem, const MaskPair& masks,
                             const GcnState& theta0, const ArgsConfig& cfg, GcnState* trained) {
  check_problem(problem);
  const PerturbedGraph& pg = *problem.graph;
  const NodeSplit& split = *problem.split;
  const std::vector<Edge> edges = masks.edges.select(pg.edges());
  const std::vector<double> no_diffs(edges.size(), 0.0);
  const NodeFeatures x(pg.base.features);
  const ObjectiveInputs in{pg.base.num_nodes, edges, no_diffs, &x, &pg.base.labels, split.train,
                           problem.pseudo};

  GcnState gcn = theta0;
  gcn.rewind();
  AdamState adam;
  const auto g0 = adam.add_group(static_cast<std::size_t>(gcn.w0.size()), cfg.lr_weights);
  const auto g1 = adam.add_group(static_cast<std::size_t>(gcn.w1.size()), cfg.lr_weights);

  RetrainResult res;
  res.val_acc = -1.0;
  int since_best = 0;
  for (int epoch = 0;; ++epoch) {
    const ObjectiveResult r =
        retrain_objective(in, gcn, masks.edges.values, masks.weights, cfg.weights.eta, cfg.weights.zeta);
    res.final_val_acc = accuracy_or_zero(r.probs, pg.base.labels, split.val);
    res.final_test_acc = accuracy_or_zero(r.probs, pg.base.labels, split.test);
    res.epochs_run = epoch;
    if (res.final_val_acc > res.val_acc || split.val.empty()) {
      res.val_acc = res.final_val_acc;
      res.test_acc = res.final_test_acc;
      if (trained != nullptr) *trained = gcn;
      since_best = 0;
    } else if (++since_best >= cfg.patience) {
      break;
    }
    if (epoch == cfg.epochs) break;
    adam.next_step();
    adam.apply(g0, flat(gcn.w0), flat(r.grad.w0));
    adam.apply(g1, flat(gcn.w1), flat(r.grad.w1));
  }
  return res;
}

double evaluate(const GcnState& gcn, const MaskPair& masks, const PerturbedGraph& pg,
                std::span<const NodeId> nodes) {
  if (nodes.empty()) throw std::invalid_argument("evaluate: empty node set");
  const std::vector<Edge> edges = masks.edges.select(pg.edges());
  const NormalizedAdjacency adj(pg.base.num_nodes, edges, masks.edges.values);
  const NodeFeatures x(pg.base.features);
  return accuracy(gcn_forward(adj, x, gcn, masks.weights).probs, pg.base.labels, nodes);
}

ArgsResult run_args(const ArgsProblem& problem, const ArgsConfig& cfg, const ArgsHooks& hooks) {
  cfg.validate();
  check_problem(problem);
  const PerturbedGraph& pg = *problem.graph;
  const Graph& g = pg.base;
  const NodeSplit& split = *problem.split;

  const std::vector<Edge> all_edges = pg.edges();
  const std::vector<double> all_diffs =
      edge_feature_differences(all_edges, g.features, cfg.row_normalize_smoothness);
  const NodeFeatures x(g.features);
  const auto F = static_cast<Eigen::Index>(g.num_features());
  GcnState gcn(F, cfg.hidden, g.num_classes, derive_seed(cfg.seed, "init"));
  MaskPair masks{EdgeMask::ones(all_edges.size()), WeightMasks::ones(F, cfg.hidden, g.num_classes)};

  TicketReport report;
  std::optional<RetrainResult> last_retrain;
  int round = 0;
  while (graph_sparsity(masks.edges) < cfg.s_g && model_sparsity(masks.weights) < cfg.s_theta) {
    ++round;
    gcn.rewind();
    if (hooks.on_round_start) hooks.on_round_start(round, gcn, masks);

    const std::vector<Edge> edges = masks.edges.select(all_edges);
    const std::vector<double> diffs = select_values(all_diffs, masks.edges);
    const ObjectiveInputs in{g.num_nodes, edges, diffs, &x, &g.labels, split.train, problem.pseudo};
    const WeightMasks support{support_of(masks.weights.w0), support_of(masks.weights.w1)};
    const Matrix& support0 = support.w0;
    const Matrix& support1 = support.w1;

    AdamState adam;
    const auto gw0 = adam.add_group(static_cast<std::size_t>(gcn.w0.size()), cfg.lr_weights);
    const auto gw1 = adam.add_group(static_cast<std::size_t>(gcn.w1.size()), cfg.lr_weights);
    const auto ge = adam.add_group(masks.edges.size(), cfg.lr_edge_mask);
    const auto gm0 = adam.add_group(static_cast<std::size_t>(support0.size()), cfg.lr_weight_mask);
    const auto gm1 = adam.add_group(static_cast<std::size_t>(support1.size()), cfg.lr_weight_mask);

    RoundRow row;
    row.round = round;
    double best_val = -1.0;
    int since_best = 0;
    for (int epoch = 0;; ++epoch) {
      ObjectiveResult r = args_objective(in, gcn, masks.edges.values, masks.weights, cfg.weights);
      row.loss = r.loss;
      row.val_acc = accuracy_or_zero(r.probs, g.labels, split.val);
      row.test_acc = row.final_test_acc = accuracy_or_zero(r.probs, g.labels, split.test);
      row.epochs_run = epoch;
      if (row.val_acc > best_val || split.val.empty()) {
        best_val = row.val_acc;
        since_best = 0;
      } else if (++since_best >= cfg.patience) {
        break;
      }
      if (epoch == cfg.epochs) break;
      r.grad.mask_w0.array() *= support0.array();
      r.grad.mask_w1.array() *= support1.array();
      adam.next_step();
      adam.apply(gw0, flat(gcn.w0), flat(r.grad.w0));
      adam.apply(gw1, flat(gcn.w1), flat(r.grad.w1));
      adam.apply(ge, masks.edges.values, r.grad.edge_mask);
      // Projection onto m >= 0 keeps every degree 1 + Σm positive.
      for (double& m : masks.edges.values) m = std::max(m, 0.0);
      adam.apply(gm0, flat(masks.weights.w0), flat(r.grad.mask_w0));
      adam.apply(gm1, flat(masks.weights.w1), flat(r.grad.mask_w1));
    }

    MaskPair pruned = prune_masks(masks, support, cfg.p_g, cfg.p_theta);
    if (hooks.on_pruned) hooks.on_pruned(round, masks, pruned);
    masks = std::move(pruned);

    row.graph_sparsity = graph_sparsity(masks.edges);
    row.model_sparsity = model_sparsity(masks.weights);
    row.adversarial = edge_category_counts(pg, split, masks.edges);
    last_retrain.reset();
    if (hooks.retrain_every_round || hooks.retrain_rounds.contains(round)) {
      last_retrain = retrain_ticket(problem, masks, gcn, cfg);
      row.retrained = true;
      row.val_acc = last_retrain->val_acc;
      row.test_acc = last_retrain->test_acc;
      row.final_test_acc = last_retrain->final_test_acc;
    }
    if (hooks.on_round_end) hooks.on_round_end(row, masks);
    report.rows.push_back(row);
  }

  gcn.rewind();
  report.final_ticket = last_retrain ? *last_retrain : retrain_ticket(problem, masks, gcn, cfg);
  return ArgsResult{std::move(masks), std::move(gcn), std::move(report)};
}

}  // namespace arglt
