#include "arglt/ablation.hpp"

#include <algorithm>
#include <stdexcept>

namespace arglt {

LossWeights LossToggles::apply(const LossWeights& base) const {
  LossWeights w = base;
  if (!alpha) w.alpha = 0.0;
  if (!beta) w.beta = 0.0;
  if (!gamma) w.gamma = 0.0;
  if (!eta) w.eta = 0.0;
  if (!zeta) w.zeta = 0.0;
  return w;
}

std::vector<LossToggles> default_ablation_grid() {
  LossToggles all;
  LossToggles no_beta = all;
  no_beta.beta = false;
  LossToggles no_gamma = all;
  no_gamma.gamma = false;
  LossToggles neither = no_beta;
  neither.gamma = false;
  return {all, no_beta, no_gamma, neither};
}

std::vector<AblationCell> run_ablation(const ArgsProblem& problem, const ArgsConfig& base,
                                       const std::vector<LossToggles>& configurations,
                                       const std::vector<int>& checkpoint_rounds) {
  if (checkpoint_rounds.empty()) throw std::invalid_argument("ablation needs checkpoint rounds");
  if (std::any_of(checkpoint_rounds.begin(), checkpoint_rounds.end(), [](int r) { return r < 1; })) {
    throw std::invalid_argument("checkpoint rounds are 1-based");
  }
  std::vector<AblationCell> cells;
  for (std::size_t c = 0; c < configurations.size(); ++c) {
    ArgsConfig cfg = base;
    cfg.weights = configurations[c].apply(base.weights);

    ArgsHooks hooks;
    hooks.retrain_every_round = false;
    hooks.retrain_rounds = {checkpoint_rounds.begin(), checkpoint_rounds.end()};
    const ArgsResult result = run_args(problem, cfg, hooks);

    for (int round : checkpoint_rounds) {
      AblationCell cell;
      cell.configuration = static_cast<int>(c) + 1;
      cell.toggles = configurations[c];
      cell.round = round;
      const auto& rows = result.report.rows;
      if (round <= static_cast<int>(rows.size())) {
        const RoundRow& row = rows[static_cast<std::size_t>(round) - 1];
        cell.graph_sparsity = row.graph_sparsity;
        cell.model_sparsity = row.model_sparsity;
        cell.val_acc = row.val_acc;
        cell.test_acc = row.test_acc;
        cell.final_test_acc = row.final_test_acc;
        cell.reached = true;
      }
      cells.push_back(cell);
    }
  }
  return cells;
}

}  // namespace arglt
