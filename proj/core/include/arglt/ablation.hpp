#pragma once

#include <string>
#include <vector>

#include "arglt/sparsifier.hpp"

namespace arglt {

/// Which loss terms a configuration keeps. A disabled term has weight 0;
/// an enabled term uses the base configuration's weight.
struct LossToggles {
  bool alpha = true;
  bool beta = true;
  bool gamma = true;
  bool eta = true;
  bool zeta = true;

  LossWeights apply(const LossWeights& base) const;
};

/// (1) everything on; (2) β off; (3) γ off; (4) β and γ off.
std::vector<LossToggles> default_ablation_grid();

struct AblationCell {
  int configuration = 0;  // 1-based
  LossToggles toggles;
  int round = 0;
  double graph_sparsity = 0.0;
  double model_sparsity = 0.0;
  double val_acc = 0.0;
  double test_acc = 0.0;
  double final_test_acc = 0.0;
  bool reached = false;  // false when the run stopped before this round
};

/// Runs ARGS once per configuration with the base targets and retrains the
/// ticket at each checkpoint round. A checkpoint past the last completed
/// round is left unreached. Cells come out configuration-major.
std::vector<AblationCell> run_ablation(const ArgsProblem& problem, const ArgsConfig& base,
                                       const std::vector<LossToggles>& configurations,
                                       const std::vector<int>& checkpoint_rounds);

}  // namespace arglt
