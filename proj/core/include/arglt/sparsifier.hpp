#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "arglt/attacks.hpp"
#include "arglt/gcn.hpp"
#include "arglt/losses.hpp"
#include "arglt/masks.hpp"
#include "arglt/pseudo_labels.hpp"

namespace arglt {

struct ArgsConfig {
  LossWeights weights;
  double p_g = 0.05;      // per-round edge prune rate
  double p_theta = 0.20;  // per-round weight prune rate
  double s_g = 0.60;      // target graph sparsity
  double s_theta = 0.98;  // target model sparsity
  int epochs = 200;       // T, per round and for retraining
  double lr_weights = 1e-2;      // μ
  double lr_edge_mask = 1e-2;    // ω_g
  double lr_weight_mask = 1e-2;  // ω_θ
  int patience = 30;
  double tau = 0.8;
  Eigen::Index hidden = 512;
  bool row_normalize_smoothness = false;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Upper bound on rounds for one target: ceil(log(1 - s) / log(1 - p)) + 1.
int max_rounds(double prune_rate, double target);

struct RetrainResult {
  double val_acc = 0.0;         // best validation accuracy
  double test_acc = 0.0;        // test accuracy at the best-validation epoch
  double final_val_acc = 0.0;   // last epoch
  double final_test_acc = 0.0;  // last epoch
  int epochs_run = 0;
};

struct RoundRow {
  int round = 0;  // 1-based
  double graph_sparsity = 0.0;
  double model_sparsity = 0.0;
  double val_acc = 0.0;
  double test_acc = 0.0;
  double final_test_acc = 0.0;
  bool retrained = false;  // accuracies come from ticket retraining when true
  LossBreakdown loss;      // last epoch of the round's mask training
  EdgeCategoryCounts adversarial;
  int epochs_run = 0;
};

struct TicketReport {
  std::vector<RoundRow> rows;
  RetrainResult final_ticket;
};

/// Observation points for tests and the harness. All callbacks are optional.
struct ArgsHooks {
  /// After the rewind, before the first epoch of a round.
  std::function<void(int round, const GcnState&, const MaskPair&)> on_round_start;
  /// Real-valued masks from the last epoch and the pruned binary result.
  std::function<void(int round, const MaskPair& trained, const MaskPair& pruned)> on_pruned;
  /// Retrain the ticket after every round (metrics.csv) or only at these rounds.
  bool retrain_every_round = true;
  std::set<int> retrain_rounds;
  /// Called after each (optional) per-round retraining.
  std::function<void(const RoundRow&, const MaskPair&)> on_round_end;
};

struct ArgsResult {
  MaskPair masks;  // binary; masks.edges indexes PerturbedGraph::edges()
  GcnState theta0;
  TicketReport report;
};

/// Prunes the max(1, floor(p * nnz)) nonzero entries with the smallest |value|
/// (ties: smaller index first), sets the other nonzero entries to 1 and keeps
/// zeros at 0. Returns the number of entries pruned.
std::size_t prune_lowest(std::span<double> values, double p);

/// Same rule over the entries flagged in `live` (zero-valued live entries are
/// candidates too); entries outside `live` are set to 0.
std::size_t prune_lowest(std::span<double> values, std::span<const std::uint8_t> live, double p);

/// Same rule applied to one flat view over W0's mask (row-major) then W1's.
std::size_t prune_weight_masks(WeightMasks& masks, double p);

/// Binarizes and prunes both masks; pruned edges are dropped from the edge
/// mask's storage.
MaskPair prune_masks(const MaskPair& m, double p_g, double p_theta);

/// Variant used between rounds: every stored edge is live, and weight entries
/// are live where `support` (the previous binary masks) is 1.
MaskPair prune_masks(const MaskPair& m, const WeightMasks& support, double p_g, double p_theta);

/// Restores Θ⁰. Optimizer state lives with the caller and is recreated per round.
void rewind(GcnState& gcn);

/// Everything one ARGS run reads about its graph.
struct ArgsProblem {
  const PerturbedGraph* graph = nullptr;
  const NodeSplit* split = nullptr;
  const PseudoLabels* pseudo = nullptr;
};

ArgsResult run_args(const ArgsProblem& problem, const ArgsConfig& cfg, const ArgsHooks& hooks = {});

/// Rewinds to Θ⁰ and trains with fixed binary masks on η·L0 + ζ·L1, early
/// stopping on validation accuracy. `trained`, when given, receives the
/// best-validation weights.
RetrainResult retrain_ticket(const ArgsProblem& problem, const MaskPair& masks,
                             const GcnState& theta0, const ArgsConfig& cfg,
                             GcnState* trained = nullptr);

/// Accuracy of argmax predictions on `nodes` under the given masks.
double evaluate(const GcnState& gcn, const MaskPair& masks, const PerturbedGraph& pg,
                std::span<const NodeId> nodes);

/// ticket.json
struct TicketFile {
  std::vector<Edge> kept_edges;
  std::string weight_mask_w0;  // run-length encoded, e.g. "1:120,0:3"
  std::string weight_mask_w1;
  std::string theta0_checkpoint;
  std::string report_path;
};

/// "1:3,0:2" for 1 1 1 0 0; empty input gives "". Values must be 0 or 1.
std::string encode_bits(std::span<const double> bits);
std::vector<double> decode_bits(const std::string& text);

void save_ticket(const std::filesystem::path& path, const PerturbedGraph& pg, const MaskPair& masks,
                 const ArgsConfig& cfg, const std::string& theta0_checkpoint,
                 const std::string& report_path);
/// Reads the ticket and rebuilds binary masks against pg.edges().
MaskPair load_ticket(const std::filesystem::path& path, const PerturbedGraph& pg,
                     Eigen::Index features, Eigen::Index hidden, Eigen::Index classes);

}  // namespace arglt
