#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "arglt/attacks.hpp"
#include "arglt/pseudo_labels.hpp"
#include "arglt/sbm.hpp"
#include "arglt/sparsifier.hpp"

namespace arglt {

/// One experiment as the command line sees it. Every field has a flat key
/// (see `spec_keys()`) shared by JSON config files and flag overrides.
struct ExperimentSpec {
  std::filesystem::path dataset;
  std::optional<SbmParams> sbm;
  bool use_lcc = true;
  SplitFractions fractions;

  std::string attack = "none";  // pgd | random | dissimilar | none
  std::filesystem::path attack_file;
  AttackConfig attack_cfg;
  SurrogateConfig surrogate;

  ArgsConfig args;
  MlpTrainConfig mlp;
  std::vector<int> checkpoints{5, 18};

  std::vector<std::uint64_t> seeds{0};
  std::filesystem::path out = "out";

  void validate() const;
};

/// All accepted keys, in the order the resolved config lists them.
std::vector<std::string> spec_keys();

/// defaults < JSON config file (when non-empty) < overrides, each given as
/// key/value text (lists comma separated). Unknown keys throw.
ExperimentSpec resolve_spec(const std::filesystem::path& config_file,
                            const std::vector<std::pair<std::string, std::string>>& overrides);

/// Resolved configuration as pretty JSON text.
std::string spec_json(const ExperimentSpec& spec);

struct PreparedData {
  Graph graph;
  NodeSplit split;
};

/// Loads or generates the graph, keeps the largest component when asked and
/// builds the split (split.json when present, else seeded).
PreparedData prepare_data(const ExperimentSpec& spec, std::uint64_t seed);

/// Applies the configured attack (file, generated, or none).
PerturbedGraph build_attack(const ExperimentSpec& spec, const PreparedData& data,
                            std::uint64_t seed, std::string* attack_name = nullptr);

/// out/ for a single seed, out/seed_<s>/ otherwise.
std::filesystem::path run_dir(const ExperimentSpec& spec, std::uint64_t seed);

/// Worker count for `jobs` independent jobs, capped by ARGLT_THREADS.
std::size_t worker_count(std::size_t jobs);

/// Runs fn(0..jobs-1) on up to worker_count(jobs) threads. Rethrows the first
/// failure after all workers finish.
void run_parallel(std::size_t jobs, const std::function<void(std::size_t)>& fn);

/// Progress and warning lines go here (stderr by default, nullptr silences).
void set_log_sink(std::function<void(const std::string&)> sink);

void cli_attack(const ExperimentSpec& spec);
void cli_sparsify(const ExperimentSpec& spec);
void cli_ablate(const ExperimentSpec& spec);
void cli_gen_sbm(const ExperimentSpec& spec);

/// Aggregates metrics.csv across run directories into summary.json,
/// accuracy_vs_sparsity.csv and adversarial_edges.csv under `out`.
void cli_report(const std::vector<std::filesystem::path>& run_dirs, const std::filesystem::path& out);

}  // namespace arglt
