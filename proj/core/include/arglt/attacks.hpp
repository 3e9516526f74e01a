#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "arglt/graph.hpp"
#include "arglt/masks.hpp"

namespace arglt {

/// A clean graph plus the structure flips an adversary applied to it.
struct PerturbedGraph {
  Graph base;
  std::vector<Edge> added;    // sorted; none of them in base.edges
  std::vector<Edge> removed;  // sorted; all of them in base.edges

  std::size_t budget_used() const { return added.size() + removed.size(); }

  /// base.edges \ removed ∪ added, sorted. Edge masks index into this list.
  std::vector<Edge> edges() const;

  /// 1 where edges()[k] is an adversarially added edge.
  std::vector<std::uint8_t> adversarial_flags() const;

  /// Checks the set invariants and |added| + |removed| <= budget.
  void validate(std::size_t budget) const;

  static PerturbedGraph clean(Graph g);
};

/// floor(rate * edge_count), counted on undirected edges.
std::size_t attack_budget(std::size_t edge_count, double rate);

struct AttackConfig {
  double rate = 0.05;           // Δ
  int steps = 100;              // PGD iterations
  double step_size = 200.0;     // scaled by 1/sqrt(t + 1)
  int sample_trials = 20;       // Bernoulli discretizations
  std::uint64_t seed = 0;
  std::size_t full_candidate_limit = 3000;  // all pairs up to this many nodes
  std::size_t sampled_candidates_per_flip = 50;

  void validate() const;
};

/// Surrogate GCN trained on the clean graph for the PGD adversary.
struct SurrogateConfig {
  Eigen::Index hidden = 16;
  int epochs = 200;
  double lr = 1e-2;
  double weight_decay = 5e-4;
};

/// Projects s onto {s ∈ [0,1]^m : Σ s <= budget} by bisection on the shift
/// μ in clamp(s - μ, 0, 1). Returns the bisection iterations used (<= 64).
int project_to_budget(std::span<double> s, double budget);

/// Relaxed PGD structure adversary: ascends the surrogate's train-node
/// cross-entropy over continuous flip variables, then samples binary flip
/// sets and keeps the feasible one with the highest loss.
PerturbedGraph pgd_structure_attack(const Graph& g, const NodeSplit& split,
                                    const SurrogateConfig& surrogate, const AttackConfig& cfg);

/// Mean train cross-entropy of a surrogate on `pg` (evasion evaluation).
double surrogate_train_loss(const PerturbedGraph& pg, const NodeSplit& split,
                            const SurrogateConfig& surrogate, std::uint64_t seed);

/// Uniformly random flips among all node pairs, clamped to the pair count.
PerturbedGraph random_flip_attack(const Graph& g, const AttackConfig& cfg);

/// Adds the non-edges with the largest ||x_i - x_j||², ties by (i, j).
PerturbedGraph dissimilar_edge_attack(const Graph& g, const AttackConfig& cfg);

struct FeatureDiffHistogram {
  std::vector<double> bin_edges;    // bins + 1 shared edges
  std::vector<double> clean;        // fraction of clean edges per bin
  std::vector<double> adversarial;  // fraction of added edges per bin
  bool adversarial_empty = true;
  double clean_mean = 0.0;
  double adversarial_mean = 0.0;
};

FeatureDiffHistogram feature_diff_histogram(const PerturbedGraph& pg, std::size_t bins,
                                            bool row_normalize = false);

/// Active adversarial (added) edges by endpoint membership. Validation and
/// unassigned nodes count as test nodes.
struct EdgeCategoryCounts {
  std::size_t train_train = 0;
  std::size_t train_test = 0;
  std::size_t test_test = 0;

  std::size_t total() const { return train_train + train_test + test_test; }
  bool operator==(const EdgeCategoryCounts&) const = default;
};

/// Counts added edges whose mask entry is nonzero. `mask` indexes pg.edges().
EdgeCategoryCounts edge_category_counts(const PerturbedGraph& pg, const NodeSplit& split,
                                        const EdgeMask& mask);

/// attack.json: {"rate": Δ, "seed": s, "attack_name": name,
///               "added": [[i, j], ...], "removed": [[i, j], ...]}
struct AttackFile {
  PerturbedGraph graph;
  double rate = 0.0;
  std::uint64_t seed = 0;
  std::string attack_name;
};

void save_attack(const std::filesystem::path& path, const PerturbedGraph& pg, double rate,
                 std::uint64_t seed, const std::string& attack_name);

/// Applies a saved flip set to `base`; throws if it violates the invariants
/// or the file's own budget.
AttackFile load_attack(const std::filesystem::path& path, const Graph& base);

}  // namespace arglt
