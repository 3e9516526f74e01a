#pragma once

#include <span>
#include <vector>

#include "arglt/gcn.hpp"
#include "arglt/graph.hpp"
#include "arglt/pseudo_labels.hpp"

namespace arglt {

/// Probabilities below this are clamped before taking the log.
inline constexpr double kProbabilityFloor = 1e-12;

struct LossWeights {
  double alpha = 1.0;
  double beta = 0.1;
  double gamma = 1.0;
  double eta = 1.0;
  double zeta = 1.0;
  double lambda1 = 1e-2;
  double lambda2 = 1e-2;

  void validate() const;
};

/// total = α·l0 + β·lfs + γ·l1 + λ1·reg_g + λ2·reg_theta
struct LossBreakdown {
  double l0 = 0.0;
  double lfs = 0.0;
  double l1 = 0.0;
  double reg_g = 0.0;
  double reg_theta = 0.0;
  double total = 0.0;
};

/// -Σ_{l ∈ train} ln Z[l, y_l]. Throws on an empty index set.
double ce_train(const Matrix& probs, const std::vector<int>& labels, std::span<const NodeId> train);

/// -Σ_{l ∈ Y_PL} ln Z[l, ŷ_l]; 0 for an empty pseudo-label set.
double ce_pseudo(const Matrix& probs, const PseudoLabels& pseudo);

/// grad += coef · ∂ce_train/∂logits (softmax folded in).
void add_ce_train_grad(const Matrix& probs, const std::vector<int>& labels,
                       std::span<const NodeId> train, double coef, Matrix& grad);
void add_ce_pseudo_grad(const Matrix& probs, const PseudoLabels& pseudo, double coef,
                        Matrix& grad);

/// ||x_u - x_v||² for every edge, optionally on L1-row-normalized features.
std::vector<double> edge_feature_differences(std::span<const Edge> edges, const Matrix& features,
                                             bool row_normalize = false);

/// ½ Σ_ij (m⊙A')_ij ||x_i - x_j||², i.e. Σ over undirected edges of m_e · diff_e.
/// Its gradient with respect to m_e is diff_e.
double feature_smoothness(std::span<const double> mask, std::span<const double> edge_diffs);

/// Composes the weighted objective. Regularizers are L1 norms of the masks.
LossBreakdown args_total(double l0, double lfs, double l1, const LossWeights& w,
                         std::span<const double> edge_mask, const WeightMasks& weight_masks);

/// η·ce_train + ζ·ce_pseudo (masks are constants here).
double retrain_loss(const Matrix& probs, const std::vector<int>& labels,
                    std::span<const NodeId> train, const PseudoLabels& pseudo, double eta,
                    double zeta);

/// Everything the objectives need about the (masked) graph and labels.
struct ObjectiveInputs {
  std::size_t num_nodes = 0;
  std::span<const Edge> edges;         // surviving edges
  std::span<const double> edge_diffs;  // aligned with `edges`
  const NodeFeatures* features = nullptr;
  const std::vector<int>* labels = nullptr;
  std::span<const NodeId> train;
  const PseudoLabels* pseudo = nullptr;
};

struct ObjectiveResult {
  LossBreakdown loss;
  GcnGradients grad;
  Matrix probs;
};

/// Full pruning objective with analytic gradients for W0, W1, both weight
/// masks and the edge mask. L1 subgradient at exactly 0 is 0.
ObjectiveResult args_objective(const ObjectiveInputs& in, const GcnState& gcn,
                               std::span<const double> edge_mask, const WeightMasks& weight_masks,
                               const LossWeights& w);

/// Ticket-retraining objective; only weight gradients are filled in and
/// `loss.total` holds η·l0 + ζ·l1.
ObjectiveResult retrain_objective(const ObjectiveInputs& in, const GcnState& gcn,
                                  std::span<const double> edge_mask,
                                  const WeightMasks& weight_masks, double eta, double zeta);

}  // namespace arglt
