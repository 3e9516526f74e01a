#include "arglt/pseudo_labels.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "arglt/adam.hpp"
#include "arglt/losses.hpp"
#include "json.hpp"

namespace arglt {

Eigen::Index effective_mlp_hidden(Eigen::Index requested, Eigen::Index num_features) {
  return std::max<Eigen::Index>(1, std::min(requested, 4 * num_features));
}

MlpState train_mlp(const Graph& g, const NodeSplit& split, const MlpTrainConfig& cfg,
                   std::uint64_t seed) {
  if (split.train.empty()) throw std::invalid_argument("train_mlp: empty train set");
  const auto F = static_cast<Eigen::Index>(g.num_features());
  MlpState mlp(F, effective_mlp_hidden(cfg.hidden, F), g.num_classes, seed);
  if (cfg.epochs <= 0) return mlp;

  const NodeFeatures x_train = NodeFeatures::gather(g.features, split.train);
  const NodeFeatures x_val = NodeFeatures::gather(g.features, split.val);
  std::vector<int> y_train(split.train.size());
  std::vector<NodeId> local(split.train.size());
  for (std::size_t k = 0; k < split.train.size(); ++k) {
    y_train[k] = g.labels[split.train[k]];
    local[k] = static_cast<NodeId>(k);
  }

  AdamState adam;
  const auto g0 = adam.add_group(static_cast<std::size_t>(mlp.v0.size()), cfg.lr);
  const auto g1 = adam.add_group(static_cast<std::size_t>(mlp.v1.size()), cfg.lr);

  MlpState best = mlp;
  double best_val = -1.0;
  double best_loss = std::numeric_limits<double>::infinity();
  int since_best = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const MlpForward fwd = mlp_forward(x_train, mlp);
    const double loss = ce_train(fwd.probs, y_train, local);
    if (!std::isfinite(loss)) throw std::runtime_error("train_mlp: non-finite loss");
    Matrix grad = Matrix::Zero(fwd.logits.rows(), fwd.logits.cols());
    add_ce_train_grad(fwd.probs, y_train, local, 1.0, grad);
    const MlpGradients grads = mlp_backward(x_train, mlp, fwd, grad);
    adam.next_step();
    adam.apply(g0, flat(mlp.v0), flat(grads.v0));
    adam.apply(g1, flat(mlp.v1), flat(grads.v1));

    if (split.val.empty()) continue;
    const Matrix val_probs = mlp_forward(x_val, mlp).probs;
    std::size_t hits = 0;
    double val_loss = 0.0;
    for (std::size_t k = 0; k < split.val.size(); ++k) {
      const auto r = static_cast<Eigen::Index>(k);
      const int y = g.labels[split.val[k]];
      if (row_argmax(val_probs, r) == y) ++hits;
      val_loss -= std::log(std::max(val_probs(r, y), kProbabilityFloor));
    }
    const double val_acc = static_cast<double>(hits) / static_cast<double>(split.val.size());
    // Accuracy saturates early on easy data; the loss picks the more confident epoch.
    if (val_acc > best_val || (val_acc == best_val && val_loss < best_loss)) {
      best_val = val_acc;
      best_loss = val_loss;
      best = mlp;
      since_best = 0;
    } else if (++since_best >= cfg.patience) {
      break;
    }
  }
  return split.val.empty() ? mlp : best;
}

PseudoLabels select_pseudo_labels(const MlpState& mlp, const Graph& g, const NodeSplit& split,
                                  double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("pseudo-label threshold not in [0,1]");
  PseudoLabels out;
  out.threshold = tau;
  if (split.test.empty()) return out;
  const Matrix probs = mlp_forward(NodeFeatures::gather(g.features, split.test), mlp).probs;
  for (std::size_t k = 0; k < split.test.size(); ++k) {
    const auto r = static_cast<Eigen::Index>(k);
    const int label = row_argmax(probs, r);
    const double conf = probs(r, label);
    if (conf >= tau) out.entries.push_back({split.test[k], label, conf});
  }
  std::sort(out.entries.begin(), out.entries.end(),
            [](const PseudoLabel& a, const PseudoLabel& b) { return a.node < b.node; });
  return out;
}

double pseudo_label_accuracy(const PseudoLabels& pseudo, const std::vector<int>& labels) {
  if (pseudo.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& p : pseudo.entries) hits += labels[p.node] == p.label ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(pseudo.size());
}

void save_pseudo_labels(const std::filesystem::path& path, const PseudoLabels& pseudo) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : pseudo.entries) {
    arr.push_back({{"node", p.node}, {"label", p.label}, {"confidence", p.confidence}});
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << arr.dump() << '\n';
}

}  // namespace arglt
