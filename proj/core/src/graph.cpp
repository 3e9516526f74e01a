#include "arglt/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "arglt/seeds.hpp"

namespace arglt {

Edge make_edge(NodeId a, NodeId b) {
  if (a == b) {
    throw std::invalid_argument("self-loop on node " + std::to_string(a));
  }
  return a < b ? Edge{a, b} : Edge{b, a};
}

bool Graph::has_edge(Edge e) const {
  return std::binary_search(edges.begin(), edges.end(), e);
}

void Graph::validate() const {
  const auto n = static_cast<std::int64_t>(num_nodes);
  if (static_cast<std::size_t>(features.rows()) != num_nodes) {
    throw std::invalid_argument("feature rows (" + std::to_string(features.rows()) +
                                ") != node count (" + std::to_string(num_nodes) + ")");
  }
  if (labels.size() != num_nodes) {
    throw std::invalid_argument("label count (" + std::to_string(labels.size()) +
                                ") != node count (" + std::to_string(num_nodes) + ")");
  }
  if (num_classes <= 0) throw std::invalid_argument("graph needs at least one class");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= num_classes) {
      throw std::invalid_argument("label " + std::to_string(labels[i]) + " of node " +
                                  std::to_string(i) + " outside [0, " +
                                  std::to_string(num_classes) + ")");
    }
  }
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const Edge& e = edges[k];
    if (e.u >= e.v) throw std::invalid_argument("edge not canonical or self-loop");
    if (e.u < 0 || e.v >= n) {
      throw std::invalid_argument("edge endpoint " + std::to_string(e.v) +
                                  " outside node range");
    }
    if (k > 0 && !(edges[k - 1] < e)) {
      throw std::invalid_argument("edge list not sorted/unique");
    }
  }
  require_finite(features, "node features");
}

Graph make_graph(std::size_t num_nodes, std::vector<Edge> edges, Matrix features,
                 std::vector<int> labels, int num_classes) {
  for (auto& e : edges) e = make_edge(e.u, e.v);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  if (num_classes == 0 && !labels.empty()) {
    num_classes = *std::max_element(labels.begin(), labels.end()) + 1;
  }
  Graph g{num_nodes, std::move(edges), std::move(features), std::move(labels), num_classes};
  g.validate();
  return g;
}

double feature_distance_sq(const Matrix& features, NodeId a, NodeId b) {
  return (features.row(a) - features.row(b)).squaredNorm();
}

double feature_distance_sq(const Matrix& features, NodeId a, NodeId b, bool row_normalize) {
  if (!row_normalize) return feature_distance_sq(features, a, b);
  auto normalized = [&](NodeId i) {
    const double s = features.row(i).cwiseAbs().sum();
    return s > 0.0 ? Eigen::RowVectorXd(features.row(i) / s) : Eigen::RowVectorXd(features.row(i));
  };
  return (normalized(a) - normalized(b)).squaredNorm();
}

void NodeSplit::validate(std::size_t num_nodes) const {
  if (train.empty()) throw std::invalid_argument("split has an empty train set");
  std::vector<std::uint8_t> seen(num_nodes, 0);
  auto mark = [&](const std::vector<NodeId>& ids, const char* name) {
    for (NodeId i : ids) {
      if (i < 0 || static_cast<std::size_t>(i) >= num_nodes) {
        throw std::invalid_argument(std::string(name) + " index " + std::to_string(i) +
                                    " outside node range");
      }
      if (seen[i]++) {
        throw std::invalid_argument("node " + std::to_string(i) +
                                    " appears in more than one split set");
      }
    }
  };
  mark(train, "train");
  mark(val, "val");
  mark(test, "test");
}

std::vector<NodeRole> node_roles(const NodeSplit& split, std::size_t num_nodes) {
  std::vector<NodeRole> roles(num_nodes, NodeRole::kNone);
  for (NodeId i : split.train) roles[i] = NodeRole::kTrain;
  for (NodeId i : split.val) roles[i] = NodeRole::kVal;
  for (NodeId i : split.test) roles[i] = NodeRole::kTest;
  return roles;
}

NodeSplit make_split(const Graph& g, SplitFractions f, std::uint64_t seed) {
  if (f.train < 0 || f.val < 0 || f.test < 0 || f.train + f.val + f.test > 1.0 + 1e-12) {
    throw std::invalid_argument("split fractions must be non-negative and sum to at most 1");
  }
  const std::size_t n = g.num_nodes;
  const auto n_train = static_cast<std::size_t>(std::floor(f.train * static_cast<double>(n)));
  const auto n_val = static_cast<std::size_t>(std::floor(f.val * static_cast<double>(n)));
  if (n_train == 0) throw std::invalid_argument("train fraction yields zero nodes");

  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  Rng rng(seed);
  shuffle_in_place(std::span<NodeId>(order), rng);

  NodeSplit s;
  s.train.assign(order.begin(), order.begin() + n_train);
  s.val.assign(order.begin() + n_train, order.begin() + n_train + n_val);
  s.test.assign(order.begin() + n_train + n_val, order.end());
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.val.begin(), s.val.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

ComponentResult largest_connected_component(const Graph& g) {
  const std::size_t n = g.num_nodes;
  if (n == 0) return {g, {}, {}};
  // Union-find; the root of each set is its smallest node id.
  std::vector<NodeId> parent(n);
  std::iota(parent.begin(), parent.end(), NodeId{0});
  auto find = [&](NodeId x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const Edge& e : g.edges) {
    NodeId a = find(e.u);
    NodeId b = find(e.v);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    parent[b] = a;
  }
  std::vector<std::size_t> size(n, 0);
  for (std::size_t i = 0; i < n; ++i) ++size[find(static_cast<NodeId>(i))];

  NodeId best = 0;
  for (std::size_t r = 0; r < n; ++r) {
    // Roots are visited in increasing id order, so strict > keeps the
    // component with the smallest minimum id on ties.
    if (size[r] > size[best]) best = static_cast<NodeId>(r);
  }

  ComponentResult out;
  out.old_to_new.assign(n, kDroppedNode);
  for (std::size_t i = 0; i < n; ++i) {
    if (find(static_cast<NodeId>(i)) == best) {
      out.old_to_new[i] = static_cast<NodeId>(out.new_to_old.size());
      out.new_to_old.push_back(static_cast<NodeId>(i));
    }
  }
  const std::size_t m = out.new_to_old.size();
  Matrix features(m, g.features.cols());
  std::vector<int> labels(m);
  for (std::size_t k = 0; k < m; ++k) {
    features.row(static_cast<Eigen::Index>(k)) = g.features.row(out.new_to_old[k]);
    labels[k] = g.labels[out.new_to_old[k]];
  }
  std::vector<Edge> edges;
  for (const Edge& e : g.edges) {
    if (out.old_to_new[e.u] != kDroppedNode) {
      edges.push_back({out.old_to_new[e.u], out.old_to_new[e.v]});
    }
  }
  // Relabeling is monotone, so the edge list stays sorted and canonical.
  out.graph = Graph{m, std::move(edges), std::move(features), std::move(labels), g.num_classes};
  out.graph.validate();
  return out;
}

NodeSplit remap_split(const NodeSplit& split, const std::vector<NodeId>& old_to_new) {
  auto remap = [&](const std::vector<NodeId>& ids) {
    std::vector<NodeId> out;
    for (NodeId i : ids) {
      if (i >= 0 && static_cast<std::size_t>(i) < old_to_new.size() &&
          old_to_new[i] != kDroppedNode) {
        out.push_back(old_to_new[i]);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  return {remap(split.train), remap(split.val), remap(split.test)};
}

}  // namespace arglt
