#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include "arglt/matrix.hpp"

namespace arglt {

/// Undirected edge in canonical form (u < v).
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  auto operator<=>(const Edge&) const = default;
};

/// Canonicalizes an endpoint pair. Throws std::invalid_argument on a self-loop.
Edge make_edge(NodeId a, NodeId b);

/// Undirected, node-attributed, labeled graph.
///
/// Edges are stored sorted, canonical (u < v) and unique. Use `make_graph`
/// to build one from raw data; it sorts, deduplicates and validates.
struct Graph {
  std::size_t num_nodes = 0;
  std::vector<Edge> edges;
  Matrix features;
  std::vector<int> labels;
  int num_classes = 0;

  std::size_t num_features() const { return static_cast<std::size_t>(features.cols()); }
  std::size_t num_edges() const { return edges.size(); }

  bool has_edge(Edge e) const;

  /// Throws std::invalid_argument describing the first violated invariant.
  void validate() const;
};

/// Builds a validated graph. Reversed and repeated pairs collapse to one edge;
/// self-loops are rejected. When `num_classes` is 0 it is inferred as
/// max(label) + 1.
Graph make_graph(std::size_t num_nodes, std::vector<Edge> edges, Matrix features,
                 std::vector<int> labels, int num_classes = 0);

/// Squared Euclidean distance between two feature rows.
double feature_distance_sq(const Matrix& features, NodeId a, NodeId b);

/// Same as above, optionally on L1-row-normalized features.
double feature_distance_sq(const Matrix& features, NodeId a, NodeId b, bool row_normalize);

/// Disjoint train/validation/test node sets.
struct NodeSplit {
  std::vector<NodeId> train;
  std::vector<NodeId> val;
  std::vector<NodeId> test;

  void validate(std::size_t num_nodes) const;
};

enum class NodeRole : std::uint8_t { kNone, kTrain, kVal, kTest };

/// Per-node role lookup built from a split.
std::vector<NodeRole> node_roles(const NodeSplit& split, std::size_t num_nodes);

struct SplitFractions {
  double train = 0.1;
  double val = 0.1;
  double test = 0.8;
};

/// Seeded uniform split. Train and validation sizes are floor(fraction * n);
/// the test set takes every remaining node.
NodeSplit make_split(const Graph& g, SplitFractions fractions, std::uint64_t seed);

inline constexpr NodeId kDroppedNode = -1;

struct ComponentResult {
  Graph graph;
  /// old id -> new id, or kDroppedNode.
  std::vector<NodeId> old_to_new;
  /// new id -> old id.
  std::vector<NodeId> new_to_old;
};

/// Largest connected component, relabeled in increasing original id order.
/// Equal-size components are ranked by their smallest original node id.
ComponentResult largest_connected_component(const Graph& g);

/// Restricts a split to the nodes kept by a component extraction.
NodeSplit remap_split(const NodeSplit& split, const std::vector<NodeId>& old_to_new);

}  // namespace arglt
