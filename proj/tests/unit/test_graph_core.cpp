#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "arglt/adjacency.hpp"
#include "arglt/dataset_io.hpp"
#include "arglt/graph.hpp"
#include "arglt/masks.hpp"
#include "arglt/sbm.hpp"
#include "oracle.hpp"

using namespace arglt;

namespace {

Graph plain_graph(std::size_t n, std::vector<Edge> edges, int classes = 2) {
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i % static_cast<std::size_t>(classes));
  return make_graph(n, std::move(edges), Matrix::Zero(static_cast<Eigen::Index>(n), 2), labels, classes);
}

void write_dataset(const std::filesystem::path& dir, const std::string& edges,
                   const std::string& features, const std::string& labels) {
  oracle::write_file(dir / "edges.txt", edges);
  oracle::write_file(dir / "features.csv", features);
  oracle::write_file(dir / "labels.txt", labels);
}

}  // namespace

TEST(LoadGraph, MinimalDirectory) {
  oracle::TempDir dir("load");
  write_dataset(dir.path(), "0 1\n", "0.5,1\n2,3\n", "0\n1\n");
  const Graph g = load_graph(dir.path());
  EXPECT_EQ(g.num_nodes, 2u);
  EXPECT_EQ(g.num_edges(), 1u);
  EXPECT_EQ(g.num_features(), 2u);
  EXPECT_EQ(g.num_classes, 2);
  EXPECT_DOUBLE_EQ(g.features(1, 0), 2.0);
}

TEST(LoadGraph, ReversedAndRepeatedEdgesMerge) {
  oracle::TempDir dir("dedup");
  write_dataset(dir.path(), "0 1\n1 0\n0 1\n1 2\n", "0\n0\n0\n", "0\n1\n0\n");
  const Graph g = load_graph(dir.path());
  ASSERT_EQ(g.num_edges(), 2u);
  EXPECT_EQ(g.edges[0], (Edge{0, 1}));
  EXPECT_EQ(g.edges[1], (Edge{1, 2}));
}

TEST(LoadGraph, RejectsBadInput) {
  oracle::TempDir self_loop("selfloop");
  write_dataset(self_loop.path(), "1 1\n", "0\n0\n", "0\n1\n");
  EXPECT_THROW(load_graph(self_loop.path()), std::runtime_error);

  oracle::TempDir missing("missing");
  oracle::write_file(missing / "edges.txt", "0 1\n");
  EXPECT_THROW(load_graph(missing.path()), std::runtime_error);

  oracle::TempDir rows("rows");
  write_dataset(rows.path(), "0 1\n", "0\n0\n0\n", "0\n1\n");
  EXPECT_THROW(load_graph(rows.path()), std::runtime_error);

  oracle::TempDir endpoint("endpoint");
  write_dataset(endpoint.path(), "0 5\n", "0\n0\n", "0\n1\n");
  EXPECT_THROW(load_graph(endpoint.path()), std::runtime_error);

  oracle::TempDir label("label");
  write_dataset(label.path(), "0 1\n", "0\n0\n", "0\n-1\n");
  EXPECT_THROW(load_graph(label.path()), std::runtime_error);
}

TEST(LoadGraph, SaveRoundTripWithSplit) {
  oracle::TempDir dir("roundtrip");
  const Graph g = generate_sbm({2, 10, 0.5, 0.05, 4, 0.3}, 3);
  save_graph(g, dir.path());
  const Graph back = load_graph(dir.path());
  EXPECT_EQ(back.edges, g.edges);
  EXPECT_EQ(back.labels, g.labels);
  EXPECT_EQ(back.features, g.features);

  EXPECT_FALSE(load_split(dir.path()).has_value());
  const NodeSplit split = make_split(g, {}, 1);
  save_split(split, dir.path());
  const auto loaded = load_split(dir.path());
  ASSERT_TRUE(loaded.has_value());
  EXPECT_EQ(loaded->train, split.train);
  EXPECT_EQ(loaded->val, split.val);
  EXPECT_EQ(loaded->test, split.test);
}

TEST(MakeGraph, RejectsInvariantViolations) {
  EXPECT_THROW(make_edge(3, 3), std::invalid_argument);
  EXPECT_EQ(make_edge(4, 1), (Edge{1, 4}));
  EXPECT_THROW(make_graph(2, {{0, 1}}, Matrix::Zero(3, 1), {0, 1}), std::invalid_argument);
  EXPECT_THROW(make_graph(2, {{0, 1}}, Matrix::Zero(2, 1), {0, 2}, 2), std::invalid_argument);
  EXPECT_THROW(make_graph(2, {{0, 2}}, Matrix::Zero(2, 1), {0, 1}), std::invalid_argument);
}

TEST(LargestComponent, ConnectedTriangleIsUnchanged) {
  const Graph g = plain_graph(3, {{0, 1}, {1, 2}, {0, 2}});
  const ComponentResult r = largest_connected_component(g);
  EXPECT_EQ(r.graph.edges, g.edges);
  EXPECT_EQ(r.old_to_new, (std::vector<NodeId>{0, 1, 2}));
}

TEST(LargestComponent, LargerComponentWins) {
  const Graph g = plain_graph(5, {{3, 4}, {0, 1}, {1, 2}, {0, 2}});
  const ComponentResult r = largest_connected_component(g);
  EXPECT_EQ(r.graph.num_nodes, 3u);
  EXPECT_EQ(r.graph.num_edges(), 3u);
  EXPECT_EQ(r.old_to_new[3], kDroppedNode);
  EXPECT_EQ(r.new_to_old, (std::vector<NodeId>{0, 1, 2}));
}

TEST(LargestComponent, TieGoesToSmallestNodeId) {
  // Components {0,3} and {1,2} have equal size; the one holding node 0 wins.
  const Graph g = plain_graph(4, {{1, 2}, {0, 3}});
  const ComponentResult r = largest_connected_component(g);
  EXPECT_EQ(r.new_to_old, (std::vector<NodeId>{0, 3}));
  EXPECT_EQ(r.graph.edges, (std::vector<Edge>{{0, 1}}));
  EXPECT_EQ(r.graph.labels, (std::vector<int>{0, 1}));
}

TEST(LargestComponent, NoEdgesGivesSingleNode) {
  const Graph g = plain_graph(3, {});
  EXPECT_EQ(largest_connected_component(g).graph.num_nodes, 1u);
}

TEST(LargestComponent, Idempotent) {
  const Graph g = generate_sbm({3, 20, 0.1, 0.0, 3, 0.1}, 5);
  const Graph once = largest_connected_component(g).graph;
  const ComponentResult twice = largest_connected_component(once);
  EXPECT_EQ(twice.graph.edges, once.edges);
  EXPECT_EQ(twice.graph.features, once.features);
  for (std::size_t i = 0; i < once.num_nodes; ++i) EXPECT_EQ(twice.old_to_new[i], static_cast<NodeId>(i));
}

TEST(RemapSplit, DropsRemovedNodes) {
  NodeSplit s{{0, 3}, {1}, {2, 4}};
  const std::vector<NodeId> old_to_new{0, kDroppedNode, 1, 2, kDroppedNode};
  const NodeSplit r = remap_split(s, old_to_new);
  EXPECT_EQ(r.train, (std::vector<NodeId>{0, 2}));
  EXPECT_TRUE(r.val.empty());
  EXPECT_EQ(r.test, (std::vector<NodeId>{1}));
}

TEST(MakeSplit, FloorSizes) {
  const NodeSplit s = make_split(plain_graph(10, {}), {0.1, 0.1, 0.8}, 7);
  EXPECT_EQ(s.train.size(), 1u);
  EXPECT_EQ(s.val.size(), 1u);
  EXPECT_EQ(s.test.size(), 8u);
}

TEST(MakeSplit, CoraSizedRemainderGoesToTest) {
  const NodeSplit s = make_split(plain_graph(2485, {}), {0.1, 0.1, 0.8}, 1);
  EXPECT_EQ(s.train.size(), 248u);
  EXPECT_EQ(s.val.size(), 248u);
  EXPECT_EQ(s.test.size(), 1989u);
  s.validate(2485);
}

TEST(MakeSplit, DeterministicPerSeed) {
  const Graph g = plain_graph(200, {});
  const NodeSplit a = make_split(g, {}, 11), b = make_split(g, {}, 11), c = make_split(g, {}, 12);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.val, b.val);
  EXPECT_EQ(a.test, b.test);
  EXPECT_NE(a.train, c.train);
}

TEST(MakeSplit, Errors) {
  const Graph g = plain_graph(5, {});
  EXPECT_THROW(make_split(g, {0.1, 0.1, 0.8}, 0), std::invalid_argument);
  EXPECT_THROW(make_split(g, {0.6, 0.6, 0.0}, 0), std::invalid_argument);
  EXPECT_THROW(make_split(g, {-0.1, 0.5, 0.5}, 0), std::invalid_argument);
}

TEST(Sbm, ZeroOutProbabilityKeepsEdgesInsideBlocks) {
  const Graph g = generate_sbm({3, 30, 0.3, 0.0, 6, 0.2}, 2);
  ASSERT_GT(g.num_edges(), 0u);
  for (const Edge& e : g.edges) EXPECT_EQ(g.labels[e.u], g.labels[e.v]);
}

TEST(Sbm, IntraEdgeCountMatchesBinomial) {
  const Graph g = generate_sbm({2, 50, 0.2, 0.01, 8, 0.5}, 1);
  const std::size_t intra = static_cast<std::size_t>(
      std::count_if(g.edges.begin(), g.edges.end(), [&](const Edge& e) { return g.labels[e.u] == g.labels[e.v]; }));
  const double trials = 2.0 * 50.0 * 49.0 / 2.0;
  const double mean = trials * 0.2;
  const double sd = std::sqrt(trials * 0.2 * 0.8);
  EXPECT_NEAR(static_cast<double>(intra), mean, 3.0 * sd);
  EXPECT_DOUBLE_EQ(mean, 490.0);
}

TEST(Sbm, NoiselessFeaturesAreBlockCentroids) {
  const Graph g = generate_sbm({2, 20, 0.2, 0.01, 4, 0.0}, 9);
  for (std::size_t i = 0; i < g.num_nodes; ++i) {
    const std::size_t first = (i / 20) * 20;
    EXPECT_EQ(g.features.row(static_cast<Eigen::Index>(i)), g.features.row(static_cast<Eigen::Index>(first)));
  }
  EXPECT_NE(g.features.row(0), g.features.row(20));
}

TEST(Sbm, DeterministicAndValidated) {
  const SbmParams p{2, 30, 0.2, 0.02, 4, 0.5};
  const Graph a = generate_sbm(p, 4), b = generate_sbm(p, 4);
  EXPECT_EQ(a.edges, b.edges);
  EXPECT_EQ(a.features, b.features);
  EXPECT_THROW(generate_sbm({1, 10, 0.2, 0.1, 2, 0.0}, 0), std::invalid_argument);
  EXPECT_THROW(generate_sbm({2, 10, 0.1, 0.2, 2, 0.0}, 0), std::invalid_argument);
  EXPECT_THROW(SbmParams::parse("2,10,0.2"), std::invalid_argument);
  EXPECT_EQ(SbmParams::parse("4,25,0.3,0.01,8,0.5").nodes_per_block, 25u);
}

TEST(NormalizedAdjacency, SingleNodeIsOne) {
  const NormalizedAdjacency adj(1, {}, {});
  EXPECT_DOUBLE_EQ(adj.diagonal(0), 1.0);
}

TEST(NormalizedAdjacency, TwoNodesUnitMask) {
  const std::vector<Edge> e{{0, 1}};
  const std::vector<double> m{1.0};
  const Matrix a = NormalizedAdjacency(2, e, m).to_dense();
  EXPECT_DOUBLE_EQ(a(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(a(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(a(1, 0), 0.5);
  EXPECT_DOUBLE_EQ(a(1, 1), 0.5);
}

TEST(NormalizedAdjacency, TwoNodesHalfMask) {
  const std::vector<Edge> e{{0, 1}};
  const std::vector<double> m{0.5};
  const Matrix a = NormalizedAdjacency(2, e, m).to_dense();
  EXPECT_NEAR(a(0, 1), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(a(0, 0), 2.0 / 3.0, 1e-15);
}

TEST(NormalizedAdjacency, ZeroMaskIsIdentity) {
  const Graph g = generate_sbm({2, 15, 0.4, 0.05, 2, 0.0}, 3);
  const std::vector<double> zeros(g.num_edges(), 0.0);
  const Matrix a = NormalizedAdjacency(g.num_nodes, g.edges, zeros).to_dense();
  EXPECT_EQ(a, Matrix::Identity(a.rows(), a.cols()));
}

TEST(NormalizedAdjacency, MatchesDenseOracleAndIsSymmetric) {
  const Graph g = generate_sbm({3, 10, 0.5, 0.1, 3, 0.0}, 8);
  std::mt19937_64 rng(5);
  std::vector<double> m(g.num_edges());
  for (double& v : m) v = std::uniform_real_distribution<double>(0.0, 2.0)(rng);
  const NormalizedAdjacency adj(g.num_nodes, g.edges, m);
  const Matrix a = adj.to_dense();
  EXPECT_EQ(a, a.transpose());
  EXPECT_LT((a - oracle::dense_adjacency(g.num_nodes, g.edges, m)).cwiseAbs().maxCoeff(), 1e-14);

  const Matrix x = Matrix::Random(static_cast<Eigen::Index>(g.num_nodes), 3);
  EXPECT_LT((adj.multiply(x) - a * x).cwiseAbs().maxCoeff(), 1e-13);
  for (std::size_t i = 0; i < g.num_nodes; ++i) EXPECT_GT(adj.diagonal(i), 0.0);
}

TEST(NormalizedAdjacency, NonPositiveDegreeThrows) {
  const std::vector<Edge> e{{0, 1}};
  const std::vector<double> m{-1.0};
  EXPECT_THROW(NormalizedAdjacency(2, e, m), std::runtime_error);
  const std::vector<double> slightly_negative{-0.5};
  EXPECT_NO_THROW(NormalizedAdjacency(2, e, slightly_negative));
}

TEST(Sparsity, FreshMasksAreDense) {
  EXPECT_DOUBLE_EQ(graph_sparsity(EdgeMask::ones(10)), 0.0);
  EXPECT_DOUBLE_EQ(model_sparsity(WeightMasks::ones(3, 4, 2)), 0.0);
}

TEST(Sparsity, CountsZeroEntriesAgainstInitialSize) {
  EdgeMask m = EdgeMask::ones(8);
  m.values[2] = 0.0;
  EXPECT_DOUBLE_EQ(graph_sparsity(m), 1.0 / 8.0);
  m.values.resize(4);
  m.edge_ids.resize(4);
  EXPECT_DOUBLE_EQ(graph_sparsity(m), 1.0 - 3.0 / 8.0);

  WeightMasks w = WeightMasks::ones(2, 2, 1);
  w.w0(0, 1) = 0.0;
  w.w1(1, 0) = 0.0;
  EXPECT_DOUBLE_EQ(model_sparsity(w), 2.0 / 6.0);
}

TEST(Sparsity, EdgeMaskSelectsSurvivors) {
  EdgeMask m = EdgeMask::ones(3);
  m.edge_ids = {0, 2};
  m.values = {1.0, 1.0};
  const std::vector<Edge> all{{0, 1}, {0, 2}, {1, 2}};
  EXPECT_EQ(m.select(all), (std::vector<Edge>{{0, 1}, {1, 2}}));
}
