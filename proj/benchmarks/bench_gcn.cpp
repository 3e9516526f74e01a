#include <benchmark/benchmark.h>

#include "arglt/adjacency.hpp"
#include "arglt/features.hpp"
#include "arglt/gcn.hpp"
#include "arglt/sbm.hpp"
#include "arglt/sparsifier.hpp"

using namespace arglt;

namespace {

struct Setup {
  Graph g;
  std::vector<double> mask;
  NodeFeatures x;
  GcnState gcn;
  WeightMasks wm;

  explicit Setup(Eigen::Index hidden)
      : g(generate_sbm({7, 350, 0.02, 0.0005, 256, 1.0}, 1)),
        mask(g.edges.size(), 1.0),
        x(g.features),
        gcn(256, hidden, 7, 1),
        wm(WeightMasks::ones(256, hidden, 7)) {}
};

void BM_AdjacencyMultiply(benchmark::State& state) {
  const Setup s(64);
  const NormalizedAdjacency adj(s.g.num_nodes, s.g.edges, s.mask);
  const Matrix h = Matrix::Random(static_cast<Eigen::Index>(s.g.num_nodes), 64);
  for (auto _ : state) benchmark::DoNotOptimize(adj.multiply(h));
}
BENCHMARK(BM_AdjacencyMultiply);

void BM_GcnForward(benchmark::State& state) {
  const Setup s(state.range(0));
  const NormalizedAdjacency adj(s.g.num_nodes, s.g.edges, s.mask);
  for (auto _ : state) benchmark::DoNotOptimize(gcn_forward(adj, s.x, s.gcn, s.wm));
}
BENCHMARK(BM_GcnForward)->Arg(64)->Arg(512);

void BM_GcnBackward(benchmark::State& state) {
  const Setup s(state.range(0));
  const NormalizedAdjacency adj(s.g.num_nodes, s.g.edges, s.mask);
  const GcnForward f = gcn_forward(adj, s.x, s.gcn, s.wm);
  const Matrix upstream = f.probs;
  for (auto _ : state) benchmark::DoNotOptimize(gcn_backward(f, upstream, true));
}
BENCHMARK(BM_GcnBackward)->Arg(64)->Arg(512);

void BM_PruneWeightMasks(benchmark::State& state) {
  for (auto _ : state) {
    state.PauseTiming();
    WeightMasks m{Matrix::Random(1433, 512), Matrix::Random(512, 7)};
    state.ResumeTiming();
    prune_weight_masks(m, 0.2);
  }
}
BENCHMARK(BM_PruneWeightMasks);

}  // namespace

BENCHMARK_MAIN();
