#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "arglt/adam.hpp"
#include "arglt/adjacency.hpp"
#include "arglt/checkpoint.hpp"
#include "arglt/features.hpp"
#include "arglt/gcn.hpp"
#include "arglt/init.hpp"
#include "arglt/mlp.hpp"
#include "gradcheck.hpp"
#include "oracle.hpp"

using namespace arglt;

namespace {

Matrix mat(Eigen::Index r, Eigen::Index c, std::initializer_list<double> v) {
  Matrix m(r, c);
  std::copy(v.begin(), v.end(), m.data());
  return m;
}

}  // namespace

TEST(GcnForward, ZeroWeightsGiveUniformRows) {
  const std::vector<Edge> e{{0, 1}, {1, 2}};
  const std::vector<double> m{1.0, 1.0};
  const NormalizedAdjacency adj(3, e, m);
  const NodeFeatures x(Matrix::Random(3, 4));
  const GcnState gcn(Matrix::Zero(4, 5), Matrix::Zero(5, 3), Matrix::Zero(4, 5), Matrix::Zero(5, 3));
  const GcnForward f = gcn_forward(adj, x, gcn, WeightMasks::ones(4, 5, 3));
  for (Eigen::Index i = 0; i < f.probs.size(); ++i) EXPECT_DOUBLE_EQ(f.probs.data()[i], 1.0 / 3.0);
}

TEST(GcnForward, SingleNodeSingleClass) {
  const NormalizedAdjacency adj(1, {}, {});
  const NodeFeatures x(mat(1, 1, {2.0}));
  const GcnState gcn(mat(1, 1, {1.0}), mat(1, 1, {1.0}), mat(1, 1, {1.0}), mat(1, 1, {1.0}));
  const GcnForward f = gcn_forward(adj, x, gcn, WeightMasks::ones(1, 1, 1));
  EXPECT_DOUBLE_EQ(f.logits(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(f.probs(0, 0), 1.0);
}

TEST(GcnForward, TwoNodePathMatchesBruteForce) {
  const std::vector<Edge> e{{0, 1}};
  const std::vector<double> m{0.5};
  const NormalizedAdjacency adj(2, e, m);
  const Matrix x = mat(2, 2, {1.0, 0.0, 0.0, 1.0});
  const Matrix w = Matrix::Identity(2, 2);
  const GcnState gcn(w, w, w, w);
  const GcnForward f = gcn_forward(adj, NodeFeatures(x), gcn, WeightMasks::ones(2, 2, 2));
  // Â = [[2/3, 1/3], [1/3, 2/3]]; Â X = Â, all positive so relu passes it; Â·Â.
  const Matrix a = mat(2, 2, {2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0});
  const Matrix logits = a * a;
  EXPECT_LT((f.logits - logits).cwiseAbs().maxCoeff(), 1e-15);
  const double p = 1.0 / (1.0 + std::exp(logits(0, 1) - logits(0, 0)));
  EXPECT_NEAR(f.probs(0, 0), p, 1e-15);
}

TEST(GcnForward, MatchesDenseOracleAndRowsSumToOne) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const oracle::Instance in = oracle::random_instance(100 + s);
    const NormalizedAdjacency adj(in.n, in.edges, in.params.edge_mask);
    const GcnState gcn(in.params.w0, in.params.w1, in.params.w0, in.params.w1);
    const GcnForward f = gcn_forward(adj, NodeFeatures(in.x), gcn, {in.params.m0, in.params.m1});
    const Matrix z = oracle::dense_gcn(in.n, in.edges, in.x, in.params);
    EXPECT_LT((f.probs - z).cwiseAbs().maxCoeff(), 1e-13);
    for (Eigen::Index r = 0; r < f.probs.rows(); ++r) EXPECT_NEAR(f.probs.row(r).sum(), 1.0, 1e-9);
  }
}

TEST(GcnForward, ZeroWeightMaskFreezesContribution) {
  const oracle::Instance in = oracle::random_instance(7);
  const NormalizedAdjacency adj(in.n, in.edges, in.params.edge_mask);
  WeightMasks masks{in.params.m0, in.params.m1};
  masks.w0(0, 0) = 0.0;
  masks.w1(0, 0) = 0.0;
  GcnState a(in.params.w0, in.params.w1, in.params.w0, in.params.w1);
  GcnState b = a;
  b.w0(0, 0) = 1e6;
  b.w1(0, 0) = -1e6;
  const NodeFeatures x(in.x);
  EXPECT_EQ(gcn_forward(adj, x, a, masks).probs, gcn_forward(adj, x, b, masks).probs);
}

TEST(GcnBackward, ZeroUpstreamGivesZeroGradients) {
  const oracle::Instance in = oracle::random_instance(3);
  const NormalizedAdjacency adj(in.n, in.edges, in.params.edge_mask);
  const GcnState gcn(in.params.w0, in.params.w1, in.params.w0, in.params.w1);
  const NodeFeatures x(in.x);
  const WeightMasks masks{in.params.m0, in.params.m1};
  const GcnForward f = gcn_forward(adj, x, gcn, masks);
  const GcnGradients g = gcn_backward(f, Matrix::Zero(f.logits.rows(), f.logits.cols()));
  EXPECT_EQ(g.w0.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(g.w1.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(g.mask_w0.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(g.mask_w1.cwiseAbs().maxCoeff(), 0.0);
  for (double v : g.edge_mask) EXPECT_EQ(v, 0.0);
}

TEST(GcnBackward, EffectiveWeightChainRule) {
  const oracle::Instance in = oracle::random_instance(12);
  const NormalizedAdjacency adj(in.n, in.edges, in.params.edge_mask);
  const GcnState gcn(in.params.w0, in.params.w1, in.params.w0, in.params.w1);
  const WeightMasks masks{in.params.m0, in.params.m1};
  const NodeFeatures x(in.x);  // the forward cache refers to it
  const GcnForward f = gcn_forward(adj, x, gcn, masks);
  const GcnGradients g = gcn_backward(f, Matrix::Ones(f.logits.rows(), f.logits.cols()));
  // ∂W·W = ∂(effective)·M·W = ∂M·M elementwise.
  EXPECT_LT((g.w0.cwiseProduct(gcn.w0) - g.mask_w0.cwiseProduct(masks.w0)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((g.w1.cwiseProduct(gcn.w1) - g.mask_w1.cwiseProduct(masks.w1)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(GcnBackward, MatchesFiniteDifferences) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const oracle::GradCheck r = oracle::check_gradients(oracle::random_instance(500 + s), 1e-5, 1e-6);
    EXPECT_LE(r.worst, 1e-4) << "instance " << s << " at " << r.worst_at;
    EXPECT_LE(r.loss_error, 1e-12);
  }
}

TEST(GcnBackward, ZeroEdgeMaskStillReceivesGradient) {
  oracle::Instance in = oracle::random_instance(21);
  in.params.edge_mask[0] = 0.0;
  const NormalizedAdjacency adj(in.n, in.edges, in.params.edge_mask);
  const GcnState gcn(in.params.w0, in.params.w1, in.params.w0, in.params.w1);
  const NodeFeatures x(in.x);
  const GcnForward f = gcn_forward(adj, x, gcn, {in.params.m0, in.params.m1});
  const GcnGradients g = gcn_backward(f, Matrix::Ones(f.logits.rows(), f.logits.cols()) - 2.0 * f.probs);
  EXPECT_NE(g.edge_mask[0], 0.0);
}

TEST(Predict, ArgmaxWithSmallestIdTieBreak) {
  const Matrix p = mat(3, 3, {0.2, 0.4, 0.4, 0.5, 0.25, 0.25, 1.0 / 3, 1.0 / 3, 1.0 / 3});
  EXPECT_EQ(predict(p), (std::vector<int>{1, 0, 0}));
  const std::vector<int> labels{1, 2, 0};
  const std::vector<NodeId> nodes{0, 1, 2};
  EXPECT_NEAR(accuracy(p, labels, nodes), 2.0 / 3.0, 1e-15);
}

TEST(Mlp, ZeroWeightsGiveUniformRows) {
  const MlpState mlp(Matrix::Zero(3, 4), Matrix::Zero(4, 2));
  const Matrix p = mlp_forward(Matrix::Random(5, 3), mlp);
  for (Eigen::Index i = 0; i < p.size(); ++i) EXPECT_DOUBLE_EQ(p.data()[i], 0.5);
}

TEST(Mlp, SoftmaxClosedForm) {
  // relu(ln 3 · 1) · [1, 0] gives logits (ln 3, 0).
  const MlpState mlp(mat(1, 1, {1.0}), mat(1, 2, {1.0, 0.0}));
  const Matrix p = mlp_forward(mat(1, 1, {std::log(3.0)}), mlp);
  EXPECT_NEAR(p(0, 0), 0.75, 1e-15);
  EXPECT_NEAR(p(0, 1), 0.25, 1e-15);
}

TEST(Mlp, SingleFeaturePassthroughIsLogistic) {
  const MlpState mlp(mat(1, 1, {1.0}), mat(1, 2, {1.0, 0.0}));
  for (double v : {0.0, 0.3, 1.7, 4.0}) {
    const Matrix p = mlp_forward(mat(1, 1, {v}), mlp);
    EXPECT_NEAR(p(0, 0), 1.0 / (1.0 + std::exp(-v)), 1e-15);
  }
}

TEST(Mlp, BackwardMatchesFiniteDifferences) {
  std::mt19937_64 rng(4);
  const Matrix x = Matrix::Random(6, 3);
  const MlpState mlp(init_weights(3, 5, 1), init_weights(5, 3, 2));
  const Matrix up = Matrix::Random(6, 3);
  const NodeFeatures xf(x);
  const MlpForward f = mlp_forward(xf, mlp);
  const MlpGradients g = mlp_backward(xf, mlp, f, up);
  // Scalar probe: Σ up ⊙ logits.
  auto probe = [&](const MlpState& s) { return (mlp_forward(xf, s).logits.cwiseProduct(up)).sum(); };
  const double h = 1e-6;
  for (Eigen::Index k = 0; k < mlp.v0.size(); ++k) {
    MlpState a = mlp, b = mlp;
    a.v0.data()[k] += h;
    b.v0.data()[k] -= h;
    EXPECT_NEAR(g.v0.data()[k], (probe(a) - probe(b)) / (2 * h), 1e-7);
  }
  for (Eigen::Index k = 0; k < mlp.v1.size(); ++k) {
    MlpState a = mlp, b = mlp;
    a.v1.data()[k] += h;
    b.v1.data()[k] -= h;
    EXPECT_NEAR(g.v1.data()[k], (probe(a) - probe(b)) / (2 * h), 1e-7);
  }
}

TEST(Adam, ZeroGradientLeavesParameters) {
  AdamState adam;
  const auto g = adam.add_group(3, 0.1);
  std::vector<double> p{1.0, -2.0, 3.0};
  const std::vector<double> zero(3, 0.0);
  adam.next_step();
  adam.apply(g, p, zero);
  EXPECT_EQ(p, (std::vector<double>{1.0, -2.0, 3.0}));
}

TEST(Adam, FirstStepClosedForm) {
  const AdamHyper hp;
  AdamState adam(hp);
  const double lr = 0.01;
  const auto g = adam.add_group(3, lr);
  std::vector<double> p{0.0, 0.0, 0.0};
  const std::vector<double> grad{0.5, -3.0, 1e-9};
  adam.next_step();
  adam.apply(g, p, grad);
  for (std::size_t i = 0; i < 3; ++i) {
    // Bias-corrected moments equal g and g² after one step.
    const double expected = -lr * grad[i] / (std::abs(grad[i]) + hp.eps);
    EXPECT_NEAR(p[i], expected, 1e-15);
  }
  EXPECT_NEAR(p[0], -lr, 1e-9);
}

TEST(Adam, DeterministicAndPerGroupRates) {
  auto run = [] {
    AdamState adam;
    const auto a = adam.add_group(2, 0.1);
    const auto b = adam.add_group(1, 0.001);
    std::vector<double> pa{1.0, 2.0}, pb{3.0};
    for (int t = 0; t < 50; ++t) {
      adam.next_step();
      adam.apply(a, pa, std::vector<double>{pa[0] - 0.3, std::sin(t + pa[1])});
      adam.apply(b, pb, std::vector<double>{pb[0]});
    }
    EXPECT_EQ(adam.step_count(), 50u);
    EXPECT_DOUBLE_EQ(adam.learning_rate(b), 0.001);
    return std::make_pair(pa, pb);
  };
  EXPECT_EQ(run(), run());
}

TEST(Adam, ShapeMismatchThrows) {
  AdamState adam;
  const auto g = adam.add_group(2, 0.1);
  std::vector<double> p(3);
  adam.next_step();
  EXPECT_THROW(adam.apply(g, p, std::vector<double>(3)), std::invalid_argument);
}

TEST(InitWeights, DeterministicAndBounded) {
  EXPECT_EQ(init_weights(30, 20, 9), init_weights(30, 20, 9));
  EXPECT_NE(init_weights(30, 20, 9), init_weights(30, 20, 10));
  const Matrix w = init_weights(30, 20, 9);
  EXPECT_LE(w.cwiseAbs().maxCoeff(), glorot_limit(30, 20));
}

TEST(InitWeights, MeanNearZero) {
  const Matrix w = init_weights(100, 100, 3);
  const double a = glorot_limit(100, 100);
  const double sd_of_mean = a / std::sqrt(3.0) / std::sqrt(static_cast<double>(w.size()));
  EXPECT_LT(std::abs(w.mean()), 3.0 * sd_of_mean);
}

TEST(GcnState, SnapshotAndRewind) {
  GcnState gcn(4, 3, 2, 5);
  EXPECT_TRUE(gcn.at_initialization());
  gcn.w0(1, 1) += 0.5;
  gcn.w1(0, 0) = 0.0;
  EXPECT_FALSE(gcn.at_initialization());
  gcn.rewind();
  EXPECT_TRUE(gcn.at_initialization());
  EXPECT_EQ(gcn.w0, gcn.init_w0());
  EXPECT_EQ(gcn.w1, gcn.init_w1());
  EXPECT_EQ(GcnState(4, 3, 2, 5).w0, gcn.w0);
}

TEST(Checkpoint, RoundTripIsBitExact) {
  oracle::TempDir dir("ckpt");
  GcnState gcn(5, 4, 3, 17);
  gcn.w0 *= 1.0 / 3.0;
  gcn.w1(2, 1) = 1e-300;
  save_checkpoint(dir / "theta.json", gcn, 17);
  const Checkpoint c = load_checkpoint(dir / "theta.json");
  EXPECT_EQ(c.seed, 17u);
  EXPECT_EQ(c.gcn.w0, gcn.w0);
  EXPECT_EQ(c.gcn.w1, gcn.w1);
  EXPECT_EQ(c.gcn.init_w0(), gcn.init_w0());
  EXPECT_EQ(c.gcn.init_w1(), gcn.init_w1());
}

TEST(Checkpoint, RejectsMalformedFile) {
  oracle::TempDir dir("ckpt_bad");
  oracle::write_file(dir / "bad.json", "{\"format\": \"something-else\"}");
  EXPECT_THROW(load_checkpoint(dir / "bad.json"), std::runtime_error);
}

TEST(NodeFeatures, SparseAndDenseAgree) {
  Matrix x = Matrix::Zero(20, 10);
  for (int i = 0; i < 20; ++i) x(i, (i * 3) % 10) = 1.0 + i;
  const NodeFeatures sparse(x);
  EXPECT_TRUE(sparse.is_sparse());
  const Matrix w = Matrix::Random(10, 4);
  const Matrix g = Matrix::Random(20, 4);
  EXPECT_LT((sparse.times(w) - x * w).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LT((sparse.transpose_times(g) - x.transpose() * g).cwiseAbs().maxCoeff(), 1e-13);

  const Matrix dense_x = Matrix::Random(6, 3);
  EXPECT_FALSE(NodeFeatures(dense_x).is_sparse());
  const std::vector<NodeId> rows{4, 1};
  const NodeFeatures sub = NodeFeatures::gather(dense_x, rows);
  EXPECT_EQ(sub.rows(), 2);
  EXPECT_EQ(sub.times(Matrix::Identity(3, 3)).row(0), dense_x.row(4));
}

TEST(Matrix, SoftmaxAndFiniteChecks) {
  const Matrix p = softmax_rows(mat(1, 3, {1000.0, 1000.0, 1000.0}));
  for (int c = 0; c < 3; ++c) EXPECT_DOUBLE_EQ(p(0, c), 1.0 / 3.0);
  Matrix bad = Matrix::Zero(2, 2);
  bad(1, 1) = std::nan("");
  EXPECT_THROW(require_finite(bad, "bad"), std::runtime_error);
}
