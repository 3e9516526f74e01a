#pragma once

// Dense reference implementations built directly from the model definition.
// They share no code with the library beyond the plain data types.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "arglt/graph.hpp"
#include "arglt/matrix.hpp"
#include "arglt/pseudo_labels.hpp"

namespace oracle {

using arglt::Edge;
using arglt::Matrix;
using arglt::NodeId;

/// D^-1/2 (M + I) D^-1/2 with M the symmetric masked adjacency.
inline Matrix dense_adjacency(std::size_t n, std::span<const Edge> edges,
                              std::span<const double> mask) {
  Matrix a = Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t e = 0; e < edges.size(); ++e) {
    a(edges[e].u, edges[e].v) += mask[e];
    a(edges[e].v, edges[e].u) += mask[e];
  }
  const Eigen::VectorXd d = a.rowwise().sum();
  const Eigen::VectorXd s = d.array().rsqrt();
  return s.asDiagonal() * a * s.asDiagonal();
}

inline Matrix dense_softmax(const Matrix& logits) {
  Matrix p(logits.rows(), logits.cols());
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const double mx = logits.row(r).maxCoeff();
    double z = 0.0;
    for (Eigen::Index c = 0; c < logits.cols(); ++c) z += std::exp(logits(r, c) - mx);
    for (Eigen::Index c = 0; c < logits.cols(); ++c) p(r, c) = std::exp(logits(r, c) - mx) / z;
  }
  return p;
}

struct Params {
  Matrix w0, w1, m0, m1;
  std::vector<double> edge_mask;
};

/// Â X (M0⊙W0), the hidden pre-activation.
inline Matrix dense_pre(const Matrix& adj, const Matrix& x, const Params& p) {
  return adj * x * p.w0.cwiseProduct(p.m0);
}

inline Matrix dense_gcn(std::size_t n, std::span<const Edge> edges, const Matrix& x,
                        const Params& p) {
  const Matrix adj = dense_adjacency(n, edges, p.edge_mask);
  const Matrix h = dense_pre(adj, x, p).cwiseMax(0.0);
  return dense_softmax(adj * h * p.w1.cwiseProduct(p.m1));
}

inline double neg_log(double prob) { return -std::log(std::max(prob, 1e-12)); }

struct Weights {
  double alpha = 1, beta = 0.1, gamma = 1, lambda1 = 1e-2, lambda2 = 1e-2;
};

struct Terms {
  double l0 = 0, lfs = 0, l1 = 0, reg_g = 0, reg_theta = 0, total = 0;
};

/// Every term of the pruning objective, summed the long way.
inline Terms dense_args(std::size_t n, std::span<const Edge> edges, const Matrix& x,
                        const std::vector<int>& labels, std::span<const NodeId> train,
                        const arglt::PseudoLabels& pseudo, const Params& p, const Weights& w) {
  const Matrix z = dense_gcn(n, edges, x, p);
  Terms t;
  for (NodeId l : train) t.l0 += neg_log(z(l, labels[static_cast<std::size_t>(l)]));
  for (const auto& e : pseudo.entries) t.l1 += neg_log(z(e.node, e.label));
  for (std::size_t e = 0; e < edges.size(); ++e) {
    t.lfs += p.edge_mask[e] * (x.row(edges[e].u) - x.row(edges[e].v)).squaredNorm();
    t.reg_g += std::abs(p.edge_mask[e]);
  }
  t.reg_theta = p.m0.cwiseAbs().sum() + p.m1.cwiseAbs().sum();
  t.total = w.alpha * t.l0 + w.beta * t.lfs + w.gamma * t.l1 + w.lambda1 * t.reg_g +
            w.lambda2 * t.reg_theta;
  return t;
}

/// |a - b| / max(|a|, |b|, floor)
inline double rel_error(double a, double b, double floor) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = std::filesystem::temp_directory_path() /
            ("arglt_" + tag + "_" + std::to_string(stamp) + "_" + std::to_string(counter()++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

}  // namespace oracle
