#include "arglt/sbm.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "arglt/seeds.hpp"

namespace arglt {

void SbmParams::validate() const {
  if (blocks < 2) throw std::invalid_argument("sbm: need at least 2 blocks");
  if (nodes_per_block == 0) throw std::invalid_argument("sbm: empty blocks");
  if (!(p_in >= 0.0 && p_in <= 1.0 && p_out >= 0.0 && p_out <= 1.0)) {
    throw std::invalid_argument("sbm: probabilities must lie in [0, 1]");
  }
  if (!(p_in > p_out)) throw std::invalid_argument("sbm: requires p_in > p_out");
  if (feature_dim < blocks) {
    throw std::invalid_argument("sbm: feature_dim must be >= blocks");
  }
  if (!(feature_noise >= 0.0)) throw std::invalid_argument("sbm: negative feature noise");
}

SbmParams SbmParams::parse(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
  if (parts.size() != 6) {
    throw std::invalid_argument("sbm spec must be k,n,p_in,p_out,F,sigma: '" + spec + "'");
  }
  SbmParams p;
  try {
    p.blocks = std::stoul(parts[0]);
    p.nodes_per_block = std::stoul(parts[1]);
    p.p_in = std::stod(parts[2]);
    p.p_out = std::stod(parts[3]);
    p.feature_dim = std::stoul(parts[4]);
    p.feature_noise = std::stod(parts[5]);
  } catch (const std::logic_error&) {
    throw std::invalid_argument("sbm spec has a malformed number: '" + spec + "'");
  }
  p.validate();
  return p;
}

std::string SbmParams::to_string() const {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g,%.17g,%zu,%.17g", blocks, nodes_per_block,
                p_in, p_out, feature_dim, feature_noise);
  return buf;
}

Graph generate_sbm(const SbmParams& params, std::uint64_t seed) {
  params.validate();
  const std::size_t n = params.blocks * params.nodes_per_block;
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i / params.nodes_per_block);

  Rng edge_rng(derive_seed(seed, "sbm-edges"));
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double p = labels[i] == labels[j] ? params.p_in : params.p_out;
      if (uniform_unit(edge_rng) < p) {
        edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j)});
      }
    }
  }

  Rng feature_rng(derive_seed(seed, "sbm-features"));
  const auto F = static_cast<Eigen::Index>(params.feature_dim);
  Matrix features = Matrix::Zero(static_cast<Eigen::Index>(n), F);
  for (std::size_t i = 0; i < n; ++i) {
    for (Eigen::Index f = 0; f < F; ++f) {
      const double centroid =
          static_cast<std::size_t>(f) % params.blocks == static_cast<std::size_t>(labels[i]) ? 1.0
                                                                                           : 0.0;
      const double noise =
          params.feature_noise > 0.0 ? params.feature_noise * standard_normal(feature_rng) : 0.0;
      features(static_cast<Eigen::Index>(i), f) = centroid + noise;
    }
  }
  return make_graph(n, std::move(edges), std::move(features), std::move(labels),
                    static_cast<int>(params.blocks));
}

}  // namespace arglt
