#pragma once

#include <cstdint>
#include <string>

#include "arglt/graph.hpp"

namespace arglt {

/// Planted-partition stochastic block model with block-centroid features.
struct SbmParams {
  std::size_t blocks = 2;
  std::size_t nodes_per_block = 50;
  double p_in = 0.2;
  double p_out = 0.01;
  std::size_t feature_dim = 8;
  double feature_noise = 0.0;

  void validate() const;
  /// Parses "k,n,p_in,p_out,F,sigma".
  static SbmParams parse(const std::string& spec);
  std::string to_string() const;
};

/// Node i belongs to block i / nodes_per_block, which is also its label.
/// Each pair is an edge independently with p_in (same block) or p_out.
/// Block b's centroid has 1.0 at every feature index f with f % blocks == b;
/// features are the centroid plus N(0, feature_noise^2) per entry.
Graph generate_sbm(const SbmParams& params, std::uint64_t seed);

}  // namespace arglt
