#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace arglt {

using Rng = std::mt19937_64;

/// Derives an independent sub-seed for a named stage ("split", "init",
/// "attack", ...) from one experiment seed.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stage);

/// Uniform integer in [0, bound) by rejection; bound must be > 0.
std::uint64_t uniform_index(Rng& rng, std::uint64_t bound);

/// Uniform real in [0, 1) built from the top 53 bits of one draw.
double uniform_unit(Rng& rng);

/// Standard normal draw (Box-Muller, one value per call).
double standard_normal(Rng& rng);

/// Fisher-Yates shuffle using uniform_index.
template <class T>
void shuffle_in_place(std::span<T> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_index(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace arglt
