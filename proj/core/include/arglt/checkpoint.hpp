#pragma once

#include <cstdint>
#include <filesystem>

#include "arglt/gcn.hpp"

namespace arglt {

/// JSON model checkpoint:
///
///   {"format": "arglt-gcn-checkpoint", "version": 1, "seed": <u64>,
///    "features": F, "hidden": H, "classes": C,
///    "w0": [F*H row-major], "w1": [H*C row-major],
///    "theta0_w0": [...], "theta0_w1": [...]}
///
/// Doubles are written in shortest round-trip form, so a load restores the
/// weights bit for bit.
struct Checkpoint {
  GcnState gcn;
  std::uint64_t seed = 0;
};

void save_checkpoint(const std::filesystem::path& path, const GcnState& gcn, std::uint64_t seed);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace arglt
