#pragma once

#include <filesystem>
#include <optional>

#include "arglt/graph.hpp"

namespace arglt {

/// Loads a dataset directory:
///   edges.txt     one "i j" pair of 0-based node ids per line
///   features.csv  one row of comma-separated decimals per node
///   labels.txt    one integer class id per line
/// Repeated or reversed edges are merged; self-loops, out-of-range endpoints
/// and row-count mismatches throw std::runtime_error with the file name.
Graph load_graph(const std::filesystem::path& dir);

/// Reads the optional `split.json` ({"train":[...],"val":[...],"test":[...]}).
std::optional<NodeSplit> load_split(const std::filesystem::path& dir);

void save_graph(const Graph& g, const std::filesystem::path& dir);
void save_split(const NodeSplit& split, const std::filesystem::path& dir);

}  // namespace arglt
