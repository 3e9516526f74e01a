#pragma once

// Internal JSON helpers shared by the ticket writer and the experiment harness.

#include "arglt/sparsifier.hpp"
#include "json.hpp"

namespace arglt::detail {

nlohmann::json args_config_json(const ArgsConfig& cfg);

/// [[u, v], ...]
nlohmann::json edge_list_json(const std::vector<Edge>& edges);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace arglt::detail
