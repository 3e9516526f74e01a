#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "arglt/attacks.hpp"
#include "json.hpp"

namespace arglt {
namespace {

nlohmann::json pairs_to_json(const std::vector<Edge>& edges) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Edge& e : edges) arr.push_back({e.u, e.v});
  return arr;
}

std::vector<Edge> pairs_from_json(const nlohmann::json& arr, const char* key) {
  if (!arr.is_array()) throw std::invalid_argument(std::string("attack.json: '") + key + "' must be an array");
  std::vector<Edge> out;
  out.reserve(arr.size());
  for (const auto& p : arr) {
    if (!p.is_array() || p.size() != 2) {
      throw std::invalid_argument(std::string("attack.json: entries of '") + key + "' must be [i, j]");
    }
    out.push_back(make_edge(p[0].get<NodeId>(), p[1].get<NodeId>()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

void save_attack(const std::filesystem::path& path, const PerturbedGraph& pg, double rate,
                 std::uint64_t seed, const std::string& attack_name) {
  const nlohmann::json doc = {{"rate", rate},
                              {"seed", seed},
                              {"attack_name", attack_name},
                              {"added", pairs_to_json(pg.added)},
                              {"removed", pairs_to_json(pg.removed)}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(1) << '\n';
}

AttackFile load_attack(const std::filesystem::path& path, const Graph& base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
  AttackFile f;
  f.rate = doc.at("rate").get<double>();
  f.seed = doc.value("seed", std::uint64_t{0});
  f.attack_name = doc.value("attack_name", std::string{});
  f.graph.base = base;
  f.graph.added = pairs_from_json(doc.at("added"), "added");
  f.graph.removed = pairs_from_json(doc.at("removed"), "removed");
  f.graph.validate(attack_budget(base.num_edges(), f.rate));
  return f;
}

}  // namespace arglt
