#include <algorithm>
#include <charconv>
#include <fstream>
#include <stdexcept>

#include "arglt/sparsifier.hpp"
#include "config_json.hpp"

namespace arglt {
namespace detail {

nlohmann::json args_config_json(const ArgsConfig& cfg) {
  const LossWeights& w = cfg.weights;
  return {{"alpha", w.alpha},       {"beta", w.beta},
          {"gamma", w.gamma},       {"eta", w.eta},
          {"zeta", w.zeta},         {"lambda1", w.lambda1},
          {"lambda2", w.lambda2},   {"pg", cfg.p_g},
          {"ptheta", cfg.p_theta},  {"sg", cfg.s_g},
          {"stheta", cfg.s_theta},  {"epochs", cfg.epochs},
          {"lr", cfg.lr_weights},   {"lr_edge_mask", cfg.lr_edge_mask},
          {"lr_weight_mask", cfg.lr_weight_mask},
          {"patience", cfg.patience}, {"tau", cfg.tau},
          {"hidden", cfg.hidden},   {"row_normalize", cfg.row_normalize_smoothness},
          {"seed", cfg.seed}};
}

nlohmann::json edge_list_json(const std::vector<Edge>& edges) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Edge& e : edges) arr.push_back({e.u, e.v});
  return arr;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(1) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

}  // namespace detail

std::string encode_bits(std::span<const double> bits) {
  std::string out;
  std::size_t k = 0;
  while (k < bits.size()) {
    const double v = bits[k];
    if (v != 0.0 && v != 1.0) throw std::invalid_argument("encode_bits: mask is not binary");
    std::size_t run = 1;
    while (k + run < bits.size() && bits[k + run] == v) ++run;
    if (!out.empty()) out += ',';
    out += v == 1.0 ? "1:" : "0:";
    out += std::to_string(run);
    k += run;
  }
  return out;
}

std::vector<double> decode_bits(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string::npos) end = text.size();
    const std::string_view run(text.data() + pos, end - pos);
    std::size_t count = 0;
    const bool ok = run.size() >= 3 && (run[0] == '0' || run[0] == '1') && run[1] == ':' &&
                    std::from_chars(run.data() + 2, run.data() + run.size(), count).ptr ==
                        run.data() + run.size();
    if (!ok || count == 0) throw std::invalid_argument("malformed run '" + std::string(run) + "'");
    out.insert(out.end(), count, run[0] == '1' ? 1.0 : 0.0);
    pos = end + 1;
  }
  return out;
}

void save_ticket(const std::filesystem::path& path, const PerturbedGraph& pg, const MaskPair& masks,
                 const ArgsConfig& cfg, const std::string& theta0_checkpoint,
                 const std::string& report_path) {
  std::vector<Edge> kept;
  const std::vector<Edge> all = pg.edges();
  for (std::size_t k = 0; k < masks.edges.size(); ++k) {
    if (masks.edges.values[k] != 0.0) kept.push_back(all.at(masks.edges.edge_ids[k]));
  }
  const nlohmann::json doc = {
      {"kept_edges", detail::edge_list_json(kept)},
      {"weight_mask_w0", encode_bits({masks.weights.w0.data(), static_cast<std::size_t>(masks.weights.w0.size())})},
      {"weight_mask_w1", encode_bits({masks.weights.w1.data(), static_cast<std::size_t>(masks.weights.w1.size())})},
      {"theta0_checkpoint", theta0_checkpoint},
      {"config", detail::args_config_json(cfg)},
      {"report_path", report_path}};
  detail::write_json(path, doc);
}

MaskPair load_ticket(const std::filesystem::path& path, const PerturbedGraph& pg,
                     Eigen::Index features, Eigen::Index hidden, Eigen::Index classes) {
  const nlohmann::json doc = detail::read_json(path);
  const std::vector<Edge> all = pg.edges();
  MaskPair m;
  m.edges.initial_count = all.size();
  for (const auto& p : doc.at("kept_edges")) {
    const Edge e = make_edge(p.at(0).get<NodeId>(), p.at(1).get<NodeId>());
    const auto it = std::lower_bound(all.begin(), all.end(), e);
    if (it == all.end() || *it != e) {
      throw std::invalid_argument(path.string() + ": kept edge (" + std::to_string(e.u) + ", " +
                                  std::to_string(e.v) + ") is not in the graph");
    }
    m.edges.edge_ids.push_back(static_cast<std::size_t>(it - all.begin()));
    m.edges.values.push_back(1.0);
  }
  const std::vector<double> w0 = decode_bits(doc.at("weight_mask_w0").get<std::string>());
  const std::vector<double> w1 = decode_bits(doc.at("weight_mask_w1").get<std::string>());
  if (static_cast<Eigen::Index>(w0.size()) != features * hidden ||
      static_cast<Eigen::Index>(w1.size()) != hidden * classes) {
    throw std::invalid_argument(path.string() + ": weight mask sizes do not match the model");
  }
  m.weights.w0 = Eigen::Map<const Matrix>(w0.data(), features, hidden);
  m.weights.w1 = Eigen::Map<const Matrix>(w1.data(), hidden, classes);
  return m;
}

}  // namespace arglt
