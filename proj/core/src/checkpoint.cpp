#include "arglt/checkpoint.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace arglt {
using nlohmann::json;

namespace {

constexpr const char* kFormat = "arglt-gcn-checkpoint";

json to_array(const Matrix& m) {
  return json(std::vector<double>(m.data(), m.data() + m.size()));
}

Matrix from_array(const json& j, Eigen::Index rows, Eigen::Index cols, const char* name) {
  const auto values = j.at(name).get<std::vector<double>>();
  if (values.size() != static_cast<std::size_t>(rows * cols)) {
    throw std::runtime_error(std::string("checkpoint: '") + name + "' has wrong length");
  }
  Matrix m(rows, cols);
  std::copy(values.begin(), values.end(), m.data());
  return m;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const GcnState& gcn, std::uint64_t seed) {
  json j;
  j["format"] = kFormat;
  j["version"] = 1;
  j["seed"] = seed;
  j["features"] = gcn.num_features();
  j["hidden"] = gcn.hidden_dim();
  j["classes"] = gcn.num_classes();
  j["w0"] = to_array(gcn.w0);
  j["w1"] = to_array(gcn.w1);
  j["theta0_w0"] = to_array(gcn.init_w0());
  j["theta0_w1"] = to_array(gcn.init_w1());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump() << '\n';
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    json j;
    in >> j;
    if (j.at("format").get<std::string>() != kFormat) {
      throw std::runtime_error("checkpoint: unexpected format tag");
    }
    const auto F = j.at("features").get<Eigen::Index>();
    const auto H = j.at("hidden").get<Eigen::Index>();
    const auto C = j.at("classes").get<Eigen::Index>();
    return Checkpoint{GcnState(from_array(j, F, H, "w0"), from_array(j, H, C, "w1"),
                               from_array(j, F, H, "theta0_w0"), from_array(j, H, C, "theta0_w1")),
                      j.at("seed").get<std::uint64_t>()};
  } catch (const json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

}  // namespace arglt
