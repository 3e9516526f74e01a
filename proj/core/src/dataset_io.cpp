#include "arglt/dataset_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace arglt {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Graph load_graph(const fs::path& dir) {
  const fs::path features_path = dir / "features.csv";
  const fs::path labels_path = dir / "labels.txt";
  const fs::path edges_path = dir / "edges.txt";

  std::vector<std::vector<double>> rows;
  {
    auto in = open_input(features_path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (blank(line)) continue;
      std::vector<double> row;
      std::stringstream ss(line);
      for (std::string cell; std::getline(ss, cell, ',');) {
        try {
          row.push_back(std::stod(cell));
        } catch (const std::logic_error&) {
          throw std::runtime_error(features_path.string() + ":" + std::to_string(line_no) +
                                   ": malformed value '" + cell + "'");
        }
      }
      if (!rows.empty() && row.size() != rows.front().size()) {
        throw std::runtime_error(features_path.string() + ":" + std::to_string(line_no) +
                                 ": expected " + std::to_string(rows.front().size()) +
                                 " columns, got " + std::to_string(row.size()));
      }
      rows.push_back(std::move(row));
    }
  }
  const std::size_t n = rows.size();
  const std::size_t F = n ? rows.front().size() : 0;
  Matrix features(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(F));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t f = 0; f < F; ++f) {
      features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(f)) = rows[i][f];
    }
  }
  rows.clear();

  std::vector<int> labels;
  {
    auto in = open_input(labels_path);
    std::string line;
    while (std::getline(in, line)) {
      if (blank(line)) continue;
      try {
        labels.push_back(std::stoi(line));
      } catch (const std::logic_error&) {
        throw std::runtime_error(labels_path.string() + ": malformed label '" + line + "'");
      }
    }
  }
  if (labels.size() != n) {
    throw std::runtime_error(labels_path.string() + ": " + std::to_string(labels.size()) +
                             " labels for " + std::to_string(n) + " feature rows");
  }
  for (int y : labels) {
    if (y < 0) throw std::runtime_error(labels_path.string() + ": negative label");
  }

  std::vector<Edge> edges;
  {
    auto in = open_input(edges_path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (blank(line)) continue;
      std::istringstream ss(line);
      long long a = 0;
      long long b = 0;
      if (!(ss >> a >> b)) {
        throw std::runtime_error(edges_path.string() + ":" + std::to_string(line_no) +
                                 ": expected two node ids");
      }
      const auto where = edges_path.string() + ":" + std::to_string(line_no);
      if (a < 0 || b < 0 || a >= static_cast<long long>(n) || b >= static_cast<long long>(n)) {
        throw std::runtime_error(where + ": endpoint outside [0, " + std::to_string(n) + ")");
      }
      if (a == b) throw std::runtime_error(where + ": self-loop");
      edges.push_back(make_edge(static_cast<NodeId>(a), static_cast<NodeId>(b)));
    }
  }
  try {
    return make_graph(n, std::move(edges), std::move(features), std::move(labels));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(dir.string() + ": " + e.what());
  }
}

std::optional<NodeSplit> load_split(const fs::path& dir) {
  const fs::path path = dir / "split.json";
  if (!fs::exists(path)) return std::nullopt;
  auto in = open_input(path);
  json j;
  try {
    in >> j;
    NodeSplit s;
    s.train = j.at("train").get<std::vector<NodeId>>();
    s.val = j.value("val", std::vector<NodeId>{});
    s.test = j.at("test").get<std::vector<NodeId>>();
    return s;
  } catch (const json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

void save_graph(const Graph& g, const fs::path& dir) {
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "edges.txt");
    for (const Edge& e : g.edges) out << e.u << ' ' << e.v << '\n';
  }
  {
    std::ofstream out(dir / "features.csv");
    for (Eigen::Index i = 0; i < g.features.rows(); ++i) {
      for (Eigen::Index f = 0; f < g.features.cols(); ++f) {
        if (f) out << ',';
        out << format_double(g.features(i, f));
      }
      out << '\n';
    }
  }
  {
    std::ofstream out(dir / "labels.txt");
    for (int y : g.labels) out << y << '\n';
  }
}

void save_split(const NodeSplit& split, const fs::path& dir) {
  fs::create_directories(dir);
  json j = {{"train", split.train}, {"val", split.val}, {"test", split.test}};
  std::ofstream out(dir / "split.json");
  out << j.dump() << '\n';
}

}  // namespace arglt
