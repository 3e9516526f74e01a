#include "arglt/report.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace arglt {

ColumnStats column_stats(std::span<const double> values) {
  ColumnStats s;
  s.count = values.size();
  if (values.empty()) return s;
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(ss / static_cast<double>(values.size()));
  return s;
}

const ColumnStats& MetricsAggregate::at(int round, const std::string& column) const {
  const auto r = std::find(rounds.begin(), rounds.end(), round);
  const auto c = std::find(columns.begin(), columns.end(), column);
  if (r == rounds.end() || c == columns.end()) {
    throw std::out_of_range("no aggregate for round " + std::to_string(round) + ", column " + column);
  }
  return stats[static_cast<std::size_t>(r - rounds.begin())][static_cast<std::size_t>(c - columns.begin())];
}

MetricsAggregate aggregate_metrics(const std::vector<CsvTable>& runs) {
  if (runs.empty()) throw std::invalid_argument("report: no runs to aggregate");
  const auto& header = runs.front().header;
  for (const auto& t : runs) {
    if (t.header != header) throw std::invalid_argument("report: runs have inconsistent metrics schemas");
  }
  const std::size_t round_col = runs.front().column("round");

  MetricsAggregate agg;
  std::vector<std::size_t> value_cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c == round_col) continue;
    agg.columns.push_back(header[c]);
    value_cols.push_back(c);
  }

  // round -> column -> values across runs
  std::map<int, std::vector<std::vector<double>>> by_round;
  for (const auto& t : runs) {
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      const int round = static_cast<int>(t.number(r, "round"));
      auto& cols = by_round[round];
      cols.resize(value_cols.size());
      for (std::size_t k = 0; k < value_cols.size(); ++k) {
        cols[k].push_back(t.number(r, header[value_cols[k]]));
      }
    }
  }
  for (const auto& [round, cols] : by_round) {
    agg.rounds.push_back(round);
    std::vector<ColumnStats> row;
    row.reserve(cols.size());
    for (const auto& values : cols) row.push_back(column_stats(values));
    agg.stats.push_back(std::move(row));
  }
  return agg;
}

}  // namespace arglt
