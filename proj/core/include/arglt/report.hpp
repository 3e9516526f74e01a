#pragma once

#include <span>
#include <string>
#include <vector>

#include "arglt/csv.hpp"

namespace arglt {

struct ColumnStats {
  double mean = 0.0;
  double stddev = 0.0;  // population (divide by n)
  std::size_t count = 0;
};

ColumnStats column_stats(std::span<const double> values);

/// Per-round mean/stddev across runs of metrics.csv-shaped tables. Rows are
/// matched on the "round" column; a round present in only some runs is
/// aggregated over those runs.
struct MetricsAggregate {
  std::vector<std::string> columns;  // every column except "round"
  std::vector<int> rounds;
  std::vector<std::vector<ColumnStats>> stats;  // [round index][column index]

  const ColumnStats& at(int round, const std::string& column) const;
};

/// Throws std::invalid_argument when headers differ or "round" is missing.
MetricsAggregate aggregate_metrics(const std::vector<CsvTable>& runs);

}  // namespace arglt
