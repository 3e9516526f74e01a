#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace arglt {

/// "%.6g": six significant digits, fixed across runs and platforms.
std::string format_double(double v);

/// Minimal CSV table: no quoting, comma separated, '\n' line endings.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by name; throws std::out_of_range if missing.
  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
};

void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace arglt
