#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace infoflow {

/// Minimal reader for headed, comma-separated numeric tables. Blank lines and
/// lines whose first non-space character is '#' are skipped.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  ///< 1-based source line per row

  std::optional<std::size_t> column(std::string_view name) const;
};

CsvTable read_csv(const std::filesystem::path& path, bool has_header = true);

std::vector<std::string> split_csv_line(std::string_view line);

/// Parses a decimal real; accepts surrounding whitespace. Returns nullopt on
/// any trailing garbage. "nan"/"inf" parse and are left to the caller.
std::optional<double> parse_real(std::string_view text);

}  // namespace infoflow
