#include "infoflow/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <string>

#include "infoflow/error.hpp"

namespace infoflow {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::optional<std::size_t> CsvTable::column(std::string_view name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) return std::nullopt;
  return static_cast<std::size_t>(it - header.begin());
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    const auto cell = line.substr(
        pos, comma == std::string_view::npos ? std::string_view::npos
                                             : comma - pos);
    auto t = trim(cell);
    if (t.size() >= 2 && t.front() == '"' && t.back() == '"') {
      t = t.substr(1, t.size() - 2);
    }
    cells.emplace_back(t);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return cells;
}

std::optional<double> parse_real(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

CsvTable read_csv(const std::filesystem::path& path, bool has_header) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::InvalidArgument,
                "cannot open '" + path.string() + "'");
  }
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = !has_header;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (!header_seen) {
      table.header = split_csv_line(t);
      header_seen = true;
      continue;
    }
    table.rows.push_back(split_csv_line(t));
    table.line_numbers.push_back(line_no);
  }
  if (!header_seen || table.rows.empty()) {
    throw Error(ErrorCode::EmptyFile, "'" + path.string() + "' has no data rows");
  }
  return table;
}

}  // namespace infoflow
