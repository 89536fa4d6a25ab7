#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace infoflow::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// Run description embedded verbatim in every output file so that a result
/// can be traced to its exact inputs and flags.
struct RunManifest {
  std::string command;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  nlohmann::ordered_json input_digests = nlohmann::ordered_json::object();

  void add_input(const std::filesystem::path& path);
  nlohmann::ordered_json to_json() const;

  /// Single-line JSON for '#' comment headers in CSV outputs.
  std::string comment_line() const;
};

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// INFOFLOW_SEED when set and numeric, otherwise `fallback`.
std::uint64_t default_seed(std::uint64_t fallback);

/// Parses "a:b" into two reals.
std::pair<double, double> parse_span(const std::string& text,
                                     const std::string& flag);

}  // namespace infoflow::cli
