#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "infoflow/theory.hpp"

namespace infoflow::cli {

/// Exit-code taxonomy shared by all subcommands.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidationFailed = 1,
  kExitInputError = 2,
  kExitNumerical = 3,
};

/// Drift/noise flags shared by `simulate` and `theory`; defaults are the
/// one-way coupled test system.
struct ModelFlags {
  double f1 = 0.0, f2 = 0.0;
  double a11 = -1.0, a12 = 0.5, a21 = 0.0, a22 = -1.0;
  double b1 = 0.1, b2 = 0.1;

  void add_to(CLI::App& app);
  LinearModel2D model() const;
  void record(nlohmann::ordered_json& params) const;
};

struct AnalyzeOptions {
  std::string input;
  std::string x1 = "x1";
  std::string x2 = "x2";
  double dt = 1.0;
  double t0 = 0.0;
  std::size_t subsample = 1;
  std::string window;
  std::string star_window;
  bool detrend_star = false;
  double alpha = 0.05;
  std::string ci = "fisher";
  std::uint64_t seed = 0;
  std::size_t n_boot = 1000;
  std::size_t block_len = 0;
  std::string time_unit = "time unit";
  std::string out;
  unsigned threads = 0;
};

struct SimulateOptions {
  ModelFlags model;
  std::string out;
  std::string config;
  double dt = 1e-3;
  std::size_t steps = 100000;
  std::string x0 = "1,2";
  std::uint64_t seed = 0;
};

struct TheoryOptions {
  ModelFlags model;
  double mu1 = 1.0, mu2 = 2.0;
  double s11 = 0.1, s12 = 0.0, s22 = 0.1;
  double t_end = 10.0;
  double dt = 1e-3;
  std::size_t every = 10;
  std::string out;
};

struct MapOptions {
  std::string index;
  std::string column = "index";
  std::string grid_manifest;
  double alpha = 0.05;
  std::string out_dir = ".";
  std::string time_unit = "time unit";
  unsigned threads = 0;
};

struct ValidateOptions {
  std::uint64_t seed = 1;
  std::size_t seeds = 1;
  double band_scale = 1.0;
};

void add_analyze(CLI::App& app, AnalyzeOptions& opt);
void add_simulate(CLI::App& app, SimulateOptions& opt);
void add_theory(CLI::App& app, TheoryOptions& opt);
void add_map(CLI::App& app, MapOptions& opt);
void add_validate(CLI::App& app, ValidateOptions& opt);

int run_analyze(const AnalyzeOptions& opt);
/// `sub` is consulted for which flags were given explicitly, so config-file
/// values never override the command line.
int run_simulate(SimulateOptions opt, const CLI::App& sub);
int run_theory(const TheoryOptions& opt);
int run_map(const MapOptions& opt);
int run_validate(const ValidateOptions& opt);

}  // namespace infoflow::cli
