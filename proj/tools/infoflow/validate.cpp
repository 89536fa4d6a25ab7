#include <cmath>
#include <cstdio>

#include "commands.hpp"
#include "infoflow/validation.hpp"

namespace infoflow::cli {

void add_validate(CLI::App& app, ValidateOptions& opt) {
  auto* sub = app.add_subcommand(
      "validate", "Re-run the sample-path validation experiments against their bands");
  sub->add_option("--seed", opt.seed, "First seed (default $INFOFLOW_SEED or 1)");
  sub->add_option("--seeds", opt.seeds, "Number of consecutive seeds to run")
      ->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--band-scale", opt.band_scale,
                  "Scale every band half-width (0 collapses bands)")
      ->check(CLI::NonNegativeNumber)->capture_default_str();
}

namespace {

void print_rows(const std::vector<ValidationRow>& rows) {
  std::printf("%-28s %-16s %12s %10s %-24s %s\n", "experiment", "quantity",
              "estimate", "reference", "band", "result");
  for (const auto& r : rows) {
    char ref[32] = "-";
    if (r.reference) std::snprintf(ref, sizeof ref, "%.4g", *r.reference);
    char band[48] = "-";
    if (!r.is_check && !r.informational) {
      std::snprintf(band, sizeof band, "[%.4g, %.4g]", r.lower, r.upper);
    }
    const char* result = r.informational ? "info" : (r.passed ? "PASS" : "FAIL");
    std::printf("%-28s %-16s %12.5g %10s %-24s %s\n", r.experiment.c_str(),
                r.quantity.c_str(), r.estimate, ref, band, result);
  }
}

}  // namespace

int run_validate(const ValidateOptions& opt) {
  std::size_t passing = 0;
  std::vector<std::string> failing;
  for (std::size_t k = 0; k < opt.seeds; ++k) {
    const auto seed = opt.seed + k;
    std::printf("== seed %llu\n", static_cast<unsigned long long>(seed));
    const auto rows = run_validation({seed, opt.band_scale});
    print_rows(rows);
    if (all_passed(rows)) {
      ++passing;
    } else {
      for (const auto& r : rows) {
        if (!r.informational && !r.passed) {
          failing.push_back("seed " + std::to_string(seed) + ": " +
                            r.experiment + " " + r.quantity);
        }
      }
    }
  }
  const auto required =
      opt.seeds == 1 ? std::size_t{1}
                     : static_cast<std::size_t>(std::ceil(0.9 * static_cast<double>(opt.seeds)));
  std::printf("\n%zu of %zu seeds passed every band (need %zu)\n", passing,
              opt.seeds, required);
  if (passing >= required) return kExitOk;
  std::printf("failing rows:\n");
  for (const auto& f : failing) std::printf("  %s\n", f.c_str());
  return kExitValidationFailed;
}

}  // namespace infoflow::cli
