#include <fstream>
#include <iostream>

#include "commands.hpp"
#include "infoflow/error.hpp"
#include "infoflow/estimator.hpp"
#include "infoflow/series.hpp"
#include "infoflow/simulator.hpp"
#include "manifest.hpp"
#include "report.hpp"

namespace infoflow::cli {

void add_analyze(CLI::App& app, AnalyzeOptions& opt) {
  auto* sub = app.add_subcommand("analyze", "Estimate information flow between two CSV columns");
  sub->add_option("--input", opt.input, "CSV file with a header row")->required();
  sub->add_option("--x1", opt.x1, "Column holding X1")->capture_default_str();
  sub->add_option("--x2", opt.x2, "Column holding X2")->capture_default_str();
  sub->add_option("--dt", opt.dt, "Time step between rows")->required()
      ->check(CLI::PositiveNumber);
  sub->add_option("--t0", opt.t0, "Time stamp of the first row")->capture_default_str();
  sub->add_option("--subsample", opt.subsample, "Keep every n-th sample")
      ->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--window", opt.window, "Analysis span START:END in time units");
  sub->add_option("--star-window", opt.star_window,
                  "Stationary slab START:END for the leading covariance ratio");
  sub->add_flag("--detrend-star", opt.detrend_star, "Detrend the star slab linearly");
  sub->add_option("--alpha", opt.alpha, "Significance level")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  sub->add_option("--ci", opt.ci, "Interval method")
      ->check(CLI::IsMember({"fisher", "bootstrap"}))->capture_default_str();
  sub->add_option("--seed", opt.seed, "Bootstrap seed (default $INFOFLOW_SEED or 0)");
  sub->add_option("--n-boot", opt.n_boot, "Bootstrap resamples")->capture_default_str();
  sub->add_option("--block-len", opt.block_len, "Bootstrap block length (0 = ceil(m^(1/3)))")
      ->capture_default_str();
  sub->add_option("--time-unit", opt.time_unit, "Label for the time unit of dt")
      ->capture_default_str();
  sub->add_option("--out", opt.out, "Write JSON here instead of stdout");
  sub->add_option("--threads", opt.threads, "Worker threads for the bootstrap (0 = all)");
}

int run_analyze(const AnalyzeOptions& opt) {
  if (opt.ci == "bootstrap" && !opt.star_window.empty()) {
    throw Error(ErrorCode::InvalidArgument,
                "bootstrap intervals are only available for the stationary variant");
  }
  RunManifest manifest;
  manifest.command = "analyze";
  auto& p = manifest.parameters;
  p["input"] = opt.input;
  p["x1"] = opt.x1;
  p["x2"] = opt.x2;
  p["dt"] = opt.dt;
  p["t0"] = opt.t0;
  p["subsample"] = opt.subsample;
  p["window"] = opt.window;
  p["star_window"] = opt.star_window;
  p["detrend_star"] = opt.detrend_star;
  p["alpha"] = opt.alpha;
  p["ci"] = opt.ci;
  if (opt.ci == "bootstrap") {
    p["seed"] = opt.seed;
    p["n_boot"] = opt.n_boot;
    p["block_len"] = opt.block_len;
  }
  p["time_unit"] = opt.time_unit;
  manifest.add_input(opt.input);

  auto [raw1, raw2] = load_csv(opt.input, opt.x1, opt.x2, opt.dt);
  TimeSeries x1(std::vector<double>(raw1.values().begin(), raw1.values().end()),
                opt.dt, opt.t0, opt.x1);
  TimeSeries x2(std::vector<double>(raw2.values().begin(), raw2.values().end()),
                opt.dt, opt.t0, opt.x2);
  if (!opt.window.empty()) {
    const auto [a, b] = parse_span(opt.window, "--window");
    x1 = window(x1, a, b);
    x2 = window(x2, a, b);
  }
  if (opt.subsample > 1) {
    x1 = subsample(x1, opt.subsample);
    x2 = subsample(x2, opt.subsample);
  }

  const auto pair = align(x1, x2);
  const auto cov = covariances(pair);
  const auto model = fit_mle(pair, cov);

  FlowEstimate est;
  nlohmann::ordered_json bootstrap_info;
  if (!opt.star_window.empty()) {
    const auto [a, b] = parse_span(opt.star_window, "--star-window");
    StationaryWindow w;
    try {
      w = stationary_window_from_times(x1, a, b);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::WindowOutOfRange) throw;
      throw Error(ErrorCode::WindowTooShort,
                  "star window " + opt.star_window +
                      " is not covered by the analysed span [" +
                      std::to_string(x1.t0()) + ", " +
                      std::to_string(x1.t_end()) + "]");
    }
    est = fisher_ci(pair, model, cov, opt.alpha,
                    star_ratios(pair, w, opt.detrend_star));
  } else if (opt.ci == "bootstrap") {
    BootstrapOptions bo;
    bo.n_boot = opt.n_boot;
    bo.block_len = opt.block_len;
    bo.seed = opt.seed;
    bo.threads = opt.threads;
    const auto res = bootstrap_ci(pair, opt.alpha, bo);
    est = res.estimate;
    bootstrap_info = {{"n_boot", opt.n_boot},
                      {"block_len", res.block_len},
                      {"redrawn", res.redrawn},
                      {"seed", opt.seed}};
  } else {
    est = fisher_ci(pair, model, cov, opt.alpha);
  }

  auto j = flow_json(est, model, cov);
  j["ci_method"] = opt.ci;
  if (!bootstrap_info.is_null()) j["bootstrap"] = bootstrap_info;
  j["units"] = "nats per " + opt.time_unit;
  const auto summary = flow_summary(est, opt.x1, opt.x2, opt.time_unit);
  j["summary"] = summary;
  j["manifest"] = manifest.to_json();

  const auto text = j.dump(2);
  if (opt.out.empty()) {
    std::cout << text << '\n';
  } else {
    std::ofstream out(opt.out);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + opt.out);
    out << text << '\n';
  }
  for (const auto& line : summary) std::cerr << line << '\n';
  return kExitOk;
}

}  // namespace infoflow::cli
