#include "infoflow/simulator.hpp"

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "infoflow/error.hpp"

namespace infoflow {

std::pair<TimeSeries, TimeSeries> simulate(const SimConfig& cfg) {
  cfg.model.validate();
  if (!(cfg.dt > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "dt must be positive");
  }
  if (cfg.n_steps < 2) {
    throw Error(ErrorCode::InvalidArgument, "need at least two steps");
  }
  if (!cfg.x0.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "initial state is not finite");
  }

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sqrt_dt = std::sqrt(cfg.dt);
  const auto& a = cfg.model.a;
  const auto& f = cfg.model.f;

  std::vector<double> x1(cfg.n_steps + 1);
  std::vector<double> x2(cfg.n_steps + 1);
  double s1 = cfg.x0(0);
  double s2 = cfg.x0(1);
  x1[0] = s1;
  x2[0] = s2;
  for (std::size_t n = 0; n < cfg.n_steps; ++n) {
    const double w1 = normal(rng);
    const double w2 = normal(rng);
    const double drift1 = f(0) + a(0, 0) * s1 + a(0, 1) * s2;
    const double drift2 = f(1) + a(1, 0) * s1 + a(1, 1) * s2;
    s1 += drift1 * cfg.dt + cfg.model.b1 * sqrt_dt * w1;
    s2 += drift2 * cfg.dt + cfg.model.b2 * sqrt_dt * w2;
    if (!std::isfinite(s1) || !std::isfinite(s2)) {
      throw Error(ErrorCode::NonFiniteState,
                  "path diverged at step " + std::to_string(n + 1));
    }
    x1[n + 1] = s1;
    x2[n + 1] = s2;
  }
  return {TimeSeries(std::move(x1), cfg.dt, 0.0, "x1"),
          TimeSeries(std::move(x2), cfg.dt, 0.0, "x2")};
}

TimeSeries window(const TimeSeries& series, double t_start, double t_end) {
  if (!(t_end > t_start)) {
    throw Error(ErrorCode::WindowOutOfRange,
                "empty window [" + std::to_string(t_start) + ", " +
                    std::to_string(t_end) + "]");
  }
  const double first = std::round((t_start - series.t0()) / series.dt());
  const double last = std::round((t_end - series.t0()) / series.dt());
  if (first < 0.0 || last > static_cast<double>(series.size() - 1)) {
    throw Error(ErrorCode::WindowOutOfRange,
                "[" + std::to_string(t_start) + ", " + std::to_string(t_end) +
                    "] outside series span [" + std::to_string(series.t0()) +
                    ", " + std::to_string(series.t_end()) + "]");
  }
  const auto i0 = static_cast<std::size_t>(first);
  const auto i1 = static_cast<std::size_t>(last);
  if (i1 - i0 + 1 < TimeSeries::kMinLength) {
    throw Error(ErrorCode::WindowOutOfRange,
                "window holds fewer than 3 samples");
  }
  const auto v = series.values().subspan(i0, i1 - i0 + 1);
  return TimeSeries({v.begin(), v.end()}, series.dt(), series.time_at(i0),
                    series.label());
}

}  // namespace infoflow
