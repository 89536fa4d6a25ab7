#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>

#include <Eigen/Core>

#include "infoflow/series.hpp"
#include "infoflow/theory.hpp"

namespace infoflow {

struct SimConfig {
  LinearModel2D model;
  Eigen::Vector2d x0 = Eigen::Vector2d::Zero();
  double dt = 1e-3;
  std::size_t n_steps = 100000;
  std::uint64_t seed = 0;
};

/// Euler sample path X_{n+1} = X_n + (f + A X_n) dt + diag(b1, b2) dW_n with
/// dW_n = sqrt(dt) * N(0, I). Returns n_steps + 1 samples per component,
/// starting at t = 0.
///
/// Increments come from std::mt19937_64 seeded with `seed` and
/// std::normal_distribution, drawn in the order (W1, W2) per step. Paths are
/// bit-reproducible for a given seed and standard library.
std::pair<TimeSeries, TimeSeries> simulate(const SimConfig& cfg);

/// Contiguous slice with both end points included: indices
/// round((t_start - t0)/dt) .. round((t_end - t0)/dt).
TimeSeries window(const TimeSeries& series, double t_start, double t_end);

}  // namespace infoflow
