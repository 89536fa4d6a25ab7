#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include <Eigen/Core>

#include "infoflow/series.hpp"

namespace infoflow {

/// Sample moments feeding every estimator formula. Covariances use the
/// (m - 1) divisor; c{i}d{j} is the covariance of X_i with the difference
/// series of X_j.
struct CovarianceStats {
  double c11 = 0.0;
  double c12 = 0.0;
  double c22 = 0.0;
  double c1d1 = 0.0;
  double c2d1 = 0.0;
  double c1d2 = 0.0;
  double c2d2 = 0.0;
  double mean_x1 = 0.0;
  double mean_x2 = 0.0;
  double mean_d1 = 0.0;
  double mean_d2 = 0.0;
  std::size_t m = 0;

  double det() const noexcept { return c11 * c22 - c12 * c12; }
};

/// Maximum-likelihood estimate of dX = (f + A X) dt + diag(b1, b2) dW under
/// the Euler transition density. q1/q2 are the residual sums of squares.
struct ModelEstimate {
  double f1_hat = 0.0;
  double f2_hat = 0.0;
  double a11_hat = 0.0;
  double a12_hat = 0.0;
  double a21_hat = 0.0;
  double a22_hat = 0.0;
  double b1_hat = 0.0;
  double b2_hat = 0.0;
  double q1 = 0.0;
  double q2 = 0.0;
};

/// Information flow rates in nats per unit time.
struct FlowPair {
  double t21 = 0.0;  ///< from X2 to X1
  double t12 = 0.0;  ///< from X1 to X2
};

struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  bool contains(double v) const noexcept { return lower <= v && v <= upper; }
  double width() const noexcept { return upper - lower; }
};

enum class FlowVariant { Stationary, NonstationaryStar };

struct FlowEstimate {
  double t21 = 0.0;
  double t12 = 0.0;
  double se21 = 0.0;
  double se12 = 0.0;
  Interval ci21;
  Interval ci12;
  double alpha = 0.05;
  FlowVariant variant = FlowVariant::Stationary;
  std::size_t m = 0;
  double dt = 0.0;

  /// Flow is significant when its interval excludes zero.
  bool significant21() const noexcept { return !ci21.contains(0.0); }
  bool significant12() const noexcept { return !ci12.contains(0.0); }
};

/// Leading covariance ratios (C12/C11, C12/C22). For the nonstationary
/// variant these come from the stationary slab only.
struct CovarianceRatios {
  double r1 = 0.0;  ///< C12 / C11, multiplies a12
  double r2 = 0.0;  ///< C12 / C22, multiplies a21
};

/// Relative determinant floor: det(C) <= kCollinearityFloor * c11 * c22 is
/// rejected as collinear.
inline constexpr double kCollinearityFloor = 1e-12;
/// Variances below this are rejected as degenerate.
inline constexpr double kDegenerateVariance = 1e-300;

/// Two-pass sample moments over four equally long sample vectors.
CovarianceStats sample_covariances(std::span<const double> x1,
                                   std::span<const double> x2,
                                   std::span<const double> d1,
                                   std::span<const double> d2);

/// Moments of an aligned pair over its aligned window.
CovarianceStats covariances(const AlignedPair& pair);

/// Closed-form least-squares (= maximum-likelihood) fit of both drift rows
/// and the diagonal noise amplitudes.
ModelEstimate fit_mle(const AlignedPair& pair, const CovarianceStats& cov);

/// Decoupled log-likelihood of the Euler transition densities, up to the
/// constant -m log(2 pi dt). Initial-density term omitted.
double log_likelihood(const AlignedPair& pair, const ModelEstimate& model);

/// Flow rates from sample covariances.
FlowPair flow(const CovarianceStats& cov);

/// Ratios C12/C11 and C12/C22 over slice [window.start_index, end_index) of
/// the pair's raw series, optionally after linear detrending of the slice.
CovarianceRatios star_ratios(const AlignedPair& pair,
                             const StationaryWindow& window, bool detrend);

/// Flow with the leading ratio taken from a stationary slab and the drift
/// coefficient from the full aligned window of the original data.
FlowPair flow_nonstationary(const AlignedPair& pair,
                            const StationaryWindow& star_window,
                            bool detrend_star);

/// Observed information matrix N*I over theta = (f_i, a_i1, a_i2, b_i) for
/// drift row `component` (1 or 2), built from analytic second derivatives of
/// the per-step log transition density evaluated at `model`.
Eigen::Matrix4d fisher_information(const AlignedPair& pair,
                                   const ModelEstimate& model, int component);

/// Standard normal two-sided critical value z such that P(|Z| > z) = alpha.
double normal_critical_value(double alpha);

/// Asymptotic normal intervals from the inverse Fisher information.
/// With `star` set, the leading ratios (and hence the point estimates and
/// standard errors) use the starred covariances.
FlowEstimate fisher_ci(const AlignedPair& pair, const ModelEstimate& model,
                       const CovarianceStats& cov, double alpha,
                       const std::optional<CovarianceRatios>& star = {});

struct BootstrapOptions {
  std::size_t n_boot = 1000;
  std::size_t block_len = 0;  ///< 0 selects ceil(m^(1/3))
  std::uint64_t seed = 0;
  unsigned threads = 0;       ///< 0 selects hardware concurrency
};

struct BootstrapResult {
  FlowEstimate estimate;
  std::size_t block_len = 0;
  std::size_t redrawn = 0;  ///< degenerate resamples discarded and redrawn
};

inline constexpr std::size_t kMinBootstrapResamples = 100;

/// Default moving-block length ceil(m^(1/3)).
std::size_t default_block_length(std::size_t m);

/// Moving-block bootstrap over aligned indices with percentile intervals.
/// Each resample draws from its own generator seeded from (seed, index), so
/// the result is independent of the thread count.
BootstrapResult bootstrap_ci(const AlignedPair& pair, double alpha,
                             const BootstrapOptions& options);

}  // namespace infoflow
