#include "infoflow/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <Eigen/LU>
#include <boost/math/distributions/normal.hpp>

#include "infoflow/error.hpp"
#include "parallel.hpp"

namespace infoflow {
namespace {

struct PairMoments {
  double mean1 = 0.0;
  double mean2 = 0.0;
  double c11 = 0.0;
  double c12 = 0.0;
  double c22 = 0.0;
};

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Shared by the full-window and starred covariances so that a star window
// equal to the aligned window reproduces the stationary formula bit for bit.
PairMoments pair_moments(std::span<const double> x1,
                         std::span<const double> x2) {
  PairMoments pm;
  pm.mean1 = mean_of(x1);
  pm.mean2 = mean_of(x2);
  for (std::size_t n = 0; n < x1.size(); ++n) {
    const double e1 = x1[n] - pm.mean1;
    const double e2 = x2[n] - pm.mean2;
    pm.c11 += e1 * e1;
    pm.c12 += e1 * e2;
    pm.c22 += e2 * e2;
  }
  const double denom = static_cast<double>(x1.size() - 1);
  pm.c11 /= denom;
  pm.c12 /= denom;
  pm.c22 /= denom;
  return pm;
}

void require_noncollinear(double c11, double c12, double c22) {
  const double det = c11 * c22 - c12 * c12;
  if (!(det > kCollinearityFloor * c11 * c22)) {
    throw Error(ErrorCode::CollinearSeries,
                "det(C) = " + std::to_string(det) +
                    " is below the relative floor");
  }
}

// The coupling coefficients written once; flow() and fit_mle() both use these
// so that T21 == (C12/C11) * a12 holds exactly.
double drift_a12(const CovarianceStats& c) {
  return (-c.c12 * c.c1d1 + c.c11 * c.c2d1) / c.det();
}
double drift_a21(const CovarianceStats& c) {
  return (-c.c12 * c.c2d2 + c.c22 * c.c1d2) / c.det();
}

double residual_sum(std::span<const double> x1, std::span<const double> x2,
                    std::span<const double> d, double f, double a1,
                    double a2) {
  double q = 0.0;
  for (std::size_t n = 0; n < d.size(); ++n) {
    const double r = d[n] - (f + a1 * x1[n] + a2 * x2[n]);
    q += r * r;
  }
  return q;
}

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
}

double coefficient_variance(const Eigen::Matrix4d& ni, int index) {
  Eigen::FullPivLU<Eigen::Matrix4d> lu(ni);
  if (!ni.allFinite() || !lu.isInvertible()) {
    throw Error(ErrorCode::SingularFisher, "information matrix is singular");
  }
  const Eigen::Matrix4d inv = lu.inverse();
  const double var = inv(index, index);
  if (!std::isfinite(var) || var < 0.0) {
    throw Error(ErrorCode::SingularFisher,
                "inverse information has invalid diagonal");
  }
  return var;
}

// Type-7 sample quantile of sorted data.
double quantile_sorted(const std::vector<double>& sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double sample_sd(const std::vector<double>& v) {
  const double mean = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

CovarianceStats sample_covariances(std::span<const double> x1,
                                   std::span<const double> x2,
                                   std::span<const double> d1,
                                   std::span<const double> d2) {
  const std::size_t m = x1.size();
  if (x2.size() != m || d1.size() != m || d2.size() != m) {
    throw Error(ErrorCode::LengthMismatch, "sample vectors differ in length");
  }
  if (m < 2) {
    throw Error(ErrorCode::InvalidArgument, "need at least two samples");
  }
  const auto pm = pair_moments(x1, x2);
  CovarianceStats c;
  c.m = m;
  c.mean_x1 = pm.mean1;
  c.mean_x2 = pm.mean2;
  c.c11 = pm.c11;
  c.c12 = pm.c12;
  c.c22 = pm.c22;
  c.mean_d1 = mean_of(d1);
  c.mean_d2 = mean_of(d2);
  for (std::size_t n = 0; n < m; ++n) {
    const double e1 = x1[n] - c.mean_x1;
    const double e2 = x2[n] - c.mean_x2;
    const double g1 = d1[n] - c.mean_d1;
    const double g2 = d2[n] - c.mean_d2;
    c.c1d1 += e1 * g1;
    c.c2d1 += e2 * g1;
    c.c1d2 += e1 * g2;
    c.c2d2 += e2 * g2;
  }
  const double denom = static_cast<double>(m - 1);
  c.c1d1 /= denom;
  c.c2d1 /= denom;
  c.c1d2 /= denom;
  c.c2d2 /= denom;
  if (c.c11 < kDegenerateVariance || c.c22 < kDegenerateVariance) {
    throw Error(ErrorCode::DegenerateSeries,
                "a series has (near) zero variance over the window");
  }
  return c;
}

CovarianceStats covariances(const AlignedPair& pair) {
  return sample_covariances(pair.x1_window(), pair.x2_window(), pair.d1(),
                            pair.d2());
}

ModelEstimate fit_mle(const AlignedPair& pair, const CovarianceStats& cov) {
  require_noncollinear(cov.c11, cov.c12, cov.c22);
  const double det = cov.det();
  ModelEstimate e;
  e.a11_hat = (cov.c22 * cov.c1d1 - cov.c12 * cov.c2d1) / det;
  e.a12_hat = drift_a12(cov);
  e.a21_hat = drift_a21(cov);
  e.a22_hat = (cov.c11 * cov.c2d2 - cov.c12 * cov.c1d2) / det;
  e.f1_hat = cov.mean_d1 - e.a11_hat * cov.mean_x1 - e.a12_hat * cov.mean_x2;
  e.f2_hat = cov.mean_d2 - e.a21_hat * cov.mean_x1 - e.a22_hat * cov.mean_x2;

  const auto x1 = pair.x1_window();
  const auto x2 = pair.x2_window();
  e.q1 = residual_sum(x1, x2, pair.d1(), e.f1_hat, e.a11_hat, e.a12_hat);
  e.q2 = residual_sum(x1, x2, pair.d2(), e.f2_hat, e.a21_hat, e.a22_hat);
  const double m = static_cast<double>(pair.m());
  e.b1_hat = std::sqrt(e.q1 * pair.dt() / m);
  e.b2_hat = std::sqrt(e.q2 * pair.dt() / m);
  return e;
}

double log_likelihood(const AlignedPair& pair, const ModelEstimate& model) {
  const auto x1 = pair.x1_window();
  const auto x2 = pair.x2_window();
  const double q1 = residual_sum(x1, x2, pair.d1(), model.f1_hat,
                                 model.a11_hat, model.a12_hat);
  const double q2 = residual_sum(x1, x2, pair.d2(), model.f2_hat,
                                 model.a21_hat, model.a22_hat);
  const double m = static_cast<double>(pair.m());
  const double b1sq = model.b1_hat * model.b1_hat;
  const double b2sq = model.b2_hat * model.b2_hat;
  return -0.5 * m * std::log(b1sq * b2sq) -
         0.5 * pair.dt() * (q1 / b1sq + q2 / b2sq);
}

FlowPair flow(const CovarianceStats& cov) {
  require_noncollinear(cov.c11, cov.c12, cov.c22);
  return {cov.c12 / cov.c11 * drift_a12(cov),
          cov.c12 / cov.c22 * drift_a21(cov)};
}

CovarianceRatios star_ratios(const AlignedPair& pair,
                             const StationaryWindow& window, bool detrend) {
  const std::size_t n = pair.x1().size();
  if (window.end_index > n || window.start_index >= window.end_index) {
    throw Error(ErrorCode::WindowOutOfRange,
                "star window [" + std::to_string(window.start_index) + ", " +
                    std::to_string(window.end_index) + ") outside 0.." +
                    std::to_string(n));
  }
  if (window.length() < StationaryWindow::kMinLength) {
    throw Error(ErrorCode::WindowTooShort,
                "star window holds " + std::to_string(window.length()) +
                    " samples");
  }
  auto s1 = pair.x1().values().subspan(window.start_index, window.length());
  auto s2 = pair.x2().values().subspan(window.start_index, window.length());
  PairMoments pm;
  if (detrend) {
    const auto t1 = detrend_linear(
        TimeSeries({s1.begin(), s1.end()}, pair.dt()));
    const auto t2 = detrend_linear(
        TimeSeries({s2.begin(), s2.end()}, pair.dt()));
    pm = pair_moments(t1.values(), t2.values());
  } else {
    pm = pair_moments(s1, s2);
  }
  if (!(pm.c11 > 0.0) || !(pm.c22 > 0.0)) {
    throw Error(ErrorCode::DegenerateSeries,
                "zero variance inside the star window");
  }
  return {pm.c12 / pm.c11, pm.c12 / pm.c22};
}

FlowPair flow_nonstationary(const AlignedPair& pair,
                            const StationaryWindow& star_window,
                            bool detrend_star) {
  const auto ratios = star_ratios(pair, star_window, detrend_star);
  const auto cov = covariances(pair);
  require_noncollinear(cov.c11, cov.c12, cov.c22);
  return {ratios.r1 * drift_a12(cov), ratios.r2 * drift_a21(cov)};
}

Eigen::Matrix4d fisher_information(const AlignedPair& pair,
                                   const ModelEstimate& model, int component) {
  if (component != 1 && component != 2) {
    throw Error(ErrorCode::InvalidArgument, "component must be 1 or 2");
  }
  const bool first = component == 1;
  const double f = first ? model.f1_hat : model.f2_hat;
  const double a1 = first ? model.a11_hat : model.a21_hat;
  const double a2 = first ? model.a12_hat : model.a22_hat;
  const double b = first ? model.b1_hat : model.b2_hat;
  const auto d = first ? pair.d1() : pair.d2();
  if (!(b > 0.0)) {
    throw Error(ErrorCode::SingularFisher,
                "noise amplitude estimate is zero");
  }
  const auto x1 = pair.x1_window();
  const auto x2 = pair.x2_window();
  const double dt = pair.dt();

  // Per step: log rho = const - log b - dt R^2 / (2 b^2), R = d - g.beta,
  // g = (1, x1, x2). Accumulate the Gram matrix, sum(R g) and sum(R^2).
  Eigen::Matrix3d gram = Eigen::Matrix3d::Zero();
  Eigen::Vector3d rg = Eigen::Vector3d::Zero();
  double rr = 0.0;
  for (std::size_t n = 0; n < d.size(); ++n) {
    const Eigen::Vector3d g(1.0, x1[n], x2[n]);
    const double r = d[n] - (f + a1 * x1[n] + a2 * x2[n]);
    gram.noalias() += g * g.transpose();
    rg += r * g;
    rr += r * r;
  }
  const double m = static_cast<double>(d.size());
  const double b2 = b * b;

  Eigen::Matrix4d ni;
  ni.topLeftCorner<3, 3>() = (dt / b2) * gram;
  ni.topRightCorner<3, 1>() = (2.0 * dt / (b2 * b)) * rg;
  ni.bottomLeftCorner<1, 3>() = ni.topRightCorner<3, 1>().transpose();
  ni(3, 3) = -m / b2 + 3.0 * dt * rr / (b2 * b2);
  return ni;
}

double normal_critical_value(double alpha) {
  require_alpha(alpha);
  return boost::math::quantile(boost::math::normal_distribution<double>(),
                               1.0 - alpha / 2.0);
}

FlowEstimate fisher_ci(const AlignedPair& pair, const ModelEstimate& model,
                       const CovarianceStats& cov, double alpha,
                       const std::optional<CovarianceRatios>& star) {
  const double z = normal_critical_value(alpha);
  require_noncollinear(cov.c11, cov.c12, cov.c22);
  const CovarianceRatios ratios =
      star ? *star : CovarianceRatios{cov.c12 / cov.c11, cov.c12 / cov.c22};

  FlowEstimate est;
  est.alpha = alpha;
  est.variant = star ? FlowVariant::NonstationaryStar : FlowVariant::Stationary;
  est.m = pair.m();
  est.dt = pair.dt();
  est.t21 = ratios.r1 * drift_a12(cov);
  est.t12 = ratios.r2 * drift_a21(cov);

  // theta = (f_i, a_i1, a_i2, b_i); a12 sits at index 2 of row 1, a21 at
  // index 1 of row 2.
  const double var_a12 =
      coefficient_variance(fisher_information(pair, model, 1), 2);
  const double var_a21 =
      coefficient_variance(fisher_information(pair, model, 2), 1);
  est.se21 = std::abs(ratios.r1) * std::sqrt(var_a12);
  est.se12 = std::abs(ratios.r2) * std::sqrt(var_a21);
  est.ci21 = {est.t21 - z * est.se21, est.t21 + z * est.se21};
  est.ci12 = {est.t12 - z * est.se12, est.t12 + z * est.se12};
  return est;
}

std::size_t default_block_length(std::size_t m) {
  return std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(std::cbrt(static_cast<double>(m)))));
}

BootstrapResult bootstrap_ci(const AlignedPair& pair, double alpha,
                             const BootstrapOptions& options) {
  require_alpha(alpha);
  if (options.n_boot < kMinBootstrapResamples) {
    throw Error(ErrorCode::InvalidArgument,
                "n_boot must be at least " +
                    std::to_string(kMinBootstrapResamples));
  }
  const std::size_t m = pair.m();
  const std::size_t block =
      options.block_len == 0 ? default_block_length(m) : options.block_len;
  if (block > m) {
    throw Error(ErrorCode::InvalidArgument,
                "block length " + std::to_string(block) + " exceeds m = " +
                    std::to_string(m));
  }

  const auto cov = covariances(pair);
  const auto point = flow(cov);

  const auto x1 = pair.x1_window();
  const auto x2 = pair.x2_window();
  const auto d1 = pair.d1();
  const auto d2 = pair.d2();
  const std::size_t n_starts = m - block + 1;
  constexpr std::size_t kMaxAttempts = 100;

  std::vector<double> t21(options.n_boot);
  std::vector<double> t12(options.n_boot);
  std::vector<std::size_t> redraws(options.n_boot, 0);

  detail::parallel_for(options.n_boot, options.threads, [&](std::size_t b) {
    std::vector<double> r1(m), r2(m), g1(m), g2(m);
    for (std::size_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
      std::seed_seq seq{static_cast<std::uint32_t>(options.seed),
                        static_cast<std::uint32_t>(options.seed >> 32),
                        static_cast<std::uint32_t>(b),
                        static_cast<std::uint32_t>(b >> 32),
                        static_cast<std::uint32_t>(attempt)};
      std::mt19937_64 rng(seq);
      std::uniform_int_distribution<std::size_t> pick(0, n_starts - 1);
      std::size_t filled = 0;
      while (filled < m) {
        const std::size_t start = pick(rng);
        for (std::size_t k = 0; k < block && filled < m; ++k, ++filled) {
          r1[filled] = x1[start + k];
          r2[filled] = x2[start + k];
          g1[filled] = d1[start + k];
          g2[filled] = d2[start + k];
        }
      }
      try {
        const auto f = flow(sample_covariances(r1, r2, g1, g2));
        t21[b] = f.t21;
        t12[b] = f.t12;
        return;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::CollinearSeries &&
            e.code() != ErrorCode::DegenerateSeries) {
          throw;
        }
        ++redraws[b];
      }
    }
    throw Error(ErrorCode::CollinearSeries,
                "resample " + std::to_string(b) + " stayed degenerate after " +
                    std::to_string(kMaxAttempts) + " draws");
  });

  BootstrapResult out;
  out.block_len = block;
  for (auto r : redraws) out.redrawn += r;

  auto& est = out.estimate;
  est.alpha = alpha;
  est.variant = FlowVariant::Stationary;
  est.m = m;
  est.dt = pair.dt();
  est.t21 = point.t21;
  est.t12 = point.t12;
  est.se21 = sample_sd(t21);
  est.se12 = sample_sd(t12);
  std::sort(t21.begin(), t21.end());
  std::sort(t12.begin(), t12.end());
  est.ci21 = {quantile_sorted(t21, alpha / 2.0),
              quantile_sorted(t21, 1.0 - alpha / 2.0)};
  est.ci12 = {quantile_sorted(t12, alpha / 2.0),
              quantile_sorted(t12, 1.0 - alpha / 2.0)};
  return out;
}

}  // namespace infoflow
