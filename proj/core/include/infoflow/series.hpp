#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace infoflow {

/// Uniformly sampled scalar series. Construction validates: dt > 0, every
/// value finite, at least three samples. Immutable afterwards.
class TimeSeries {
 public:
  static constexpr std::size_t kMinLength = 3;

  TimeSeries(std::vector<double> values, double dt, double t0 = 0.0,
             std::string label = {});

  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }
  double dt() const noexcept { return dt_; }
  double t0() const noexcept { return t0_; }
  const std::string& label() const noexcept { return label_; }

  /// Time stamp of sample i in user units.
  double time_at(std::size_t i) const noexcept {
    return t0_ + static_cast<double>(i) * dt_;
  }
  double t_end() const noexcept { return time_at(values_.size() - 1); }

 private:
  std::vector<double> values_;
  double dt_;
  double t0_;
  std::string label_;
};

/// Two equally long series plus their Euler forward-difference series.
/// All estimator sums run over indices 0..m-1 of x1/x2, the window on which
/// the differences exist.
class AlignedPair {
 public:
  AlignedPair(TimeSeries x1, TimeSeries x2);

  const TimeSeries& x1() const noexcept { return x1_; }
  const TimeSeries& x2() const noexcept { return x2_; }
  std::span<const double> d1() const noexcept { return d1_; }
  std::span<const double> d2() const noexcept { return d2_; }

  /// Aligned sample count, N - 1.
  std::size_t m() const noexcept { return d1_.size(); }
  double dt() const noexcept { return x1_.dt(); }

  /// x1 / x2 restricted to the aligned window (first m samples).
  std::span<const double> x1_window() const noexcept {
    return x1_.values().first(m());
  }
  std::span<const double> x2_window() const noexcept {
    return x2_.values().first(m());
  }

 private:
  TimeSeries x1_;
  TimeSeries x2_;
  std::vector<double> d1_;
  std::vector<double> d2_;
};

/// Half-open index range [start, end) of a series used for the starred
/// (stationary-slab) covariances.
struct StationaryWindow {
  std::size_t start_index = 0;
  std::size_t end_index = 0;

  static constexpr std::size_t kMinLength = 3;

  std::size_t length() const noexcept {
    return end_index > start_index ? end_index - start_index : 0;
  }
};

/// Builds a window from user time stamps on `series`, inclusive of both
/// endpoints. Throws WindowTooShort when fewer than three samples result and
/// WindowOutOfRange when the span leaves the series.
StationaryWindow stationary_window_from_times(const TimeSeries& series,
                                              double t_start, double t_end);

/// Reads two named columns of a headed CSV file. Lines starting with '#' are
/// skipped.
std::pair<TimeSeries, TimeSeries> load_csv(const std::filesystem::path& path,
                                           const std::string& column_x1,
                                           const std::string& column_x2,
                                           double dt);

/// Single-column variant of load_csv.
TimeSeries load_csv_column(const std::filesystem::path& path,
                           const std::string& column, double dt);

/// Keeps every delta_n-th value starting at index 0; dt scales by delta_n.
TimeSeries subsample(const TimeSeries& s, std::size_t delta_n);

AlignedPair align(const TimeSeries& x1, const TimeSeries& x2);

/// Removes the least-squares line fitted against the sample index.
TimeSeries detrend_linear(const TimeSeries& s);

}  // namespace infoflow
