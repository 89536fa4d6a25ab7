#include "infoflow/series.hpp"

#include <cmath>
#include <string>

#include "infoflow/csv.hpp"
#include "infoflow/error.hpp"

namespace infoflow {

TimeSeries::TimeSeries(std::vector<double> values, double dt, double t0,
                       std::string label)
    : values_(std::move(values)), dt_(dt), t0_(t0), label_(std::move(label)) {
  if (!(dt_ > 0.0) || !std::isfinite(dt_)) {
    throw Error(ErrorCode::InvalidArgument, "dt must be positive and finite");
  }
  if (values_.size() < kMinLength) {
    throw Error(ErrorCode::InvalidArgument,
                "series '" + label_ + "' needs at least 3 samples, got " +
                    std::to_string(values_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorCode::NonFiniteValue,
                  "series '" + label_ + "' index " + std::to_string(i));
    }
  }
}

AlignedPair::AlignedPair(TimeSeries x1, TimeSeries x2)
    : x1_(std::move(x1)), x2_(std::move(x2)) {
  if (x1_.size() != x2_.size()) {
    throw Error(ErrorCode::LengthMismatch,
                std::to_string(x1_.size()) + " vs " +
                    std::to_string(x2_.size()) + " samples");
  }
  if (x1_.dt() != x2_.dt()) {
    throw Error(ErrorCode::DtMismatch, std::to_string(x1_.dt()) + " vs " +
                                           std::to_string(x2_.dt()));
  }
  const std::size_t m = x1_.size() - 1;
  const double dt = x1_.dt();
  d1_.resize(m);
  d2_.resize(m);
  for (std::size_t n = 0; n < m; ++n) {
    d1_[n] = (x1_[n + 1] - x1_[n]) / dt;
    d2_[n] = (x2_[n + 1] - x2_[n]) / dt;
  }
}

StationaryWindow stationary_window_from_times(const TimeSeries& series,
                                              double t_start, double t_end) {
  if (!(t_end >= t_start)) {
    throw Error(ErrorCode::WindowOutOfRange, "window end precedes its start");
  }
  const double first = std::round((t_start - series.t0()) / series.dt());
  const double last = std::round((t_end - series.t0()) / series.dt());
  if (first < 0.0 || last > static_cast<double>(series.size() - 1)) {
    throw Error(ErrorCode::WindowOutOfRange,
                "window [" + std::to_string(t_start) + ", " +
                    std::to_string(t_end) + "] outside series span [" +
                    std::to_string(series.t0()) + ", " +
                    std::to_string(series.t_end()) + "]");
  }
  StationaryWindow w{static_cast<std::size_t>(first),
                     static_cast<std::size_t>(last) + 1};
  if (w.length() < StationaryWindow::kMinLength) {
    throw Error(ErrorCode::WindowTooShort,
                "window holds " + std::to_string(w.length()) + " samples");
  }
  return w;
}

namespace {

std::vector<double> read_column(const CsvTable& table, std::size_t col,
                                const std::string& name,
                                const std::filesystem::path& path) {
  std::vector<double> out;
  out.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const auto line = std::to_string(table.line_numbers[r]);
    if (col >= row.size()) {
      throw Error(ErrorCode::LengthMismatch,
                  path.string() + " line " + line + " lacks column '" + name +
                      "'");
    }
    const auto v = parse_real(row[col]);
    if (!v) {
      throw Error(ErrorCode::InvalidArgument,
                  path.string() + " line " + line + ": cannot parse '" +
                      row[col] + "'");
    }
    if (!std::isfinite(*v)) {
      throw Error(ErrorCode::NonFiniteValue,
                  path.string() + " line " + line + " column '" + name + "'");
    }
    out.push_back(*v);
  }
  return out;
}

std::size_t require_column(const CsvTable& table, const std::string& name,
                           const std::filesystem::path& path) {
  const auto col = table.column(name);
  if (!col) {
    throw Error(ErrorCode::MissingColumn,
                "'" + name + "' not in header of " + path.string());
  }
  return *col;
}

}  // namespace

std::pair<TimeSeries, TimeSeries> load_csv(const std::filesystem::path& path,
                                           const std::string& column_x1,
                                           const std::string& column_x2,
                                           double dt) {
  const auto table = read_csv(path);
  const auto c1 = require_column(table, column_x1, path);
  const auto c2 = require_column(table, column_x2, path);
  auto v1 = read_column(table, c1, column_x1, path);
  auto v2 = read_column(table, c2, column_x2, path);
  return {TimeSeries(std::move(v1), dt, 0.0, column_x1),
          TimeSeries(std::move(v2), dt, 0.0, column_x2)};
}

TimeSeries load_csv_column(const std::filesystem::path& path,
                           const std::string& column, double dt) {
  const auto table = read_csv(path);
  const auto c = require_column(table, column, path);
  return TimeSeries(read_column(table, c, column, path), dt, 0.0, column);
}

TimeSeries subsample(const TimeSeries& s, std::size_t delta_n) {
  if (delta_n == 0) {
    throw Error(ErrorCode::InvalidArgument, "subsample interval must be >= 1");
  }
  const std::size_t n = (s.size() + delta_n - 1) / delta_n;
  if (n < TimeSeries::kMinLength) {
    throw Error(ErrorCode::TooShortAfterSubsample,
                std::to_string(n) + " samples remain at interval " +
                    std::to_string(delta_n));
  }
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < s.size(); i += delta_n) out.push_back(s[i]);
  return TimeSeries(std::move(out), s.dt() * static_cast<double>(delta_n),
                    s.t0(), s.label());
}

AlignedPair align(const TimeSeries& x1, const TimeSeries& x2) {
  return AlignedPair(x1, x2);
}

TimeSeries detrend_linear(const TimeSeries& s) {
  const auto y = s.values();
  const double n = static_cast<double>(y.size());
  const double i_mean = (n - 1.0) / 2.0;
  double y_mean = 0.0;
  for (double v : y) y_mean += v;
  y_mean /= n;

  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double di = static_cast<double>(i) - i_mean;
    sxy += di * (y[i] - y_mean);
    sxx += di * di;
  }
  const double slope = sxy / sxx;

  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    out[i] = (y[i] - y_mean) - slope * (static_cast<double>(i) - i_mean);
  }
  return TimeSeries(std::move(out), s.dt(), s.t0(), s.label());
}

}  // namespace infoflow
