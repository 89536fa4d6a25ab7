#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "infoflow/series.hpp"

namespace infoflow {

/// Dense [lat][lon] array, row-major.
template <typename T>
struct Grid2D {
  std::size_t n_lat = 0;
  std::size_t n_lon = 0;
  std::vector<T> data;

  Grid2D() = default;
  Grid2D(std::size_t lat, std::size_t lon, T fill = T{})
      : n_lat(lat), n_lon(lon), data(lat * lon, fill) {}

  T& at(std::size_t lat, std::size_t lon) { return data[lat * n_lon + lon]; }
  const T& at(std::size_t lat, std::size_t lon) const {
    return data[lat * n_lon + lon];
  }
  std::size_t size() const noexcept { return data.size(); }
};

/// Gridded field sampled uniformly in time. values are [time][lat][lon];
/// mask marks valid cells (nonzero). Unmasked values must be finite.
class GridField {
 public:
  GridField(std::size_t n_time, std::size_t n_lat, std::size_t n_lon,
            double dt, std::vector<double> values,
            std::vector<std::uint8_t> mask = {});

  std::size_t n_time() const noexcept { return n_time_; }
  std::size_t n_lat() const noexcept { return n_lat_; }
  std::size_t n_lon() const noexcept { return n_lon_; }
  std::size_t n_cells() const noexcept { return n_lat_ * n_lon_; }
  double dt() const noexcept { return dt_; }

  bool valid(std::size_t cell) const noexcept { return mask_[cell] != 0; }
  double value(std::size_t t, std::size_t cell) const noexcept {
    return values_[t * n_cells() + cell];
  }
  std::vector<double> cell_series(std::size_t cell) const;

 private:
  std::size_t n_time_;
  std::size_t n_lat_;
  std::size_t n_lon_;
  double dt_;
  std::vector<double> values_;
  std::vector<std::uint8_t> mask_;
};

/// Value written into masked or failed cells.
inline constexpr double kMissingFlow = std::numeric_limits<double>::quiet_NaN();

struct FlowMap {
  Grid2D<double> t_index_to_field;
  Grid2D<double> t_field_to_index;
  Grid2D<std::uint8_t> significant_index_to_field;
  Grid2D<std::uint8_t> significant_field_to_index;
  double alpha = 0.05;
  std::size_t masked_cells = 0;
  std::size_t failed_cells = 0;  ///< unmasked cells whose estimate failed
};

/// Per-cell flows between `index` (as X1) and each unmasked gridpoint series
/// (as X2) with Fisher intervals at level alpha. Cells run in parallel; the
/// result does not depend on `threads` (0 = hardware concurrency).
FlowMap map_flows(const TimeSeries& index, const GridField& field,
                  double alpha, unsigned threads = 0);

/// Reads a grid manifest: a CSV of `key,value` rows with keys n_time, n_lat,
/// n_lon, dt, values and optionally mask. File names resolve relative to the
/// manifest. The values file holds one row per time step with n_lat*n_lon
/// entries (lat-major); the mask file holds n_lat rows of n_lon 0/1 flags.
GridField load_grid(const std::filesystem::path& manifest);

/// Writes `field` in the manifest format read by load_grid.
void save_grid(const GridField& field, const std::filesystem::path& manifest);

/// Writes a [lat][lon] matrix as CSV, preceded by `header` lines (each
/// emitted as a '#' comment). Missing values print as NaN.
void write_matrix_csv(const std::filesystem::path& path,
                      const Grid2D<double>& grid,
                      const std::vector<std::string>& header = {});
void write_matrix_csv(const std::filesystem::path& path,
                      const Grid2D<std::uint8_t>& grid,
                      const std::vector<std::string>& header = {});

}  // namespace infoflow
