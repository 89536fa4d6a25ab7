#include "infoflow/fieldmap.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <string>

#include "infoflow/csv.hpp"
#include "infoflow/error.hpp"
#include "infoflow/estimator.hpp"
#include "parallel.hpp"

namespace infoflow {

GridField::GridField(std::size_t n_time, std::size_t n_lat, std::size_t n_lon,
                     double dt, std::vector<double> values,
                     std::vector<std::uint8_t> mask)
    : n_time_(n_time),
      n_lat_(n_lat),
      n_lon_(n_lon),
      dt_(dt),
      values_(std::move(values)),
      mask_(std::move(mask)) {
  if (n_lat_ == 0 || n_lon_ == 0) {
    throw Error(ErrorCode::InvalidArgument, "grid needs at least one cell");
  }
  if (n_time_ < TimeSeries::kMinLength) {
    throw Error(ErrorCode::InvalidArgument, "grid needs at least 3 time steps");
  }
  if (!(dt_ > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "grid dt must be positive");
  }
  if (values_.size() != n_time_ * n_cells()) {
    throw Error(ErrorCode::LengthMismatch,
                "grid holds " + std::to_string(values_.size()) +
                    " values, expected " + std::to_string(n_time_ * n_cells()));
  }
  if (mask_.empty()) mask_.assign(n_cells(), 1);
  if (mask_.size() != n_cells()) {
    throw Error(ErrorCode::LengthMismatch, "mask size does not match grid");
  }
  for (std::size_t t = 0; t < n_time_; ++t) {
    for (std::size_t c = 0; c < n_cells(); ++c) {
      if (mask_[c] && !std::isfinite(value(t, c))) {
        throw Error(ErrorCode::NonFiniteValue,
                    "unmasked cell " + std::to_string(c) + " at time step " +
                        std::to_string(t));
      }
    }
  }
}

std::vector<double> GridField::cell_series(std::size_t cell) const {
  std::vector<double> s(n_time_);
  for (std::size_t t = 0; t < n_time_; ++t) s[t] = value(t, cell);
  return s;
}

FlowMap map_flows(const TimeSeries& index, const GridField& field,
                  double alpha, unsigned threads) {
  if (index.size() != field.n_time()) {
    throw Error(ErrorCode::LengthMismatch,
                "index has " + std::to_string(index.size()) +
                    " samples, field has " + std::to_string(field.n_time()));
  }
  if (std::abs(index.dt() - field.dt()) >
      1e-12 * std::max(index.dt(), field.dt())) {
    throw Error(ErrorCode::DtMismatch, "index and field sampling differ");
  }
  normal_critical_value(alpha);  // validates alpha up front

  FlowMap map;
  map.alpha = alpha;
  map.t_index_to_field = Grid2D<double>(field.n_lat(), field.n_lon(), kMissingFlow);
  map.t_field_to_index = Grid2D<double>(field.n_lat(), field.n_lon(), kMissingFlow);
  map.significant_index_to_field = Grid2D<std::uint8_t>(field.n_lat(), field.n_lon(), 0);
  map.significant_field_to_index = Grid2D<std::uint8_t>(field.n_lat(), field.n_lon(), 0);

  std::vector<std::uint8_t> failed(field.n_cells(), 0);
  detail::parallel_for(field.n_cells(), threads, [&](std::size_t c) {
    if (!field.valid(c)) return;
    try {
      const TimeSeries cell(field.cell_series(c), index.dt(), index.t0());
      const auto pair = align(index, cell);
      const auto cov = covariances(pair);
      const auto model = fit_mle(pair, cov);
      const auto est = fisher_ci(pair, model, cov, alpha);
      map.t_index_to_field.data[c] = est.t12;
      map.t_field_to_index.data[c] = est.t21;
      map.significant_index_to_field.data[c] = est.significant12() ? 1 : 0;
      map.significant_field_to_index.data[c] = est.significant21() ? 1 : 0;
    } catch (const Error&) {
      failed[c] = 1;
    }
  });
  for (std::size_t c = 0; c < field.n_cells(); ++c) {
    if (!field.valid(c)) ++map.masked_cells;
    if (failed[c]) ++map.failed_cells;
  }
  return map;
}

namespace {

std::size_t parse_count(const std::map<std::string, std::string>& kv,
                        const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end()) {
    throw Error(ErrorCode::ManifestError, "missing key '" + key + "'");
  }
  const auto v = parse_real(it->second);
  if (!v || *v < 1.0 || std::floor(*v) != *v) {
    throw Error(ErrorCode::ManifestError,
                "'" + key + "' must be a positive integer");
  }
  return static_cast<std::size_t>(*v);
}

CsvTable read_manifest_part(const std::filesystem::path& path,
                            const std::string& what) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::ManifestError,
                what + " file '" + path.string() + "' does not exist");
  }
  return read_csv(path, /*has_header=*/false);
}

template <typename T>
void write_cells(std::ostream& out, const Grid2D<T>& grid) {
  for (std::size_t i = 0; i < grid.n_lat; ++i) {
    for (std::size_t j = 0; j < grid.n_lon; ++j) {
      if (j) out << ',';
      const auto v = grid.at(i, j);
      if constexpr (std::is_floating_point_v<T>) {
        if (std::isnan(v)) {
          out << "NaN";
          continue;
        }
        out << v;
      } else {
        out << static_cast<int>(v);
      }
    }
    out << '\n';
  }
}

template <typename T>
void write_grid_file(const std::filesystem::path& path, const Grid2D<T>& grid,
                     const std::vector<std::string>& header) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::InvalidArgument,
                "cannot write '" + path.string() + "'");
  }
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& h : header) out << "# " << h << '\n';
  write_cells(out, grid);
}

}  // namespace

GridField load_grid(const std::filesystem::path& manifest) {
  const auto rows = read_manifest_part(manifest, "manifest");
  std::map<std::string, std::string> kv;
  for (const auto& row : rows.rows) {
    if (row.size() < 2) {
      throw Error(ErrorCode::ManifestError, "manifest rows need key,value");
    }
    if (row[0] == "key") continue;
    kv[row[0]] = row[1];
  }
  const auto n_time = parse_count(kv, "n_time");
  const auto n_lat = parse_count(kv, "n_lat");
  const auto n_lon = parse_count(kv, "n_lon");
  const auto dt_it = kv.find("dt");
  const auto dt = dt_it == kv.end() ? std::nullopt : parse_real(dt_it->second);
  if (!dt || !(*dt > 0.0)) {
    throw Error(ErrorCode::ManifestError, "'dt' missing or not positive");
  }
  const auto values_it = kv.find("values");
  if (values_it == kv.end()) {
    throw Error(ErrorCode::ManifestError, "missing key 'values'");
  }
  const auto base = manifest.parent_path();

  const auto values_table = read_manifest_part(base / values_it->second, "values");
  if (values_table.rows.size() != n_time) {
    throw Error(ErrorCode::ManifestError,
                "values file has " + std::to_string(values_table.rows.size()) +
                    " rows, manifest says n_time = " + std::to_string(n_time));
  }
  const std::size_t n_cells = n_lat * n_lon;
  std::vector<double> values;
  values.reserve(n_time * n_cells);
  for (std::size_t r = 0; r < values_table.rows.size(); ++r) {
    const auto& row = values_table.rows[r];
    if (row.size() != n_cells) {
      throw Error(ErrorCode::ManifestError,
                  "values row " + std::to_string(r + 1) + " has " +
                      std::to_string(row.size()) + " cells, expected " +
                      std::to_string(n_cells));
    }
    for (const auto& cell : row) {
      const auto v = parse_real(cell);
      if (!v) {
        throw Error(ErrorCode::ManifestError, "cannot parse value '" + cell + "'");
      }
      values.push_back(*v);
    }
  }

  std::vector<std::uint8_t> mask;
  if (const auto it = kv.find("mask"); it != kv.end()) {
    const auto mask_table = read_manifest_part(base / it->second, "mask");
    if (mask_table.rows.size() != n_lat) {
      throw Error(ErrorCode::ManifestError, "mask row count differs from n_lat");
    }
    for (const auto& row : mask_table.rows) {
      if (row.size() != n_lon) {
        throw Error(ErrorCode::ManifestError, "mask column count differs from n_lon");
      }
      for (const auto& cell : row) {
        const auto v = parse_real(cell);
        if (!v || (*v != 0.0 && *v != 1.0)) {
          throw Error(ErrorCode::ManifestError, "mask entries must be 0 or 1");
        }
        mask.push_back(*v != 0.0 ? 1 : 0);
      }
    }
  }
  return GridField(n_time, n_lat, n_lon, *dt, std::move(values), std::move(mask));
}

void save_grid(const GridField& field, const std::filesystem::path& manifest) {
  const auto stem = manifest.stem().string();
  const auto base = manifest.parent_path();
  const std::string values_name = stem + "_values.csv";
  const std::string mask_name = stem + "_mask.csv";
  {
    std::ofstream out(manifest);
    if (!out) {
      throw Error(ErrorCode::InvalidArgument,
                  "cannot write '" + manifest.string() + "'");
    }
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    out << "key,value\n"
        << "n_time," << field.n_time() << '\n'
        << "n_lat," << field.n_lat() << '\n'
        << "n_lon," << field.n_lon() << '\n'
        << "dt," << field.dt() << '\n'
        << "values," << values_name << '\n'
        << "mask," << mask_name << '\n';
  }
  Grid2D<double> frame(field.n_time(), field.n_cells());
  for (std::size_t t = 0; t < field.n_time(); ++t) {
    for (std::size_t c = 0; c < field.n_cells(); ++c) {
      frame.at(t, c) = field.valid(c) ? field.value(t, c) : kMissingFlow;
    }
  }
  write_grid_file(base / values_name, frame, {});
  Grid2D<std::uint8_t> mask(field.n_lat(), field.n_lon());
  for (std::size_t c = 0; c < field.n_cells(); ++c) {
    mask.data[c] = field.valid(c) ? 1 : 0;
  }
  write_grid_file(base / mask_name, mask, {});
}

void write_matrix_csv(const std::filesystem::path& path,
                      const Grid2D<double>& grid,
                      const std::vector<std::string>& header) {
  write_grid_file(path, grid, header);
}

void write_matrix_csv(const std::filesystem::path& path,
                      const Grid2D<std::uint8_t>& grid,
                      const std::vector<std::string>& header) {
  write_grid_file(path, grid, header);
}

}  // namespace infoflow
