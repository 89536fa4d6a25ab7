#include <doctest.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>
#include <vector>

#include "infoflow/estimator.hpp"
#include "infoflow/fieldmap.hpp"
#include "infoflow/theory.hpp"
#include "synthetic_grid.hpp"
#include "test_util.hpp"

using namespace infoflow;
using testutil::error_code;

namespace {

bool bit_equal(double a, double b) {
  return std::memcmp(&a, &b, sizeof a) == 0;
}

bool maps_equal(const FlowMap& a, const FlowMap& b) {
  for (std::size_t c = 0; c < a.t_index_to_field.size(); ++c) {
    if (!bit_equal(a.t_index_to_field.data[c], b.t_index_to_field.data[c]) ||
        !bit_equal(a.t_field_to_index.data[c], b.t_field_to_index.data[c]) ||
        a.significant_index_to_field.data[c] != b.significant_index_to_field.data[c] ||
        a.significant_field_to_index.data[c] != b.significant_field_to_index.data[c]) {
      return false;
    }
  }
  return a.masked_cells == b.masked_cells && a.failed_cells == b.failed_cells;
}

std::vector<double> checker_coupling(std::size_t n) {
  std::vector<double> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = (i % 2 == 0) ? 1.0 : 0.0;
  return c;
}

}  // namespace

TEST_CASE("coupled grid recovers the coupling pattern") {
  const std::size_t n_lat = 4, n_lon = 6;
  const auto g = synthetic::coupled_grid(n_lat, n_lon, 20001, 0.01,
                                         checker_coupling(n_lat * n_lon), 1);
  const auto map = map_flows(g.index, g.field, 0.05);
  std::size_t coupled = 0, coupled_hit = 0, uncoupled = 0, uncoupled_quiet = 0;
  std::size_t feedback_quiet = 0;
  for (std::size_t c = 0; c < g.field.n_cells(); ++c) {
    if (!map.significant_field_to_index.data[c]) ++feedback_quiet;
    if (g.coupling[c] != 0.0) {
      ++coupled;
      if (map.significant_index_to_field.data[c] && map.t_index_to_field.data[c] > 0) {
        ++coupled_hit;
      }
    } else {
      ++uncoupled;
      if (!map.significant_index_to_field.data[c]) ++uncoupled_quiet;
    }
  }
  CHECK(coupled_hit == coupled);
  CHECK(uncoupled_quiet * 10 >= uncoupled * 9);
  CHECK(feedback_quiet * 10 >= g.field.n_cells() * 9);
  CHECK(map.masked_cells == 0);
  CHECK(map.failed_cells == 0);

  // Estimates scatter around the analytic flow of the cell's linear system.
  LinearModel2D model;
  model.a << -1.0, 0.0, 1.0, -1.0;
  model.b1 = model.b2 = 0.1;
  const double truth = analytic_flows(model, stationary_covariance(model)).t12;
  double mean = 0.0;
  for (std::size_t c = 0; c < g.field.n_cells(); c += 2) {
    mean += map.t_index_to_field.data[c] / static_cast<double>(coupled);
  }
  CHECK(mean == doctest::Approx(truth).epsilon(0.2));
}

TEST_CASE("independent noise field shows no significant flow") {
  const auto g = synthetic::noise_grid(5, 6, 5001, 0.01, 3);
  const auto map = map_flows(g.index, g.field, 0.05);
  std::size_t quiet_a = 0, quiet_b = 0;
  for (std::size_t c = 0; c < g.field.n_cells(); ++c) {
    if (!map.significant_index_to_field.data[c]) ++quiet_a;
    if (!map.significant_field_to_index.data[c]) ++quiet_b;
  }
  CHECK(quiet_a * 10 >= g.field.n_cells() * 9);
  CHECK(quiet_b * 10 >= g.field.n_cells() * 9);
}

TEST_CASE("single-cell grid reproduces the pair estimate bitwise") {
  const auto g = synthetic::coupled_grid(1, 1, 5001, 0.01, {0.7}, 5);
  const auto map = map_flows(g.index, g.field, 0.05);
  const auto pair = align(g.index, TimeSeries(g.field.cell_series(0), 0.01));
  const auto cov = covariances(pair);
  const auto e = fisher_ci(pair, fit_mle(pair, cov), cov, 0.05);
  CHECK(bit_equal(map.t_index_to_field.data[0], e.t12));
  CHECK(bit_equal(map.t_field_to_index.data[0], e.t21));
  CHECK(map.significant_index_to_field.data[0] == e.significant12());
  CHECK(map.significant_field_to_index.data[0] == e.significant21());
}

TEST_CASE("permuting cells permutes the output") {
  const std::size_t n_lat = 3, n_lon = 4, n_time = 2001;
  std::vector<double> coupling(n_lat * n_lon);
  for (std::size_t c = 0; c < coupling.size(); ++c) coupling[c] = 0.1 * static_cast<double>(c);
  const auto g = synthetic::coupled_grid(n_lat, n_lon, n_time, 0.01, coupling, 8);

  std::vector<std::size_t> perm(coupling.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(2));
  std::vector<double> values(n_time * coupling.size());
  for (std::size_t t = 0; t < n_time; ++t)
    for (std::size_t c = 0; c < coupling.size(); ++c)
      values[t * coupling.size() + c] = g.field.value(t, perm[c]);
  const GridField shuffled(n_time, n_lat, n_lon, 0.01, values);

  const auto a = map_flows(g.index, g.field, 0.05);
  const auto b = map_flows(g.index, shuffled, 0.05);
  for (std::size_t c = 0; c < coupling.size(); ++c) {
    CHECK(bit_equal(b.t_index_to_field.data[c], a.t_index_to_field.data[perm[c]]));
    CHECK(bit_equal(b.t_field_to_index.data[c], a.t_field_to_index.data[perm[c]]));
  }
}

TEST_CASE("masked and failing cells are isolated") {
  const std::size_t n_lat = 2, n_lon = 3, n_time = 2001;
  const auto g = synthetic::coupled_grid(n_lat, n_lon, n_time, 0.01,
                                         {1.0, 0.0, 1.0, 0.5, 0.0, 0.2}, 4);
  const auto base = map_flows(g.index, g.field, 0.05);

  std::vector<double> values(n_time * 6);
  for (std::size_t t = 0; t < n_time; ++t)
    for (std::size_t c = 0; c < 6; ++c) values[t * 6 + c] = g.field.value(t, c);
  for (std::size_t t = 0; t < n_time; ++t) {
    values[t * 6 + 1] = std::nan("");  // masked
    values[t * 6 + 4] = 3.0;           // constant, fails
  }
  std::vector<std::uint8_t> mask{1, 0, 1, 1, 1, 1};
  const GridField damaged(n_time, n_lat, n_lon, 0.01, values, mask);
  const auto map = map_flows(g.index, damaged, 0.05);

  CHECK(map.masked_cells == 1);
  CHECK(map.failed_cells == 1);
  for (std::size_t c : {std::size_t{1}, std::size_t{4}}) {
    CHECK(std::isnan(map.t_index_to_field.data[c]));
    CHECK(std::isnan(map.t_field_to_index.data[c]));
    CHECK(map.significant_index_to_field.data[c] == 0);
    CHECK(map.significant_field_to_index.data[c] == 0);
  }
  for (std::size_t c : {std::size_t{0}, std::size_t{2}, std::size_t{3}, std::size_t{5}}) {
    CHECK(bit_equal(map.t_index_to_field.data[c], base.t_index_to_field.data[c]));
    CHECK(bit_equal(map.t_field_to_index.data[c], base.t_field_to_index.data[c]));
  }
}

TEST_CASE("result is independent of the worker count") {
  const auto g = synthetic::coupled_grid(3, 5, 3001, 0.01, checker_coupling(15), 6);
  const auto one = map_flows(g.index, g.field, 0.05, 1);
  for (unsigned threads : {2u, 3u, 8u, 0u}) {
    CHECK(maps_equal(one, map_flows(g.index, g.field, 0.05, threads)));
  }
}

TEST_CASE("input checks") {
  const auto g = synthetic::coupled_grid(1, 2, 100, 0.01, {0.0, 1.0}, 1);
  CHECK(error_code([&] {
          map_flows(TimeSeries(std::vector<double>(99, 1.0), 0.01), g.field, 0.05);
        }) == ErrorCode::LengthMismatch);
  CHECK(error_code([&] {
          const TimeSeries other({g.index.values().begin(), g.index.values().end()}, 0.02);
          map_flows(other, g.field, 0.05);
        }) == ErrorCode::DtMismatch);
  CHECK(error_code([] {
          GridField(3, 1, 1, 1.0, {1.0, std::nan(""), 2.0});
        }) == ErrorCode::NonFiniteValue);
  CHECK(error_code([] { GridField(3, 1, 2, 1.0, {1.0, 2.0}); }) ==
        ErrorCode::LengthMismatch);
}

TEST_CASE("grid manifest round trip") {
  testutil::TempDir dir("grid");
  const auto g = synthetic::coupled_grid(2, 3, 50, 0.5, {1, 0, 1, 0, 1, 0}, 2);
  std::vector<double> values(50 * 6);
  for (std::size_t t = 0; t < 50; ++t)
    for (std::size_t c = 0; c < 6; ++c) values[t * 6 + c] = g.field.value(t, c);
  const GridField masked(50, 2, 3, 0.5, values, {1, 1, 0, 1, 1, 1});
  const auto manifest = dir.path() / "sst.csv";
  save_grid(masked, manifest);
  const auto loaded = load_grid(manifest);
  CHECK(loaded.n_time() == 50);
  CHECK(loaded.n_lat() == 2);
  CHECK(loaded.n_lon() == 3);
  CHECK(loaded.dt() == 0.5);
  CHECK_FALSE(loaded.valid(2));
  CHECK(loaded.valid(3));
  for (std::size_t t = 0; t < 50; ++t)
    for (std::size_t c = 0; c < 6; ++c)
      if (c != 2) CHECK(loaded.value(t, c) == masked.value(t, c));
}

TEST_CASE("grid manifest errors") {
  testutil::TempDir dir("grid");
  dir.write("values.csv", "1,2\n3,4\n5,7\n");
  const auto no_mask = dir.write(
      "a.csv", "key,value\nn_time,3\nn_lat,1\nn_lon,2\ndt,1\nvalues,values.csv\nmask,absent.csv\n");
  CHECK(error_code([&] { load_grid(no_mask); }) == ErrorCode::ManifestError);
  const auto no_dt = dir.write(
      "b.csv", "key,value\nn_time,3\nn_lat,1\nn_lon,2\nvalues,values.csv\n");
  CHECK(error_code([&] { load_grid(no_dt); }) == ErrorCode::ManifestError);
  const auto wrong_rows = dir.write(
      "c.csv", "key,value\nn_time,4\nn_lat,1\nn_lon,2\ndt,1\nvalues,values.csv\n");
  CHECK(error_code([&] { load_grid(wrong_rows); }) == ErrorCode::ManifestError);
  CHECK(error_code([&] { load_grid(dir.path() / "missing.csv"); }) ==
        ErrorCode::ManifestError);
  const auto ok = dir.write(
      "d.csv", "key,value\nn_time,3\nn_lat,1\nn_lon,2\ndt,1\nvalues,values.csv\n");
  CHECK(load_grid(ok).value(2, 1) == 7.0);
}
