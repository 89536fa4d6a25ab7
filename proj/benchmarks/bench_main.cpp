#include <benchmark/benchmark.h>

#include <cstddef>
#include <cstdint>
#include <vector>

#include "infoflow/estimator.hpp"
#include "infoflow/fieldmap.hpp"
#include "infoflow/simulator.hpp"
#include "infoflow/theory.hpp"

using namespace infoflow;

namespace {

SimConfig one_way(std::size_t n_steps) {
  SimConfig cfg;
  cfg.model.a << -1.0, 0.5, 0.0, -1.0;
  cfg.model.b1 = cfg.model.b2 = 0.1;
  cfg.x0 = {1.0, 2.0};
  cfg.n_steps = n_steps;
  cfg.seed = 1;
  return cfg;
}

AlignedPair sample_pair(std::size_t n_steps) {
  const auto [p1, p2] = simulate(one_way(n_steps));
  return align(p1, p2);
}

void BM_Simulate(benchmark::State& state) {
  const auto cfg = one_way(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(simulate(cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Simulate)->Arg(10000)->Arg(100000);

void BM_Flow(benchmark::State& state) {
  const auto pair = sample_pair(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(flow(covariances(pair)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Flow)->Arg(10000)->Arg(100000);

void BM_FisherCI(benchmark::State& state) {
  const auto pair = sample_pair(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    const auto cov = covariances(pair);
    benchmark::DoNotOptimize(fisher_ci(pair, fit_mle(pair, cov), cov, 0.05));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FisherCI)->Arg(10000)->Arg(100000);

void BM_Bootstrap(benchmark::State& state) {
  const auto pair = sample_pair(100000);
  BootstrapOptions opt;
  opt.n_boot = 200;
  opt.seed = 7;
  opt.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bootstrap_ci(pair, 0.05, opt));
}
BENCHMARK(BM_Bootstrap)->Arg(1)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

void BM_StationaryCovariance(benchmark::State& state) {
  LinearModel2D model;
  model.a << -1.0, 0.5, 0.0, -1.0;
  model.b1 = model.b2 = 0.1;
  for (auto _ : state) benchmark::DoNotOptimize(stationary_covariance(model));
}
BENCHMARK(BM_StationaryCovariance);

void BM_MapFlows(benchmark::State& state) {
  const std::size_t n_time = 5001, n_lat = 8, n_lon = 16;
  const auto [index, driver] = simulate(one_way(n_time - 1));
  std::vector<double> values(n_time * n_lat * n_lon);
  for (std::size_t t = 0; t < n_time; ++t)
    for (std::size_t c = 0; c < n_lat * n_lon; ++c)
      values[t * n_lat * n_lon + c] =
          driver.values()[t] * static_cast<double>(c % 3) + index.values()[t];
  // Cells 0 mod 3 equal the index and fail as collinear; that cost is part of
  // the measurement.
  const GridField field(n_time, n_lat, n_lon, index.dt(), std::move(values));
  const auto threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(map_flows(index, field, 0.05, threads));
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(n_lat * n_lon));
}
BENCHMARK(BM_MapFlows)->Arg(1)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
