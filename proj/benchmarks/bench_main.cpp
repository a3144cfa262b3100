#include <benchmark/benchmark.h>

#include <vector>

#include <mrfanom/anomaly.hpp>
#include <mrfanom/grid.hpp>
#include <mrfanom/inference.hpp>
#include <mrfanom/synthetic.hpp>

namespace {

using namespace mrfanom;

SyntheticSpec bench_spec(int side, int years) {
  SyntheticSpec spec;
  spec.rows = side;
  spec.cols = side;
  spec.years = years;
  spec.background_mu = 10.0;
  spec.background_sigma = 1.0;
  spec.seed = 42;
  spec.blocks.push_back({Sign::Positive, 1, side / 3, 1, side / 3, 2, years / 4, 2.0});
  spec.blocks.push_back({Sign::Negative, side / 2, side - 2, side / 2, side - 2, years / 2,
                         years / 2 + 4, 2.0});
  return spec;
}

void BM_BuildGrid(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  std::vector<Coordinate> coords;
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c) coords.push_back({static_cast<double>(r), static_cast<double>(c)});
  for (auto _ : state) benchmark::DoNotOptimize(build_grid(coords, 1.0));
  state.SetItemsProcessed(state.iterations() * side * side);
}
BENCHMARK(BM_BuildGrid)->Arg(20)->Arg(100);

void BM_GibbsSweeps(benchmark::State& state) {
  const auto [dataset, truth] = generate_synthetic(bench_spec(static_cast<int>(state.range(0)), 50));
  MrfConfig mrf;
  mrf.spatial.lambda = 2.75;
  const auto model = build_model(dataset, mrf);
  GibbsConfig cfg;
  cfg.sweeps = 20;
  cfg.burn_in = 10;
  cfg.thin = 1;
  for (auto _ : state) benchmark::DoNotOptimize(gibbs_run(model, cfg, model.lwa));
  state.SetItemsProcessed(state.iterations() * cfg.sweeps *
                          static_cast<std::int64_t>(dataset.locations() * dataset.num_years()));
}
BENCHMARK(BM_GibbsSweeps)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_ExtractAnomalies(benchmark::State& state) {
  const auto [dataset, truth] = generate_synthetic(bench_spec(static_cast<int>(state.range(0)), 50));
  const auto z0 = lwa_assign(dataset, location_stats(dataset));
  for (auto _ : state) benchmark::DoNotOptimize(extract_anomalies(z0, dataset.grid));
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(dataset.locations() * dataset.num_years()));
}
BENCHMARK(BM_ExtractAnomalies)->Arg(20)->Arg(40)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
