#include <benchmark/benchmark.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "dpmc/combiners.hpp"
#include "dpmc/density_estimation.hpp"
#include "dpmc/density_product.hpp"
#include "dpmc/grid.hpp"
#include "dpmc/gridded_density.hpp"
#include "dpmc/models.hpp"
#include "dpmc/rng.hpp"

namespace {

dpmc::GriddedDensity gaussian_density(int nodes_exp) {
  const auto grid = dpmc::build_grid(-5.0, 5.0, 10.0 / (1 << nodes_exp), 2);
  dpmc::GriddedDensity d{grid, std::vector<double>(grid.num_nodes()), false};
  for (int i = 0; i <= grid.n; ++i) {
    const double x = grid.node(i);
    d.values[i] = std::exp(-0.5 * x * x);
  }
  return d;
}

std::vector<dpmc::SubposteriorSamples> gaussian_shards(int M, int T) {
  dpmc::Rng rng(1);
  std::vector<dpmc::SubposteriorSamples> subs;
  for (int m = 0; m < M; ++m) {
    dpmc::SubposteriorSamples s;
    s.draws.resize(T, 1);
    for (int t = 0; t < T; ++t) s.draws(t, 0) = rng.normal();
    s.shard_id = m + 1;
    subs.push_back(std::move(s));
  }
  return subs;
}

void bm_newton_cotes(benchmark::State& state) {
  const auto d = gaussian_density(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(dpmc::newton_cotes_integrate(d));
  }
  state.SetItemsProcessed(state.iterations() * d.grid.num_nodes());
}
BENCHMARK(bm_newton_cotes)->Arg(10)->Arg(14)->Arg(17);

void bm_kde(benchmark::State& state) {
  dpmc::Rng rng(2);
  dpmc::MarginalSamples samples;
  samples.values.resize(state.range(0));
  for (double& v : samples.values) v = rng.normal();
  dpmc::EstimatorSpec spec;
  spec.kind = dpmc::EstimatorKind::gaussian_kde;
  const auto grid = dpmc::build_grid(-5.0, 5.0, 1e-3, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dpmc::estimate_density(samples, spec, grid));
  }
  state.SetItemsProcessed(state.iterations() * samples.values.size());
}
BENCHMARK(bm_kde)->Arg(5000)->Arg(50000);

void bm_dpe_scan(benchmark::State& state) {
  const auto subs = gaussian_shards(static_cast<int>(state.range(0)), 50000);
  dpmc::DpeIndexSampler sampler(subs, dpmc::dpe_default_bandwidth(subs));
  dpmc::Rng rng(3);
  for (auto _ : state) {
    sampler.scan(rng);
    benchmark::DoNotOptimize(sampler.indices());
  }
}
BENCHMARK(bm_dpe_scan)->Arg(10)->Arg(20);

void bm_density_product(benchmark::State& state) {
  const auto base = gaussian_density(13);
  const std::vector<dpmc::GriddedDensity> shards(state.range(0), base);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dpmc::product_of_densities(shards));
  }
}
BENCHMARK(bm_density_product)->Arg(10)->Arg(20);

}  // namespace

BENCHMARK_MAIN();
