#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

#include "dpmc/density_product.hpp"
#include "dpmc/errors.hpp"
#include "dpmc/grid.hpp"
#include "dpmc/gridded_density.hpp"
#include "dpmc/metrics.hpp"
#include "dpmc/models.hpp"
#include "dpmc/rng.hpp"

namespace {

dpmc::GriddedDensity tabulate_normal(const dpmc::Grid& grid, double mu,
                                     double sd) {
  dpmc::GriddedDensity d{grid, std::vector<double>(grid.num_nodes()), false};
  for (int i = 0; i <= grid.n; ++i) {
    const double z = (grid.node(i) - mu) / sd;
    d.values[i] = std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
  }
  return d;
}

double log_beta_pdf(double x, double a, double b) {
  if (x <= 0.0 || x >= 1.0) return -std::numeric_limits<double>::infinity();
  return (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) +
         std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
}

dpmc::GriddedDensity tabulate_beta(const dpmc::Grid& grid, double a, double b) {
  dpmc::GriddedDensity d{grid, std::vector<double>(grid.num_nodes()), false};
  for (int i = 0; i <= grid.n; ++i) {
    const double lp = log_beta_pdf(grid.node(i), a, b);
    d.values[i] = lp > -700.0 ? std::exp(lp) : 0.0;
  }
  return d;
}

double density_mean(const dpmc::GriddedDensity& p) {
  dpmc::GriddedDensity xp = p;
  for (int i = 0; i <= p.grid.n; ++i) xp.values[i] *= p.grid.node(i);
  return dpmc::newton_cotes_integrate(xp);
}

double density_var(const dpmc::GriddedDensity& p) {
  const double m = density_mean(p);
  dpmc::GriddedDensity x2p = p;
  for (int i = 0; i <= p.grid.n; ++i) {
    const double c = p.grid.node(i) - m;
    x2p.values[i] *= c * c;
  }
  return dpmc::newton_cotes_integrate(x2p);
}

}  // namespace

TEST_SUITE_BEGIN("product");

TEST_CASE("single-density product is just normalization") {
  const auto grid = dpmc::build_grid(-4.0, 4.0, 1e-3, 2);
  auto p = tabulate_normal(grid, 0.0, 1.0);
  for (double& v : p.values) v *= 7.0;  // unnormalized input
  const auto prod = dpmc::product_of_densities({p});
  CHECK(prod.normalized);
  const auto ref = dpmc::normalize_density(p);
  double max_diff = 0.0;
  for (int i = 0; i <= grid.n; ++i) {
    max_diff = std::max(max_diff, std::abs(prod.values[i] - ref.values[i]));
  }
  CHECK(max_diff < 1e-10);
}

TEST_CASE("product of Gaussians matches the closed form") {
  // [DERIVED] product of N(mu_m, s^2) densities is proportional to
  // N(mean(mu), s^2 / M).
  const auto grid = dpmc::build_grid(-5.0, 5.0, 1e-3, 2);
  const std::vector<double> mus{-0.6, 0.1, 0.8};
  std::vector<dpmc::GriddedDensity> shards;
  for (double mu : mus) shards.push_back(tabulate_normal(grid, mu, 1.0));
  const auto prod = dpmc::product_of_densities(shards);
  const auto truth =
      dpmc::normalize_density(tabulate_normal(grid, 0.1, 1.0 / std::sqrt(3.0)));
  CHECK(dpmc::relative_l2(truth, prod) < 1e-8);
}

TEST_CASE("analytic Beta subposteriors multiply back to the full posterior") {
  // Ten shards of 10,000 trials with 10 successes each under the
  // fractionated uniform prior give shard posteriors Beta(11, 9991);
  // their product must be Beta(101, 99901) up to quadrature error.
  const auto grid = dpmc::build_grid(0.0, 0.005, 5e-7, 2);
  std::vector<dpmc::GriddedDensity> shards(10, tabulate_beta(grid, 11.0, 9991.0));
  const auto prod = dpmc::product_of_densities(shards);
  const auto truth = dpmc::normalize_density(tabulate_beta(grid, 101.0, 99901.0));
  CHECK(dpmc::relative_l2(truth, prod) < 1e-6);
}

TEST_CASE("product is invariant to per-shard scaling") {
  const auto grid = dpmc::build_grid(-4.0, 4.0, 2e-3, 2);
  std::vector<dpmc::GriddedDensity> shards{tabulate_normal(grid, -0.3, 1.0),
                                           tabulate_normal(grid, 0.4, 1.2)};
  const auto base = dpmc::product_of_densities(shards);
  for (double& v : shards[0].values) v *= 1e6;
  for (double& v : shards[1].values) v *= 1e-9;
  const auto scaled = dpmc::product_of_densities(shards);
  double max_diff = 0.0;
  for (std::size_t i = 0; i < base.values.size(); ++i) {
    max_diff = std::max(max_diff, std::abs(base.values[i] - scaled.values[i]));
  }
  CHECK(max_diff < 1e-9);
}

TEST_CASE("product is invariant to shard order") {
  const auto grid = dpmc::build_grid(-4.0, 4.0, 2e-3, 2);
  std::vector<dpmc::GriddedDensity> shards{tabulate_normal(grid, -0.3, 0.9),
                                           tabulate_normal(grid, 0.4, 1.2),
                                           tabulate_normal(grid, 0.1, 1.0)};
  const auto a = dpmc::product_of_densities(shards);
  std::swap(shards[0], shards[2]);
  const auto b = dpmc::product_of_densities(shards);
  double max_diff = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    max_diff = std::max(max_diff, std::abs(a.values[i] - b.values[i]));
  }
  CHECK(max_diff < 1e-12);
}

TEST_CASE("zero nodes propagate and disjoint supports fail") {
  const dpmc::Grid grid{0.0, 1.0, 10, 2};
  dpmc::GriddedDensity left{grid, std::vector<double>(11, 0.0), false};
  dpmc::GriddedDensity right{grid, std::vector<double>(11, 0.0), false};
  for (int i = 0; i <= 4; ++i) left.values[i] = 1.0;
  for (int i = 6; i <= 10; ++i) right.values[i] = 1.0;
  CHECK_THROWS_AS(dpmc::product_of_densities({left, right}),
                  dpmc::ZeroMassError);

  // Overlapping case: zeros survive where either factor is zero.
  dpmc::GriddedDensity wide{grid, std::vector<double>(11, 1.0), false};
  const auto prod = dpmc::product_of_densities({left, wide});
  CHECK(prod.values[8] == 0.0);
  CHECK(prod.values[2] > 0.0);
}

TEST_CASE("mismatched grids are rejected") {
  const auto g1 = dpmc::build_grid(0.0, 1.0, 0.1, 2);
  const auto g2 = dpmc::build_grid(0.0, 1.0, 0.05, 2);
  dpmc::GriddedDensity a{g1, std::vector<double>(g1.num_nodes(), 1.0), false};
  dpmc::GriddedDensity b{g2, std::vector<double>(g2.num_nodes(), 1.0), false};
  CHECK_THROWS_AS(dpmc::product_of_densities({a, b}), dpmc::GridMismatchError);
}

TEST_CASE("direct pipeline on Gaussian shards recovers the product moments") {
  dpmc::Rng rng(111);
  const int T = 50000, M = 5;
  std::vector<dpmc::SubposteriorSamples> subs;
  for (int m = 0; m < M; ++m) {
    dpmc::SubposteriorSamples s;
    s.draws.resize(T, 1);
    for (int t = 0; t < T; ++t) s.draws(t, 0) = rng.normal();
    s.shard_id = m + 1;
    subs.push_back(std::move(s));
  }
  dpmc::EstimatorSpec est;
  est.kind = dpmc::EstimatorKind::gaussian_kde;
  dpmc::GridConfig grid_config;
  dpmc::Rng sample_rng(112);
  const auto marginals = dpmc::direct_density_product(
      subs, est, grid_config, 1, true, 10000, sample_rng);
  REQUIRE(marginals.size() == 1);
  const auto& est_density = marginals[0].density;
  CHECK(est_density.normalized);
  CHECK(std::abs(density_mean(est_density)) < 0.01);
  CHECK(density_var(est_density) == doctest::Approx(1.0 / M).epsilon(0.05));

  REQUIRE(marginals[0].samples.has_value());
  CHECK(marginals[0].samples->size() == 10000);
  for (double v : *marginals[0].samples) {
    CHECK(v >= est_density.grid.a);
    CHECK(v <= est_density.grid.b);
  }
}

TEST_CASE("multi-parameter pipeline treats independent columns separately") {
  dpmc::Rng rng(222);
  const int T = 20000, M = 3;
  std::vector<dpmc::SubposteriorSamples> subs;
  for (int m = 0; m < M; ++m) {
    dpmc::SubposteriorSamples s;
    s.draws.resize(T, 2);
    for (int t = 0; t < T; ++t) {
      s.draws(t, 0) = rng.normal();          // N(0, 1)
      s.draws(t, 1) = 5.0 + 2.0 * rng.normal();  // N(5, 4)
    }
    s.shard_id = m + 1;
    subs.push_back(std::move(s));
  }
  dpmc::EstimatorSpec est;
  est.kind = dpmc::EstimatorKind::gaussian_kde;
  dpmc::Rng sample_rng(223);
  const auto marginals = dpmc::direct_density_product(
      subs, est, dpmc::GridConfig{}, 2, false, 0, sample_rng);
  REQUIRE(marginals.size() == 2);
  CHECK(marginals[0].parameter_index == 1);
  CHECK(marginals[1].parameter_index == 2);
  CHECK(std::abs(density_mean(marginals[0].density)) < 0.02);
  CHECK(density_mean(marginals[1].density) == doctest::Approx(5.0).epsilon(0.01));
  CHECK(density_var(marginals[1].density) ==
        doctest::Approx(4.0 / M).epsilon(0.05));
}

TEST_CASE("finer grids refine the product consistently") {
  // The normalized product on a coarse grid and on a 4x finer grid must
  // agree where they share nodes: quadrature and interpolation converge.
  dpmc::Rng rng(333);
  const int T = 20000;
  std::vector<dpmc::SubposteriorSamples> subs;
  for (int m = 0; m < 2; ++m) {
    dpmc::SubposteriorSamples s;
    s.draws.resize(T, 1);
    for (int t = 0; t < T; ++t) s.draws(t, 0) = rng.normal();
    s.shard_id = m + 1;
    subs.push_back(std::move(s));
  }
  dpmc::EstimatorSpec est;
  est.kind = dpmc::EstimatorKind::gaussian_kde;
  dpmc::GridConfig coarse;
  coarse.relative_dx = 4e-3;
  dpmc::GridConfig fine;
  fine.relative_dx = 1e-3;
  dpmc::Rng r1(1), r2(2);
  const auto pc = dpmc::direct_density_product(subs, est, coarse, 1, false, 0, r1);
  const auto pf = dpmc::direct_density_product(subs, est, fine, 1, false, 0, r2);
  CHECK(std::abs(density_mean(pc[0].density) - density_mean(pf[0].density)) <
        1e-4);
  CHECK(density_var(pc[0].density) ==
        doctest::Approx(density_var(pf[0].density)).epsilon(1e-3));
}

TEST_SUITE_END();
