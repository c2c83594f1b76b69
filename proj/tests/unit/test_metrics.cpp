#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "dpmc/density_estimation.hpp"
#include "dpmc/errors.hpp"
#include "dpmc/grid.hpp"
#include "dpmc/gridded_density.hpp"
#include "dpmc/metrics.hpp"
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

}  // namespace

TEST_SUITE_BEGIN("metrics");

TEST_CASE("L2 distance of shifted normals matches the closed form") {
  // [DERIVED] for p = N(0,1), q = N(delta,1):
  //   ||p - q||^2 = 2 (1 - exp(-delta^2/4)) / sqrt(4 pi)
  //   ||p||       = (4 pi)^(-1/4) = 0.53112596601359841
  // delta = 0.1: distance 0.0375328167707503, ratio 0.070666506954000716
  // delta = 0.5: distance 0.18488515045751824, ratio 0.34810037973700692
  const auto grid = dpmc::build_grid(-9.0, 9.5, 5e-4, 2);
  const auto p = tabulate_normal(grid, 0.0, 1.0);
  CHECK(dpmc::l2_norm(p) ==
        doctest::Approx(0.53112596601359841).epsilon(1e-6));
  const auto q1 = tabulate_normal(grid, 0.1, 1.0);
  CHECK(dpmc::l2_distance(p, q1) ==
        doctest::Approx(0.0375328167707503).epsilon(1e-6));
  CHECK(dpmc::relative_l2(p, q1) ==
        doctest::Approx(0.070666506954000716).epsilon(1e-6));
  const auto q2 = tabulate_normal(grid, 0.5, 1.0);
  CHECK(dpmc::l2_distance(p, q2) ==
        doctest::Approx(0.18488515045751824).epsilon(1e-6));
}

TEST_CASE("metric axioms on tabulated densities") {
  const auto grid = dpmc::build_grid(-8.0, 8.0, 1e-3, 2);
  const auto p = tabulate_normal(grid, -0.4, 1.0);
  const auto q = tabulate_normal(grid, 0.3, 1.3);
  const auto r = tabulate_normal(grid, 1.0, 0.8);
  CHECK(dpmc::l2_distance(p, p) == 0.0);
  CHECK(dpmc::l2_distance(p, q) == doctest::Approx(dpmc::l2_distance(q, p)));
  CHECK(dpmc::l2_distance(p, r) <=
        dpmc::l2_distance(p, q) + dpmc::l2_distance(q, r) + 1e-12);
  CHECK(dpmc::l2_distance(p, q) > 0.0);
}

TEST_CASE("relative L2 is invariant under a change of x scale") {
  // Rescaling x -> c x maps densities p(x) -> p(x/c)/c; both the distance
  // and the norm pick up the same c^(-1/2), so the ratio is unchanged.
  const double c = 250.0;
  const auto grid = dpmc::build_grid(-8.0, 8.0, 1e-3, 2);
  const auto p = tabulate_normal(grid, 0.0, 1.0);
  const auto q = tabulate_normal(grid, 0.4, 1.2);
  const double base = dpmc::relative_l2(p, q);

  const auto wide = dpmc::build_grid(-8.0 * c, 8.0 * c, 1e-3 * c, 2);
  const auto ps = tabulate_normal(wide, 0.0, c);
  const auto qs = tabulate_normal(wide, 0.4 * c, 1.2 * c);
  CHECK(dpmc::relative_l2(ps, qs) == doctest::Approx(base).epsilon(1e-9));
}

TEST_CASE("metric error paths") {
  const auto g1 = dpmc::build_grid(0.0, 1.0, 0.1, 2);
  const auto g2 = dpmc::build_grid(0.0, 1.0, 0.05, 2);
  dpmc::GriddedDensity a{g1, std::vector<double>(g1.num_nodes(), 1.0), false};
  dpmc::GriddedDensity b{g2, std::vector<double>(g2.num_nodes(), 1.0), false};
  CHECK_THROWS_AS(dpmc::l2_distance(a, b), dpmc::GridMismatchError);

  dpmc::GriddedDensity zero{g1, std::vector<double>(g1.num_nodes(), 0.0), false};
  CHECK_THROWS_AS(dpmc::relative_l2(zero, a), dpmc::ZeroNormError);
}

TEST_CASE("pipeline smoothing of identical-law samples sits near the noise floor") {
  // Two independent T=50,000 draws from the same distribution, smoothed
  // identically, should be L2-close: this bounds the metric's noise floor
  // well below the method differences the reports care about.
  dpmc::Rng rng(414);
  const int T = 50000;
  dpmc::MarginalSamples a, b;
  a.values.resize(T);
  b.values.resize(T);
  for (int t = 0; t < T; ++t) {
    a.values[t] = rng.normal();
    b.values[t] = rng.normal();
  }
  dpmc::EstimatorSpec spec;
  spec.kind = dpmc::EstimatorKind::gaussian_kde;
  const auto grid = dpmc::build_grid(-5.0, 5.0, 1e-3, 2);
  const auto pa = dpmc::method_pipeline_density(a, spec, grid);
  const auto pb = dpmc::method_pipeline_density(b, spec, grid);
  CHECK(pa.normalized);
  CHECK(dpmc::newton_cotes_integrate(pa) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(dpmc::relative_l2(pa, pb) < 0.05);
}

TEST_CASE("identical smoothing cancels estimator bias on a skewed law") {
  // Exponential samples: the KDE is biased near 0, but both sides of the
  // comparison carry the same bias, so the relative L2 stays small even
  // though each KDE differs visibly from the true density.
  dpmc::Rng rng(515);
  const int T = 50000;
  dpmc::MarginalSamples a, b;
  a.values.resize(T);
  b.values.resize(T);
  for (int t = 0; t < T; ++t) {
    a.values[t] = -std::log(1.0 - rng.uniform());
    b.values[t] = -std::log(1.0 - rng.uniform());
  }
  dpmc::EstimatorSpec spec;
  spec.kind = dpmc::EstimatorKind::reflected_kde;
  spec.support.lower = 0.0;
  const auto grid = dpmc::build_grid(0.0, 10.0, 1e-3, 2);
  const auto pa = dpmc::method_pipeline_density(a, spec, grid);
  const auto pb = dpmc::method_pipeline_density(b, spec, grid);
  CHECK(dpmc::relative_l2(pa, pb) < 0.05);
}

TEST_CASE("l2 report averages per-parameter distances") {
  const auto report = dpmc::make_l2_report({0.1, 0.2, 0.6},
                                           dpmc::CombineMethod::consensus,
                                           "binomial_beta", 10);
  CHECK(report.average == doctest::Approx(0.3));
  CHECK(report.per_parameter.size() == 3);
  CHECK(report.method == dpmc::CombineMethod::consensus);
  CHECK(report.model == "binomial_beta");
  CHECK(report.num_shards == 10);
  CHECK_THROWS_AS(dpmc::make_l2_report({}, dpmc::CombineMethod::average, "m", 1),
                  dpmc::ConfigError);
}

TEST_SUITE_END();
