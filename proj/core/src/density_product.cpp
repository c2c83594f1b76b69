#include "dpmc/density_product.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dpmc/errors.hpp"
#include "dpmc/inverse_cdf.hpp"
#include "dpmc/piecewise_polynomial.hpp"

namespace dpmc {

GriddedDensity product_of_densities(const std::vector<GriddedDensity>& densities) {
  if (densities.empty()) {
    throw ConfigError("product_of_densities: no densities");
  }
  const Grid& grid = densities.front().grid;
  for (const GriddedDensity& d : densities) {
    detail::check_density(d);
    if (!(d.grid == grid)) {
      throw GridMismatchError("product_of_densities: densities on different grids");
    }
  }

  const int nodes = grid.num_nodes();
  std::vector<double> log_product(nodes, 0.0);
  for (const GriddedDensity& d : densities) {
    for (int i = 0; i < nodes; ++i) {
      log_product[i] += std::log(d.values[i]);  // log(0) -> -inf, kept
    }
  }
  double max_log = -std::numeric_limits<double>::infinity();
  for (double v : log_product) {
    max_log = std::max(max_log, v);
  }
  GriddedDensity product{grid, std::vector<double>(nodes, 0.0), false};
  if (std::isfinite(max_log)) {
    for (int i = 0; i < nodes; ++i) {
      const double shifted = log_product[i] - max_log;
      product.values[i] = shifted > -745.0 ? std::exp(shifted) : 0.0;
    }
  }
  // The interpolant agrees with the node values at the nodes, so the
  // composite Newton-Cotes rule integrates it exactly; normalization uses
  // that integral as the constant.
  (void)lagrange_interpolate(product);
  return normalize_density(std::move(product));
}

namespace {

std::vector<MarginalEstimate> run_pipeline(
    const std::vector<SubposteriorSamples>& subs, const EstimatorSpec& estimator,
    const std::vector<Grid>& grids, bool want_samples, std::size_t sample_count,
    Rng& rng) {
  if (subs.empty()) {
    throw ShapeMismatchError("direct_density_product: no shards");
  }
  std::vector<MarginalEstimate> result;
  result.reserve(grids.size());
  for (std::size_t j = 0; j < grids.size(); ++j) {
    std::vector<GriddedDensity> shard_densities;
    shard_densities.reserve(subs.size());
    for (const SubposteriorSamples& s : subs) {
      MarginalSamples marginal;
      marginal.shard_id = s.shard_id;
      marginal.parameter_index = static_cast<int>(j) + 1;
      marginal.values.assign(s.draws.col(j).begin(), s.draws.col(j).end());
      shard_densities.push_back(estimate_density(marginal, estimator, grids[j]));
    }
    MarginalEstimate estimate;
    estimate.parameter_index = static_cast<int>(j) + 1;
    estimate.density = product_of_densities(shard_densities);
    if (want_samples) {
      estimate.samples = inverse_cdf_sample(estimate.density, sample_count, rng);
    }
    result.push_back(std::move(estimate));
  }
  return result;
}

}  // namespace

std::vector<MarginalEstimate> direct_density_product(
    const std::vector<SubposteriorSamples>& subs, const EstimatorSpec& estimator,
    const GridConfig& grid_config, int num_parameters, bool want_samples,
    std::size_t sample_count, Rng& rng) {
  if (subs.empty()) {
    throw ShapeMismatchError("direct_density_product: no shards");
  }
  const auto cols = subs.front().draws.cols();
  if (num_parameters < 1 || num_parameters > cols) {
    throw ConfigError("direct_density_product: invalid parameter count");
  }
  std::vector<Grid> grids;
  grids.reserve(num_parameters);
  for (int j = 0; j < num_parameters; ++j) {
    std::vector<MarginalSamples> marginals;
    marginals.reserve(subs.size());
    for (const SubposteriorSamples& s : subs) {
      MarginalSamples m;
      m.shard_id = s.shard_id;
      m.parameter_index = j + 1;
      m.values.assign(s.draws.col(j).begin(), s.draws.col(j).end());
      marginals.push_back(std::move(m));
    }
    const auto [a, b] = select_range(marginals, grid_config.padding_fraction,
                                     estimator.support);
    grids.push_back(build_grid(a, b, grid_config.dx_for(a, b), grid_config.order));
  }
  return run_pipeline(subs, estimator, grids, want_samples, sample_count, rng);
}

std::vector<MarginalEstimate> direct_density_product_on_grids(
    const std::vector<SubposteriorSamples>& subs, const EstimatorSpec& estimator,
    const std::vector<Grid>& grids, bool want_samples, std::size_t sample_count,
    Rng& rng) {
  return run_pipeline(subs, estimator, grids, want_samples, sample_count, rng);
}

}  // namespace dpmc
