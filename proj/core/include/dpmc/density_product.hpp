#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dpmc/density_estimation.hpp"
#include "dpmc/gridded_density.hpp"
#include "dpmc/models.hpp"
#include "dpmc/rng.hpp"

namespace dpmc {

/// Grid construction policy for the per-parameter density pipelines.
struct GridConfig {
  /// When set, the paper-style absolute subinterval width; otherwise the
  /// width is relative_dx * (b - a).
  std::optional<double> absolute_dx;
  double relative_dx = 1e-4;
  int order = 2;
  double padding_fraction = 0.1;

  double dx_for(double a, double b) const {
    return absolute_dx ? *absolute_dx : relative_dx * (b - a);
  }
};

/// One parameter's combined marginal: a normalized density, optionally with
/// inverse-CDF samples drawn from it.
struct MarginalEstimate {
  int parameter_index = 0;  // 1-based
  GriddedDensity density;
  std::optional<std::vector<double>> samples;
};

/// Pointwise product of shard densities on a shared grid, normalized.
/// The product is accumulated in log-space over shard index (left to right)
/// and re-exponentiated after subtracting the max, so multiplying any shard
/// by a positive constant leaves the result unchanged. Nodes where any
/// shard density is exactly zero produce zero. Throws GridMismatchError on
/// differing grids and ZeroMassError (via normalization) when the shard
/// densities do not overlap.
GriddedDensity product_of_densities(const std::vector<GriddedDensity>& densities);

/// The full pipeline for every estimated parameter: shared range selection,
/// per-shard density estimation, log-space pointwise product, Lagrange
/// interpolation, Newton-Cotes normalization, and optional inverse-CDF
/// sampling. `num_parameters` limits the pipeline to the first j parameters
/// (pass draws.cols() to use all).
std::vector<MarginalEstimate> direct_density_product(
    const std::vector<SubposteriorSamples>& subs, const EstimatorSpec& estimator,
    const GridConfig& grid_config, int num_parameters, bool want_samples,
    std::size_t sample_count, Rng& rng);

/// Same pipeline with caller-provided grids (one per parameter); used by the
/// harness so metrics can share a single grid per parameter.
std::vector<MarginalEstimate> direct_density_product_on_grids(
    const std::vector<SubposteriorSamples>& subs, const EstimatorSpec& estimator,
    const std::vector<Grid>& grids, bool want_samples, std::size_t sample_count,
    Rng& rng);

}  // namespace dpmc
