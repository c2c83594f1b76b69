#pragma once

#include <string>
#include <vector>

#include "dpmc/combiners.hpp"
#include "dpmc/density_estimation.hpp"
#include "dpmc/gridded_density.hpp"

namespace dpmc {

/// sqrt of the Newton-Cotes integral of (p - q)^2 over the shared grid.
/// Throws GridMismatchError when the grids differ.
double l2_distance(const GriddedDensity& p, const GriddedDensity& q);

/// sqrt of the integral of p^2.
double l2_norm(const GriddedDensity& p);

/// l2_distance(full, estimate) / l2_norm(full). Throws ZeroNormError when
/// the reference density has zero L2 norm.
double relative_l2(const GriddedDensity& full, const GriddedDensity& estimate);

/// Smooths one parameter's samples onto the shared grid with the given
/// estimator and normalizes; applied identically to sample-based method
/// outputs and the full-data reference chain so estimation bias cancels to
/// first order.
GriddedDensity method_pipeline_density(const MarginalSamples& samples,
                                       const EstimatorSpec& estimator,
                                       const Grid& grid);

/// Per-parameter relative L2 distances for one (model, M, method) cell,
/// mirroring one row of the experiment report.
struct L2Report {
  std::vector<double> per_parameter;
  double average = 0.0;
  CombineMethod method = CombineMethod::average;
  std::string model;
  int num_shards = 1;
};

L2Report make_l2_report(std::vector<double> per_parameter, CombineMethod method,
                        std::string model, int num_shards);

}  // namespace dpmc
