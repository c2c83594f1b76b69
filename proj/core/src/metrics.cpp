#include "dpmc/metrics.hpp"

#include <cmath>
#include <numeric>

#include "dpmc/errors.hpp"

namespace dpmc {

namespace {

double l2_between(const GriddedDensity& p, const GriddedDensity& q) {
  if (!(p.grid == q.grid)) {
    throw GridMismatchError("l2_distance: densities on different grids");
  }
  GriddedDensity squared{p.grid, std::vector<double>(p.values.size()), false};
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    const double diff = p.values[i] - q.values[i];
    squared.values[i] = diff * diff;
  }
  return std::sqrt(newton_cotes_integrate(squared));
}

}  // namespace

double l2_distance(const GriddedDensity& p, const GriddedDensity& q) {
  return l2_between(p, q);
}

double l2_norm(const GriddedDensity& p) {
  GriddedDensity zero{p.grid, std::vector<double>(p.values.size(), 0.0), false};
  return l2_between(p, zero);
}

double relative_l2(const GriddedDensity& full, const GriddedDensity& estimate) {
  const double norm = l2_norm(full);
  if (!(norm > 0.0)) {
    throw ZeroNormError("relative_l2: reference density has zero L2 norm");
  }
  return l2_distance(full, estimate) / norm;
}

GriddedDensity method_pipeline_density(const MarginalSamples& samples,
                                       const EstimatorSpec& estimator,
                                       const Grid& grid) {
  return normalize_density(estimate_density(samples, estimator, grid));
}

L2Report make_l2_report(std::vector<double> per_parameter, CombineMethod method,
                        std::string model, int num_shards) {
  if (per_parameter.empty()) {
    throw ConfigError("L2Report: no per-parameter distances");
  }
  L2Report report;
  report.average =
      std::accumulate(per_parameter.begin(), per_parameter.end(), 0.0) /
      static_cast<double>(per_parameter.size());
  report.per_parameter = std::move(per_parameter);
  report.method = method;
  report.model = std::move(model);
  report.num_shards = num_shards;
  return report;
}

}  // namespace dpmc
