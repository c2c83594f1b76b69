#pragma once

#include <cstddef>
#include <vector>

#include "dpmc/gridded_density.hpp"
#include "dpmc/rng.hpp"

namespace dpmc {

/// Cumulative distribution function of a normalized gridded density,
/// accumulated by trapezoids at node resolution with piecewise-linear
/// interpolation between nodes. The node CDF is rescaled so F(b) = 1
/// exactly, which keeps quantile(1) == b.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(const GriddedDensity& density);

  /// F(x) for x in [a, b].
  double operator()(double x) const;

  /// F^{-1}(u) for u in [0, 1]; monotone in u, output in [a, b].
  double quantile(double u) const;

 private:
  Grid grid_;
  std::vector<double> node_cdf_;  // size num_nodes, node_cdf_.back() == 1
};

/// Draws `count` samples x = F^{-1}(U) with U ~ Uniform(0,1).
/// Throws NotNormalizedError if the density is not normalized.
std::vector<double> inverse_cdf_sample(const GriddedDensity& density,
                                       std::size_t count, Rng& rng);

}  // namespace dpmc
