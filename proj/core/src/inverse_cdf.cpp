#include "dpmc/inverse_cdf.hpp"

#include <algorithm>
#include <cmath>

#include "dpmc/errors.hpp"

namespace dpmc {

EmpiricalCdf::EmpiricalCdf(const GriddedDensity& density) : grid_(density.grid) {
  detail::check_density(density);
  if (!density.normalized) {
    throw NotNormalizedError("EmpiricalCdf: density must be normalized first");
  }
  const int nodes = grid_.num_nodes();
  node_cdf_.resize(nodes);
  node_cdf_[0] = 0.0;
  const double half_dx = 0.5 * grid_.dx();
  for (int i = 1; i < nodes; ++i) {
    node_cdf_[i] = node_cdf_[i - 1] +
                   half_dx * (density.values[i - 1] + density.values[i]);
  }
  const double total = node_cdf_.back();
  if (!(total > 1e-300)) {
    throw ZeroMassError("EmpiricalCdf: cumulative mass underflows");
  }
  for (double& c : node_cdf_) {
    c /= total;
  }
  node_cdf_.back() = 1.0;
}

double EmpiricalCdf::operator()(double x) const {
  if (x <= grid_.a) {
    return 0.0;
  }
  if (x >= grid_.b) {
    return 1.0;
  }
  const double t = (x - grid_.a) / grid_.dx();
  const int i = std::min(static_cast<int>(t), grid_.n - 1);
  const double frac = t - i;
  return node_cdf_[i] + frac * (node_cdf_[i + 1] - node_cdf_[i]);
}

double EmpiricalCdf::quantile(double u) const {
  u = std::clamp(u, 0.0, 1.0);
  if (u <= 0.0) {
    return grid_.a;
  }
  if (u >= 1.0) {
    return grid_.b;
  }
  const auto it = std::lower_bound(node_cdf_.begin(), node_cdf_.end(), u);
  int i = static_cast<int>(it - node_cdf_.begin());
  if (i == 0) {
    return grid_.a;
  }
  const double lo = node_cdf_[i - 1];
  const double hi = node_cdf_[i];
  // Zero-mass interval: the CDF is flat, return the left node.
  const double frac = hi > lo ? (u - lo) / (hi - lo) : 0.0;
  return grid_.node(i - 1) + frac * grid_.dx();
}

std::vector<double> inverse_cdf_sample(const GriddedDensity& density,
                                       std::size_t count, Rng& rng) {
  const EmpiricalCdf cdf(density);
  std::vector<double> out(count);
  for (std::size_t s = 0; s < count; ++s) {
    out[s] = cdf.quantile(rng.uniform());
  }
  return out;
}

}  // namespace dpmc
