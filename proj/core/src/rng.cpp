#include "dpmc/rng.hpp"

#include <cmath>

namespace dpmc {

double Rng::gamma(double shape) {
  std::gamma_distribution<double> dist(shape, 1.0);
  return dist(engine_);
}

double Rng::beta(double a, double b) {
  const double x = gamma(a);
  const double y = gamma(b);
  return x / (x + y);
}

void Rng::dirichlet(std::span<const double> alpha, std::span<double> out) {
  double total = 0.0;
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    out[j] = gamma(alpha[j]);
    total += out[j];
  }
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    out[j] /= total;
  }
}

double Rng::truncated_normal_above(double mean, double sd, double lower) {
  const double alpha = (lower - mean) / sd;
  if (alpha < 0.5) {
    // Plain rejection: acceptance probability >= Phi(-0.5) ~ 0.31.
    for (;;) {
      const double z = normal();
      if (z > alpha) {
        return mean + sd * z;
      }
    }
  }
  // Exponential rejection (Robert 1995) for deep-tail truncation points.
  const double rate = 0.5 * (alpha + std::sqrt(alpha * alpha + 4.0));
  for (;;) {
    double u = uniform();
    if (u <= 0.0) {
      continue;
    }
    const double z = alpha - std::log(u) / rate;
    const double diff = z - rate;
    if (uniform() <= std::exp(-0.5 * diff * diff)) {
      return mean + sd * z;
    }
  }
}

}  // namespace dpmc
