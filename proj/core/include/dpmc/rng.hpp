#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace dpmc {

/// Seeded random number generator used throughout the toolkit. One instance
/// per sampling task; instances with distinct seeds are independent streams.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return uniform_(engine_); }

  /// Standard normal.
  double normal() { return normal_(engine_); }

  /// Gamma(shape, 1).
  double gamma(double shape);

  /// Beta(a, b) via two gamma draws.
  double beta(double a, double b);

  /// Dirichlet(alpha) into `out` (same length as alpha).
  void dirichlet(std::span<const double> alpha, std::span<double> out);

  /// Normal(mean, sd) conditioned on the result being > lower. Handles
  /// truncation points arbitrarily deep in the upper tail.
  double truncated_normal_above(double mean, double sd, double lower);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace dpmc
