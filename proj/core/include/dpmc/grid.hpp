#pragma once

#include <compare>
#include <cstdint>

namespace dpmc {

/// Evenly spaced grid on [a, b] with n subintervals tiled into panels of
/// `order` subintervals each (n is always an exact multiple of order).
struct Grid {
  double a = 0.0;
  double b = 1.0;
  int n = 1;      // number of subintervals
  int order = 1;  // polynomial order per panel; n % order == 0

  double dx() const { return (b - a) / n; }
  int num_nodes() const { return n + 1; }
  int num_panels() const { return n / order; }

  /// i-th node; the last node is exactly b.
  double node(int i) const { return i == n ? b : a + i * dx(); }

  /// Index of the panel containing x (clamped to [0, num_panels()-1]).
  int panel_of(double x) const;

  friend bool operator==(const Grid&, const Grid&) = default;
};

/// Builds a grid covering [a, b] with subinterval width at most `delta`,
/// shrunk minimally so that the number of subintervals is a multiple of
/// `order` and the grid ends exactly at b.
Grid build_grid(double a, double b, double delta, int order);

}  // namespace dpmc
