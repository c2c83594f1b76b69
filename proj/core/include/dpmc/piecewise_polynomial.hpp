#pragma once

#include <vector>

#include "dpmc/gridded_density.hpp"
#include "dpmc/grid.hpp"

namespace dpmc {

/// Piecewise polynomial of degree `grid.order` with one polynomial per
/// panel, stored as monomial coefficients in the local coordinate
/// u = x - panel_left (constant term first).
struct PiecewisePolynomial {
  Grid grid;
  std::vector<std::vector<double>> coeffs;  // num_panels x (order + 1)

  /// Evaluates the interpolant at x in [a, b].
  double operator()(double x) const;
};

/// Per-panel Lagrange interpolation through the k+1 nodes of each panel.
/// The interpolant reproduces the node values exactly.
PiecewisePolynomial lagrange_interpolate(const GriddedDensity& density);

}  // namespace dpmc
