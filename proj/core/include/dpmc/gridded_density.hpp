#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dpmc/grid.hpp"

namespace dpmc {

/// A one-dimensional density represented by its values at the grid nodes.
struct GriddedDensity {
  Grid grid;
  std::vector<double> values;  // size grid.num_nodes(), all >= 0
  bool normalized = false;
};

/// Composite closed Newton-Cotes integral of the node values over [a, b],
/// using the order-k rule per panel (k = 1 trapezoid, 2 Simpson, 4 Boole).
/// Panels are accumulated left to right; the result is deterministic.
double newton_cotes_integrate(const GriddedDensity& density);

/// Rescales the density so its Newton-Cotes integral is 1.
/// Throws ZeroMassError when the mass is at or below 1e-300, which signals
/// non-overlapping subposteriors upstream.
GriddedDensity normalize_density(GriddedDensity density);

/// CSV serialization: header `x,density`, one row per node, 17 significant
/// digits.
void write_density_csv(const GriddedDensity& density, std::ostream& out);
void write_density_csv(const GriddedDensity& density, const std::string& path);

namespace detail {
/// Validates shape invariants shared by the quadrature/interpolation entry
/// points; throws on violation.
void check_density(const GriddedDensity& density);
/// Closed Newton-Cotes node weights for one panel of the given order,
/// scaled by dx. Supported orders: 1, 2, 4.
std::vector<double> newton_cotes_panel_weights(int order, double dx);
}  // namespace detail

}  // namespace dpmc
