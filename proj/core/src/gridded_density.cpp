#include "dpmc/gridded_density.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "dpmc/errors.hpp"

namespace dpmc {

namespace detail {

void check_density(const GriddedDensity& density) {
  const Grid& g = density.grid;
  if (g.n < 1 || g.order < 1 || g.n % g.order != 0) {
    throw ConfigError("gridded density: n must be a positive multiple of the order");
  }
  if (static_cast<int>(density.values.size()) != g.num_nodes()) {
    throw ConfigError("gridded density: values size does not match the grid");
  }
}

std::vector<double> newton_cotes_panel_weights(int order, double dx) {
  switch (order) {
    case 1:
      return {dx / 2.0, dx / 2.0};
    case 2:
      return {dx / 3.0, 4.0 * dx / 3.0, dx / 3.0};
    case 4:
      return {14.0 * dx / 45.0, 64.0 * dx / 45.0, 24.0 * dx / 45.0,
              64.0 * dx / 45.0, 14.0 * dx / 45.0};
    default:
      throw ConfigError("newton_cotes: unsupported order (use 1, 2 or 4)");
  }
}

}  // namespace detail

double newton_cotes_integrate(const GriddedDensity& density) {
  detail::check_density(density);
  const Grid& g = density.grid;
  const std::vector<double> w = detail::newton_cotes_panel_weights(g.order, g.dx());
  double total = 0.0;
  for (int p = 0; p < g.num_panels(); ++p) {
    const int base = p * g.order;
    double panel = 0.0;
    for (int j = 0; j <= g.order; ++j) {
      panel += w[j] * density.values[base + j];
    }
    total += panel;
  }
  return total;
}

GriddedDensity normalize_density(GriddedDensity density) {
  const double mass = newton_cotes_integrate(density);
  if (!(mass > 1e-300)) {
    throw ZeroMassError("normalize_density: density mass is zero or underflows; "
                        "subposteriors may not overlap");
  }
  for (double& v : density.values) {
    v /= mass;
  }
  density.normalized = true;
  return density;
}

void write_density_csv(const GriddedDensity& density, std::ostream& out) {
  detail::check_density(density);
  out << "x,density\n";
  char buf[64];
  for (int i = 0; i < density.grid.num_nodes(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", density.grid.node(i),
                  density.values[i]);
    out << buf;
  }
}

void write_density_csv(const GriddedDensity& density, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw ConfigError("cannot open for writing: " + path);
  }
  write_density_csv(density, out);
}

}  // namespace dpmc
