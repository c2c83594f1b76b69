#include "dpmc/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dpmc/errors.hpp"

namespace dpmc {

int Grid::panel_of(double x) const {
  const double width = order * dx();
  int r = static_cast<int>(std::floor((x - a) / width));
  return std::clamp(r, 0, num_panels() - 1);
}

Grid build_grid(double a, double b, double delta, int order) {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw ConfigError("build_grid: bounds must be finite");
  }
  if (!(a < b)) {
    throw ConfigError("build_grid: requires a < b");
  }
  if (!(delta > 0.0)) {
    throw ConfigError("build_grid: requires delta > 0");
  }
  if (delta >= b - a) {
    throw ConfigError("build_grid: delta must be smaller than b - a");
  }
  if (order < 1) {
    throw ConfigError("build_grid: order must be >= 1");
  }
  // Smallest multiple of `order` with (b - a) / n <= delta. The 1e-9 slack
  // keeps an exact-in-reals tiling (e.g. 0.01 / 1e-5) from being bumped to
  // the next panel by floating-point rounding of the quotient.
  const double panels_exact = (b - a) / (delta * order);
  const auto panels = static_cast<int>(std::ceil(panels_exact - 1e-9));
  return Grid{a, b, std::max(panels, 1) * order, order};
}

}  // namespace dpmc
