#include "dpmc/piecewise_polynomial.hpp"

#include <algorithm>

namespace dpmc {

double PiecewisePolynomial::operator()(double x) const {
  const int p = grid.panel_of(x);
  const double u = x - grid.node(p * grid.order);
  const std::vector<double>& c = coeffs[p];
  double value = c.back();
  for (int i = static_cast<int>(c.size()) - 2; i >= 0; --i) {
    value = value * u + c[i];
  }
  return value;
}

PiecewisePolynomial lagrange_interpolate(const GriddedDensity& density) {
  detail::check_density(density);
  const Grid& g = density.grid;
  const int k = g.order;
  const double dx = g.dx();

  PiecewisePolynomial poly{g, {}};
  poly.coeffs.reserve(g.num_panels());

  // Newton divided differences on the local nodes u_j = j*dx, then
  // expansion of the Newton form into monomial coefficients in u.
  std::vector<double> dd(k + 1);
  std::vector<double> coeff(k + 1);
  for (int p = 0; p < g.num_panels(); ++p) {
    const int base = p * k;
    for (int j = 0; j <= k; ++j) {
      dd[j] = density.values[base + j];
    }
    for (int level = 1; level <= k; ++level) {
      for (int j = k; j >= level; --j) {
        dd[j] = (dd[j] - dd[j - 1]) / (level * dx);
      }
    }
    // Horner-style expansion: poly = dd[k]; poly = poly*(u - u_j) + dd[j].
    std::fill(coeff.begin(), coeff.end(), 0.0);
    coeff[0] = dd[k];
    for (int j = k - 1; j >= 0; --j) {
      const double uj = j * dx;
      for (int i = k - j; i >= 1; --i) {
        coeff[i] = coeff[i - 1] - uj * coeff[i];
      }
      coeff[0] = dd[j] - uj * coeff[0];
    }
    poly.coeffs.push_back(coeff);
  }
  return poly;
}

}  // namespace dpmc
