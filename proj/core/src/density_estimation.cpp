#include "dpmc/density_estimation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dpmc/errors.hpp"

namespace dpmc {

namespace {

constexpr double kKernelCutoff = 8.6;  // exp(-0.5 * 8.6^2) ~ 8e-17

struct SampleStats {
  double mean = 0.0;
  double sd = 0.0;
  double iqr = 0.0;
};

SampleStats compute_stats(std::span<const double> samples) {
  const auto n = static_cast<double>(samples.size());
  SampleStats st;
  for (double v : samples) {
    st.mean += v;
  }
  st.mean /= n;
  double ss = 0.0;
  for (double v : samples) {
    const double d = v - st.mean;
    ss += d * d;
  }
  st.sd = samples.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;

  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const auto quantile = [&](double q) {
    const double pos = q * (n - 1.0);
    const auto i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    return i + 1 < sorted.size() ? sorted[i] + frac * (sorted[i + 1] - sorted[i])
                                 : sorted.back();
  };
  st.iqr = quantile(0.75) - quantile(0.25);
  return st;
}

/// Adds the Gaussian kernel sum over `samples` (bandwidth h, unit weight per
/// sample) to `acc` at every node within the kernel cutoff. The per-sample
/// sweep uses the factorization
///   exp(-(z0 + j*d)^2/2) = exp(-z0^2/2) * r^j * exp(-(j*d)^2/2)
/// so each node costs two multiplies instead of an exp call.
void add_gaussian_kernels(std::vector<double>& acc, const Grid& grid,
                          std::span<const double> samples, double h) {
  const double dx = grid.dx();
  const double delta = dx / h;
  const auto window =
      static_cast<std::size_t>(2.0 * kKernelCutoff / delta) + 2;
  std::vector<double> gtab(std::min<std::size_t>(window, acc.size() + 1));
  for (std::size_t j = 0; j < gtab.size(); ++j) {
    const double zj = static_cast<double>(j) * delta;
    gtab[j] = std::exp(-0.5 * zj * zj);
  }

  const double reach = kKernelCutoff * h;
  for (double theta : samples) {
    const int i_lo = std::max(
        0, static_cast<int>(std::ceil((theta - reach - grid.a) / dx)));
    const int i_hi = std::min(
        grid.n, static_cast<int>(std::floor((theta + reach - grid.a) / dx)));
    if (i_lo > i_hi) {
      continue;
    }
    const double z_lo = (grid.node(i_lo) - theta) / h;
    const double base = std::exp(-0.5 * z_lo * z_lo);
    const double ratio = std::exp(-z_lo * delta);
    double powr = 1.0;
    for (int i = i_lo; i <= i_hi; ++i) {
      acc[i] += base * powr * gtab[i - i_lo];
      powr *= ratio;
    }
  }
}

GriddedDensity kernel_density(const MarginalSamples& samples,
                              const EstimatorSpec& spec, const Grid& grid,
                              double h) {
  GriddedDensity density{grid, std::vector<double>(grid.num_nodes(), 0.0), false};
  add_gaussian_kernels(density.values, grid, samples.values, h);

  if (spec.kind == EstimatorKind::reflected_kde) {
    std::vector<double> mirrored(samples.values.size());
    if (spec.support.lower) {
      const double lo = *spec.support.lower;
      for (std::size_t t = 0; t < mirrored.size(); ++t) {
        mirrored[t] = 2.0 * lo - samples.values[t];
      }
      add_gaussian_kernels(density.values, grid, mirrored, h);
    }
    if (spec.support.upper) {
      const double hi = *spec.support.upper;
      for (std::size_t t = 0; t < mirrored.size(); ++t) {
        mirrored[t] = 2.0 * hi - samples.values[t];
      }
      add_gaussian_kernels(density.values, grid, mirrored, h);
    }
  }

  const double scale =
      1.0 / (static_cast<double>(samples.values.size()) * h *
             std::sqrt(2.0 * std::numbers::pi));
  for (double& v : density.values) {
    v *= scale;
  }
  return density;
}

/// Penalized log-density estimate: a Poisson likelihood on binned counts
/// with a squared second-difference roughness penalty on the log-density,
/// maximized by Newton iterations. Serves the same role as penalized
/// likelihood log-spline estimation on a fixed uniform knot set.
GriddedDensity penalized_log_density(const MarginalSamples& samples,
                                     const Grid& grid, double h) {
  const int nb = std::min(400, grid.num_nodes());
  const double a = grid.a;
  const double w = (grid.b - grid.a) / nb;
  const auto n = static_cast<double>(samples.values.size());

  Eigen::VectorXd counts = Eigen::VectorXd::Zero(nb);
  for (double v : samples.values) {
    const int b = std::clamp(static_cast<int>((v - a) / w), 0, nb - 1);
    counts[b] += 1.0;
  }

  // Roughness weight calibrated so the effective smoothing window matches
  // the reference kernel bandwidth h (window ~ (tau / count)^(1/4) bins).
  const double window_bins = std::max(h / w, 1.0);
  const double tau = (n / nb) * std::pow(window_bins, 4.0);

  Eigen::MatrixXd penalty = Eigen::MatrixXd::Zero(nb, nb);
  for (int b = 1; b + 1 < nb; ++b) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(nb);
    row[b - 1] = 1.0;
    row[b] = -2.0;
    row[b + 1] = 1.0;
    penalty += tau * row * row.transpose();
  }

  Eigen::VectorXd f(nb);
  for (int b = 0; b < nb; ++b) {
    f[b] = std::log((counts[b] + 0.5) / ((n + 0.5 * nb) * w));
  }
  const auto objective = [&](const Eigen::VectorXd& g) {
    double val = counts.dot(g) - n * w * g.array().exp().sum();
    val -= 0.5 * g.dot(penalty * g);
    return val;
  };

  double obj = objective(f);
  for (int iter = 0; iter < 100; ++iter) {
    Eigen::VectorXd expf = (n * w) * f.array().exp().matrix();
    Eigen::VectorXd grad = counts - expf - penalty * f;
    Eigen::MatrixXd hess = penalty;
    hess.diagonal() += expf;
    Eigen::VectorXd step = hess.ldlt().solve(grad);
    double scale = 1.0;
    Eigen::VectorXd next = f + step;
    double next_obj = objective(next);
    while (next_obj < obj && scale > 1e-6) {
      scale *= 0.5;
      next = f + scale * step;
      next_obj = objective(next);
    }
    const double move = (next - f).cwiseAbs().maxCoeff();
    f = next;
    obj = next_obj;
    if (move < 1e-8) {
      break;
    }
  }

  // Linear interpolation of the log-density from bin centers to grid nodes,
  // with linear extrapolation at the edges.
  GriddedDensity density{grid, std::vector<double>(grid.num_nodes()), false};
  for (int i = 0; i < grid.num_nodes(); ++i) {
    const double pos = (grid.node(i) - a) / w - 0.5;
    const int b = std::clamp(static_cast<int>(std::floor(pos)), 0, nb - 2);
    const double frac = pos - b;
    const double logf = f[b] + frac * (f[b + 1] - f[b]);
    density.values[i] = std::exp(std::min(logf, 700.0));
  }
  return density;
}

}  // namespace

std::pair<double, double> select_range(const std::vector<MarginalSamples>& marginals,
                                       double padding_fraction,
                                       const Support& support) {
  if (marginals.empty()) {
    throw ConfigError("select_range: needs at least one marginal");
  }
  if (padding_fraction < 0.0) {
    throw ConfigError("select_range: padding_fraction must be >= 0");
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const MarginalSamples& m : marginals) {
    for (double v : m.values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  const double span = hi - lo;
  if (!(span > 0.0)) {
    throw DegenerateRangeError("select_range: all samples identical");
  }
  double a = lo - padding_fraction * span;
  double b = hi + padding_fraction * span;
  if (support.lower) {
    a = std::max(a, *support.lower);
  }
  if (support.upper) {
    b = std::min(b, *support.upper);
  }
  if (!(a < b)) {
    throw DegenerateRangeError("select_range: support clamp left an empty range");
  }
  return {a, b};
}

double select_bandwidth(const EstimatorSpec& spec, std::span<const double> samples) {
  if (spec.bandwidth_rule == BandwidthRule::fixed) {
    if (!(spec.fixed_bandwidth > 0.0)) {
      throw ConfigError("select_bandwidth: fixed bandwidth must be > 0");
    }
    return spec.fixed_bandwidth;
  }
  if (samples.size() < 2) {
    throw ConfigError("select_bandwidth: need at least two samples");
  }
  const SampleStats st = compute_stats(samples);
  const double n_factor =
      std::pow(static_cast<double>(samples.size()), -0.2);
  double h = 0.0;
  if (spec.bandwidth_rule == BandwidthRule::silverman) {
    const double spread =
        st.iqr > 0.0 ? std::min(st.sd, st.iqr / 1.34) : st.sd;
    h = 0.9 * spread * n_factor;
  } else {  // scott
    h = 1.06 * st.sd * n_factor;
  }
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw BandwidthZeroError("select_bandwidth: rule yielded h <= 0 "
                             "(samples may be identical)");
  }
  return h;
}

GriddedDensity estimate_density(const MarginalSamples& samples,
                                const EstimatorSpec& spec, const Grid& grid) {
  if (samples.values.empty()) {
    throw ConfigError("estimate_density: no samples");
  }
  const double h = select_bandwidth(spec, samples.values);
  switch (spec.kind) {
    case EstimatorKind::gaussian_kde:
    case EstimatorKind::reflected_kde:
      return kernel_density(samples, spec, grid, h);
    case EstimatorKind::logspline_like:
      return penalized_log_density(samples, grid, h);
  }
  throw ConfigError("estimate_density: unknown estimator kind");
}

}  // namespace dpmc
