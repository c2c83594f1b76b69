#include "dpmc/combiners.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dpmc/density_estimation.hpp"
#include "dpmc/errors.hpp"

namespace dpmc {

std::string method_name(CombineMethod method) {
  switch (method) {
    case CombineMethod::average:
      return "average";
    case CombineMethod::consensus:
      return "consensus";
    case CombineMethod::dpe:
      return "dpe";
    case CombineMethod::direct:
      return "direct";
  }
  return "unknown";
}

CombineMethod method_from_name(const std::string& name) {
  if (name == "average") return CombineMethod::average;
  if (name == "consensus") return CombineMethod::consensus;
  if (name == "dpe") return CombineMethod::dpe;
  if (name == "direct") return CombineMethod::direct;
  throw ConfigError("unknown combine method: " + name);
}

namespace {

void check_common_shape(const std::vector<SubposteriorSamples>& subs) {
  if (subs.empty()) {
    throw ShapeMismatchError("combiner: no subposterior samples");
  }
  const auto rows = subs.front().draws.rows();
  const auto cols = subs.front().draws.cols();
  if (rows < 1 || cols < 1) {
    throw ShapeMismatchError("combiner: empty draws matrix");
  }
  for (const SubposteriorSamples& s : subs) {
    if (s.draws.rows() != rows || s.draws.cols() != cols) {
      throw ShapeMismatchError("combiner: shards disagree on T or d");
    }
  }
}

/// Accumulation order for the averaging combiners: stable-sorted by shard
/// id, so the result is bit-identical under permutations of the input
/// container (floating-point addition is not associative).
std::vector<std::size_t> shard_order(const std::vector<SubposteriorSamples>& subs) {
  std::vector<std::size_t> order(subs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return subs[a].shard_id < subs[b].shard_id;
  });
  return order;
}

Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& draws) {
  const auto rows = static_cast<double>(draws.rows());
  const Eigen::RowVectorXd mean = draws.colwise().mean();
  const Eigen::MatrixXd centered = draws.rowwise() - mean;
  return centered.transpose() * centered / (rows - 1.0);
}

Eigen::MatrixXd checked_inverse(const Eigen::MatrixXd& matrix,
                                const char* what) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(matrix);
  const double max_ev = eig.eigenvalues().maxCoeff();
  const double min_ev = eig.eigenvalues().minCoeff();
  if (!(min_ev > 0.0) || max_ev / min_ev > 1e12) {
    throw SingularCovarianceError(std::string(what) +
                                  ": covariance is numerically singular");
  }
  return eig.eigenvectors() *
         eig.eigenvalues().cwiseInverse().asDiagonal() *
         eig.eigenvectors().transpose();
}

}  // namespace

CombinedSamples combine_average(const std::vector<SubposteriorSamples>& subs) {
  check_common_shape(subs);
  const std::vector<std::size_t> order = shard_order(subs);
  Eigen::MatrixXd sum = subs[order.front()].draws;
  for (std::size_t k = 1; k < order.size(); ++k) {
    sum += subs[order[k]].draws;
  }
  sum /= static_cast<double>(subs.size());
  return CombinedSamples{std::move(sum), CombineMethod::average};
}

WeightMatrix shard_weights(const std::vector<SubposteriorSamples>& subs) {
  check_common_shape(subs);
  if (subs.front().draws.rows() < subs.front().draws.cols() + 1) {
    throw ShapeMismatchError("shard_weights: requires T >= d + 1");
  }
  WeightMatrix result;
  result.weights.reserve(subs.size());
  for (const SubposteriorSamples& s : subs) {
    result.weights.push_back(
        checked_inverse(sample_covariance(s.draws), "shard_weights"));
  }
  return result;
}

CombinedSamples combine_consensus(const std::vector<SubposteriorSamples>& subs,
                                  const WeightMatrix& weights) {
  check_common_shape(subs);
  if (weights.weights.size() != subs.size()) {
    throw ShapeMismatchError("combine_consensus: weight count mismatch");
  }
  const auto d = subs.front().draws.cols();
  const std::vector<std::size_t> order = shard_order(subs);
  Eigen::MatrixXd weight_sum = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t m : order) {
    const Eigen::MatrixXd& w = weights.weights[m];
    if (w.rows() != d || w.cols() != d) {
      throw ShapeMismatchError("combine_consensus: weight dimension mismatch");
    }
    weight_sum += w;
  }
  const Eigen::MatrixXd inv = checked_inverse(weight_sum, "combine_consensus");

  Eigen::MatrixXd numer =
      Eigen::MatrixXd::Zero(subs.front().draws.rows(), d);
  for (std::size_t m : order) {
    numer += subs[m].draws * weights.weights[m];  // W_m symmetric
  }
  return CombinedSamples{numer * inv, CombineMethod::consensus};
}

// ---------------------------------------------------------------------------
// Semiparametric density product estimator

DpeIndexSampler::DpeIndexSampler(const std::vector<SubposteriorSamples>& subs,
                                 double bandwidth)
    : bandwidth_(bandwidth) {
  check_common_shape(subs);
  if (!(bandwidth > 0.0)) {
    throw ConfigError("DpeIndexSampler: bandwidth must be positive");
  }
  num_draws_ = static_cast<int>(subs.front().draws.rows());
  const auto d = subs.front().draws.cols();
  shards_.reserve(subs.size());
  sq_norms_.reserve(subs.size());
  for (const SubposteriorSamples& s : subs) {
    shards_.push_back(s.draws);
    sq_norms_.push_back(s.draws.rowwise().squaredNorm());
  }
  indices_.assign(subs.size(), 0);
  index_sum_ = Eigen::VectorXd::Zero(d);
  for (std::size_t m = 0; m < shards_.size(); ++m) {
    index_sum_ += shards_[m].row(0).transpose();
  }
}

Eigen::VectorXd DpeIndexSampler::conditional_log_weights(int m) const {
  const double inv_m = 1.0 / static_cast<double>(shards_.size());
  const Eigen::VectorXd others =
      index_sum_ - shards_[m].row(indices_[m]).transpose();
  const Eigen::VectorXd scores = shards_[m] * others;
  // Up to an additive constant:
  //   log w(c) = -((1 - 1/M) |x_c|^2 - (2/M) <s, x_c>) / (2 h^2)
  return (-0.5 / (bandwidth_ * bandwidth_)) *
         ((1.0 - inv_m) * sq_norms_[m] - 2.0 * inv_m * scores);
}

void DpeIndexSampler::scan(Rng& rng) {
  const int num_shards = static_cast<int>(shards_.size());
  // Fresh accumulation each scan; keeps the incremental sum from drifting.
  index_sum_.setZero();
  for (int m = 0; m < num_shards; ++m) {
    index_sum_ += shards_[m].row(indices_[m]).transpose();
  }
  for (int m = 0; m < num_shards; ++m) {
    const Eigen::VectorXd logw = conditional_log_weights(m);
    const double max_logw = logw.maxCoeff();
    if (!std::isfinite(max_logw)) {
      throw DegenerateWeightsError(
          "combine_dpe: conditional index weights degenerate "
          "(non-overlapping shards?)");
    }
    const Eigen::ArrayXd w = (logw.array() - max_logw).exp();
    const double total = w.sum();
    if (!(total > 0.0) || !std::isfinite(total)) {
      throw DegenerateWeightsError("combine_dpe: conditional weights sum to zero");
    }
    double target = rng.uniform() * total;
    int chosen = num_draws_ - 1;
    for (int c = 0; c < num_draws_; ++c) {
      target -= w[c];
      if (target <= 0.0) {
        chosen = c;
        break;
      }
    }
    index_sum_ += (shards_[m].row(chosen) - shards_[m].row(indices_[m])).transpose();
    indices_[m] = chosen;
  }
}

Eigen::VectorXd DpeIndexSampler::component_mean() const {
  return index_sum_ / static_cast<double>(shards_.size());
}

Eigen::VectorXd DpeIndexSampler::draw_from_component(Rng& rng) const {
  Eigen::VectorXd draw = component_mean();
  const double sd = bandwidth_ / std::sqrt(static_cast<double>(shards_.size()));
  for (Eigen::Index j = 0; j < draw.size(); ++j) {
    draw[j] += sd * rng.normal();
  }
  return draw;
}

CombinedSamples combine_dpe(const std::vector<SubposteriorSamples>& subs,
                            double bandwidth, std::int64_t iterations,
                            Rng& rng) {
  check_common_shape(subs);
  const auto rows = subs.front().draws.rows();
  const auto cols = subs.front().draws.cols();
  if (iterations < rows) {
    throw ConfigError("combine_dpe: iterations must be >= T");
  }
  DpeIndexSampler sampler(subs, bandwidth);
  Eigen::MatrixXd draws(rows, cols);
  const std::int64_t first_kept = iterations - rows;
  for (std::int64_t i = 0; i < iterations; ++i) {
    sampler.scan(rng);
    if (i >= first_kept) {
      draws.row(i - first_kept) = sampler.draw_from_component(rng).transpose();
    }
  }
  return CombinedSamples{std::move(draws), CombineMethod::dpe};
}

double dpe_default_bandwidth(const std::vector<SubposteriorSamples>& subs) {
  check_common_shape(subs);
  // Scale: per-column standard deviation averaged over shards and
  // dimensions. Rate: T^(-1/(4+d)), the standard multivariate KDE rate for
  // the joint d-dimensional mixture. A one-dimensional T^(-1/5) bandwidth
  // makes the index chain nearly reducible in higher dimensions: the
  // conditional weights then concentrate on a handful of components and the
  // sampler stops mixing.
  const auto T = static_cast<double>(subs.front().draws.rows());
  const auto d = static_cast<double>(subs.front().draws.cols());
  double total = 0.0;
  int count = 0;
  for (const SubposteriorSamples& s : subs) {
    const Eigen::RowVectorXd mean = s.draws.colwise().mean();
    for (Eigen::Index j = 0; j < s.draws.cols(); ++j) {
      const double ss = (s.draws.col(j).array() - mean[j]).square().sum();
      total += std::sqrt(ss / std::max(T - 1.0, 1.0));
      ++count;
    }
  }
  const double sd = total / count;
  if (!(sd > 0.0)) {
    throw DegenerateWeightsError(
        "dpe_default_bandwidth: all shard draws are constant");
  }
  return sd * std::pow(T, -1.0 / (4.0 + d));
}

}  // namespace dpmc
