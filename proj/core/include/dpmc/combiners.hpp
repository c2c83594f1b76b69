#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "dpmc/models.hpp"
#include "dpmc/rng.hpp"

namespace dpmc {

enum class CombineMethod { average, consensus, dpe, direct };

std::string method_name(CombineMethod method);
CombineMethod method_from_name(const std::string& name);

struct CombinedSamples {
  Eigen::MatrixXd draws;  // T x d
  CombineMethod method = CombineMethod::average;
};

/// Per-shard inverse sample covariance matrices W_m.
struct WeightMatrix {
  std::vector<Eigen::MatrixXd> weights;
};

/// theta_t = (1/M) sum_m theta_{t,m}, pairing draws by iteration index.
CombinedSamples combine_average(const std::vector<SubposteriorSamples>& subs);

/// W_m = (sample covariance of shard m)^{-1}. Throws SingularCovarianceError
/// when a covariance has condition number above 1e12.
WeightMatrix shard_weights(const std::vector<SubposteriorSamples>& subs);

/// theta_t = (sum_m W_m)^{-1} (sum_m W_m theta_{t,m}).
CombinedSamples combine_consensus(const std::vector<SubposteriorSamples>& subs,
                                  const WeightMatrix& weights);

/// Gibbs sampler over the component indices of the product-of-KDEs mixture
/// (T^M Gaussian components, component covariance (h^2/M) I). Exposed
/// separately from combine_dpe so tests can compare index-visit frequencies
/// against exhaustive weight enumeration.
class DpeIndexSampler {
 public:
  DpeIndexSampler(const std::vector<SubposteriorSamples>& subs, double bandwidth);

  /// One full Gibbs sweep: resamples each index coordinate from its
  /// conditional weights given the others.
  void scan(Rng& rng);

  const std::vector<int>& indices() const { return indices_; }
  int sample_count() const { return num_draws_; }
  int num_shards() const { return static_cast<int>(shards_.size()); }
  double bandwidth() const { return bandwidth_; }

  /// Mean of the currently selected mixture component.
  Eigen::VectorXd component_mean() const;

  /// Draw from the currently selected component.
  Eigen::VectorXd draw_from_component(Rng& rng) const;

  /// Unnormalized conditional log-weights of coordinate m given the other
  /// indices (one entry per candidate sample index).
  Eigen::VectorXd conditional_log_weights(int m) const;

 private:
  std::vector<Eigen::MatrixXd> shards_;   // per shard: T x d draws
  std::vector<Eigen::VectorXd> sq_norms_; // per shard: |theta_{t,m}|^2
  double bandwidth_ = 1.0;
  int num_draws_ = 0;
  std::vector<int> indices_;              // current t_m per shard
  Eigen::VectorXd index_sum_;             // sum_m theta_{t_m, m}
};

/// Draws from the product of the shards' Gaussian KDEs by running the index
/// Gibbs sampler for `iterations` scans, emitting one draw per scan and
/// returning the final T draws. Requires iterations >= T. Throws
/// DegenerateWeightsError if conditional weights degenerate.
CombinedSamples combine_dpe(const std::vector<SubposteriorSamples>& subs,
                            double bandwidth, std::int64_t iterations, Rng& rng);

/// Default mixture bandwidth: the per-column standard deviation averaged
/// over shards and dimensions, scaled by the multivariate KDE rate
/// T^(-1/(4+d)) so the index chain keeps mixing in higher dimensions.
double dpe_default_bandwidth(const std::vector<SubposteriorSamples>& subs);

}  // namespace dpmc
