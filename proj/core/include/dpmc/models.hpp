#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "dpmc/rng.hpp"

namespace dpmc {

// ---------------------------------------------------------------------------
// Model specifications

/// Bernoulli observations with success probability p_true and a conjugate
/// Beta(alpha, beta) prior on p.
struct BinomialBetaModel {
  double p_true = 0.001;
  double alpha = 1.0;
  double beta = 1.0;
};

/// Single-trial multinomial observations with category probabilities p and a
/// conjugate Dirichlet(alpha) prior.
struct MultinomialDirichletModel {
  std::vector<double> p;
  std::vector<double> alpha;
};

/// Multivariate normal observations with unknown mean, known covariance, and
/// independent Exponential(lambda_j) priors on the mean components.
struct MvnExponentialModel {
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;
  Eigen::VectorXd lambda;
};

struct ModelSpec {
  std::variant<BinomialBetaModel, MultinomialDirichletModel, MvnExponentialModel>
      variant;
  std::int64_t data_size = 100000;

  /// Validates parameter constraints; throws ConfigError on violation.
  void validate() const;

  /// Number of parameters carried in sample draws.
  int dimension() const;

  /// Number of marginals that are estimated and reported. Equals
  /// dimension() except for the multinomial model, where the last category
  /// probability is determined by the others.
  int estimated_parameters() const;

  /// Whether parameter draws live on a bounded support, and its bounds.
  /// Used to configure boundary-corrected density estimation.
  std::pair<bool, std::pair<double, double>> bounded_support() const;

  std::string name() const;
};

// ---------------------------------------------------------------------------
// Data and shards

struct BinaryData {
  std::vector<std::uint8_t> outcomes;  // 0/1 per observation
};
struct CategoryData {
  std::vector<std::uint8_t> categories;  // category index per observation
  int num_categories = 0;
};
struct MatrixData {
  Eigen::MatrixXd rows;  // r x d observations
};
using Dataset = std::variant<BinaryData, CategoryData, MatrixData>;

std::int64_t dataset_size(const Dataset& data);

/// One shard's data, reduced to sufficient statistics for the discrete
/// models and kept as raw rows for the MVN model.
struct BinomialShard {
  std::int64_t trials = 0;
  std::int64_t successes = 0;
};
struct MultinomialShard {
  std::vector<std::int64_t> counts;
};
struct MvnShard {
  Eigen::MatrixXd rows;
};

struct DataShard {
  std::variant<BinomialShard, MultinomialShard, MvnShard> data;
  int shard_id = 0;  // 1..M
  std::int64_t size() const;
};

// ---------------------------------------------------------------------------
// Priors

struct BetaPrior {
  double alpha = 1.0;
  double beta = 1.0;
};
struct DirichletPrior {
  std::vector<double> alpha;
};
struct ExponentialPrior {
  Eigen::VectorXd lambda;
};

/// Prior raised to the 1/M power, so the product of M shard priors
/// reconstitutes the full prior.
struct FractionatedPrior {
  std::variant<BetaPrior, DirichletPrior, ExponentialPrior> params;
  int num_shards = 1;
};

// ---------------------------------------------------------------------------
// Samples

struct SubposteriorSamples {
  Eigen::MatrixXd draws;  // T x d
  int shard_id = 0;
  std::uint64_t seed = 0;
  int burnin = 0;
};

// ---------------------------------------------------------------------------
// Operations

/// Simulates a full data set of spec.data_size observations.
Dataset simulate_data(const ModelSpec& spec, Rng& rng);

/// Uniformly random partition into M disjoint near-equal shards
/// (sizes differ by at most 1; shard ids 1..M).
std::vector<DataShard> partition(const Dataset& data, int num_shards, Rng& rng);

/// Shard prior parameters: alpha' = (alpha + M - 1) / M for Beta/Dirichlet,
/// lambda' = lambda / M for the exponential priors.
FractionatedPrior fractionate_prior(const ModelSpec& spec, int num_shards);

/// Draws T retained samples from the subposterior of one shard. The
/// conjugate models draw exactly from the closed-form posterior (burnin
/// draws are generated and discarded for interface uniformity); the MVN
/// model runs a component-wise Gibbs sampler with truncated-normal full
/// conditionals. Throws ChainDiagnosticError if a retained draw is
/// non-finite.
SubposteriorSamples sample_subposterior(const ModelSpec& spec,
                                        const DataShard& shard,
                                        const FractionatedPrior& prior,
                                        int iterations, int burnin,
                                        std::uint64_t seed);

/// Reference chain: the same machinery with M = 1 and the unfractionated
/// prior applied to the full data set.
SubposteriorSamples sample_full_posterior(const ModelSpec& spec,
                                          const Dataset& data, int iterations,
                                          int burnin, std::uint64_t seed);

/// Collapses the full data set into a single shard (used by the reference
/// chain and by M = 1 runs).
DataShard full_data_as_shard(const Dataset& data);

/// Samples CSV serialization: header `iteration,param_1,...,param_d`.
void write_samples_csv(const SubposteriorSamples& samples, const std::string& path);

}  // namespace dpmc
