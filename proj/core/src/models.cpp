#include "dpmc/models.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "dpmc/errors.hpp"

namespace dpmc {

// ---------------------------------------------------------------------------
// ModelSpec

void ModelSpec::validate() const {
  if (data_size < 1) {
    throw ConfigError("model: data_size must be positive");
  }
  std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BinomialBetaModel>) {
          if (!(m.p_true > 0.0 && m.p_true < 1.0)) {
            throw ConfigError("binomial: p_true must be in (0, 1)");
          }
          if (!(m.alpha > 0.0 && m.beta > 0.0)) {
            throw ConfigError("binomial: prior parameters must be positive");
          }
        } else if constexpr (std::is_same_v<T, MultinomialDirichletModel>) {
          if (m.p.size() < 2 || m.p.size() != m.alpha.size()) {
            throw ConfigError("multinomial: p and alpha must match, size >= 2");
          }
          double total = 0.0;
          for (double pj : m.p) {
            if (!(pj > 0.0)) {
              throw ConfigError("multinomial: probabilities must be positive");
            }
            total += pj;
          }
          if (std::abs(total - 1.0) > 1e-12) {
            throw ConfigError("multinomial: probabilities must sum to 1");
          }
          for (double aj : m.alpha) {
            if (!(aj > 0.0)) {
              throw ConfigError("multinomial: alpha entries must be positive");
            }
          }
        } else {
          const auto d = m.mu.size();
          if (d < 1 || m.sigma.rows() != d || m.sigma.cols() != d ||
              m.lambda.size() != d) {
            throw ConfigError("mvn: mu, sigma, lambda dimensions must agree");
          }
          if (!m.sigma.isApprox(m.sigma.transpose())) {
            throw ConfigError("mvn: sigma must be symmetric");
          }
          if ((m.lambda.array() <= 0.0).any()) {
            throw ConfigError("mvn: lambda entries must be positive");
          }
          Eigen::LLT<Eigen::MatrixXd> llt(m.sigma);
          if (llt.info() != Eigen::Success) {
            throw ConfigError("mvn: sigma must be positive definite");
          }
        }
      },
      variant);
}

int ModelSpec::dimension() const {
  return std::visit(
      [](const auto& m) -> int {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BinomialBetaModel>) {
          return 1;
        } else if constexpr (std::is_same_v<T, MultinomialDirichletModel>) {
          return static_cast<int>(m.p.size());
        } else {
          return static_cast<int>(m.mu.size());
        }
      },
      variant);
}

int ModelSpec::estimated_parameters() const {
  if (std::holds_alternative<MultinomialDirichletModel>(variant)) {
    return dimension() - 1;
  }
  return dimension();
}

std::pair<bool, std::pair<double, double>> ModelSpec::bounded_support() const {
  return std::visit(
      [](const auto& m) -> std::pair<bool, std::pair<double, double>> {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, MvnExponentialModel>) {
          return {true, {0.0, std::numeric_limits<double>::infinity()}};
        } else {
          (void)m;
          return {true, {0.0, 1.0}};
        }
      },
      variant);
}

std::string ModelSpec::name() const {
  if (std::holds_alternative<BinomialBetaModel>(variant)) {
    return "binomial_beta";
  }
  if (std::holds_alternative<MultinomialDirichletModel>(variant)) {
    return "multinomial_dirichlet";
  }
  return "mvn_exponential";
}

// ---------------------------------------------------------------------------
// Data handling

std::int64_t dataset_size(const Dataset& data) {
  return std::visit(
      [](const auto& d) -> std::int64_t {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, BinaryData>) {
          return static_cast<std::int64_t>(d.outcomes.size());
        } else if constexpr (std::is_same_v<T, CategoryData>) {
          return static_cast<std::int64_t>(d.categories.size());
        } else {
          return d.rows.rows();
        }
      },
      data);
}

std::int64_t DataShard::size() const {
  return std::visit(
      [](const auto& d) -> std::int64_t {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, BinomialShard>) {
          return d.trials;
        } else if constexpr (std::is_same_v<T, MultinomialShard>) {
          return std::accumulate(d.counts.begin(), d.counts.end(),
                                 std::int64_t{0});
        } else {
          return d.rows.rows();
        }
      },
      data);
}

Dataset simulate_data(const ModelSpec& spec, Rng& rng) {
  spec.validate();
  const std::int64_t r = spec.data_size;
  return std::visit(
      [&](const auto& m) -> Dataset {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BinomialBetaModel>) {
          BinaryData data;
          data.outcomes.resize(r);
          for (std::int64_t i = 0; i < r; ++i) {
            data.outcomes[i] = rng.uniform() < m.p_true ? 1 : 0;
          }
          return data;
        } else if constexpr (std::is_same_v<T, MultinomialDirichletModel>) {
          CategoryData data;
          data.num_categories = static_cast<int>(m.p.size());
          data.categories.resize(r);
          std::vector<double> cdf(m.p.size());
          std::partial_sum(m.p.begin(), m.p.end(), cdf.begin());
          for (std::int64_t i = 0; i < r; ++i) {
            const double u = rng.uniform();
            const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
            data.categories[i] = static_cast<std::uint8_t>(
                std::min<std::ptrdiff_t>(it - cdf.begin(),
                                         data.num_categories - 1));
          }
          return data;
        } else {
          const auto d = m.mu.size();
          Eigen::LLT<Eigen::MatrixXd> llt(m.sigma);
          if (llt.info() != Eigen::Success) {
            throw ConfigError("simulate_data: sigma Cholesky failed");
          }
          const Eigen::MatrixXd chol = llt.matrixL();
          MatrixData data;
          data.rows.resize(r, d);
          Eigen::VectorXd z(d);
          for (std::int64_t i = 0; i < r; ++i) {
            for (Eigen::Index j = 0; j < d; ++j) {
              z[j] = rng.normal();
            }
            data.rows.row(i) = (m.mu + chol * z).transpose();
          }
          return data;
        }
      },
      spec.variant);
}

namespace {

std::vector<std::int64_t> shard_sizes(std::int64_t r, int num_shards) {
  std::vector<std::int64_t> sizes(num_shards, r / num_shards);
  for (std::int64_t i = 0; i < r % num_shards; ++i) {
    ++sizes[i];
  }
  return sizes;
}

}  // namespace

std::vector<DataShard> partition(const Dataset& data, int num_shards, Rng& rng) {
  const std::int64_t r = dataset_size(data);
  if (num_shards < 1 || num_shards > r) {
    throw ConfigError("partition: requires 1 <= M <= data size");
  }
  std::vector<std::int64_t> perm(r);
  std::iota(perm.begin(), perm.end(), std::int64_t{0});
  std::shuffle(perm.begin(), perm.end(), rng.engine());

  const std::vector<std::int64_t> sizes = shard_sizes(r, num_shards);
  std::vector<DataShard> shards;
  shards.reserve(num_shards);
  std::int64_t offset = 0;
  for (int m = 0; m < num_shards; ++m) {
    DataShard shard;
    shard.shard_id = m + 1;
    std::visit(
        [&](const auto& d) {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, BinaryData>) {
            BinomialShard s{sizes[m], 0};
            for (std::int64_t i = 0; i < sizes[m]; ++i) {
              s.successes += d.outcomes[perm[offset + i]];
            }
            shard.data = s;
          } else if constexpr (std::is_same_v<T, CategoryData>) {
            MultinomialShard s;
            s.counts.assign(d.num_categories, 0);
            for (std::int64_t i = 0; i < sizes[m]; ++i) {
              ++s.counts[d.categories[perm[offset + i]]];
            }
            shard.data = s;
          } else {
            MvnShard s;
            s.rows.resize(sizes[m], d.rows.cols());
            for (std::int64_t i = 0; i < sizes[m]; ++i) {
              s.rows.row(i) = d.rows.row(perm[offset + i]);
            }
            shard.data = s;
          }
        },
        data);
    offset += sizes[m];
    shards.push_back(std::move(shard));
  }
  return shards;
}

DataShard full_data_as_shard(const Dataset& data) {
  DataShard shard;
  shard.shard_id = 0;
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, BinaryData>) {
          BinomialShard s{static_cast<std::int64_t>(d.outcomes.size()), 0};
          for (std::uint8_t o : d.outcomes) {
            s.successes += o;
          }
          shard.data = s;
        } else if constexpr (std::is_same_v<T, CategoryData>) {
          MultinomialShard s;
          s.counts.assign(d.num_categories, 0);
          for (std::uint8_t c : d.categories) {
            ++s.counts[c];
          }
          shard.data = s;
        } else {
          shard.data = MvnShard{d.rows};
        }
      },
      data);
  return shard;
}

FractionatedPrior fractionate_prior(const ModelSpec& spec, int num_shards) {
  if (num_shards < 1) {
    throw ConfigError("fractionate_prior: M must be >= 1");
  }
  const double m = num_shards;
  FractionatedPrior prior;
  prior.num_shards = num_shards;
  std::visit(
      [&](const auto& model) {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, BinomialBetaModel>) {
          prior.params = BetaPrior{(model.alpha + m - 1.0) / m,
                                   (model.beta + m - 1.0) / m};
        } else if constexpr (std::is_same_v<T, MultinomialDirichletModel>) {
          DirichletPrior p;
          p.alpha.reserve(model.alpha.size());
          for (double aj : model.alpha) {
            p.alpha.push_back((aj + m - 1.0) / m);
          }
          prior.params = std::move(p);
        } else {
          prior.params = ExponentialPrior{model.lambda / m};
        }
      },
      spec.variant);
  return prior;
}

namespace {

void check_finite(const Eigen::MatrixXd& draws) {
  if (!draws.allFinite()) {
    throw ChainDiagnosticError("sampler produced non-finite draws");
  }
}

Eigen::MatrixXd sample_beta_posterior(const BinomialShard& shard,
                                      const BetaPrior& prior, int iterations,
                                      int burnin, Rng& rng) {
  const double a = prior.alpha + static_cast<double>(shard.successes);
  const double b =
      prior.beta + static_cast<double>(shard.trials - shard.successes);
  for (int t = 0; t < burnin; ++t) {
    (void)rng.beta(a, b);
  }
  Eigen::MatrixXd draws(iterations, 1);
  for (int t = 0; t < iterations; ++t) {
    draws(t, 0) = rng.beta(a, b);
  }
  return draws;
}

Eigen::MatrixXd sample_dirichlet_posterior(const MultinomialShard& shard,
                                           const DirichletPrior& prior,
                                           int iterations, int burnin,
                                           Rng& rng) {
  const auto d = static_cast<int>(prior.alpha.size());
  std::vector<double> alpha_post(d);
  for (int j = 0; j < d; ++j) {
    alpha_post[j] = prior.alpha[j] + static_cast<double>(shard.counts[j]);
  }
  std::vector<double> draw(d);
  for (int t = 0; t < burnin; ++t) {
    rng.dirichlet(alpha_post, draw);
  }
  Eigen::MatrixXd draws(iterations, d);
  for (int t = 0; t < iterations; ++t) {
    rng.dirichlet(alpha_post, draw);
    for (int j = 0; j < d; ++j) {
      draws(t, j) = draw[j];
    }
  }
  return draws;
}

/// Component-wise Gibbs for the MVN-mean model with exponential priors.
/// The likelihood contributes mu | data ~ N(ybar, Sigma / n); with
/// precision L = n * Sigma^{-1}, the full conditional of mu_j is
///   N(ybar_j - sum_{i != j} L_ji (mu_i - ybar_i) / L_jj - lambda_j / L_jj,
///     1 / L_jj)
/// truncated to (0, inf).
Eigen::MatrixXd sample_mvn_gibbs(const MvnShard& shard,
                                 const MvnExponentialModel& model,
                                 const ExponentialPrior& prior, int iterations,
                                 int burnin, Rng& rng) {
  const auto d = model.mu.size();
  const auto n = static_cast<double>(shard.rows.rows());
  const Eigen::VectorXd ybar = shard.rows.colwise().mean();
  const Eigen::MatrixXd precision =
      n * model.sigma.llt().solve(Eigen::MatrixXd::Identity(d, d));

  Eigen::VectorXd mu = ybar.cwiseMax(1e-8);
  Eigen::MatrixXd draws(iterations, d);
  for (int t = -burnin; t < iterations; ++t) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const double prec_jj = precision(j, j);
      const double var_j = 1.0 / prec_jj;
      double cross = precision.row(j).dot(mu - ybar) -
                     prec_jj * (mu[j] - ybar[j]);
      const double mean_j =
          ybar[j] - cross * var_j - prior.lambda[j] * var_j;
      mu[j] = rng.truncated_normal_above(mean_j, std::sqrt(var_j), 0.0);
    }
    if (t >= 0) {
      draws.row(t) = mu.transpose();
    }
  }
  return draws;
}

}  // namespace

SubposteriorSamples sample_subposterior(const ModelSpec& spec,
                                        const DataShard& shard,
                                        const FractionatedPrior& prior,
                                        int iterations, int burnin,
                                        std::uint64_t seed) {
  if (iterations < 1 || burnin < 0) {
    throw ConfigError("sample_subposterior: requires T >= 1 and burnin >= 0");
  }
  Rng rng(seed);
  SubposteriorSamples result;
  result.shard_id = shard.shard_id;
  result.seed = seed;
  result.burnin = burnin;

  if (const auto* bin = std::get_if<BinomialShard>(&shard.data)) {
    result.draws = sample_beta_posterior(*bin, std::get<BetaPrior>(prior.params),
                                         iterations, burnin, rng);
  } else if (const auto* multi = std::get_if<MultinomialShard>(&shard.data)) {
    result.draws = sample_dirichlet_posterior(
        *multi, std::get<DirichletPrior>(prior.params), iterations, burnin, rng);
  } else {
    result.draws = sample_mvn_gibbs(
        std::get<MvnShard>(shard.data),
        std::get<MvnExponentialModel>(spec.variant),
        std::get<ExponentialPrior>(prior.params), iterations, burnin, rng);
  }
  check_finite(result.draws);
  return result;
}

SubposteriorSamples sample_full_posterior(const ModelSpec& spec,
                                          const Dataset& data, int iterations,
                                          int burnin, std::uint64_t seed) {
  const DataShard shard = full_data_as_shard(data);
  const FractionatedPrior prior = fractionate_prior(spec, 1);
  return sample_subposterior(spec, shard, prior, iterations, burnin, seed);
}

void write_samples_csv(const SubposteriorSamples& samples,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw ConfigError("cannot open for writing: " + path);
  }
  out << "iteration";
  for (Eigen::Index j = 0; j < samples.draws.cols(); ++j) {
    out << ",param_" << (j + 1);
  }
  out << "\n";
  char buf[64];
  for (Eigen::Index t = 0; t < samples.draws.rows(); ++t) {
    out << (t + 1);
    for (Eigen::Index j = 0; j < samples.draws.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), ",%.17g", samples.draws(t, j));
      out << buf;
    }
    out << "\n";
  }
}

}  // namespace dpmc
