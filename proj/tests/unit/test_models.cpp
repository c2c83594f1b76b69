#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <fstream>
#include <numeric>
#include <variant>
#include <vector>

#include "dpmc/errors.hpp"
#include "dpmc/models.hpp"
#include "dpmc/rng.hpp"

namespace {

dpmc::ModelSpec binomial_spec(std::int64_t n = 10000, double p = 0.001,
                              double alpha = 1.0, double beta = 1.0) {
  dpmc::ModelSpec spec;
  spec.variant = dpmc::BinomialBetaModel{p, alpha, beta};
  spec.data_size = n;
  return spec;
}

dpmc::ModelSpec mvn_spec(int d, double mu, double var, double lambda,
                         std::int64_t n) {
  dpmc::ModelSpec spec;
  dpmc::MvnExponentialModel m;
  m.mu = Eigen::VectorXd::Constant(d, mu);
  m.sigma = Eigen::MatrixXd::Identity(d, d) * var;
  m.lambda = Eigen::VectorXd::Constant(d, lambda);
  spec.variant = std::move(m);
  spec.data_size = n;
  return spec;
}

}  // namespace

TEST_SUITE_BEGIN("models");

TEST_CASE("model spec helpers") {
  auto spec = binomial_spec();
  CHECK(spec.dimension() == 1);
  CHECK(spec.estimated_parameters() == 1);
  CHECK(spec.name() == "binomial_beta");
  auto [bounded, range] = spec.bounded_support();
  CHECK(bounded);
  CHECK(range.first == 0.0);
  CHECK(range.second == 1.0);

  dpmc::ModelSpec multi;
  multi.variant = dpmc::MultinomialDirichletModel{
      {0.1, 0.2, 0.7}, {1.0, 1.0, 1.0}};
  multi.data_size = 100;
  CHECK(multi.dimension() == 3);
  CHECK(multi.estimated_parameters() == 2);
  CHECK(multi.name() == "multinomial_dirichlet");

  auto mvn = mvn_spec(4, 0.0, 1.0, 1.0, 100);
  CHECK(mvn.dimension() == 4);
  CHECK(mvn.estimated_parameters() == 4);
  CHECK(mvn.name() == "mvn_exponential");
  auto [mvn_bounded, mvn_range] = mvn.bounded_support();
  CHECK(mvn_bounded);
  CHECK(mvn_range.first == 0.0);
}

TEST_CASE("model validation rejects bad parameters") {
  CHECK_THROWS_AS(binomial_spec(0).validate(), dpmc::ConfigError);
  CHECK_THROWS_AS(binomial_spec(100, 1.5).validate(), dpmc::ConfigError);
  CHECK_THROWS_AS(binomial_spec(100, 0.5, -1.0).validate(), dpmc::ConfigError);

  dpmc::ModelSpec multi;
  multi.variant = dpmc::MultinomialDirichletModel{{0.5, 0.4}, {1.0, 1.0}};
  multi.data_size = 100;
  CHECK_THROWS_AS(multi.validate(), dpmc::ConfigError);  // probs sum to 0.9

  auto mvn = mvn_spec(3, 0.0, 1.0, -1.0, 100);
  CHECK_THROWS_AS(mvn.validate(), dpmc::ConfigError);
}

TEST_CASE("prior fractionation closed forms") {
  // Uniform Beta(1,1) prior stays uniform for any M; Exponential(1) becomes
  // rate 0.1 at M=10 and 0.05 at M=20.
  const auto spec = binomial_spec(10000, 0.001, 1.0, 1.0);
  for (int m : {10, 20}) {
    const auto prior = dpmc::fractionate_prior(spec, m);
    const auto& beta = std::get<dpmc::BetaPrior>(prior.params);
    CHECK(beta.alpha == doctest::Approx(1.0));
    CHECK(beta.beta == doctest::Approx(1.0));
  }
  // [DERIVED] alpha' = (alpha + M - 1) / M: (2+3)/4, (3+3)/4.
  const auto prior = dpmc::fractionate_prior(binomial_spec(100, 0.5, 2.0, 3.0), 4);
  const auto& beta = std::get<dpmc::BetaPrior>(prior.params);
  CHECK(beta.alpha == doctest::Approx(1.25));
  CHECK(beta.beta == doctest::Approx(1.5));

  const auto mvn10 = dpmc::fractionate_prior(mvn_spec(2, 0.0, 1.0, 1.0, 100), 10);
  CHECK(std::get<dpmc::ExponentialPrior>(mvn10.params).lambda[0] ==
        doctest::Approx(0.1));
  const auto mvn20 = dpmc::fractionate_prior(mvn_spec(2, 0.0, 1.0, 1.0, 100), 20);
  CHECK(std::get<dpmc::ExponentialPrior>(mvn20.params).lambda[1] ==
        doctest::Approx(0.05));

  // M = 1 must reproduce the original prior.
  const auto whole = dpmc::fractionate_prior(binomial_spec(100, 0.5, 2.0, 3.0), 1);
  CHECK(std::get<dpmc::BetaPrior>(whole.params).alpha == doctest::Approx(2.0));
}

TEST_CASE("partition produces near-equal disjoint shards") {
  dpmc::BinaryData data;
  data.outcomes.resize(10007);
  for (std::size_t i = 0; i < data.outcomes.size(); ++i) {
    data.outcomes[i] = (i % 97 == 0) ? 1 : 0;
  }
  const std::int64_t total_successes =
      std::accumulate(data.outcomes.begin(), data.outcomes.end(), std::int64_t{0});
  dpmc::Rng rng(3);
  const auto shards = dpmc::partition(dpmc::Dataset{data}, 10, rng);
  REQUIRE(shards.size() == 10);
  std::int64_t trials = 0, successes = 0;
  std::int64_t min_size = data.outcomes.size(), max_size = 0;
  for (std::size_t m = 0; m < shards.size(); ++m) {
    CHECK(shards[m].shard_id == static_cast<int>(m) + 1);
    const auto& b = std::get<dpmc::BinomialShard>(shards[m].data);
    trials += b.trials;
    successes += b.successes;
    min_size = std::min(min_size, b.trials);
    max_size = std::max(max_size, b.trials);
  }
  CHECK(trials == 10007);
  CHECK(successes == total_successes);
  CHECK(max_size - min_size <= 1);
}

TEST_CASE("simulated binomial data matches its generating probability") {
  auto spec = binomial_spec(200000, 0.05);
  dpmc::Rng rng(17);
  const auto data = dpmc::simulate_data(spec, rng);
  const auto& bin = std::get<dpmc::BinaryData>(data);
  REQUIRE(dpmc::dataset_size(data) == 200000);
  const double rate =
      std::accumulate(bin.outcomes.begin(), bin.outcomes.end(), 0.0) / 200000.0;
  CHECK(rate == doctest::Approx(0.05).epsilon(0.05));
}

TEST_CASE("binomial subposterior matches Beta posterior moments") {
  // Shard with 10000 trials and 13 successes under the fractionated
  // uniform prior: posterior is exactly Beta(14, 9988).
  const auto spec = binomial_spec();
  dpmc::DataShard shard{dpmc::BinomialShard{10000, 13}, 1};
  const auto prior = dpmc::fractionate_prior(spec, 10);
  const auto sub = dpmc::sample_subposterior(spec, shard, prior, 100000, 100, 5);
  REQUIRE(sub.draws.rows() == 100000);
  REQUIRE(sub.draws.cols() == 1);
  const double a = 14.0, b = 9988.0;
  const double mean_true = a / (a + b);
  const double var_true = a * b / ((a + b) * (a + b) * (a + b + 1.0));
  const double mean = sub.draws.col(0).mean();
  const double var =
      (sub.draws.col(0).array() - mean).square().sum() / (sub.draws.rows() - 1.0);
  CHECK(mean == doctest::Approx(mean_true).epsilon(0.005));
  CHECK(var == doctest::Approx(var_true).epsilon(0.05));
}

TEST_CASE("multinomial subposterior matches Dirichlet posterior moments") {
  dpmc::ModelSpec spec;
  spec.variant = dpmc::MultinomialDirichletModel{
      {0.2, 0.3, 0.5}, {1.0, 2.0, 3.0}};
  spec.data_size = 600;
  dpmc::DataShard shard{dpmc::MultinomialShard{{100, 200, 300}}, 1};
  const auto prior = dpmc::fractionate_prior(spec, 1);
  const auto sub = dpmc::sample_subposterior(spec, shard, prior, 100000, 10, 8);
  REQUIRE(sub.draws.cols() == 3);
  const double total = 1.0 + 2.0 + 3.0 + 600.0;
  for (int j = 0; j < 3; ++j) {
    const double aj = (j + 1.0) + 100.0 * (j + 1.0);
    CHECK(sub.draws.col(j).mean() ==
          doctest::Approx(aj / total).epsilon(0.01));
  }
  // Rows are probability vectors.
  CHECK(sub.draws.row(0).sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sub.draws.row(99999).sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mvn gibbs sampler recovers the conjugate-limit posterior") {
  // With diagonal sigma, a weak prior, and a mean far from the truncation
  // point the posterior is approximately N(ybar_j, sigma_jj / n) per
  // coordinate.
  const int d = 3;
  const double var = 4.0;
  auto spec = mvn_spec(d, 5.0, var, 1e-3, 2000);
  dpmc::Rng rng(29);
  const auto data = dpmc::simulate_data(spec, rng);
  const auto& rows = std::get<dpmc::MatrixData>(data).rows;
  const Eigen::VectorXd ybar = rows.colwise().mean();

  const auto shard = dpmc::full_data_as_shard(data);
  const auto prior = dpmc::fractionate_prior(spec, 1);
  const auto sub = dpmc::sample_subposterior(spec, shard, prior, 40000, 2000, 13);
  const double post_var = var / 2000.0;
  for (int j = 0; j < d; ++j) {
    const double mean = sub.draws.col(j).mean();
    const double v = (sub.draws.col(j).array() - mean).square().sum() /
                     (sub.draws.rows() - 1.0);
    CHECK(mean == doctest::Approx(ybar[j]).epsilon(0.002));
    CHECK(v == doctest::Approx(post_var).epsilon(0.08));
    CHECK(sub.draws.col(j).minCoeff() > 0.0);  // support constraint
  }
}

TEST_CASE("full posterior chain equals the M=1 subposterior machinery") {
  const auto spec = binomial_spec(5000, 0.01);
  dpmc::Rng rng(41);
  const auto data = dpmc::simulate_data(spec, rng);
  const auto full = dpmc::sample_full_posterior(spec, data, 2000, 100, 77);
  const auto shard = dpmc::full_data_as_shard(data);
  const auto prior = dpmc::fractionate_prior(spec, 1);
  const auto sub = dpmc::sample_subposterior(spec, shard, prior, 2000, 100, 77);
  CHECK(full.draws == sub.draws);  // identical seeds, identical streams
}

TEST_CASE("samples csv has the documented header") {
  dpmc::SubposteriorSamples s;
  s.draws = Eigen::MatrixXd::Zero(3, 2);
  s.draws << 1, 2, 3, 4, 5, 6;
  const std::string path = "/tmp/dpmc_test_samples.csv";
  dpmc::write_samples_csv(s, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "iteration,param_1,param_2");
  std::string row;
  std::getline(in, row);
  CHECK(row.substr(0, 2) == "1,");
}

TEST_CASE("sampler argument validation") {
  const auto spec = binomial_spec();
  dpmc::DataShard shard{dpmc::BinomialShard{100, 1}, 1};
  const auto prior = dpmc::fractionate_prior(spec, 1);
  CHECK_THROWS_AS(dpmc::sample_subposterior(spec, shard, prior, 0, 0, 1),
                  dpmc::ConfigError);
  CHECK_THROWS_AS(dpmc::sample_subposterior(spec, shard, prior, 10, -1, 1),
                  dpmc::ConfigError);
  dpmc::BinaryData tiny;
  tiny.outcomes = {0, 1, 1};
  dpmc::Rng rng(1);
  CHECK_THROWS_AS(dpmc::partition(dpmc::Dataset{tiny}, 5, rng),
                  dpmc::ConfigError);
}

TEST_SUITE_END();
