#include "dpmc/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "dpmc/errors.hpp"
#include "dpmc/inverse_cdf.hpp"

namespace dpmc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Small utilities

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Runs fn(0..count-1) on up to `threads` workers; rethrows the first
/// exception after all workers join. Task-to-result mapping is by index, so
/// results are independent of scheduling.
void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
  }
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) {
      fn(i);
    }
    return;
  }
  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    workers.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) {
          return;
        }
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) {
            error = std::current_exception();
          }
          return;
        }
      }
    });
  }
  for (std::thread& t : workers) {
    t.join();
  }
  if (error) {
    std::rethrow_exception(error);
  }
}

MarginalSamples column_samples(const Eigen::MatrixXd& draws, int j, int shard_id) {
  MarginalSamples m;
  m.shard_id = shard_id;
  m.parameter_index = j + 1;
  m.values.assign(draws.col(j).begin(), draws.col(j).end());
  return m;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

// ---------------------------------------------------------------------------
// Config parsing

Eigen::VectorXd parse_vector(const json& j, int dim, const char* what) {
  if (j.is_number()) {
    return Eigen::VectorXd::Constant(dim, j.get<double>());
  }
  if (j.is_array()) {
    if (static_cast<int>(j.size()) != dim) {
      throw ConfigError(std::string(what) + ": expected " + std::to_string(dim) +
                        " entries");
    }
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) {
      v[i] = j[i].get<double>();
    }
    return v;
  }
  throw ConfigError(std::string(what) + ": expected number or array");
}

ModelSpec parse_model(const json& j) {
  if (!j.is_object() || !j.contains("variant")) {
    throw ConfigError("config: model.variant is required");
  }
  const std::string variant = j.at("variant").get<std::string>();
  ModelSpec spec;
  if (variant == "binomial_beta") {
    BinomialBetaModel m;
    m.p_true = j.value("p_true", 0.001);
    m.alpha = j.value("alpha", 1.0);
    m.beta = j.value("beta", 1.0);
    spec.variant = m;
  } else if (variant == "multinomial_dirichlet") {
    MultinomialDirichletModel m;
    if (j.contains("p") && j.at("p").is_array()) {
      m.p = j.at("p").get<std::vector<double>>();
    } else if (j.contains("rare_probability") && j.contains("categories")) {
      const int cats = j.at("categories").get<int>();
      const double rare = j.at("rare_probability").get<double>();
      m.p.assign(cats - 1, rare);
      m.p.push_back(1.0 - rare * (cats - 1));
    } else {
      throw ConfigError("multinomial: provide p[] or rare_probability+categories");
    }
    const int cats = static_cast<int>(m.p.size());
    if (j.contains("alpha")) {
      const json& a = j.at("alpha");
      if (a.is_number()) {
        m.alpha.assign(cats, a.get<double>());
      } else {
        m.alpha = a.get<std::vector<double>>();
      }
    } else {
      m.alpha.assign(cats, 1.0);
    }
    spec.variant = m;
  } else if (variant == "mvn_exponential") {
    const int dim = j.value("dim", 20);
    MvnExponentialModel m;
    m.mu = parse_vector(j.value("mu", json(1000.0)), dim, "mvn.mu");
    m.lambda = parse_vector(j.value("lambda", json(1.0)), dim, "mvn.lambda");
    const json& sig = j.at("sigma");
    if (sig.is_object()) {
      const double diag = sig.at("diagonal").get<double>();
      const double off = sig.value("off_diagonal", 0.0);
      m.sigma = Eigen::MatrixXd::Constant(dim, dim, off);
      m.sigma.diagonal().setConstant(diag);
    } else if (sig.is_array()) {
      m.sigma.resize(dim, dim);
      for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
          m.sigma(r, c) = sig.at(r).at(c).get<double>();
        }
      }
    } else {
      throw ConfigError("mvn.sigma: expected object or matrix");
    }
    spec.variant = m;
  } else {
    throw ConfigError("config: unknown model variant '" + variant + "'");
  }
  return spec;
}

EstimatorKind parse_kind(const std::string& s) {
  if (s == "gaussian_kde") return EstimatorKind::gaussian_kde;
  if (s == "reflected_kde") return EstimatorKind::reflected_kde;
  if (s == "logspline_like") return EstimatorKind::logspline_like;
  throw ConfigError("config: unknown estimator kind '" + s + "'");
}

std::string kind_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::gaussian_kde:
      return "gaussian_kde";
    case EstimatorKind::reflected_kde:
      return "reflected_kde";
    case EstimatorKind::logspline_like:
      return "logspline_like";
  }
  return "unknown";
}

BandwidthRule parse_rule(const std::string& s) {
  if (s == "silverman") return BandwidthRule::silverman;
  if (s == "scott") return BandwidthRule::scott;
  if (s == "fixed") return BandwidthRule::fixed;
  throw ConfigError("config: unknown bandwidth rule '" + s + "'");
}

std::string rule_name(BandwidthRule rule) {
  switch (rule) {
    case BandwidthRule::silverman:
      return "silverman";
    case BandwidthRule::scott:
      return "scott";
    case BandwidthRule::fixed:
      return "fixed";
  }
  return "unknown";
}

Support default_support(const ModelSpec& model) {
  Support s;
  const auto [bounded, bounds] = model.bounded_support();
  if (bounded) {
    s.lower = bounds.first;
    if (std::isfinite(bounds.second)) {
      s.upper = bounds.second;
    }
  }
  return s;
}

}  // namespace

void ExperimentConfig::validate() const {
  model.validate();
  if (num_shards < 1) {
    throw ConfigError("config: num_shards must be >= 1");
  }
  if (iterations < 1 || burnin < 0 || iterations <= burnin) {
    throw ConfigError("config: requires iterations > burnin >= 0");
  }
  if (methods.empty()) {
    throw ConfigError("config: methods must be non-empty");
  }
  if (grid.order < 1 ||
      (grid.order != 1 && grid.order != 2 && grid.order != 4)) {
    throw ConfigError("config: grid order must be 1, 2 or 4");
  }
  if (estimator.bandwidth_rule == BandwidthRule::fixed &&
      !(estimator.fixed_bandwidth > 0.0)) {
    throw ConfigError("config: fixed bandwidth must be positive");
  }
  if (estimator.support.lower && estimator.support.upper &&
      !(*estimator.support.lower < *estimator.support.upper)) {
    throw ConfigError("config: estimator support lower must be < upper");
  }
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config: " + path.string());
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config parse error: " + std::string(e.what()));
  }
  try {
    ExperimentConfig config;
    config.model = parse_model(j.at("model"));
    config.model.data_size = j.value("data_size", std::int64_t{100000});
    config.num_shards = j.value("num_shards", 10);
    config.iterations = j.value("iterations", 50000);
    config.burnin = j.value("burnin", 5000);
    config.master_seed = j.value("seed", std::uint64_t{1});
    config.out_dir = j.value("out_dir", std::string("run"));
    config.want_samples = j.value("want_samples", false);
    config.keep_densities = j.value("keep_densities", true);
    config.save_samples = j.value("save_samples", false);
    config.threads = j.value("threads", 0);

    config.estimator.support = default_support(config.model);
    if (j.contains("estimator")) {
      const json& e = j.at("estimator");
      if (e.contains("kind")) {
        config.estimator.kind = parse_kind(e.at("kind").get<std::string>());
      }
      if (e.contains("bandwidth_rule")) {
        config.estimator.bandwidth_rule =
            parse_rule(e.at("bandwidth_rule").get<std::string>());
      }
      if (e.contains("fixed_bandwidth")) {
        config.estimator.fixed_bandwidth = e.at("fixed_bandwidth").get<double>();
      }
      if (e.contains("support")) {
        const json& s = e.at("support");
        config.estimator.support = Support{};
        if (s.is_array() && s.size() == 2) {
          if (!s[0].is_null()) config.estimator.support.lower = s[0].get<double>();
          if (!s[1].is_null()) config.estimator.support.upper = s[1].get<double>();
        } else {
          throw ConfigError("config: estimator.support must be [lower, upper]");
        }
      }
    }
    if (j.contains("grid")) {
      const json& g = j.at("grid");
      if (g.contains("absolute_dx")) {
        config.grid.absolute_dx = g.at("absolute_dx").get<double>();
      }
      config.grid.relative_dx = g.value("relative_dx", config.grid.relative_dx);
      config.grid.order = g.value("order", config.grid.order);
      config.grid.padding_fraction =
          g.value("padding_fraction", config.grid.padding_fraction);
    }
    if (j.contains("methods")) {
      for (const json& name : j.at("methods")) {
        config.methods.push_back(method_from_name(name.get<std::string>()));
      }
    } else {
      config.methods = {CombineMethod::direct, CombineMethod::consensus,
                        CombineMethod::dpe, CombineMethod::average};
    }
    config.validate();
    return config;
  } catch (const json::exception& e) {
    throw ConfigError("config field error: " + std::string(e.what()));
  }
}

// ---------------------------------------------------------------------------
// Report persistence

namespace {

json estimator_json(const EstimatorSpec& e) {
  json s = json::array({nullptr, nullptr});
  if (e.support.lower) s[0] = *e.support.lower;
  if (e.support.upper) s[1] = *e.support.upper;
  json out{{"kind", kind_name(e.kind)},
           {"bandwidth_rule", rule_name(e.bandwidth_rule)},
           {"support", s}};
  if (e.bandwidth_rule == BandwidthRule::fixed) {
    out["fixed_bandwidth"] = e.fixed_bandwidth;
  }
  return out;
}

void write_report_files(const ExperimentReport& report, const fs::path& dir) {
  const ExperimentConfig& config = report.config;
  const std::string model_name = config.model.name();
  const int d_est = config.model.estimated_parameters();

  std::ofstream csv(dir / "report.csv");
  csv << "model,d,M,method,parameter,relative_l2\n";
  for (const L2Report& r : report.method_reports) {
    const std::string prefix = model_name + "," + std::to_string(d_est) + "," +
                               std::to_string(config.num_shards) + "," +
                               method_name(r.method) + ",";
    for (std::size_t j = 0; j < r.per_parameter.size(); ++j) {
      csv << prefix << (j + 1) << "," << fmt17(r.per_parameter[j]) << "\n";
    }
    csv << prefix << "average," << fmt17(r.average) << "\n";
  }
  csv.close();

  json results = json::array();
  for (const L2Report& r : report.method_reports) {
    results.push_back(json{{"method", method_name(r.method)},
                           {"average", r.average},
                           {"per_parameter", r.per_parameter}});
  }
  json grid_j{{"order", config.grid.order},
              {"relative_dx", config.grid.relative_dx},
              {"padding_fraction", config.grid.padding_fraction}};
  if (config.grid.absolute_dx) {
    grid_j["absolute_dx"] = *config.grid.absolute_dx;
  }
  json methods = json::array();
  for (CombineMethod m : config.methods) {
    methods.push_back(method_name(m));
  }
  json out{{"model", model_name},
           {"d", d_est},
           {"data_size", config.model.data_size},
           {"num_shards", config.num_shards},
           {"iterations", config.iterations},
           {"burnin", config.burnin},
           {"master_seed", config.master_seed},
           {"seed_rule", SeedPlan::rule()},
           {"shard_seeds", report.shard_seeds},
           {"full_chain_seed", report.full_chain_seed},
           {"methods", methods},
           {"estimator", estimator_json(config.estimator)},
           {"grid", grid_j},
           {"keep_densities", config.keep_densities},
           {"want_samples", config.want_samples},
           {"times", {{"sampling_seconds", report.times.sampling_seconds},
                      {"combining_seconds", report.times.combining_seconds},
                      {"metrics_seconds", report.times.metrics_seconds},
                      {"total_seconds", report.times.total_seconds}}},
           {"results", results}};
  std::ofstream js(dir / "report.json");
  js << out.dump(2) << "\n";
}

}  // namespace

// ---------------------------------------------------------------------------
// run_experiment

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  const fs::path out_dir(config.out_dir);
  fs::create_directories(out_dir);

  const int num_shards = config.num_shards;
  const int d_est = config.model.estimated_parameters();
  const SeedPlan seeds{config.master_seed, num_shards};

  ExperimentReport report;
  report.config = config;
  report.full_chain_seed = seeds.full_chain();
  for (int m = 1; m <= num_shards; ++m) {
    report.shard_seeds.push_back(seeds.shard(m));
  }

  const auto overall_start = std::chrono::steady_clock::now();

  // --- Stage 1: simulate, partition, sample all chains.
  auto stage_start = overall_start;
  Rng data_rng(seeds.data());
  const Dataset data = simulate_data(config.model, data_rng);
  const std::vector<DataShard> shards = partition(data, num_shards, data_rng);
  const FractionatedPrior prior = fractionate_prior(config.model, num_shards);

  std::vector<SubposteriorSamples> subs(num_shards);
  SubposteriorSamples full_chain;
  parallel_for(num_shards + 1, config.threads, [&](int i) {
    if (i < num_shards) {
      subs[i] = sample_subposterior(config.model, shards[i], prior,
                                    config.iterations, config.burnin,
                                    seeds.shard(i + 1));
    } else {
      full_chain = sample_full_posterior(config.model, data, config.iterations,
                                         config.burnin, seeds.full_chain());
    }
  });

  // The multinomial model reports only the first d-1 marginals (the last
  // category is determined by the others); drop the dependent column before
  // combining so consensus covariances stay non-singular.
  for (SubposteriorSamples& s : subs) {
    if (s.draws.cols() > d_est) {
      s.draws.conservativeResize(Eigen::NoChange, d_est);
    }
  }
  if (full_chain.draws.cols() > d_est) {
    full_chain.draws.conservativeResize(Eigen::NoChange, d_est);
  }
  report.times.sampling_seconds = seconds_since(stage_start);

  // --- Stage 2: combiners (including the direct density pipeline).
  stage_start = std::chrono::steady_clock::now();
  std::map<CombineMethod, CombinedSamples> combined;
  for (CombineMethod method : config.methods) {
    switch (method) {
      case CombineMethod::average:
        combined.emplace(method, combine_average(subs));
        break;
      case CombineMethod::consensus:
        combined.emplace(method, combine_consensus(subs, shard_weights(subs)));
        break;
      case CombineMethod::dpe: {
        Rng dpe_rng(seeds.dpe());
        const std::int64_t scans =
            config.iterations + (config.iterations + 9) / 10;
        combined.emplace(method,
                         combine_dpe(subs, dpe_default_bandwidth(subs), scans,
                                     dpe_rng));
        break;
      }
      case CombineMethod::direct:
        break;  // handled below, after the shared grids exist
    }
  }

  // Shared per-parameter grid spanning every sample set that will be
  // evaluated on it (shards, full chain, combined draws).
  report.parameter_grids.reserve(d_est);
  for (int j = 0; j < d_est; ++j) {
    std::vector<MarginalSamples> marginals;
    for (const SubposteriorSamples& s : subs) {
      marginals.push_back(column_samples(s.draws, j, s.shard_id));
    }
    marginals.push_back(column_samples(full_chain.draws, j, 0));
    for (const auto& [method, c] : combined) {
      marginals.push_back(column_samples(c.draws, j, -1));
    }
    const auto [a, b] = select_range(marginals, config.grid.padding_fraction,
                                     config.estimator.support);
    report.parameter_grids.push_back(
        build_grid(a, b, config.grid.dx_for(a, b), config.grid.order));
  }

  const bool run_direct =
      std::find(config.methods.begin(), config.methods.end(),
                CombineMethod::direct) != config.methods.end();
  const bool need_shard_densities = run_direct || config.keep_densities;

  // Shard densities per parameter on the shared grid (reused for both the
  // direct product and the plot bundles).
  std::vector<std::vector<GriddedDensity>> shard_densities(d_est);
  std::vector<MarginalEstimate> direct_estimates(d_est);
  if (need_shard_densities) {
    parallel_for(d_est, config.threads, [&](int j) {
      std::vector<GriddedDensity> densities;
      densities.reserve(num_shards);
      for (const SubposteriorSamples& s : subs) {
        densities.push_back(estimate_density(
            column_samples(s.draws, j, s.shard_id), config.estimator,
            report.parameter_grids[j]));
      }
      if (run_direct) {
        MarginalEstimate est;
        est.parameter_index = j + 1;
        est.density = product_of_densities(densities);
        if (config.want_samples) {
          Rng sample_rng(seeds.direct_sampling(j + 1));
          est.samples = inverse_cdf_sample(
              est.density, static_cast<std::size_t>(config.iterations),
              sample_rng);
        }
        direct_estimates[j] = std::move(est);
      }
      shard_densities[j] = std::move(densities);
    });
  }
  report.times.combining_seconds = seconds_since(stage_start);

  // --- Stage 3: metrics.
  stage_start = std::chrono::steady_clock::now();
  std::vector<GriddedDensity> full_densities(d_est);
  std::map<CombineMethod, std::vector<double>> distances;
  for (CombineMethod method : config.methods) {
    distances[method].assign(d_est, 0.0);
  }
  parallel_for(d_est, config.threads, [&](int j) {
    full_densities[j] = method_pipeline_density(
        column_samples(full_chain.draws, j, 0), config.estimator,
        report.parameter_grids[j]);
    for (CombineMethod method : config.methods) {
      if (method == CombineMethod::direct) {
        distances.at(method)[j] =
            relative_l2(full_densities[j], direct_estimates[j].density);
      } else {
        const GriddedDensity density = method_pipeline_density(
            column_samples(combined.at(method).draws, j, -1), config.estimator,
            report.parameter_grids[j]);
        distances.at(method)[j] = relative_l2(full_densities[j], density);
      }
    }
  });
  for (CombineMethod method : config.methods) {
    report.method_reports.push_back(make_l2_report(
        distances[method], method, config.model.name(), num_shards));
  }
  report.times.metrics_seconds = seconds_since(stage_start);
  report.times.total_seconds = seconds_since(overall_start);

  // --- Persistence.
  write_report_files(report, out_dir);
  if (config.keep_densities) {
    fs::create_directories(out_dir / "densities");
    for (int j = 0; j < d_est; ++j) {
      std::ofstream out(out_dir / "densities" /
                        ("param_" + std::to_string(j + 1) + ".csv"));
      out << "x";
      for (int m = 1; m <= num_shards; ++m) {
        out << ",shard_" << m;
      }
      out << ",full";
      for (CombineMethod method : config.methods) {
        out << "," << method_name(method);
      }
      out << "\n";
      std::vector<GriddedDensity> normalized_shards;
      normalized_shards.reserve(num_shards);
      for (const GriddedDensity& d : shard_densities[j]) {
        normalized_shards.push_back(normalize_density(d));
      }
      std::map<CombineMethod, GriddedDensity> method_densities;
      for (CombineMethod method : config.methods) {
        if (method == CombineMethod::direct) {
          method_densities.emplace(method, direct_estimates[j].density);
        } else {
          method_densities.emplace(
              method, method_pipeline_density(
                          column_samples(combined.at(method).draws, j, -1),
                          config.estimator, report.parameter_grids[j]));
        }
      }
      const Grid& grid = report.parameter_grids[j];
      for (int i = 0; i < grid.num_nodes(); ++i) {
        out << fmt17(grid.node(i));
        for (const GriddedDensity& d : normalized_shards) {
          out << "," << fmt17(d.values[i]);
        }
        out << "," << fmt17(full_densities[j].values[i]);
        for (CombineMethod method : config.methods) {
          out << "," << fmt17(method_densities.at(method).values[i]);
        }
        out << "\n";
      }
    }
  }
  if (config.save_samples) {
    fs::create_directories(out_dir / "samples");
    for (const SubposteriorSamples& s : subs) {
      write_samples_csv(
          s, (out_dir / "samples" /
              ("shard_" + std::to_string(s.shard_id) + ".csv")).string());
    }
    write_samples_csv(full_chain, (out_dir / "samples" / "full.csv").string());
    for (const auto& [method, c] : combined) {
      SubposteriorSamples as_samples;
      as_samples.draws = c.draws;
      write_samples_csv(as_samples, (out_dir / "samples" /
                                     (method_name(method) + ".csv")).string());
    }
  }
  if (config.want_samples && run_direct) {
    fs::create_directories(out_dir / "samples");
    SubposteriorSamples direct_samples;
    direct_samples.draws.resize(config.iterations, d_est);
    for (int j = 0; j < d_est; ++j) {
      for (int t = 0; t < config.iterations; ++t) {
        direct_samples.draws(t, j) = (*direct_estimates[j].samples)[t];
      }
    }
    write_samples_csv(direct_samples, (out_dir / "samples" / "direct.csv").string());
  }
  return report;
}

// ---------------------------------------------------------------------------
// Post-run tooling

void export_plot_data(const fs::path& run_dir, int parameter) {
  std::ifstream meta_in(run_dir / "report.json");
  if (!meta_in) {
    throw ConfigError("export_plot_data: no report.json in " + run_dir.string());
  }
  json meta;
  meta_in >> meta;
  const int d_est = meta.at("d").get<int>();
  const int num_shards = meta.at("num_shards").get<int>();
  if (parameter < 1 || parameter > d_est) {
    throw ConfigError("export_plot_data: parameter " + std::to_string(parameter) +
                      " was not estimated (1.." + std::to_string(d_est) + ")");
  }
  const fs::path density_file =
      run_dir / "densities" / ("param_" + std::to_string(parameter) + ".csv");
  std::ifstream in(density_file);
  if (!in) {
    throw MissingDensitiesError(
        "export_plot_data: densities were not retained for this run "
        "(missing " + density_file.string() + ")");
  }

  std::string header;
  std::getline(in, header);
  std::vector<std::string> columns;
  {
    std::stringstream ss(header);
    std::string field;
    while (std::getline(ss, field, ',')) {
      columns.push_back(field);
    }
  }

  fs::create_directories(run_dir / "plots");
  const std::string tag = "param_" + std::to_string(parameter);
  std::ofstream subpost(run_dir / "plots" / (tag + "_subposteriors.csv"));
  std::ofstream methods(run_dir / "plots" / (tag + "_methods.csv"));
  subpost << "x";
  for (int m = 1; m <= num_shards; ++m) {
    subpost << ",shard_" << m;
  }
  subpost << "\n";
  methods << "x";
  for (std::size_t c = num_shards + 1; c < columns.size(); ++c) {
    methods << "," << columns[c];
  }
  methods << "\n";

  std::string line;
  std::vector<std::string> fields;
  while (std::getline(in, line)) {
    fields.clear();
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      fields.push_back(field);
    }
    if (fields.size() != columns.size()) {
      continue;
    }
    subpost << fields[0];
    for (int m = 1; m <= num_shards; ++m) {
      subpost << "," << fields[m];
    }
    subpost << "\n";
    methods << fields[0];
    for (std::size_t c = num_shards + 1; c < fields.size(); ++c) {
      methods << "," << fields[c];
    }
    methods << "\n";
  }
}

std::string format_report(const fs::path& run_dir) {
  std::ifstream in(run_dir / "report.json");
  if (!in) {
    throw ConfigError("format_report: no report.json in " + run_dir.string());
  }
  json meta;
  in >> meta;
  std::ostringstream out;
  out << "model: " << meta.at("model").get<std::string>()
      << "  d=" << meta.at("d").get<int>()
      << "  M=" << meta.at("num_shards").get<int>()
      << "  T=" << meta.at("iterations").get<int>()
      << "  seed=" << meta.at("master_seed").get<std::uint64_t>() << "\n";
  out << "average relative L2 distance by method:\n";
  for (const json& r : meta.at("results")) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "  %-10s %.6g\n",
                  r.at("method").get<std::string>().c_str(),
                  r.at("average").get<double>());
    out << buf;
  }
  const json& times = meta.at("times");
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "wall time (s): sampling %.2f, combining %.2f, metrics %.2f, "
                "total %.2f\n",
                times.at("sampling_seconds").get<double>(),
                times.at("combining_seconds").get<double>(),
                times.at("metrics_seconds").get<double>(),
                times.at("total_seconds").get<double>());
  out << buf;
  return out.str();
}

}  // namespace dpmc
