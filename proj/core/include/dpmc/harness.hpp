#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dpmc/combiners.hpp"
#include "dpmc/density_estimation.hpp"
#include "dpmc/density_product.hpp"
#include "dpmc/metrics.hpp"
#include "dpmc/models.hpp"

namespace dpmc {

struct ExperimentConfig {
  ModelSpec model;
  int num_shards = 10;
  int iterations = 50000;  // retained draws per chain
  int burnin = 5000;
  EstimatorSpec estimator;
  GridConfig grid;
  std::vector<CombineMethod> methods;
  std::uint64_t master_seed = 1;
  std::string out_dir = "run";
  bool want_samples = false;
  bool keep_densities = true;
  bool save_samples = false;
  int threads = 0;  // 0 = hardware concurrency

  void validate() const;
};

/// Loads a JSON experiment config. Unknown model variants, malformed
/// fields, or violated invariants raise ConfigError.
ExperimentConfig load_config(const std::filesystem::path& path);

struct StageTimes {
  double sampling_seconds = 0.0;
  double combining_seconds = 0.0;
  double metrics_seconds = 0.0;
  double total_seconds = 0.0;
};

/// Seed derivation rule (recorded in output metadata): data simulation and
/// partitioning use the master seed; shard m uses master + m; the full-data
/// chain uses master + M + 1; the DPE sampler uses master + M + 2; inverse-
/// CDF sampling for parameter j uses master + M + 2 + j.
struct SeedPlan {
  std::uint64_t master = 0;
  int num_shards = 0;
  std::uint64_t data() const { return master; }
  std::uint64_t shard(int m) const { return master + static_cast<std::uint64_t>(m); }
  std::uint64_t full_chain() const { return master + num_shards + 1; }
  std::uint64_t dpe() const { return master + num_shards + 2; }
  std::uint64_t direct_sampling(int parameter) const {
    return master + num_shards + 2 + static_cast<std::uint64_t>(parameter);
  }
  static std::string rule() {
    return "data=master; shard_m=master+m; full=master+M+1; dpe=master+M+2; "
           "direct_sampling_j=master+M+2+j";
  }
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<L2Report> method_reports;  // one per requested method
  StageTimes times;
  std::vector<std::uint64_t> shard_seeds;
  std::uint64_t full_chain_seed = 0;
  std::vector<Grid> parameter_grids;  // shared metric grid per parameter
};

/// Full pipeline: simulate, partition, fractionate, sample the shard and
/// full-data chains, run each requested combiner, compute relative L2
/// distances against the smoothed full-data chain, and persist report.csv,
/// report.json and (optionally) per-parameter density bundles under
/// config.out_dir. Deterministic given the master seed.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Regenerates plottable CSV bundles for one parameter from a finished run
/// directory: a subposterior-densities file (x plus M columns) and a
/// comparison file (x, full-data density, one column per method). Throws
/// MissingDensitiesError when the run discarded densities and ConfigError
/// for a parameter that was not estimated.
void export_plot_data(const std::filesystem::path& run_dir, int parameter);

/// Pretty-prints the stored report of a finished run directory.
std::string format_report(const std::filesystem::path& run_dir);

}  // namespace dpmc
