// Command line front end for the parallel-MCMC combination toolkit.
//
//   dpmc run <config.json> [--seed N] [--out DIR] [--threads N]
//            [--keep-densities|--no-keep-densities]
//   dpmc report <run_dir>
//   dpmc plots <run_dir> --param J
//
// Exit codes: 0 success, 2 configuration error, 3 numerical error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dpmc/errors.hpp"
#include "dpmc/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Embarrassingly parallel MCMC: subposterior combination toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> threads;
  bool keep_flag = false;
  bool no_keep_flag = false;

  CLI::App* run = app.add_subcommand("run", "Run an experiment from a JSON config");
  run->add_option("config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--seed", seed, "Override the master seed");
  run->add_option("--out", out_dir, "Override the output directory");
  run->add_option("--threads", threads, "Worker thread count (0 = hardware)");
  run->add_flag("--keep-densities", keep_flag,
                "Retain per-parameter density bundles");
  run->add_flag("--no-keep-densities", no_keep_flag,
                "Discard per-parameter density bundles");

  std::string run_dir;
  CLI::App* report = app.add_subcommand("report", "Pretty-print a finished run");
  report->add_option("dir", run_dir, "Run directory")->required();

  std::string plots_dir;
  int parameter = 1;
  CLI::App* plots = app.add_subcommand("plots", "Export plot data for one parameter");
  plots->add_option("dir", plots_dir, "Run directory")->required();
  plots->add_option("--param", parameter, "Parameter index (1-based)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      dpmc::ExperimentConfig config = dpmc::load_config(config_path);
      if (seed) config.master_seed = *seed;
      if (out_dir) config.out_dir = *out_dir;
      if (threads) config.threads = *threads;
      if (keep_flag) config.keep_densities = true;
      if (no_keep_flag) config.keep_densities = false;
      (void)dpmc::run_experiment(config);
      std::cout << dpmc::format_report(config.out_dir);
    } else if (report->parsed()) {
      std::cout << dpmc::format_report(run_dir);
    } else if (plots->parsed()) {
      dpmc::export_plot_data(plots_dir, parameter);
      std::cout << "wrote plots for parameter " << parameter << " under "
                << plots_dir << "/plots\n";
    }
  } catch (const dpmc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const dpmc::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
