#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fedsel/error.hpp"
#include "fedsel/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON experiment config")->required();
  cmd->add_option("--out", args.out_dir, "output directory (overrides output_dir)");
  cmd->add_option("--seed", args.seed, "master seed (overrides seed)");
  cmd->add_option("--jobs", args.jobs, "worker threads (overrides jobs)")
      ->check(CLI::PositiveNumber);
}

fedsel::ExperimentConfig resolve(const CommonArgs& args) {
  fedsel::ExperimentConfig config = fedsel::load_config(args.config_path);
  if (args.seed) config.seed = *args.seed;
  if (args.jobs) config.jobs = *args.jobs;
  if (!args.out_dir.empty()) config.output_dir = args.out_dir;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed sparse feature selection experiments"};
  app.require_subcommand(1);

  CommonArgs run_args, bounds_args, sweep_args, real_args;
  auto* run = app.add_subcommand("run", "replicated synthetic experiment");
  add_common(run, run_args);

  auto* bounds = app.add_subcommand("bounds", "evaluate analytic FPR/TPR bounds over a tau grid");
  add_common(bounds, bounds_args);

  auto* sweep = app.add_subcommand("sweep", "repeat the experiment along one axis");
  add_common(sweep, sweep_args);
  std::string axis;
  std::vector<double> grid;
  sweep->add_option("--axis", axis, "N, tau or n_local (overrides sweep.axis)")
      ->check(CLI::IsMember({"N", "tau", "n_local"}));
  sweep->add_option("--grid", grid, "axis values (overrides sweep.grid)")->delimiter(',');

  auto* real = app.add_subcommand("real", "run the protocol on a binary design CSV");
  add_common(real, real_args);
  std::string dataset, truth;
  real->add_option("--dataset", dataset, "CSV with header, binary features and a response")
      ->required();
  real->add_option("--truth", truth, "ground-truth column list (overrides real.truth_path)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  fedsel::ExperimentConfig config;
  try {
    if (*run) config = resolve(run_args);
    if (*bounds) config = resolve(bounds_args);
    if (*real) config = resolve(real_args);
    if (*sweep) {
      config = resolve(sweep_args);
      if (axis == "N") config.sweep_axis = fedsel::SweepAxis::Clients;
      if (axis == "tau") config.sweep_axis = fedsel::SweepAxis::Tau;
      if (axis == "n_local") config.sweep_axis = fedsel::SweepAxis::NLocal;
      if (!grid.empty()) config.sweep_grid = grid;
    }
    if (*real && !truth.empty()) config.truth_path = truth;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (*run) {
      fedsel::cmd_run(config, config.output_dir);
    } else if (*bounds) {
      fedsel::cmd_bounds(config, config.output_dir);
    } else if (*sweep) {
      fedsel::cmd_sweep(config, config.output_dir);
    } else if (*real) {
      const auto report = fedsel::cmd_real(config, dataset, config.output_dir);
      for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
      std::cout << "selected " << report.selected.size() << " of " << report.features
                << " features; protocol bits " << report.protocol_bits;
      if (report.baseline_bits) std::cout << ", baseline bits " << report.baseline_bits;
      std::cout << '\n';
      if (report.metrics)
        std::cout << "fdp " << report.metrics->fdp << ", power " << report.metrics->recall_power
                  << '\n';
    }
  } catch (const fedsel::ClientFailureError& e) {
    std::cerr << "runtime error: " << e.failures().size() << " client(s) failed\n";
    for (const auto& f : e.failures())
      std::cerr << "  client " << f.client_id << ": " << f.message << '\n';
    return kExitRuntime;
  } catch (const fedsel::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}
