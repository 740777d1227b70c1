// hdmd: Hermitian DMD experiments from the command line.
//
//   hdmd schrodinger [--config f] [--out dir] [--threads n] [--full-grid]
//   hdmd probes      [--config f] [--out dir]
//   hdmd custom      [--config f] [--out dir] [--x file] [--y file] [--observable file]
//
// Exit codes: 0 success, 2 invalid configuration or input, 3 numerical failure.

#include "app/config.hpp"
#include "app/experiments.hpp"

#include "hdmd/csv.hpp"

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <iostream>
#include <string>

namespace {

void configure_logging() {
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("HDMD_LOG")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to "off"; only honor it when asked for.
    if (level != spdlog::level::off || std::string(env) == "off") spdlog::set_level(level);
  }
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();

  CLI::App app{"Hermitian dynamic mode decomposition experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int threads = 0;
  bool full_grid = false;
  std::string x_path, y_path, observable_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Config file (hdmd-config 1 key = value format)")->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Output directory (overrides output_dir)");
    sub->add_option("--threads", threads, "Worker threads for assembly (default from config, 1)")
        ->check(CLI::Range(1, 256));
  };

  auto* schrodinger = app.add_subcommand("schrodinger", "2-D harmonic oscillator benchmark");
  add_common(schrodinger);
  schrodinger->add_flag("--full-grid", full_grid, "Use the full quadrature grid (full_grid, default 300^2)");

  auto* probes = app.add_subcommand("probes", "Finite-section convergence diagnostics");
  add_common(probes);

  auto* custom = app.add_subcommand("custom", "Hermitian DMD on user-supplied snapshot CSVs");
  add_common(custom);
  custom->add_option("--x", x_path, "Snapshot inputs: columns x1..xd[,w]");
  custom->add_option("--y", y_path, "Snapshot outputs: columns y1..yd");
  custom->add_option("--observable", observable_path, "Observable samples: column g or g_re,g_im");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    hdmd::app::ExperimentConfig config;
    if (!config_path.empty()) config = hdmd::app::load_config(config_path);

    hdmd::app::Experiment requested = hdmd::app::Experiment::Schrodinger;
    if (*probes) requested = hdmd::app::Experiment::Probes;
    if (*custom) requested = hdmd::app::Experiment::Custom;
    if (config.experiment_set && config.experiment != requested) {
      throw hdmd::app::ConfigError("experiment", std::string("config is for '") + to_string(config.experiment) +
                                                     "' but subcommand is '" + to_string(requested) + "'");
    }
    if (!x_path.empty()) config.snapshots_x = x_path;
    if (!y_path.empty()) config.snapshots_y = y_path;
    if (!observable_path.empty()) config.snapshots_observable = observable_path;

    hdmd::app::RunOptions options;
    if (!out_dir.empty()) options.out_dir = out_dir;
    if (threads > 0) options.threads = threads;
    options.full_grid = full_grid;

    nlohmann::json summary;
    switch (requested) {
      case hdmd::app::Experiment::Schrodinger: summary = hdmd::app::run_schrodinger(config, options); break;
      case hdmd::app::Experiment::Probes: summary = hdmd::app::run_probes(config, options); break;
      case hdmd::app::Experiment::Custom: summary = hdmd::app::run_custom(config, options); break;
    }
    std::cout << summary.dump(2) << '\n';
    return 0;
  } catch (const hdmd::app::ConfigError& e) {
    std::cerr << "hdmd: " << e.what() << '\n';
    return 2;
  } catch (const hdmd::csv::ParseError& e) {
    std::cerr << "hdmd: parse error at " << e.what() << '\n';
    return 2;
  } catch (const hdmd::app::NumericalFailure& e) {
    std::cerr << "hdmd: numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "hdmd: " << e.what() << '\n';
    return 1;
  }
}
