#pragma once

#include "config.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <stdexcept>

namespace hdmd::app {

/// A run that completed its computation but produced numerically unusable
/// output (zero retained rank, Hermiticity residual above the limit).
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Command-line overrides applied on top of the config file.
struct RunOptions {
  std::optional<std::filesystem::path> out_dir;
  std::optional<int> threads;
  bool full_grid = false;
};

// Each runner writes its artifact bundle into the output directory and returns
// the contents of summary.json.
nlohmann::json run_schrodinger(const ExperimentConfig& config, const RunOptions& options = {});
nlohmann::json run_probes(const ExperimentConfig& config, const RunOptions& options = {});
nlohmann::json run_custom(const ExperimentConfig& config, const RunOptions& options = {});

}  // namespace hdmd::app
