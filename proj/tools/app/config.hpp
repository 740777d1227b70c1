#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace hdmd::app {

/// Raised for invalid configuration; `field()` names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message);
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum class Experiment { Schrodinger, Probes, Custom };
enum class DictionaryKind { Gaussian, Constant, Linear };

/// Flat typed key-value configuration. File format:
///
///   hdmd-config 1
///   # comment
///   key = value
///
/// The first non-comment line must be the schema line. Unknown keys, repeated
/// keys and out-of-range values are rejected.
struct ExperimentConfig {
  Experiment experiment = Experiment::Schrodinger;
  bool experiment_set = false;

  // Quadrature grid, points per axis on the (-5,5)^2 domain.
  int grid = 75;
  int full_grid = 300;

  DictionaryKind dictionary_kind = DictionaryKind::Gaussian;
  int dictionary_per_axis = 20;
  double dictionary_lower = -4.0;
  double dictionary_upper = 4.0;
  double dictionary_width = 3.0;
  std::complex<double> dictionary_amplitude{1.0, 1.0};

  double rank_tolerance = 1e-12;
  double cluster_radius = 0.4;
  bool cluster_weighted_mean = true;
  int energy_cutoff = 11;
  int exact_quad_resolution = 200;
  double hermiticity_limit = 1e-8;

  std::filesystem::path output_dir = "hdmd_out";
  std::uint64_t seed = 0;
  int threads = 1;

  int probe_n_ref = 2000;
  std::vector<long> probe_sizes{10, 20, 50, 100, 200, 400, 800};
  int probe_k_max = 6;
  std::complex<double> probe_z{0.0, 1.0};

  std::filesystem::path snapshots_x;
  std::filesystem::path snapshots_y;
  std::filesystem::path snapshots_observable;
  double snapshots_total_mass = 1.0;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Range checks that do not depend on parsing (also run after CLI overrides).
void validate(const ExperimentConfig& config);

const char* to_string(Experiment e);

}  // namespace hdmd::app
