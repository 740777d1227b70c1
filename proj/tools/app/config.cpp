#include "config.hpp"

#include "hdmd/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <set>

namespace hdmd::app {

ConfigError::ConfigError(std::string field, const std::string& message)
    : std::runtime_error(field.empty() ? message : "config field '" + field + "': " + message),
      field_(std::move(field)) {}

const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::Schrodinger: return "schrodinger";
    case Experiment::Probes: return "probes";
    case Experiment::Custom: return "custom";
  }
  return "?";
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& v) {
  try {
    const double d = csv::parse_double(v, 0);
    if (!std::isfinite(d)) throw ConfigError(key, "must be finite");
    return d;
  } catch (const csv::ParseError&) {
    throw ConfigError(key, "expected a real number, got '" + v + "'");
  }
}

long to_long(const std::string& key, const std::string& v) {
  long out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError(key, "expected an integer, got '" + v + "'");
  }
  return out;
}

int to_int(const std::string& key, const std::string& v) {
  const long l = to_long(key, v);
  if (l < -1'000'000'000L || l > 1'000'000'000L) throw ConfigError(key, "integer out of range");
  return static_cast<int>(l);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(key, "expected true or false, got '" + v + "'");
}

// "re,im" or a single real.
std::complex<double> to_complex(const std::string& key, const std::string& v) {
  const auto parts = csv::split(v);
  if (parts.size() == 1) return {to_double(key, parts[0]), 0.0};
  if (parts.size() == 2) return {to_double(key, parts[0]), to_double(key, parts[1])};
  throw ConfigError(key, "expected 're,im', got '" + v + "'");
}

using Setter = std::function<void(ExperimentConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& schema() {
  static const std::map<std::string, Setter> s = {
      {"experiment",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         if (v == "schrodinger") c.experiment = Experiment::Schrodinger;
         else if (v == "probes") c.experiment = Experiment::Probes;
         else if (v == "custom") c.experiment = Experiment::Custom;
         else throw ConfigError(k, "expected schrodinger, probes or custom, got '" + v + "'");
         c.experiment_set = true;
       }},
      {"grid", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.grid = to_int(k, v); }},
      {"full_grid", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.full_grid = to_int(k, v); }},
      {"dictionary.kind",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         if (v == "gaussian") c.dictionary_kind = DictionaryKind::Gaussian;
         else if (v == "constant") c.dictionary_kind = DictionaryKind::Constant;
         else if (v == "linear") c.dictionary_kind = DictionaryKind::Linear;
         else throw ConfigError(k, "expected gaussian, constant or linear, got '" + v + "'");
       }},
      {"dictionary.per_axis",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.dictionary_per_axis = to_int(k, v); }},
      {"dictionary.lower",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.dictionary_lower = to_double(k, v); }},
      {"dictionary.upper",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.dictionary_upper = to_double(k, v); }},
      {"dictionary.width",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.dictionary_width = to_double(k, v); }},
      {"dictionary.amplitude",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.dictionary_amplitude = to_complex(k, v); }},
      {"rank_tolerance",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.rank_tolerance = to_double(k, v); }},
      {"cluster_radius",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.cluster_radius = to_double(k, v); }},
      {"cluster_weighted_mean",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.cluster_weighted_mean = to_bool(k, v); }},
      {"energy_cutoff",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.energy_cutoff = to_int(k, v); }},
      {"exact_quad_resolution",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.exact_quad_resolution = to_int(k, v); }},
      {"hermiticity_limit",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.hermiticity_limit = to_double(k, v); }},
      {"output_dir", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.output_dir = v; }},
      {"seed",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         const long s = to_long(k, v);
         if (s < 0) throw ConfigError(k, "must be nonnegative");
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"threads", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.threads = to_int(k, v); }},
      {"probe.n_ref", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.probe_n_ref = to_int(k, v); }},
      {"probe.sizes",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.probe_sizes.clear();
         for (const auto& p : csv::split(v)) c.probe_sizes.push_back(to_long(k, p));
       }},
      {"probe.k_max", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.probe_k_max = to_int(k, v); }},
      {"probe.z", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.probe_z = to_complex(k, v); }},
      {"snapshots.x", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.snapshots_x = v; }},
      {"snapshots.y", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.snapshots_y = v; }},
      {"snapshots.observable",
       [](ExperimentConfig& c, const std::string&, const std::string& v) { c.snapshots_observable = v; }},
      {"snapshots.total_mass",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.snapshots_total_mass = to_double(k, v); }},
  };
  return s;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig config;
  std::string line;
  bool have_schema = false;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    const std::string body = trim(hash == std::string::npos ? std::string_view(line) : std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    if (!have_schema) {
      if (body != "hdmd-config 1") throw ConfigError("", "first line must be the schema line 'hdmd-config 1'");
      have_schema = true;
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("", "expected 'key = value', got '" + body + "'");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    const auto it = schema().find(key);
    if (it == schema().end()) throw ConfigError(key, "unknown key");
    if (!seen.insert(key).second) throw ConfigError(key, "repeated key");
    it->second(config, key, value);
  }
  if (!have_schema) throw ConfigError("", "missing schema line 'hdmd-config 1'");
  validate(config);
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  return parse_config(in);
}

void validate(const ExperimentConfig& c) {
  if (c.grid < 2 || c.grid > 2000) throw ConfigError("grid", "must be in [2, 2000]");
  if (c.full_grid < 2 || c.full_grid > 2000) throw ConfigError("full_grid", "must be in [2, 2000]");
  if (c.dictionary_per_axis < 1 || c.dictionary_per_axis > 200)
    throw ConfigError("dictionary.per_axis", "must be in [1, 200]");
  if (c.dictionary_upper < c.dictionary_lower)
    throw ConfigError("dictionary.upper", "must not be below dictionary.lower");
  if (!(c.dictionary_width > 0.0)) throw ConfigError("dictionary.width", "must be positive");
  if (c.dictionary_amplitude == std::complex<double>{}) throw ConfigError("dictionary.amplitude", "must be nonzero");
  if (!(c.rank_tolerance >= 0.0 && c.rank_tolerance < 1.0)) throw ConfigError("rank_tolerance", "must be in [0, 1)");
  if (!(c.cluster_radius > 0.0 && c.cluster_radius < 0.5)) throw ConfigError("cluster_radius", "must be in (0, 0.5)");
  if (c.energy_cutoff < 1 || c.energy_cutoff > 60) throw ConfigError("energy_cutoff", "must be in [1, 60]");
  if (c.exact_quad_resolution < 2 || c.exact_quad_resolution > 5000)
    throw ConfigError("exact_quad_resolution", "must be in [2, 5000]");
  if (!(c.hermiticity_limit > 0.0)) throw ConfigError("hermiticity_limit", "must be positive");
  if (c.threads < 1 || c.threads > 256) throw ConfigError("threads", "must be in [1, 256]");
  if (c.probe_n_ref < 2 || c.probe_n_ref > 20000) throw ConfigError("probe.n_ref", "must be in [2, 20000]");
  if (c.probe_sizes.empty()) throw ConfigError("probe.sizes", "must list at least one size");
  for (std::size_t i = 0; i < c.probe_sizes.size(); ++i) {
    if (c.probe_sizes[i] < 1 || c.probe_sizes[i] > c.probe_n_ref)
      throw ConfigError("probe.sizes", "sizes must lie in [1, probe.n_ref]");
    if (i && c.probe_sizes[i] <= c.probe_sizes[i - 1]) throw ConfigError("probe.sizes", "sizes must be increasing");
  }
  if (c.probe_k_max < 0 || c.probe_k_max > 64) throw ConfigError("probe.k_max", "must be in [0, 64]");
  if (c.probe_z.imag() == 0.0) throw ConfigError("probe.z", "imaginary part must be nonzero");
  if (!(c.snapshots_total_mass > 0.0)) throw ConfigError("snapshots.total_mass", "must be positive");
}

}  // namespace hdmd::app
