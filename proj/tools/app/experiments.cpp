#include "experiments.hpp"

#include "hdmd/csv.hpp"
#include "hdmd/dictionary.hpp"
#include "hdmd/dmd_core.hpp"
#include "hdmd/matrix_io.hpp"
#include "hdmd/probes.hpp"
#include "hdmd/quadrature.hpp"
#include "hdmd/schrodinger.hpp"
#include "hdmd/spectral.hpp"

#include <spdlog/spdlog.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <random>
#include <vector>

namespace hdmd::app {

namespace fs = std::filesystem;

namespace {

struct Context {
  fs::path out_dir;
  int threads;
};

Context resolve(const ExperimentConfig& config, const RunOptions& options) {
  Context ctx{options.out_dir.value_or(config.output_dir), options.threads.value_or(config.threads)};
  if (ctx.threads < 1) throw ConfigError("threads", "must be at least 1");
  std::error_code ec;
  fs::create_directories(ctx.out_dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + ctx.out_dir.string() + ": " + ec.message());
  return ctx;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void write_summary(const fs::path& dir, const nlohmann::json& summary) {
  auto out = open_out(dir / "summary.json");
  out << summary.dump(2) << '\n';
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Shared tail of the Schrodinger and custom pipelines: Hermitian DMD, its
// eigenpairs, and the spectral measure of the projected observable.
struct PipelineResult {
  GramPairPtr pair;
  KoopmanMatrix hermitian;
  KoopmanMatrix unconstrained;
  KoopmanEig eig;
  ObservableCoefficients obs;
  AtomicMeasure measure;
  double hermiticity = 0.0;
  double edmd_hermiticity = 0.0;
  double f_norm_g = 0.0;
};

PipelineResult run_pipeline(const FeatureMatrices& features, const QuadratureRule& quad,
                            const Eigen::VectorXcd& samples, const ExperimentConfig& config, int threads) {
  PipelineResult r;
  r.pair = assemble_gram_pair(features, quad, {config.rank_tolerance, threads});
  if (r.pair->retained_rank == 0) throw NumericalFailure("Gram matrix has zero retained rank");
  if (r.pair->rank_deficient()) {
    spdlog::warn("Gram matrix truncated to rank {} of {} (floor {:.3e})", r.pair->retained_rank, r.pair->size(),
                 r.pair->g_eigen_floor);
  }
  r.hermitian = hermitian_dmd(r.pair);
  r.unconstrained = edmd(r.pair);
  r.hermiticity = hermiticity_residual(r.hermitian);
  r.edmd_hermiticity = hermiticity_residual(r.unconstrained);
  r.eig = eigendecompose(r.hermitian);
  r.obs = project_observable(samples, features, quad, r.pair);
  r.measure = spectral_measure(r.eig, r.obs);
  r.f_norm_g = r.pair->inner(r.obs.coeffs, r.obs.coeffs).real();
  return r;
}

nlohmann::json pipeline_summary(const PipelineResult& r) {
  return {
      {"dictionary_size", r.pair->size()},
      {"retained_rank", r.pair->retained_rank},
      {"rank_deficient", r.pair->rank_deficient()},
      {"g_eigen_floor", r.pair->g_eigen_floor},
      {"rank_tolerance", r.pair->rank_tolerance},
      {"hermiticity_residual", r.hermiticity},
      {"edmd_hermiticity_residual", r.edmd_hermiticity},
      {"total_mass", r.measure.total_mass()},
      {"observable_norm_sq_g", r.f_norm_g},
  };
}

void check_hermiticity(const PipelineResult& r, const ExperimentConfig& config) {
  if (!(r.hermiticity <= config.hermiticity_limit)) {
    throw NumericalFailure("Hermiticity residual " + csv::format(r.hermiticity) + " exceeds limit " +
                           csv::format(config.hermiticity_limit));
  }
}

void write_measures(const fs::path& dir, const AtomicMeasure& measure) {
  {
    auto out = open_out(dir / "measure.csv");
    write_csv(out, measure);
  }
  auto out = open_out(dir / "measure.json");
  write_json(out, measure);
}

}  // namespace

nlohmann::json run_schrodinger(const ExperimentConfig& config, const RunOptions& options) {
  validate(config);
  if (config.dictionary_kind != DictionaryKind::Gaussian) {
    throw ConfigError("dictionary.kind", "the schrodinger experiment requires a gaussian dictionary");
  }
  const auto start = std::chrono::steady_clock::now();
  const Context ctx = resolve(config, options);
  const int grid = options.full_grid ? config.full_grid : config.grid;

  schrodinger::HarmonicOscillatorProblem problem;
  problem.dictionary = GaussianGridSpec{Box::cube(2, config.dictionary_lower, config.dictionary_upper),
                                        config.dictionary_per_axis, config.dictionary_width,
                                        config.dictionary_amplitude};
  const int points[2] = {grid, grid};
  const auto quad = tensor_trapezoid(problem.domain, points);
  spdlog::info("schrodinger: grid {}^2 ({} nodes), dictionary {}^2", grid, quad.size(), config.dictionary_per_axis);

  const auto features = schrodinger::generate_snapshots(problem, quad, ctx.threads);
  const auto samples = evaluate_function_samples(
      quad.nodes(), [](std::span<const double> p) { return Complex{schrodinger::reference_observable(p[0], p[1])}; });
  const auto r = run_pipeline(features, quad, samples, config, ctx.threads);

  // eigenvalues.csv against the exact spectrum, enough levels to cover rank r.
  int max_energy = 1;
  while (max_energy * (max_energy + 1) / 2 < r.eig.rank()) ++max_energy;
  const auto exact = schrodinger::exact_spectrum(max_energy);
  {
    auto out = open_out(ctx.out_dir / "eigenvalues.csv");
    out << "index,lambda,exact,abs_error\n";
    for (Index j = 0; j < r.eig.rank(); ++j) {
      const double e = exact[static_cast<std::size_t>(j)].energy;
      out << j << ',' << csv::format(r.eig.eigenvalues[j]) << ',' << csv::format(e) << ','
          << csv::format(std::abs(r.eig.eigenvalues[j] - e)) << '\n';
    }
  }
  write_measures(ctx.out_dir, r.measure);

  std::vector<double> refs;
  for (int e = 1; e <= config.energy_cutoff; ++e) refs.push_back(e);
  const auto clustered = cluster_atoms(r.measure, refs, config.cluster_radius, {config.cluster_weighted_mean});
  const auto exact_weights =
      schrodinger::exact_spike_weights(config.energy_cutoff, schrodinger::reference_observable,
                                       config.exact_quad_resolution, problem.domain);
  nlohmann::json spikes = nlohmann::json::array();
  {
    auto out = open_out(ctx.out_dir / "clustered.csv");
    out << "energy,weight,location,members,exact_weight\n";
    for (int e = 1; e <= config.energy_cutoff; ++e) {
      const auto atom = find_cluster(clustered, e);
      const double exact_w = exact_weights.atoms()[static_cast<std::size_t>(e - 1)].weight;
      const double w = atom ? atom->weight : 0.0;
      const double loc = atom ? atom->location : std::nan("");
      out << e << ',' << csv::format(w) << ',' << csv::format(loc) << ',' << (atom ? atom->members : 0) << ','
          << csv::format(exact_w) << '\n';
      spikes.push_back({{"energy", e}, {"weight", w}, {"location", atom ? nlohmann::json(loc) : nlohmann::json()},
                        {"exact_weight", exact_w}});
    }
  }
  save_matrix(ctx.out_dir / "koopman.bin", r.hermitian.k);

  nlohmann::json summary = pipeline_summary(r);
  summary["experiment"] = "schrodinger";
  summary["grid"] = grid;
  summary["snapshots"] = quad.size();
  summary["threads"] = ctx.threads;
  summary["spikes"] = spikes;
  summary["unclustered_mass"] = [&] {
    double m = 0.0;
    for (const auto& a : clustered.atoms())
      if (!a.reference) m += a.weight;
    return m;
  }();
  summary["runtime_seconds"] = seconds_since(start);
  write_summary(ctx.out_dir, summary);
  check_hermiticity(r, config);
  spdlog::info("schrodinger: done in {:.2f}s, hermiticity residual {:.2e}", summary["runtime_seconds"].get<double>(),
               r.hermiticity);
  return summary;
}

nlohmann::json run_probes(const ExperimentConfig& config, const RunOptions& options) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();
  const Context ctx = resolve(config, options);
  const Index n_ref = config.probe_n_ref;
  const std::vector<Index> sizes(config.probe_sizes.begin(), config.probe_sizes.end());
  const std::complex<double> z = config.probe_z;

  const std::vector<TestFunction> fns = {
      {"one", [](double) { return 1.0; }},
      {"re_resolvent", [z](double x) { return (1.0 / (x - z)).real(); }},
      // Smooth bump supported on [3, 5].
      {"bump_off_spectrum",
       [](double x) {
         const double t = x - 4.0;
         return std::abs(t) < 1.0 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0;
       }},
  };

  nlohmann::json summary{{"experiment", "probes"}, {"n_ref", n_ref}, {"sizes", sizes},
                         {"z", {z.real(), z.imag()}}, {"k_max", config.probe_k_max}};

  auto run_reference = [&](const std::string& name, const Eigen::MatrixXcd& reference) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n_ref);
    v[0] = 1.0;
    spdlog::info("probes: {} reference, n_ref {}", name, n_ref);
    const auto res = resolvent_convergence_probe(reference, v, z, sizes);
    const auto mom = moment_convergence_probe(reference, v, config.probe_k_max, sizes);
    const auto weak = weak_convergence_probe(reference, v, fns, sizes);
    for (const auto& [suffix, table] : {std::pair{"resolvent", &res}, {"moments", &mom}, {"weak", &weak}}) {
      auto out = open_out(ctx.out_dir / (name + "_" + suffix + ".csv"));
      write_csv(out, *table);
    }
    auto max_gap = [](const ProbeTable& t) {
      double m = 0.0;
      for (const auto& r : t.rows) m = std::max(m, r.gap);
      return m;
    };
    summary[name] = {
        {"resolvent", {{"final_gap", res.rows.back().gap}, {"max_gap", max_gap(res)}, {"resolution_floor", res.resolution_floor}}},
        {"moments", {{"max_gap", max_gap(mom)}, {"resolution_floor", mom.resolution_floor}}},
        {"weak", {{"max_gap", max_gap(weak)}, {"resolution_floor", weak.resolution_floor}}},
    };
  };

  run_reference("jacobi", free_jacobi(n_ref));

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  Eigen::MatrixXcd diagonal = Eigen::MatrixXcd::Zero(n_ref, n_ref);
  for (Index i = 0; i < n_ref; ++i) diagonal(i, i) = dist(rng);
  run_reference("diagonal", diagonal);

  summary["runtime_seconds"] = seconds_since(start);
  write_summary(ctx.out_dir, summary);
  return summary;
}

namespace {

struct CustomData {
  QuadratureRule quad;
  NodeMatrix y;
  Eigen::VectorXcd observable;
};

csv::Table read_table(const fs::path& path, const std::string& field) {
  if (path.empty()) throw ConfigError(field, "path is required for the custom experiment");
  std::ifstream in(path);
  if (!in) throw ConfigError(field, "cannot open " + path.string());
  try {
    return csv::read_numeric(in);
  } catch (const csv::ParseError& e) {
    throw csv::ParseError(e.line(), path.string() + ": " + e.what());
  }
}

CustomData load_custom(const ExperimentConfig& config) {
  const auto xt = read_table(config.snapshots_x, "snapshots.x");
  const auto yt = read_table(config.snapshots_y, "snapshots.y");
  if (xt.rows.empty()) throw csv::ParseError(2, config.snapshots_x.string() + ": no snapshot rows");
  const bool has_w = xt.header.back() == "w";
  const Index d = static_cast<Index>(xt.header.size()) - (has_w ? 1 : 0);
  if (d < 1) throw csv::ParseError(1, config.snapshots_x.string() + ": no coordinate columns");
  if (static_cast<Index>(yt.header.size()) != d) {
    throw csv::ParseError(1, config.snapshots_y.string() + ": expected " + std::to_string(d) + " columns");
  }
  if (yt.rows.size() != xt.rows.size()) {
    throw csv::ParseError(yt.rows.size() + 2, config.snapshots_y.string() + ": row count " +
                                                  std::to_string(yt.rows.size()) + " differs from x snapshots (" +
                                                  std::to_string(xt.rows.size()) + ")");
  }
  const Index m = static_cast<Index>(xt.rows.size());
  NodeMatrix x(m, d), y(m, d);
  Eigen::VectorXd w(m);
  for (Index i = 0; i < m; ++i) {
    for (Index k = 0; k < d; ++k) {
      x(i, k) = xt.rows[i][k];
      y(i, k) = yt.rows[i][k];
    }
    if (has_w) {
      w[i] = xt.rows[i][d];
      if (!(w[i] > 0.0)) throw csv::ParseError(static_cast<std::size_t>(i) + 2, "weight must be positive");
    }
  }
  QuadratureRule quad = has_w ? QuadratureRule(std::move(x), std::move(w)) : monte_carlo(std::move(x), config.snapshots_total_mass);

  Eigen::VectorXcd obs = Eigen::VectorXcd::Ones(m);
  if (!config.snapshots_observable.empty()) {
    const auto ot = read_table(config.snapshots_observable, "snapshots.observable");
    if (static_cast<Index>(ot.rows.size()) != m) {
      throw csv::ParseError(ot.rows.size() + 2, config.snapshots_observable.string() + ": expected " +
                                                    std::to_string(m) + " rows");
    }
    if (ot.header.size() != 1 && ot.header.size() != 2) {
      throw csv::ParseError(1, config.snapshots_observable.string() + ": expected columns g or g_re,g_im");
    }
    for (Index i = 0; i < m; ++i) obs[i] = {ot.rows[i][0], ot.header.size() == 2 ? ot.rows[i][1] : 0.0};
  }
  return {std::move(quad), std::move(y), std::move(obs)};
}

}  // namespace

nlohmann::json run_custom(const ExperimentConfig& config, const RunOptions& options) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();
  const auto data = load_custom(config);
  const Context ctx = resolve(config, options);
  const int d = data.quad.dimension();

  const Dictionary dict = [&] {
    switch (config.dictionary_kind) {
      case DictionaryKind::Constant: return constant_dictionary(d);
      case DictionaryKind::Linear: return linear_dictionary(d);
      case DictionaryKind::Gaussian: break;
    }
    return gaussian_grid_dictionary(GaussianGridSpec{Box::cube(d, config.dictionary_lower, config.dictionary_upper),
                                                     config.dictionary_per_axis, config.dictionary_width,
                                                     config.dictionary_amplitude});
  }();
  spdlog::info("custom: {} snapshots in dimension {}, dictionary size {}", data.quad.size(), d, dict.size());

  const auto features = evaluate_snapshots(dict, data.quad.nodes(), data.y, ctx.threads);
  const auto r = run_pipeline(features, data.quad, data.observable, config, ctx.threads);

  {
    auto out = open_out(ctx.out_dir / "eigenvalues.csv");
    out << "index,lambda\n";
    for (Index j = 0; j < r.eig.rank(); ++j) out << j << ',' << csv::format(r.eig.eigenvalues[j]) << '\n';
  }
  write_measures(ctx.out_dir, r.measure);
  save_matrix(ctx.out_dir / "koopman.csv", r.hermitian.k);
  save_matrix(ctx.out_dir / "koopman_edmd.csv", r.unconstrained.k);

  nlohmann::json summary = pipeline_summary(r);
  summary["experiment"] = "custom";
  summary["snapshots"] = data.quad.size();
  summary["dimension"] = d;
  summary["threads"] = ctx.threads;
  summary["runtime_seconds"] = seconds_since(start);
  write_summary(ctx.out_dir, summary);
  check_hermiticity(r, config);
  return summary;
}

}  // namespace hdmd::app
