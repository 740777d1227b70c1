#include "hdmd/spectral.hpp"

#include "hdmd/csv.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace hdmd {

ObservableCoefficients project_observable(const Eigen::VectorXcd& samples, const FeatureMatrices& features,
                                          const QuadratureRule& quad, const GramPairPtr& gram) {
  if (!gram) throw std::invalid_argument("project_observable: null GramPair");
  if (samples.size() != features.psi_x.rows() || samples.size() != quad.size()) {
    throw std::invalid_argument("project_observable: sample vector length " + std::to_string(samples.size()) +
                                " does not match " + std::to_string(quad.size()) + " snapshots");
  }
  if (features.size() != gram->size()) throw std::invalid_argument("project_observable: dictionary size mismatch");
  const Eigen::VectorXcd weighted = quad.weights().cwiseProduct(samples);
  Eigen::VectorXcd rhs = features.psi_x.adjoint() * weighted;
  return ObservableCoefficients{gram->solve(rhs), gram};
}

AtomicMeasure::AtomicMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  for (const auto& a : atoms_) {
    if (!(a.weight >= 0.0)) throw std::invalid_argument("AtomicMeasure: negative or NaN weight");
    if (!std::isfinite(a.location)) throw std::invalid_argument("AtomicMeasure: non-finite location");
  }
  std::stable_sort(atoms_.begin(), atoms_.end(),
                   [](const Atom& l, const Atom& r) { return l.location < r.location; });
  for (const auto& a : atoms_) total_mass_ += a.weight;
}

AtomicMeasure spectral_measure(const KoopmanEig& eig, const ObservableCoefficients& obs) {
  if (!eig.gram || eig.gram != obs.gram) {
    throw std::invalid_argument("spectral_measure: eigenpairs and observable use different GramPairs");
  }
  const Eigen::VectorXcd gf = eig.gram->g * obs.coeffs;
  const Eigen::VectorXcd proj = eig.eigenvectors.adjoint() * gf;
  std::vector<Atom> atoms(static_cast<std::size_t>(eig.rank()));
  for (Index j = 0; j < eig.rank(); ++j) {
    atoms[j].location = eig.eigenvalues[j];
    atoms[j].weight = std::norm(proj[j]);
  }
  return AtomicMeasure(std::move(atoms));
}

double integrate(const AtomicMeasure& measure, const std::function<double(double)>& test_fn) {
  double s = 0.0;
  for (const auto& a : measure.atoms()) s += a.weight * test_fn(a.location);
  return s;
}

AtomicMeasure cluster_atoms(const AtomicMeasure& measure, std::span<const double> reference_locations, double radius,
                            const ClusterOptions& options) {
  if (!(radius > 0.0)) throw std::invalid_argument("cluster_atoms: radius must be positive");
  std::vector<double> refs(reference_locations.begin(), reference_locations.end());
  std::sort(refs.begin(), refs.end());
  for (std::size_t i = 1; i < refs.size(); ++i) {
    const double gap = refs[i] - refs[i - 1];
    if (gap == 0.0) throw std::invalid_argument("cluster_atoms: reference locations must be distinct");
    if (!(radius < 0.5 * gap)) {
      throw std::invalid_argument("cluster_atoms: radius " + csv::format(radius) +
                                  " is not below half the minimum reference gap " + csv::format(0.5 * gap));
    }
  }

  struct Accum {
    double weight = 0.0, weighted_sum = 0.0, plain_sum = 0.0;
    Index members = 0;
  };
  std::vector<Accum> acc(refs.size());
  std::vector<Atom> out;
  for (const auto& atom : measure.atoms()) {
    // Radius < half gap, so at most one reference can match.
    auto it = std::lower_bound(refs.begin(), refs.end(), atom.location - radius);
    if (it != refs.end() && std::abs(*it - atom.location) <= radius) {
      auto& c = acc[static_cast<std::size_t>(it - refs.begin())];
      c.weight += atom.weight;
      c.weighted_sum += atom.weight * atom.location;
      c.plain_sum += atom.location;
      c.members += atom.members;
    } else {
      Atom passthrough = atom;
      passthrough.reference.reset();
      out.push_back(passthrough);
    }
  }
  for (std::size_t i = 0; i < refs.size(); ++i) {
    const auto& c = acc[i];
    if (c.members == 0) continue;
    Atom merged;
    merged.weight = c.weight;
    merged.members = c.members;
    merged.reference = refs[i];
    merged.location = (options.weighted_mean && c.weight > 0.0) ? c.weighted_sum / c.weight
                                                                : c.plain_sum / static_cast<double>(c.members);
    out.push_back(merged);
  }
  return AtomicMeasure(std::move(out));
}

AtomicMeasure filter_small_atoms(const AtomicMeasure& measure, double relative_threshold) {
  std::vector<Atom> kept;
  const double cutoff = relative_threshold * measure.total_mass();
  for (const auto& a : measure.atoms())
    if (!(a.weight < cutoff)) kept.push_back(a);
  return AtomicMeasure(std::move(kept));
}

std::optional<Atom> find_cluster(const AtomicMeasure& clustered, double reference) {
  for (const auto& a : clustered.atoms())
    if (a.reference && *a.reference == reference) return a;
  return std::nullopt;
}

void write_csv(std::ostream& out, const AtomicMeasure& measure) {
  out << "lambda,weight\n";
  for (const auto& a : measure.atoms()) out << csv::format(a.location) << ',' << csv::format(a.weight) << '\n';
}

void write_json(std::ostream& out, const AtomicMeasure& measure) {
  nlohmann::json j;
  j["atoms"] = nlohmann::json::array();
  for (const auto& a : measure.atoms()) j["atoms"].push_back({{"lambda", a.location}, {"weight", a.weight}});
  j["total_mass"] = measure.total_mass();
  out << j.dump(2) << '\n';
}

AtomicMeasure read_measure_json(std::istream& in) {
  const auto j = nlohmann::json::parse(in);
  std::vector<Atom> atoms;
  for (const auto& a : j.at("atoms")) {
    Atom atom;
    atom.location = a.at("lambda").get<double>();
    atom.weight = a.at("weight").get<double>();
    atoms.push_back(atom);
  }
  return AtomicMeasure(std::move(atoms));
}

}  // namespace hdmd
