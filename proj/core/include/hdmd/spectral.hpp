#pragma once

#include "hdmd/dictionary.hpp"
#include "hdmd/dmd_core.hpp"
#include "hdmd/quadrature.hpp"

#include <Eigen/Dense>

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace hdmd {

/// Expansion coefficients of an observable in the dictionary: the weighted
/// least-squares fit (W^{1/2} Psi_X)^+ W^{1/2} g, evaluated as G^+ Psi_X^* W g.
struct ObservableCoefficients {
  Eigen::VectorXcd coeffs;
  GramPairPtr gram;
};

ObservableCoefficients project_observable(const Eigen::VectorXcd& samples, const FeatureMatrices& features,
                                          const QuadratureRule& quad, const GramPairPtr& gram);

struct Atom {
  double location = 0.0;
  double weight = 0.0;
  // Set on atoms produced by cluster_atoms: the reference location they were
  // merged into. Unset on raw atoms and on atoms that matched no reference.
  std::optional<double> reference;
  Index members = 1;
};

/// Finite sum of weighted Dirac masses, sorted by location.
class AtomicMeasure {
 public:
  AtomicMeasure() = default;
  explicit AtomicMeasure(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }
  double total_mass() const { return total_mass_; }
  std::size_t size() const { return atoms_.size(); }

 private:
  std::vector<Atom> atoms_;
  double total_mass_ = 0.0;
};

/// Atoms (lambda_j, |v_j^* G f|^2). Both arguments must share one GramPair.
AtomicMeasure spectral_measure(const KoopmanEig& eig, const ObservableCoefficients& obs);

/// sum_j c_j f(lambda_j)
double integrate(const AtomicMeasure& measure, const std::function<double(double)>& test_fn);

struct ClusterOptions {
  // Cluster location is the weight-averaged atom location; false uses the
  // plain mean. Zero-weight clusters always use the plain mean.
  bool weighted_mean = true;
};

/// Merges atoms within `radius` of each reference location into one atom.
/// Atoms near no reference pass through with `reference` unset. References
/// with no atoms in range produce no output atom. Throws if radius is not
/// smaller than half the minimum gap between references.
AtomicMeasure cluster_atoms(const AtomicMeasure& measure, std::span<const double> reference_locations,
                            double radius, const ClusterOptions& options = {});

/// Drops atoms with weight < relative_threshold * total_mass. Explicit
/// post-processing only; nothing else in the library filters atoms.
AtomicMeasure filter_small_atoms(const AtomicMeasure& measure, double relative_threshold);

/// Looks up the clustered atom for a reference location, if any.
std::optional<Atom> find_cluster(const AtomicMeasure& clustered, double reference);

// CSV header `lambda,weight`.
void write_csv(std::ostream& out, const AtomicMeasure& measure);
// {"atoms":[{"lambda":..,"weight":..}],"total_mass":..}
void write_json(std::ostream& out, const AtomicMeasure& measure);
AtomicMeasure read_measure_json(std::istream& in);

}  // namespace hdmd
