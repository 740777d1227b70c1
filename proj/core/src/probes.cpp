#include "hdmd/probes.hpp"

#include "hdmd/csv.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace hdmd {

std::vector<ProbeRow> ProbeTable::with_key(const std::string& key) const {
  std::vector<ProbeRow> out;
  for (const auto& r : rows)
    if (r.key == key) out.push_back(r);
  return out;
}

namespace {

void check_inputs(const Eigen::MatrixXcd& reference, const Eigen::VectorXcd& v, std::span<const Index> sizes) {
  if (reference.rows() != reference.cols() || reference.rows() == 0) {
    throw std::invalid_argument("probe: reference must be a nonempty square matrix");
  }
  if (v.size() != reference.rows()) throw std::invalid_argument("probe: vector length does not match reference");
  for (Index n : sizes) {
    if (n < 1 || n > reference.rows()) {
      throw std::invalid_argument("probe: truncation size " + std::to_string(n) + " outside [1, n_ref]");
    }
  }
}

bool is_real(const Eigen::MatrixXcd& m) { return m.imag().cwiseAbs().maxCoeff() == 0.0; }

Eigen::VectorXcd section_resolvent(const Eigen::MatrixXcd& reference, const Eigen::VectorXcd& v, std::complex<double> z,
                                   Index n) {
  Eigen::MatrixXcd shifted = reference.topLeftCorner(n, n);
  shifted.diagonal().array() -= z;
  Eigen::VectorXcd full = Eigen::VectorXcd::Zero(reference.rows());
  full.head(n) = shifted.partialPivLu().solve(v.head(n));
  return full;
}

// Eigenvalues and the squared moduli of v's components in the eigenbasis of the
// leading n x n section: the atoms of the spectral measure mu_{v,n}.
struct SectionMeasure {
  Eigen::VectorXd locations;
  Eigen::VectorXd weights;
};

SectionMeasure section_measure(const Eigen::MatrixXcd& reference, const Eigen::VectorXcd& v, Index n, bool real) {
  SectionMeasure sm;
  if (real) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(reference.topLeftCorner(n, n).real());
    if (es.info() != Eigen::Success) throw std::runtime_error("weak_convergence_probe: eigensolver failed");
    sm.locations = es.eigenvalues();
    const Eigen::VectorXcd proj = es.eigenvectors().cast<std::complex<double>>().adjoint() * v.head(n);
    sm.weights = proj.cwiseAbs2();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(reference.topLeftCorner(n, n));
    if (es.info() != Eigen::Success) throw std::runtime_error("weak_convergence_probe: eigensolver failed");
    sm.locations = es.eigenvalues();
    sm.weights = (es.eigenvectors().adjoint() * v.head(n)).cwiseAbs2();
  }
  return sm;
}

double integrate_section(const SectionMeasure& sm, const TestFunction& fn) {
  double s = 0.0;
  for (Index j = 0; j < sm.locations.size(); ++j) s += sm.weights[j] * fn.f(sm.locations[j]);
  return s;
}

std::vector<std::complex<double>> section_moments(const Eigen::MatrixXcd& reference, const Eigen::VectorXcd& v,
                                                  Index n, int k_max) {
  const auto section = reference.topLeftCorner(n, n);
  const Eigen::VectorXcd pv = v.head(n);
  Eigen::VectorXcd w = pv;
  std::vector<std::complex<double>> moments;
  for (int k = 0; k <= k_max; ++k) {
    moments.push_back(pv.dot(w));
    if (k < k_max) w = section * w;
  }
  return moments;
}

}  // namespace

ProbeTable resolvent_convergence_probe(const Eigen::MatrixXcd& reference, const Eigen::VectorXcd& v,
                                       std::complex<double> z, std::span<const Index> truncation_sizes) {
  check_inputs(reference, v, truncation_sizes);
  if (z.imag() == 0.0) throw std::invalid_argument("resolvent_convergence_probe: z must have nonzero imaginary part");
  const Index n_ref = reference.rows();
  const Eigen::VectorXcd truth = section_resolvent(reference, v, z, n_ref);

  ProbeTable table;
  for (Index n : truncation_sizes) {
    table.rows.push_back({n, "resolvent", (section_resolvent(reference, v, z, n) - truth).stableNorm()});
  }
  table.resolution_floor = (section_resolvent(reference, v, z, std::max<Index>(1, n_ref / 2)) - truth).stableNorm();
  return table;
}

ProbeTable moment_convergence_probe(const Eigen::MatrixXcd& reference, const Eigen::VectorXcd& v, int k_max,
                                    std::span<const Index> truncation_sizes) {
  check_inputs(reference, v, truncation_sizes);
  if (k_max < 0) throw std::invalid_argument("moment_convergence_probe: k_max must be nonnegative");
  const Index n_ref = reference.rows();
  const auto truth = section_moments(reference, v, n_ref, k_max);

  auto gaps = [&](Index n) {
    const auto m = section_moments(reference, v, n, k_max);
    std::vector<double> g(m.size());
    for (std::size_t k = 0; k < m.size(); ++k) g[k] = std::abs(m[k] - truth[k]);
    return g;
  };

  ProbeTable table;
  for (Index n : truncation_sizes) {
    const auto g = gaps(n);
    for (int k = 0; k <= k_max; ++k) table.rows.push_back({n, "k=" + std::to_string(k), g[k]});
  }
  const auto floor = gaps(std::max<Index>(1, n_ref / 2));
  table.resolution_floor = *std::max_element(floor.begin(), floor.end());
  return table;
}

ProbeTable weak_convergence_probe(const Eigen::MatrixXcd& reference, const Eigen::VectorXcd& v,
                                  std::span<const TestFunction> test_fns, std::span<const Index> truncation_sizes) {
  check_inputs(reference, v, truncation_sizes);
  const Index n_ref = reference.rows();
  const bool real = is_real(reference);
  const auto truth_measure = section_measure(reference, v, n_ref, real);
  std::vector<double> truth;
  for (const auto& fn : test_fns) truth.push_back(integrate_section(truth_measure, fn));

  auto gaps = [&](Index n) {
    const auto sm = section_measure(reference, v, n, real);
    std::vector<double> g;
    for (std::size_t i = 0; i < test_fns.size(); ++i) g.push_back(std::abs(integrate_section(sm, test_fns[i]) - truth[i]));
    return g;
  };

  ProbeTable table;
  for (Index n : truncation_sizes) {
    const auto g = gaps(n);
    for (std::size_t i = 0; i < test_fns.size(); ++i) table.rows.push_back({n, test_fns[i].name, g[i]});
  }
  const auto floor = gaps(std::max<Index>(1, n_ref / 2));
  table.resolution_floor = floor.empty() ? 0.0 : *std::max_element(floor.begin(), floor.end());
  return table;
}

Eigen::MatrixXcd free_jacobi(Index n) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (Index i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = 1.0;
  return m;
}

void write_csv(std::ostream& out, const ProbeTable& table) {
  out << "n,key,gap\n";
  for (const auto& r : table.rows) out << r.n << ',' << r.key << ',' << csv::format(r.gap) << '\n';
}

}  // namespace hdmd
