#pragma once

#include "hdmd/quadrature.hpp"

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace hdmd {

// Finite-section diagnostics. A large Hermitian `reference` matrix stands in
// for the operator L; P_n is the projection onto the leading n coordinates.
// Each table also reports `resolution_floor`: the same quantity evaluated at
// n = n_ref / 2, i.e. how well the reference resolves its own answer.

struct ProbeRow {
  Index n = 0;
  std::string key;
  double gap = 0.0;
};

struct ProbeTable {
  std::vector<ProbeRow> rows;
  double resolution_floor = 0.0;

  std::vector<ProbeRow> with_key(const std::string& key) const;
};

struct TestFunction {
  std::string name;
  std::function<double(double)> f;
};

/// gap(n) = || P_n^* [P_n (L - z) P_n^*]^{-1} P_n v - (L - z)^{-1} v ||_2, key "resolvent".
ProbeTable resolvent_convergence_probe(const Eigen::MatrixXcd& reference, const Eigen::VectorXcd& v,
                                       std::complex<double> z, std::span<const Index> truncation_sizes);

/// gap(n, k) = |<(P_n L P_n^*)^k P_n v, P_n v> - <L^k v, v>| for k = 0..k_max, key "k=<k>".
ProbeTable moment_convergence_probe(const Eigen::MatrixXcd& reference, const Eigen::VectorXcd& v, int k_max,
                                    std::span<const Index> truncation_sizes);

/// gap(n, f) = |int f dmu_{v,n} - int f dmu_v| with both measures obtained from
/// eigendecompositions (section and reference respectively), key = f.name.
ProbeTable weak_convergence_probe(const Eigen::MatrixXcd& reference, const Eigen::VectorXcd& v,
                                  std::span<const TestFunction> test_fns, std::span<const Index> truncation_sizes);

/// Zero diagonal, unit off-diagonals.
Eigen::MatrixXcd free_jacobi(Index n);

/// CSV header `n,key,gap`.
void write_csv(std::ostream& out, const ProbeTable& table);

}  // namespace hdmd
