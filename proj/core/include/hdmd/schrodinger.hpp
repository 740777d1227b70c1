#pragma once

#include "hdmd/dictionary.hpp"
#include "hdmd/quadrature.hpp"
#include "hdmd/spectral.hpp"

#include <array>
#include <complex>
#include <functional>
#include <vector>

namespace hdmd::schrodinger {

using Point2 = std::array<double, 2>;

/// H = -1/2 Laplacian + V with V(x, y) = (x^2 + y^2)/2 on a box, probed with a
/// grid of Gaussian bumps.
struct HarmonicOscillatorProblem {
  Box domain = Box::cube(2, -5.0, 5.0);
  GaussianGridSpec dictionary{Box::cube(2, -4.0, 4.0), 20, 3.0, Complex{1.0, 1.0}};

  static double potential(double x, double y) { return 0.5 * (x * x + y * y); }
};

/// (H u)(p) for u = c exp(-a |p - center|^2), in closed form:
/// u(p) (2a - 2a^2 r^2 + |p|^2 / 2).
Complex apply_hamiltonian_gaussian(const Point2& center, double width, Complex amplitude, const Point2& eval_point);

/// psi_x: Gaussians at the quadrature nodes; psi_y: H applied to each Gaussian
/// at the same nodes. Nodes must lie inside the problem domain.
FeatureMatrices generate_snapshots(const HarmonicOscillatorProblem& problem, const QuadratureRule& quad,
                                   int threads = 1);

/// Physicists' Hermite polynomial by three-term recurrence.
double hermite_polynomial(int m, double x);

struct ExactEigenpair {
  int m = 0;
  int n = 0;
  double energy = 1.0;

  /// L^2(R^2)-normalized H_m(x) H_n(y) exp(-(x^2 + y^2)/2).
  double operator()(double x, double y) const;
};

/// All (m, n) with m + n + 1 <= max_energy, sorted by energy then (m, n).
std::vector<ExactEigenpair> exact_spectrum(int max_energy);

/// sin(pi x / 5) sin(pi y / 5)
double reference_observable(double x, double y);

/// Atom at each E = 1..max_energy with weight sum_{m+n+1=E} |<f, phi_{m,n}>|^2,
/// inner products taken by tensor Gauss-Legendre quadrature with
/// `quad_resolution` points per axis on `domain`.
AtomicMeasure exact_spike_weights(int max_energy, const std::function<double(double, double)>& observable,
                                  int quad_resolution, const Box& domain = Box::cube(2, -5.0, 5.0));

}  // namespace hdmd::schrodinger
