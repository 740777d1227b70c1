#include "hdmd/schrodinger.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hdmd::schrodinger {

Complex apply_hamiltonian_gaussian(const Point2& center, double width, Complex amplitude, const Point2& eval_point) {
  if (!(width > 0.0)) throw std::invalid_argument("apply_hamiltonian_gaussian: width must be positive");
  const double dx = eval_point[0] - center[0], dy = eval_point[1] - center[1];
  const double r2 = dx * dx + dy * dy;
  const Complex u = amplitude * std::exp(-width * r2);
  const double factor = 2.0 * width - 2.0 * width * width * r2 +
                        HarmonicOscillatorProblem::potential(eval_point[0], eval_point[1]);
  return u * factor;
}

FeatureMatrices generate_snapshots(const HarmonicOscillatorProblem& problem, const QuadratureRule& quad, int threads) {
  if (quad.dimension() != 2) throw std::invalid_argument("generate_snapshots: quadrature must be two-dimensional");
  const auto& dom = problem.domain;
  for (Index m = 0; m < quad.size(); ++m) {
    for (int k = 0; k < 2; ++k) {
      const double x = quad.nodes()(m, k);
      if (x < dom.lower[k] || x > dom.upper[k]) {
        throw std::invalid_argument("generate_snapshots: node " + std::to_string(m) + " lies outside the domain");
      }
    }
  }

  const NodeMatrix centers = gaussian_centers(problem.dictionary);
  const double a = problem.dictionary.width;
  const Complex c = problem.dictionary.amplitude;
  if (!(a > 0.0)) throw std::invalid_argument("generate_snapshots: dictionary width must be positive");
  const Index n = centers.rows();
  FeatureMatrices f{Eigen::MatrixXcd(quad.size(), n), Eigen::MatrixXcd(quad.size(), n)};
  detail::parallel_rows(quad.size(), threads, [&](Index begin, Index end) {
    for (Index m = begin; m < end; ++m) {
      const double x = quad.nodes()(m, 0), y = quad.nodes()(m, 1);
      const double v = HarmonicOscillatorProblem::potential(x, y);
      for (Index j = 0; j < n; ++j) {
        const double dx = x - centers(j, 0), dy = y - centers(j, 1);
        const double r2 = dx * dx + dy * dy;
        const Complex u = c * std::exp(-a * r2);
        f.psi_x(m, j) = u;
        f.psi_y(m, j) = u * (2.0 * a - 2.0 * a * a * r2 + v);
      }
    }
  });
  return f;
}

double hermite_polynomial(int m, double x) {
  if (m < 0) throw std::invalid_argument("hermite_polynomial: degree must be nonnegative");
  double h0 = 1.0;
  if (m == 0) return h0;
  double h1 = 2.0 * x;
  for (int k = 1; k < m; ++k) {
    const double h2 = 2.0 * x * h1 - 2.0 * k * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

namespace {

// (2^m m! sqrt(pi))^{-1/2}: 1-D normalization of H_m(x) exp(-x^2/2).
double hermite_norm(int m) {
  return std::exp(-0.5 * (m * std::numbers::ln2 + std::lgamma(m + 1.0) + 0.5 * std::log(std::numbers::pi)));
}

}  // namespace

double ExactEigenpair::operator()(double x, double y) const {
  return hermite_norm(m) * hermite_norm(n) * hermite_polynomial(m, x) * hermite_polynomial(n, y) *
         std::exp(-0.5 * (x * x + y * y));
}

std::vector<ExactEigenpair> exact_spectrum(int max_energy) {
  if (max_energy < 1) throw std::invalid_argument("exact_spectrum: max_energy must be >= 1");
  std::vector<ExactEigenpair> out;
  for (int e = 1; e <= max_energy; ++e) {
    for (int m = 0; m < e; ++m) out.push_back({m, e - 1 - m, static_cast<double>(e)});
  }
  return out;
}

double reference_observable(double x, double y) {
  return std::sin(std::numbers::pi * x / 5.0) * std::sin(std::numbers::pi * y / 5.0);
}

AtomicMeasure exact_spike_weights(int max_energy, const std::function<double(double, double)>& observable,
                                  int quad_resolution, const Box& domain) {
  if (domain.dimension() != 2) throw std::invalid_argument("exact_spike_weights: domain must be two-dimensional");
  if (quad_resolution < 2) throw std::invalid_argument("exact_spike_weights: quad_resolution must be >= 2");
  const auto gx = gauss_legendre(quad_resolution, domain.lower[0], domain.upper[0]);
  const auto gy = gauss_legendre(quad_resolution, domain.lower[1], domain.upper[1]);
  const Index q = quad_resolution;

  Eigen::MatrixXd fvals(q, q);
  for (Index i = 0; i < q; ++i)
    for (Index j = 0; j < q; ++j) fvals(i, j) = observable(gx.nodes[i], gy.nodes[j]);

  // Separable eigenfunctions: tabulate the 1-D factors once per degree.
  auto table = [&](const GaussLegendre1D& g) {
    Eigen::MatrixXd t(max_energy, q);
    for (int m = 0; m < max_energy; ++m)
      for (Index i = 0; i < q; ++i)
        t(m, i) = hermite_norm(m) * hermite_polynomial(m, g.nodes[i]) * std::exp(-0.5 * g.nodes[i] * g.nodes[i]);
    return t;
  };
  const Eigen::MatrixXd px = table(gx), py = table(gy);

  // Inner products <f, phi_{m,n}> for all m, n < max_energy.
  const Eigen::MatrixXd wf = gx.weights.asDiagonal() * fvals * gy.weights.asDiagonal();
  const Eigen::MatrixXd inner = px * wf * py.transpose();

  std::vector<Atom> atoms;
  for (int e = 1; e <= max_energy; ++e) {
    double w = 0.0;
    for (int m = 0; m < e; ++m) w += inner(m, e - 1 - m) * inner(m, e - 1 - m);
    atoms.push_back({static_cast<double>(e), w, std::nullopt, e});
  }
  return AtomicMeasure(std::move(atoms));
}

}  // namespace hdmd::schrodinger
