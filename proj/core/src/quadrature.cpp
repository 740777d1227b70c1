#include "hdmd/quadrature.hpp"

#include "hdmd/csv.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

namespace hdmd {

double Box::volume() const {
  double v = 1.0;
  for (int k = 0; k < dimension(); ++k) v *= upper[k] - lower[k];
  return v;
}

Box Box::cube(int dimension, double lower, double upper) {
  return Box{std::vector<double>(dimension, lower), std::vector<double>(dimension, upper)};
}

QuadratureRule::QuadratureRule(NodeMatrix nodes, Eigen::VectorXd weights)
    : nodes_(std::move(nodes)), weights_(std::move(weights)) {
  if (weights_.size() == 0) throw std::invalid_argument("QuadratureRule: at least one node required");
  if (nodes_.rows() != weights_.size()) {
    throw std::invalid_argument("QuadratureRule: " + std::to_string(nodes_.rows()) + " nodes but " +
                                std::to_string(weights_.size()) + " weights");
  }
  if (nodes_.cols() < 1) throw std::invalid_argument("QuadratureRule: dimension must be positive");
  for (Index m = 0; m < weights_.size(); ++m) {
    if (!(weights_[m] > 0.0) || !std::isfinite(weights_[m])) {
      throw std::invalid_argument("QuadratureRule: weight " + std::to_string(m) + " is not strictly positive");
    }
  }
}

double QuadratureRule::total_mass() const {
  // Neumaier compensated sum.
  double s = 0.0, c = 0.0;
  for (Index m = 0; m < weights_.size(); ++m) {
    const double w = weights_[m], t = s + w;
    c += std::abs(s) >= std::abs(w) ? (s - t) + w : (w - t) + s;
    s = t;
  }
  return s + c;
}

QuadratureRule tensor_trapezoid(const Box& domain, std::span<const int> points_per_axis) {
  const int d = domain.dimension();
  if (d == 0) throw std::invalid_argument("tensor_trapezoid: empty box");
  if (static_cast<int>(domain.upper.size()) != d || static_cast<int>(points_per_axis.size()) != d) {
    throw std::invalid_argument("tensor_trapezoid: box and points_per_axis dimensions differ");
  }

  std::vector<Eigen::VectorXd> axis_nodes(d), axis_weights(d);
  Index total = 1;
  for (int k = 0; k < d; ++k) {
    const double a = domain.lower[k], b = domain.upper[k];
    if (!(b > a)) throw std::invalid_argument("tensor_trapezoid: inverted or empty interval on axis " + std::to_string(k));
    const int n = points_per_axis[k];
    if (n < 2) throw std::invalid_argument("tensor_trapezoid: need at least 2 points on axis " + std::to_string(k));
    const double h = (b - a) / (n - 1);
    axis_nodes[k].resize(n);
    axis_weights[k].setConstant(n, h);
    for (int i = 0; i < n; ++i) axis_nodes[k][i] = (i == n - 1) ? b : a + i * h;
    axis_weights[k][0] = axis_weights[k][n - 1] = 0.5 * h;
    total *= n;
  }

  NodeMatrix nodes(total, d);
  Eigen::VectorXd weights(total);
  std::vector<int> idx(d, 0);
  for (Index m = 0; m < total; ++m) {
    double w = 1.0;
    for (int k = 0; k < d; ++k) {
      nodes(m, k) = axis_nodes[k][idx[k]];
      w *= axis_weights[k][idx[k]];
    }
    weights[m] = w;
    for (int k = d - 1; k >= 0; --k) {
      if (++idx[k] < points_per_axis[k]) break;
      idx[k] = 0;
    }
  }
  return QuadratureRule(std::move(nodes), std::move(weights));
}

QuadratureRule monte_carlo(NodeMatrix samples, double total_mass) {
  if (samples.rows() < 1) throw std::invalid_argument("monte_carlo: at least one sample required");
  if (!(total_mass > 0.0)) throw std::invalid_argument("monte_carlo: total_mass must be positive");
  const Index m = samples.rows();
  Eigen::VectorXd weights = Eigen::VectorXd::Constant(m, total_mass / static_cast<double>(m));
  return QuadratureRule(std::move(samples), std::move(weights));
}

GaussLegendre1D gauss_legendre(int points, double lower, double upper) {
  if (points < 1) throw std::invalid_argument("gauss_legendre: points must be positive");
  GaussLegendre1D rule{Eigen::VectorXd(points), Eigen::VectorXd(points)};
  const double mid = 0.5 * (upper + lower), half = 0.5 * (upper - lower);
  // Newton on P_n from the Chebyshev-like initial guess; roots are symmetric.
  for (int i = 0; i < (points + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (points + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= points; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = points * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= points; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = points * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = mid - half * x;
    rule.nodes[points - 1 - i] = mid + half * x;
    rule.weights[i] = rule.weights[points - 1 - i] = half * w;
  }
  return rule;
}

void write_csv(std::ostream& out, const QuadratureRule& rule) {
  for (int k = 0; k < rule.dimension(); ++k) out << 'x' << (k + 1) << ',';
  out << "w\n";
  for (Index m = 0; m < rule.size(); ++m) {
    for (int k = 0; k < rule.dimension(); ++k) out << csv::format(rule.nodes()(m, k)) << ',';
    out << csv::format(rule.weights()[m]) << '\n';
  }
}

QuadratureRule read_quadrature_csv(std::istream& in) {
  auto table = csv::read_numeric(in);
  const auto cols = table.header.size();
  if (cols < 2 || table.header.back() != "w") {
    throw csv::ParseError(1, "quadrature CSV header must be x1,...,xd,w");
  }
  if (table.rows.empty()) throw csv::ParseError(2, "quadrature CSV has no nodes");
  const Index m = static_cast<Index>(table.rows.size());
  const Index d = static_cast<Index>(cols - 1);
  NodeMatrix nodes(m, d);
  Eigen::VectorXd weights(m);
  for (Index i = 0; i < m; ++i) {
    for (Index k = 0; k < d; ++k) nodes(i, k) = table.rows[i][k];
    weights[i] = table.rows[i][d];
    if (!(weights[i] > 0.0)) throw csv::ParseError(static_cast<std::size_t>(i) + 2, "weight must be positive");
  }
  return QuadratureRule(std::move(nodes), std::move(weights));
}

}  // namespace hdmd
