#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace hdmd {

using Index = Eigen::Index;

/// Node coordinates, one point per row. Row-major so a node is a contiguous span.
using NodeMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Axis-aligned box [lower_k, upper_k] per axis.
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  int dimension() const { return static_cast<int>(lower.size()); }
  double volume() const;

  static Box cube(int dimension, double lower, double upper);
};

/// Quadrature rule for integrals against a measure on the state space: nodes
/// x^(m) and strictly positive weights w_m. Immutable after construction.
class QuadratureRule {
 public:
  QuadratureRule(NodeMatrix nodes, Eigen::VectorXd weights);

  Index size() const { return weights_.size(); }
  int dimension() const { return static_cast<int>(nodes_.cols()); }

  const NodeMatrix& nodes() const { return nodes_; }
  const Eigen::VectorXd& weights() const { return weights_; }

  std::span<const double> node(Index m) const {
    return {nodes_.data() + m * nodes_.cols(), static_cast<std::size_t>(nodes_.cols())};
  }

  // Sequential left-to-right sum.
  double total_mass() const;

 private:
  NodeMatrix nodes_;
  Eigen::VectorXd weights_;
};

/// Tensor-product trapezoidal rule on `domain` with `points_per_axis[k]` equally
/// spaced nodes on axis k (endpoints included). Nodes are ordered row-major over
/// the grid, last axis fastest.
QuadratureRule tensor_trapezoid(const Box& domain, std::span<const int> points_per_axis);

/// Equal-weight rule: every sample gets total_mass / M.
QuadratureRule monte_carlo(NodeMatrix samples, double total_mass);

/// Gauss-Legendre nodes and weights on [lower, upper].
struct GaussLegendre1D {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};
GaussLegendre1D gauss_legendre(int points, double lower, double upper);

/// CSV layout: header `x1,...,xd,w`, one node per row.
void write_csv(std::ostream& out, const QuadratureRule& rule);
QuadratureRule read_quadrature_csv(std::istream& in);

}  // namespace hdmd
