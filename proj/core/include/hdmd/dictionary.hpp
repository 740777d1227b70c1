#pragma once

#include "hdmd/quadrature.hpp"

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <iosfwd>
#include <span>

namespace hdmd {

using Complex = std::complex<double>;

/// A finite set of observables psi_1..psi_N on a d-dimensional state space.
/// The evaluator writes the row Psi(x) into `out` (length N) and must be pure.
class Dictionary {
 public:
  using Evaluator = std::function<void(std::span<const double> x, std::span<Complex> out)>;

  Dictionary(Index size, int dimension, Evaluator evaluator);

  Index size() const { return size_; }
  int dimension() const { return dimension_; }

  void evaluate(std::span<const double> x, std::span<Complex> out) const;
  Eigen::RowVectorXcd operator()(std::span<const double> x) const;

 private:
  Index size_;
  int dimension_;
  Evaluator evaluator_;
};

/// Isotropic Gaussians c * exp(-width * |x - center|^2) with centers on a
/// uniform grid over `centers_box`, endpoints included.
struct GaussianGridSpec {
  Box centers_box;
  int per_axis = 20;
  double width = 3.0;
  Complex amplitude{1.0, 1.0};
};

/// Center coordinates, one row per dictionary element, row-major over the grid
/// (last axis fastest).
NodeMatrix gaussian_centers(const GaussianGridSpec& spec);

Dictionary gaussian_grid_dictionary(const GaussianGridSpec& spec);

/// psi == 1 (N = 1).
Dictionary constant_dictionary(int dimension);

/// psi_k(x) = x_k, k = 1..d.
Dictionary linear_dictionary(int dimension);

/// Snapshot feature matrices: row m of psi_x is Psi(x^(m)), row m of psi_y is
/// Psi(y^(m)).
struct FeatureMatrices {
  Eigen::MatrixXcd psi_x;
  Eigen::MatrixXcd psi_y;

  Index snapshots() const { return psi_x.rows(); }
  Index size() const { return psi_x.cols(); }
};

/// Rows are filled independently; `threads > 1` splits them across workers
/// without changing any value.
FeatureMatrices evaluate_snapshots(const Dictionary& dict, const NodeMatrix& x_nodes, const NodeMatrix& y_nodes,
                                   int threads = 1);

using Observable = std::function<Complex(std::span<const double>)>;

/// (g(x^(1)), ..., g(x^(M)))^T
Eigen::VectorXcd evaluate_function_samples(const NodeMatrix& nodes, const Observable& g);

/// Debug export: header `m,which,psi1_re,psi1_im,...`; `which` is 0 for psi_x
/// rows and 1 for psi_y rows.
void write_csv(std::ostream& out, const FeatureMatrices& features);

namespace detail {
// Runs body(begin, end) over [0, count) split into `threads` contiguous chunks.
void parallel_rows(Index count, int threads, const std::function<void(Index, Index)>& body);
}  // namespace detail

}  // namespace hdmd
