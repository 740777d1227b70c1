#include "hdmd/dictionary.hpp"

#include "hdmd/csv.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace hdmd {

Dictionary::Dictionary(Index size, int dimension, Evaluator evaluator)
    : size_(size), dimension_(dimension), evaluator_(std::move(evaluator)) {
  if (size_ < 1) throw std::invalid_argument("Dictionary: size must be positive");
  if (dimension_ < 1) throw std::invalid_argument("Dictionary: dimension must be positive");
  if (!evaluator_) throw std::invalid_argument("Dictionary: evaluator is empty");
}

void Dictionary::evaluate(std::span<const double> x, std::span<Complex> out) const {
  if (static_cast<int>(x.size()) != dimension_) {
    throw std::invalid_argument("Dictionary: point has dimension " + std::to_string(x.size()) + ", expected " +
                                std::to_string(dimension_));
  }
  if (static_cast<Index>(out.size()) != size_) throw std::invalid_argument("Dictionary: output length mismatch");
  evaluator_(x, out);
}

Eigen::RowVectorXcd Dictionary::operator()(std::span<const double> x) const {
  Eigen::RowVectorXcd row(size_);
  evaluate(x, {row.data(), static_cast<std::size_t>(size_)});
  return row;
}

NodeMatrix gaussian_centers(const GaussianGridSpec& spec) {
  const int d = spec.centers_box.dimension();
  if (d < 1 || static_cast<int>(spec.centers_box.upper.size()) != d) {
    throw std::invalid_argument("gaussian_centers: malformed centers box");
  }
  if (spec.per_axis < 1) throw std::invalid_argument("gaussian_centers: per_axis must be >= 1");
  for (int k = 0; k < d; ++k) {
    if (spec.centers_box.upper[k] < spec.centers_box.lower[k]) {
      throw std::invalid_argument("gaussian_centers: inverted centers box");
    }
  }

  Index n = 1;
  for (int k = 0; k < d; ++k) n *= spec.per_axis;
  NodeMatrix centers(n, d);
  std::vector<int> idx(d, 0);
  for (Index j = 0; j < n; ++j) {
    for (int k = 0; k < d; ++k) {
      const double a = spec.centers_box.lower[k], b = spec.centers_box.upper[k];
      if (spec.per_axis == 1) {
        centers(j, k) = 0.5 * (a + b);
      } else {
        const double h = (b - a) / (spec.per_axis - 1);
        centers(j, k) = (idx[k] == spec.per_axis - 1) ? b : a + idx[k] * h;
      }
    }
    for (int k = d - 1; k >= 0; --k) {
      if (++idx[k] < spec.per_axis) break;
      idx[k] = 0;
    }
  }
  return centers;
}

Dictionary gaussian_grid_dictionary(const GaussianGridSpec& spec) {
  if (!(spec.width > 0.0)) throw std::invalid_argument("gaussian_grid_dictionary: width must be positive");
  auto centers = gaussian_centers(spec);
  const int d = static_cast<int>(centers.cols());
  const Index n = centers.rows();
  const double width = spec.width;
  const Complex amplitude = spec.amplitude;
  return Dictionary(n, d, [centers = std::move(centers), width, amplitude, d](std::span<const double> x,
                                                                              std::span<Complex> out) {
    for (Index j = 0; j < centers.rows(); ++j) {
      double r2 = 0.0;
      for (int k = 0; k < d; ++k) {
        const double dx = x[k] - centers(j, k);
        r2 += dx * dx;
      }
      out[j] = amplitude * std::exp(-width * r2);
    }
  });
}

Dictionary constant_dictionary(int dimension) {
  return Dictionary(1, dimension, [](std::span<const double>, std::span<Complex> out) { out[0] = 1.0; });
}

Dictionary linear_dictionary(int dimension) {
  return Dictionary(dimension, dimension, [](std::span<const double> x, std::span<Complex> out) {
    for (std::size_t k = 0; k < x.size(); ++k) out[k] = x[k];
  });
}

namespace detail {

void parallel_rows(Index count, int threads, const std::function<void(Index, Index)>& body) {
  const Index workers = std::clamp<Index>(threads, 1, std::max<Index>(count, 1));
  if (workers <= 1) {
    body(0, count);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const Index chunk = (count + workers - 1) / workers;
  for (Index t = 0; t < workers; ++t) {
    const Index begin = t * chunk, end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

FeatureMatrices evaluate_snapshots(const Dictionary& dict, const NodeMatrix& x_nodes, const NodeMatrix& y_nodes,
                                   int threads) {
  if (x_nodes.rows() != y_nodes.rows()) {
    throw std::invalid_argument("evaluate_snapshots: " + std::to_string(x_nodes.rows()) + " x nodes but " +
                                std::to_string(y_nodes.rows()) + " y nodes");
  }
  if (x_nodes.cols() != dict.dimension() || y_nodes.cols() != dict.dimension()) {
    throw std::invalid_argument("evaluate_snapshots: node dimension does not match dictionary domain");
  }
  const Index m = x_nodes.rows(), n = dict.size();
  const auto d = static_cast<std::size_t>(dict.dimension());
  FeatureMatrices f{Eigen::MatrixXcd(m, n), Eigen::MatrixXcd(m, n)};
  detail::parallel_rows(m, threads, [&](Index begin, Index end) {
    Eigen::RowVectorXcd row(n);
    std::span<Complex> out(row.data(), static_cast<std::size_t>(n));
    for (Index i = begin; i < end; ++i) {
      dict.evaluate({x_nodes.data() + i * x_nodes.cols(), d}, out);
      f.psi_x.row(i) = row;
      dict.evaluate({y_nodes.data() + i * y_nodes.cols(), d}, out);
      f.psi_y.row(i) = row;
    }
  });
  return f;
}

Eigen::VectorXcd evaluate_function_samples(const NodeMatrix& nodes, const Observable& g) {
  Eigen::VectorXcd s(nodes.rows());
  const auto d = static_cast<std::size_t>(nodes.cols());
  for (Index m = 0; m < nodes.rows(); ++m) s[m] = g({nodes.data() + m * nodes.cols(), d});
  return s;
}

void write_csv(std::ostream& out, const FeatureMatrices& features) {
  out << "m,which";
  for (Index j = 0; j < features.size(); ++j) out << ",psi" << (j + 1) << "_re,psi" << (j + 1) << "_im";
  out << '\n';
  for (int which = 0; which < 2; ++which) {
    const auto& mat = which == 0 ? features.psi_x : features.psi_y;
    for (Index m = 0; m < mat.rows(); ++m) {
      out << m << ',' << which;
      for (Index j = 0; j < mat.cols(); ++j) {
        out << ',' << csv::format(mat(m, j).real()) << ',' << csv::format(mat(m, j).imag());
      }
      out << '\n';
    }
  }
}

}  // namespace hdmd
