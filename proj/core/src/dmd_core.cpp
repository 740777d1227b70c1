#include "hdmd/dmd_core.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace hdmd {

Complex GramPair::inner(const Eigen::VectorXcd& g_vec, const Eigen::VectorXcd& h_vec) const {
  return h_vec.dot(g * g_vec);
}

Eigen::MatrixXcd GramPair::solve(const Eigen::MatrixXcd& rhs) const {
  if (rhs.rows() != size()) throw std::invalid_argument("GramPair::solve: row count mismatch");
  return whitening * (whitening.adjoint() * rhs);
}

GramPairPtr make_gram_pair(Eigen::MatrixXcd g, Eigen::MatrixXcd a, double rank_tolerance) {
  if (g.rows() != g.cols() || a.rows() != g.rows() || a.cols() != g.cols()) {
    throw std::invalid_argument("make_gram_pair: G and A must be square and of equal size");
  }
  if (g.rows() == 0) throw std::invalid_argument("make_gram_pair: empty dictionary");
  if (!(rank_tolerance >= 0.0)) throw std::invalid_argument("make_gram_pair: rank_tolerance must be nonnegative");

  auto pair = std::make_shared<GramPair>();
  pair->g = 0.5 * (g + g.adjoint());
  pair->a = std::move(a);
  pair->rank_tolerance = rank_tolerance;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(pair->g);
  if (es.info() != Eigen::Success) throw std::runtime_error("make_gram_pair: eigendecomposition of G failed");
  const Eigen::VectorXd& lam = es.eigenvalues();
  const double lam_max = lam.size() ? lam[lam.size() - 1] : 0.0;
  Index first = lam.size();
  if (lam_max > 0.0) {
    const double cutoff = rank_tolerance * lam_max;
    first = 0;
    while (first < lam.size() && !(lam[first] > cutoff && lam[first] > 0.0)) ++first;
  }
  pair->retained_rank = lam.size() - first;
  pair->basis = es.eigenvectors().rightCols(pair->retained_rank);
  pair->basis_eigenvalues = lam.tail(pair->retained_rank);
  pair->g_eigen_floor = pair->retained_rank > 0 ? pair->basis_eigenvalues[0] : 0.0;

  if (pair->retained_rank > 0) {
    Eigen::MatrixXcd reduced = pair->basis.adjoint() * pair->g * pair->basis;
    reduced = 0.5 * (reduced + reduced.adjoint());
    Eigen::LLT<Eigen::MatrixXcd> chol(reduced);
    if (chol.info() == Eigen::Success) {
      // T = Q R^{-1}, i.e. T^* = R^{-*} Q^*.
      pair->whitening = chol.matrixU().solve<Eigen::OnTheRight>(pair->basis);
    } else {
      pair->whitening = pair->basis * pair->basis_eigenvalues.cwiseSqrt().cwiseInverse().asDiagonal();
    }
  } else {
    pair->whitening.resize(pair->size(), 0);
  }
  return pair;
}

namespace {

struct Partial {
  Eigen::MatrixXcd g, a;
};

Partial accumulate_rows(const FeatureMatrices& f, const Eigen::VectorXd& w, Index begin, Index end, Index block) {
  const Index n = f.size();
  Partial p{Eigen::MatrixXcd::Zero(n, n), Eigen::MatrixXcd::Zero(n, n)};
  Eigen::MatrixXcd wx, wy;
  for (Index start = begin; start < end; start += block) {
    const Index len = std::min(block, end - start);
    const auto x = f.psi_x.middleRows(start, len);
    const auto y = f.psi_y.middleRows(start, len);
    const auto wb = w.segment(start, len).asDiagonal();
    wx.noalias() = wb * x;
    wy.noalias() = wb * y;
    p.g.noalias() += x.adjoint() * wx;
    p.a.noalias() += x.adjoint() * wy;
  }
  return p;
}

}  // namespace

GramPairPtr assemble_gram_pair(const FeatureMatrices& features, const QuadratureRule& quad,
                               const AssemblyOptions& options) {
  if (features.psi_x.rows() != quad.size()) {
    throw std::invalid_argument("assemble_gram_pair: " + std::to_string(features.psi_x.rows()) +
                                " snapshot rows but quadrature has " + std::to_string(quad.size()) + " nodes");
  }
  if (features.psi_y.rows() != features.psi_x.rows() || features.psi_y.cols() != features.psi_x.cols()) {
    throw std::invalid_argument("assemble_gram_pair: psi_x and psi_y shapes differ");
  }
  const Index m = quad.size();
  const Index block = std::max<Index>(options.block_rows, 1);
  const Index workers = std::clamp<Index>(options.threads, 1, std::max<Index>(1, m / block));

  if (workers <= 1) {
    auto p = accumulate_rows(features, quad.weights(), 0, m, block);
    return make_gram_pair(std::move(p.g), std::move(p.a), options.rank_tolerance);
  }

  std::vector<Partial> parts(workers);
  std::vector<std::thread> pool;
  const Index chunk = (m + workers - 1) / workers;
  for (Index t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      const Index begin = std::min(m, t * chunk), end = std::min(m, begin + chunk);
      parts[t] = accumulate_rows(features, quad.weights(), begin, end, block);
    });
  }
  for (auto& th : pool) th.join();
  for (Index stride = 1; stride < workers; stride *= 2) {
    for (Index t = 0; t + stride < workers; t += 2 * stride) {
      parts[t].g += parts[t + stride].g;
      parts[t].a += parts[t + stride].a;
    }
  }
  return make_gram_pair(std::move(parts[0].g), std::move(parts[0].a), options.rank_tolerance);
}

double hermiticity_residual(const Eigen::MatrixXcd& g, const Eigen::MatrixXcd& k) {
  const Eigen::MatrixXcd gk = g * k;
  const Eigen::MatrixXcd kg = k.adjoint() * g;
  return (gk - kg).norm() / std::max(1.0, gk.norm());
}

KoopmanMatrix edmd(const GramPairPtr& pair) {
  if (!pair) throw std::invalid_argument("edmd: null GramPair");
  return KoopmanMatrix{pair->solve(pair->a), KoopmanKind::EDMD, pair};
}

KoopmanMatrix hermitian_dmd(const GramPairPtr& pair) {
  if (!pair) throw std::invalid_argument("hermitian_dmd: null GramPair");
  const auto& t = pair->whitening;
  const Eigen::MatrixXcd b = 0.5 * (pair->a + pair->a.adjoint());
  Eigen::MatrixXcd c = t.adjoint() * b * t;
  c = 0.5 * (c + c.adjoint());
  Eigen::MatrixXcd k = (t * c) * (t.adjoint() * pair->g);
  return KoopmanMatrix{std::move(k), KoopmanKind::HermitianDMD, pair};
}

Eigen::MatrixXcd symmetric_procrustes(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw std::invalid_argument("symmetric_procrustes: X and Y must have the same shape");
  }
  const Index n = x.cols();
  if (n == 0 || x.rows() == 0) throw std::invalid_argument("symmetric_procrustes: empty matrix");

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(x, Eigen::ComputeThinU | Eigen::ComputeFullV);
  const Index r = svd.singularValues().size();
  Eigen::VectorXd sigma = Eigen::VectorXd::Zero(n);
  sigma.head(r) = svd.singularValues();
  const Eigen::MatrixXcd& v = svd.matrixV();

  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n, n);
  c.topRows(r) = svd.matrixU().adjoint() * y * v;

  Eigen::MatrixXcd ups(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      const double denom = sigma[i] * sigma[i] + sigma[j] * sigma[j];
      ups(i, j) = denom != 0.0 ? (sigma[i] * c(i, j) + sigma[j] * std::conj(c(j, i))) / denom : Complex{};
    }
  }
  Eigen::MatrixXcd m = v * ups * v.adjoint();
  return 0.5 * (m + m.adjoint());
}

KoopmanEig eigendecompose(const KoopmanMatrix& km) {
  if (km.kind != KoopmanKind::HermitianDMD) {
    throw std::invalid_argument("eigendecompose: requires a Hermitian DMD matrix");
  }
  if (!km.source) throw std::invalid_argument("eigendecompose: missing GramPair");
  const GramPair& pair = *km.source;
  if (pair.retained_rank == 0) throw std::runtime_error("eigendecompose: retained rank of G is zero");

  const auto& t = pair.whitening;
  Eigen::MatrixXcd whitened = (t.adjoint() * pair.g) * (km.k * t);
  whitened = 0.5 * (whitened + whitened.adjoint());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(whitened);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecompose: eigensolver failed");

  KoopmanEig out;
  out.gram = km.source;
  out.eigenvalues = es.eigenvalues();
  out.eigenvectors = t * es.eigenvectors();

  for (Index j = 0; j < out.eigenvectors.cols(); ++j) {
    auto col = out.eigenvectors.col(j);
    Index imax = 0;
    col.cwiseAbs2().maxCoeff(&imax);
    const Complex pivot = col[imax];
    if (std::abs(pivot) > 0.0) {
      col *= std::conj(pivot) / std::abs(pivot);
      col[imax] = std::abs(col[imax]);
    }
  }
  return out;
}

}  // namespace hdmd
