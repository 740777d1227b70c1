#pragma once

#include "hdmd/dictionary.hpp"
#include "hdmd/quadrature.hpp"

#include <Eigen/Dense>

#include <memory>

namespace hdmd {

inline constexpr double kDefaultRankTolerance = 1e-12;

/// Gram matrix G = Psi_X^* W Psi_X and correlation matrix A = Psi_X^* W Psi_Y,
/// together with the truncated eigendecomposition of G that every solve uses.
///
/// Eigenvalues of G below `rank_tolerance * lambda_max(G)` are discarded; the
/// columns of `basis` span the retained subspace and `basis_eigenvalues` holds
/// the matching (strictly positive) eigenvalues in ascending order.
///
/// `whitening` is T = Q R^{-1} with R^* R = Q^* G Q (Cholesky of G restricted to
/// the retained subspace), so T^* G T = I. Solves go through T rather than
/// Q L^{-1}, whose eigenvector error is amplified by 1 / lambda_min.
struct GramPair {
  Eigen::MatrixXcd g;
  Eigen::MatrixXcd a;
  double rank_tolerance = kDefaultRankTolerance;
  double g_eigen_floor = 0.0;
  Index retained_rank = 0;
  Eigen::MatrixXcd basis;
  Eigen::VectorXd basis_eigenvalues;
  Eigen::MatrixXcd whitening;

  Index size() const { return g.rows(); }
  bool rank_deficient() const { return retained_rank < g.rows(); }

  /// G-inner product h^* G g.
  Complex inner(const Eigen::VectorXcd& g_vec, const Eigen::VectorXcd& h_vec) const;

  /// Truncated pseudoinverse applied to a right-hand side: G^+ rhs = T T^* rhs.
  Eigen::MatrixXcd solve(const Eigen::MatrixXcd& rhs) const;
};

using GramPairPtr = std::shared_ptr<const GramPair>;

/// Builds a GramPair from explicit matrices; g is replaced by (g + g^*)/2.
GramPairPtr make_gram_pair(Eigen::MatrixXcd g, Eigen::MatrixXcd a, double rank_tolerance = kDefaultRankTolerance);

struct AssemblyOptions {
  double rank_tolerance = kDefaultRankTolerance;
  // >1 splits snapshot rows into contiguous blocks whose partial sums are
  // combined by a fixed pairwise tree. Changes results at roundoff level.
  int threads = 1;
  Index block_rows = 4096;
};

GramPairPtr assemble_gram_pair(const FeatureMatrices& features, const QuadratureRule& quad,
                               const AssemblyOptions& options = {});

enum class KoopmanKind { EDMD, HermitianDMD };

struct KoopmanMatrix {
  Eigen::MatrixXcd k;
  KoopmanKind kind = KoopmanKind::EDMD;
  GramPairPtr source;

  bool rank_deficient() const { return source && source->rank_deficient(); }
};

/// ||G K - K^* G||_F / max(1, ||G K||_F)
double hermiticity_residual(const Eigen::MatrixXcd& g, const Eigen::MatrixXcd& k);
inline double hermiticity_residual(const KoopmanMatrix& km) { return hermiticity_residual(km.source->g, km.k); }

/// K = G^+ A.
KoopmanMatrix edmd(const GramPairPtr& pair);

/// K = G^+ (A + A^*)/2 restricted to the retained subspace of G, formed as
/// T (T^* B T) T^* G with B = (A + A^*)/2 so that G K = K^* G holds to roundoff.
KoopmanMatrix hermitian_dmd(const GramPairPtr& pair);

/// Frobenius-minimal Hermitian M for min ||Y - X M||_F.
///
/// With X = U S V^* (full V, zero-padded singular values) and C = U^* Y V:
///   Ups_ij = (s_i c_ij + s_j conj(c_ji)) / (s_i^2 + s_j^2),  0 if both vanish,
/// and M = V Ups V^*.
Eigen::MatrixXcd symmetric_procrustes(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y);

/// Eigenpairs of a Hermitian DMD matrix. Columns of `eigenvectors` are
/// G-orthonormal; eigenvalues are real and ascending.
struct KoopmanEig {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXcd eigenvectors;
  GramPairPtr gram;

  Index rank() const { return eigenvalues.size(); }
};

/// Solves ((A + A^*)/2) v = lambda G v on the retained subspace of G through
/// the whitened Hermitian matrix T^* G K T (T from the GramPair). Each
/// eigenvector is rotated so its largest-modulus entry is real and positive.
KoopmanEig eigendecompose(const KoopmanMatrix& k);

}  // namespace hdmd
