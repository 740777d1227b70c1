#include "hdmd/dmd_core.hpp"
#include "hdmd/schrodinger.hpp"

#include "support/checks.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

namespace hdmd {
namespace {

using testing::expect_g_self_adjoint;

QuadratureRule random_rule(Index m, std::mt19937_64& rng) {
  NodeMatrix nodes = NodeMatrix::Zero(m, 1);
  for (Index i = 0; i < m; ++i) nodes(i, 0) = static_cast<double>(i);
  return QuadratureRule(nodes, testing::random_weights(m, rng));
}

TEST(AssembleGramPair, ConstantDictionaryGivesTotalMass) {
  const int pts[] = {3, 3};
  const auto rule = tensor_trapezoid(Box::cube(2, -5.0, 5.0), pts);
  const auto f = evaluate_snapshots(constant_dictionary(2), rule.nodes(), rule.nodes());
  const auto pair = assemble_gram_pair(f, rule);
  EXPECT_NEAR(pair->g(0, 0).real(), 100.0, 1e-12);
  EXPECT_NEAR(pair->a(0, 0).real(), 100.0, 1e-12);
  EXPECT_EQ(pair->retained_rank, 1);
}

TEST(AssembleGramPair, WeightedOrthonormalColumnsGiveIdentity) {
  std::mt19937_64 rng(1);
  const Index m = 30, n = 5;
  const auto rule = random_rule(m, rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(testing::random_complex(m, n, rng));
  const Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(m, n);
  FeatureMatrices f{rule.weights().cwiseSqrt().cwiseInverse().asDiagonal() * q, q};
  const auto pair = assemble_gram_pair(f, rule);
  EXPECT_LE((pair->g - Eigen::MatrixXcd::Identity(n, n)).norm(), 1e-12);
}

TEST(AssembleGramPair, GaussianDiagonalMatchesClosedFormIntegral) {
  schrodinger::HarmonicOscillatorProblem problem;
  const int pts[] = {120, 120};
  const auto rule = tensor_trapezoid(problem.domain, pts);
  const auto f = schrodinger::generate_snapshots(problem, rule);
  const auto pair = assemble_gram_pair(f, rule);
  const auto centers = gaussian_centers(problem.dictionary);
  const double a = problem.dictionary.width;
  const double c2 = std::norm(problem.dictionary.amplitude);
  const double whole_plane = std::numbers::pi / (2.0 * a) * c2;  // pi/3
  const double s = std::sqrt(2.0 * a);
  const double h = 10.0 / 119.0;
  for (Index j : {0, 19, 190, 210, 399}) {
    // Per axis: int_{-5}^{5} exp(-2a (x - x_c)^2) dx plus the leading
    // Euler-Maclaurin endpoint term h^2/12 (f'(5) - f'(-5)) of the trapezoid rule.
    double box = c2, trapezoid = c2;
    for (int k = 0; k < 2; ++k) {
      const double xc = centers(j, k);
      const double exact = std::sqrt(std::numbers::pi) / (2.0 * s) * (std::erf(s * (5.0 - xc)) + std::erf(s * (5.0 + xc)));
      const auto df = [&](double x) { return -4.0 * a * (x - xc) * std::exp(-2.0 * a * (x - xc) * (x - xc)); };
      box *= exact;
      trapezoid *= exact + h * h / 12.0 * (df(5.0) - df(-5.0));
    }
    EXPECT_NEAR(pair->g(j, j).real(), trapezoid, 1e-6 * box) << j;
    // Against the whole-plane value pi/3 the only discrepancy is domain truncation.
    EXPECT_NEAR(pair->g(j, j).real(), whole_plane, 1.5 * (whole_plane - box) + 1e-10) << j;
  }
  const Eigen::MatrixXcd herm_err = pair->g - pair->g.adjoint();
  EXPECT_LE(herm_err.norm() / std::max(1.0, pair->g.norm()), 1e-12);
}

TEST(AssembleGramPair, ThreadedAssemblyAgreesToRoundoff) {
  std::mt19937_64 rng(2);
  const Index m = 5000, n = 8;
  const auto rule = random_rule(m, rng);
  FeatureMatrices f{testing::random_complex(m, n, rng), testing::random_complex(m, n, rng)};
  const auto serial = assemble_gram_pair(f, rule, {kDefaultRankTolerance, 1, 512});
  const auto threaded = assemble_gram_pair(f, rule, {kDefaultRankTolerance, 4, 512});
  const auto again = assemble_gram_pair(f, rule, {kDefaultRankTolerance, 4, 512});
  EXPECT_LE((serial->g - threaded->g).norm(), 1e-12 * serial->g.norm());
  EXPECT_LE((serial->a - threaded->a).norm(), 1e-12 * serial->a.norm());
  EXPECT_EQ(threaded->g, again->g);
}

TEST(AssembleGramPair, RowCountMismatchThrows) {
  std::mt19937_64 rng(3);
  const auto rule = random_rule(10, rng);
  FeatureMatrices f{Eigen::MatrixXcd::Ones(9, 2), Eigen::MatrixXcd::Ones(9, 2)};
  EXPECT_THROW(assemble_gram_pair(f, rule), std::invalid_argument);
}

TEST(Edmd, IdentityGramReturnsA) {
  std::mt19937_64 rng(4);
  const Eigen::MatrixXcd a = testing::random_complex(4, 4, rng);
  const auto k = edmd(make_gram_pair(Eigen::MatrixXcd::Identity(4, 4), a));
  EXPECT_LE((k.k - a).norm(), 1e-14);
  EXPECT_EQ(k.kind, KoopmanKind::EDMD);
}

TEST(Edmd, DiagonalSolve) {
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(2, 2), a = Eigen::MatrixXcd::Zero(2, 2);
  g(0, 0) = 2.0;
  g(1, 1) = 1.0;
  a(0, 0) = 2.0;
  a(1, 1) = 3.0;
  const auto k = edmd(make_gram_pair(g, a));
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(2, 2);
  expected(0, 0) = 1.0;
  expected(1, 1) = 3.0;
  EXPECT_LE((k.k - expected).norm(), 1e-15);
}

TEST(Edmd, MatchesSvdPseudoinverseOracle) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXcd g = testing::random_hpd(5, rng);
    const Eigen::MatrixXcd a = testing::random_complex(5, 5, rng);
    const auto k = edmd(make_gram_pair(g, a));
    const Eigen::MatrixXcd oracle = testing::svd_pinv(g) * a;
    EXPECT_LE((k.k - oracle).norm(), 1e-10 * std::max(1.0, oracle.norm()));
    EXPECT_FALSE(k.rank_deficient());
  }
}

TEST(Edmd, RankDeficientGramIsFlaggedNotFatal) {
  std::mt19937_64 rng(6);
  const Eigen::MatrixXcd b = testing::random_complex(6, 3, rng);
  const Eigen::MatrixXcd g = b * b.adjoint();  // rank 3
  const Eigen::MatrixXcd a = testing::random_complex(6, 6, rng);
  const auto pair = make_gram_pair(g, a);
  EXPECT_EQ(pair->retained_rank, 3);
  const auto k = edmd(pair);
  EXPECT_TRUE(k.rank_deficient());
  EXPECT_LE((k.k - testing::svd_pinv(g, 1e-10) * a).norm(), 1e-8 * k.k.norm());
}

TEST(HermitianDmd, SymmetrizesUnderIdentityGram) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, 2);
  a(0, 1) = 1.0;
  const auto k = hermitian_dmd(make_gram_pair(Eigen::MatrixXcd::Identity(2, 2), a));
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(2, 2);
  expected(0, 1) = expected(1, 0) = 0.5;
  EXPECT_LE((k.k - expected).norm(), 1e-15);
  expect_g_self_adjoint(k);
}

TEST(HermitianDmd, ConstraintInactiveForHermitianA) {
  std::mt19937_64 rng(7);
  const Eigen::MatrixXcd a = testing::random_hermitian(5, rng);
  const auto k = hermitian_dmd(make_gram_pair(Eigen::MatrixXcd::Identity(5, 5), a));
  EXPECT_LE((k.k - a).norm(), 1e-13 * a.norm());
  expect_g_self_adjoint(k);
}

// Reduced route vs the general symmetric Procrustes solve on
// X = W^{1/2} Psi_X G^{-1/2}, Y = W^{1/2} Psi_Y G^{-1/2}, K = G^{-1/2} M G^{1/2}.
TEST(HermitianDmd, MatchesGeneralProcrustesRoute) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const Index m = 25, n = 6;
    const auto rule = random_rule(m, rng);
    FeatureMatrices f{testing::random_complex(m, n, rng), testing::random_complex(m, n, rng)};
    const auto pair = assemble_gram_pair(f, rule);
    const auto k = hermitian_dmd(pair);
    expect_g_self_adjoint(k);

    const Eigen::MatrixXcd g_half = testing::hpd_power(pair->g, 0.5);
    const Eigen::MatrixXcd g_mhalf = testing::hpd_power(pair->g, -0.5);
    const Eigen::VectorXd sw = rule.weights().cwiseSqrt();
    const Eigen::MatrixXcd x = sw.asDiagonal() * f.psi_x * g_mhalf;
    const Eigen::MatrixXcd y = sw.asDiagonal() * f.psi_y * g_mhalf;
    const Eigen::MatrixXcd via_procrustes = g_mhalf * symmetric_procrustes(x, y) * g_half;
    EXPECT_LE((k.k - via_procrustes).norm(), 1e-8 * std::max(1.0, k.k.norm()));
  }
}

double weighted_objective(const FeatureMatrices& f, const QuadratureRule& rule, const Eigen::MatrixXcd& k,
                          const Eigen::MatrixXcd& g_mhalf) {
  const Eigen::VectorXd sw = rule.weights().cwiseSqrt();
  return (sw.asDiagonal() * (f.psi_y - f.psi_x * k) * g_mhalf).squaredNorm();
}

TEST(HermitianDmd, BeatsRandomGSelfAdjointPerturbations) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    const Index m = 20, n = 2 + trial;
    const auto rule = random_rule(m, rng);
    FeatureMatrices f{testing::random_complex(m, n, rng), testing::random_complex(m, n, rng)};
    const auto pair = assemble_gram_pair(f, rule);
    const auto k = hermitian_dmd(pair);
    const Eigen::MatrixXcd g_mhalf = testing::hpd_power(pair->g, -0.5);
    const double best = weighted_objective(f, rule, k.k, g_mhalf);
    const Eigen::MatrixXcd g_inv = pair->g.inverse();
    for (int p = 0; p < 1000; ++p) {
      const Eigen::MatrixXcd delta = g_inv * testing::random_hermitian(n, rng);  // G delta = delta^* G
      for (double eps : {1e-2, 1e-4}) {
        EXPECT_LE(best, weighted_objective(f, rule, k.k + eps * delta, g_mhalf) * (1.0 + 1e-14));
      }
    }
  }
}

TEST(HermitianDmd, RecoversPlantedOperator) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 10; ++trial) {
    const Index m = 40, n = 6;
    const auto rule = random_rule(m, rng);
    const Eigen::MatrixXcd psi_x = testing::random_complex(m, n, rng);
    const Eigen::MatrixXcd g = psi_x.adjoint() * rule.weights().asDiagonal() * psi_x;
    const Eigen::MatrixXcd k_true = g.inverse() * testing::random_hermitian(n, rng);
    FeatureMatrices f{psi_x, psi_x * k_true};
    const auto k = hermitian_dmd(assemble_gram_pair(f, rule));
    expect_g_self_adjoint(k);
    EXPECT_LE((k.k - k_true).norm(), 1e-8 * k_true.norm());
  }
}

TEST(HermitianDmd, AgreesWithEdmdWhenAlreadySelfAdjoint) {
  std::mt19937_64 rng(11);
  const Eigen::MatrixXcd g = testing::random_hpd(6, rng);
  const auto pair = make_gram_pair(g, testing::random_hermitian(6, rng));
  const auto h = hermitian_dmd(pair);
  const auto e = edmd(pair);
  EXPECT_LE(hermiticity_residual(e), 1e-10);
  EXPECT_LE((h.k - e.k).norm(), 1e-8 * e.k.norm());
}

TEST(SymmetricProcrustes, OrthonormalColumnsReduceToSymmetrizedProduct) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const Index m = 12, n = 5;
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(testing::random_complex(m, n, rng));
    const Eigen::MatrixXcd x = qr.householderQ() * Eigen::MatrixXcd::Identity(m, n);
    const Eigen::MatrixXcd y = testing::random_complex(m, n, rng);
    const Eigen::MatrixXcd xy = x.adjoint() * y;
    const Eigen::MatrixXcd closed = 0.5 * (xy + xy.adjoint());
    EXPECT_LE((symmetric_procrustes(x, y) - closed).norm(), 1e-12 * std::max(1.0, closed.norm()));
  }
}

TEST(SymmetricProcrustes, SelfTargetGivesIdentity) {
  std::mt19937_64 rng(13);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(testing::random_complex(8, 4, rng));
  const Eigen::MatrixXcd x = qr.householderQ() * Eigen::MatrixXcd::Identity(8, 4);
  EXPECT_LE((symmetric_procrustes(x, x) - Eigen::MatrixXcd::Identity(4, 4)).norm(), 1e-13);

  // Rank-deficient x: identity only on its row space, zero on the null space.
  Eigen::MatrixXcd xr = testing::random_complex(8, 3, rng);
  xr.col(2).setZero();
  const Eigen::MatrixXcd mr = symmetric_procrustes(xr, xr);
  EXPECT_LE((xr * mr - xr).norm(), 1e-12 * xr.norm());
  EXPECT_LE(mr.col(2).norm(), 1e-12);
}

TEST(SymmetricProcrustes, MatchesBruteForceOn2x2) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::MatrixXcd x = testing::random_complex(2, 2, rng);
    const Eigen::MatrixXcd y = testing::random_complex(2, 2, rng);
    const Eigen::MatrixXcd m = symmetric_procrustes(x, y);
    EXPECT_LE((m - m.adjoint()).norm(), 1e-14);
    const double solver = (y - x * m).squaredNorm();
    const double brute = testing::brute_force_procrustes2(x, y);
    EXPECT_NEAR(solver, brute, 1e-7 * std::max(1.0, brute));
    EXPECT_LE(solver, brute + 1e-12);
  }
}

TEST(Eigendecompose, DiagonalProblem) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(3, 3);
  a.diagonal() << 1.0, 2.0, 3.0;
  const auto k = hermitian_dmd(make_gram_pair(Eigen::MatrixXcd::Identity(3, 3), a));
  const auto eig = eigendecompose(k);
  ASSERT_EQ(eig.rank(), 3);
  for (Index j = 0; j < 3; ++j) {
    EXPECT_NEAR(eig.eigenvalues[j], j + 1.0, 1e-14);
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(3);
    e[j] = 1.0;
    EXPECT_LE((eig.eigenvectors.col(j) - e).norm(), 1e-14);
  }
}

TEST(Eigendecompose, ResidualAndGOrthonormality) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 3 + trial % 8;
    const Eigen::MatrixXcd g = testing::random_hpd(n, rng);
    const Eigen::MatrixXcd a = testing::random_complex(n, n, rng);
    const auto k = hermitian_dmd(make_gram_pair(g, a));
    expect_g_self_adjoint(k);
    const auto eig = eigendecompose(k);
    const Eigen::MatrixXcd b = 0.5 * (a + a.adjoint());
    EXPECT_LE(testing::g_orthonormality_error(eig), 1e-8);
    for (Index j = 0; j < eig.rank(); ++j) {
      const Eigen::VectorXcd v = eig.eigenvectors.col(j);
      const Eigen::VectorXcd gv = eig.gram->g * v;
      EXPECT_LE((b * v - eig.eigenvalues[j] * gv).norm() / gv.norm(), 1e-8);
      if (j > 0) EXPECT_LE(eig.eigenvalues[j - 1], eig.eigenvalues[j]);
      Index imax = 0;
      v.cwiseAbs().maxCoeff(&imax);
      EXPECT_EQ(v[imax].imag(), 0.0);
      EXPECT_GT(v[imax].real(), 0.0);
    }
  }
}

TEST(Eigendecompose, RejectsEdmdAndZeroRank) {
  const auto pair = make_gram_pair(Eigen::MatrixXcd::Identity(2, 2), Eigen::MatrixXcd::Identity(2, 2));
  EXPECT_THROW(eigendecompose(edmd(pair)), std::invalid_argument);
  const auto zero = make_gram_pair(Eigen::MatrixXcd::Zero(2, 2), Eigen::MatrixXcd::Identity(2, 2));
  EXPECT_EQ(zero->retained_rank, 0);
  EXPECT_THROW(eigendecompose(hermitian_dmd(zero)), std::runtime_error);
}

TEST(Eigendecompose, TruncatedGramStaysInRetainedSubspace) {
  std::mt19937_64 rng(16);
  const Eigen::MatrixXcd b = testing::random_complex(7, 4, rng);
  const auto pair = make_gram_pair(b * b.adjoint(), testing::random_complex(7, 7, rng));
  ASSERT_EQ(pair->retained_rank, 4);
  const auto k = hermitian_dmd(pair);
  expect_g_self_adjoint(k);
  const auto eig = eigendecompose(k);
  EXPECT_EQ(eig.rank(), 4);
  EXPECT_LE(testing::g_orthonormality_error(eig), 1e-8);
}

}  // namespace
}  // namespace hdmd
