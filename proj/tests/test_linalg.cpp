#include "liftoff/error.hpp"
#include "liftoff/linalg.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace liftoff;

namespace {

bool exactly_hermitian(const HermitianMatrix& h) {
  const auto& m = h.matrix();
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (m(j, j).imag() != 0.0) return false;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (m(i, j) != std::conj(m(j, i))) return false;
  }
  return true;
}

HermitianMatrix random_h(Eigen::Index d, std::mt19937_64& rng) { return HermitianMatrix(oracle::random_hermitian(d, rng)); }

}  // namespace

TEST(HermitianMatrix, ConstructionSymmetrizesExactly) {
  std::mt19937_64 rng(1);
  const Eigen::MatrixXcd g = Eigen::MatrixXcd::Random(6, 6);
  const HermitianMatrix h(g);
  EXPECT_TRUE(exactly_hermitian(h));
  EXPECT_LT((h.matrix() - 0.5 * (g + g.adjoint())).norm(), 1e-15);
  EXPECT_THROW(HermitianMatrix(Eigen::MatrixXcd::Zero(2, 3)), Error);
}

TEST(Norms, ZeroAndIdentity) {
  const auto z = norms(HermitianMatrix::zero(3));
  EXPECT_EQ(z.trace, 0.0);
  EXPECT_EQ(z.frobenius, 0.0);
  EXPECT_EQ(z.entrywise_l1, 0.0);
  const auto i = norms(HermitianMatrix::identity(4));
  EXPECT_DOUBLE_EQ(i.trace, 4.0);
  EXPECT_DOUBLE_EQ(i.frobenius, 2.0);
  EXPECT_DOUBLE_EQ(i.entrywise_l1, 4.0);
}

TEST(Norms, OuterProductExpansion) {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    const auto x = oracle::random_vector(5, rng);
    const auto n = norms(HermitianMatrix::outer(x));
    // sum_ij |x_i||x_j| = (sum_i |x_i|)^2 and trace = sum_i |x_i|^2
    double l1 = 0.0, l2sq = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      l1 += std::abs(x(i));
      l2sq += std::norm(x(i));
    }
    EXPECT_NEAR(n.entrywise_l1, l1 * l1, 1e-12 * l1 * l1);
    EXPECT_NEAR(n.trace, l2sq, 1e-12 * l2sq);
    EXPECT_NEAR(n.frobenius, l2sq, 1e-12 * l2sq);  // rank one: ||xx^*||_F = ||x||^2
  }
}

TEST(Norms, Invariants) {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 50; ++rep) {
    const auto h = random_h(5, rng);
    const auto n = norms(h);
    EXPECT_LE(n.frobenius, n.entrywise_l1 + 1e-12);
    const auto p = norms(HermitianMatrix(oracle::random_psd(5, rng, 3)));
    EXPECT_GE(p.trace, p.frobenius - 1e-12);
  }
}

TEST(SoftThreshold, ZeroTauIsIdentity) {
  std::mt19937_64 rng(2);
  const auto z = random_h(4, rng);
  EXPECT_EQ(soft_threshold(z, 0.0).matrix(), z.matrix());
  EXPECT_THROW(soft_threshold(z, -1.0), Error);
}

TEST(SoftThreshold, RealEntry) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
  m(0, 0) = 2.0;
  m(1, 1) = 0.3;
  const auto s = soft_threshold(HermitianMatrix(m), 0.5);
  EXPECT_DOUBLE_EQ(s(0, 0).real(), 1.5);
  EXPECT_EQ(s(1, 1), Complex(0.0, 0.0));
}

TEST(SoftThreshold, ComplexGridMatchesScalarDefinition) {
  // z = 3 e^{i pi/4}, tau = 1 -> 2 e^{i pi/4}
  {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
    m(0, 1) = std::polar(3.0, std::numbers::pi / 4);
    m(1, 0) = std::conj(m(0, 1));
    const auto s = soft_threshold(HermitianMatrix(m), 1.0);
    EXPECT_NEAR(std::abs(s(0, 1) - std::polar(2.0, std::numbers::pi / 4)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(s(1, 0) - std::polar(2.0, -std::numbers::pi / 4)), 0.0, 1e-15);
  }
  for (double r : {0.0, 0.2, 0.999, 1.0, 1.5, 4.0}) {
    for (int k = 0; k < 16; ++k) {
      const Complex z = std::polar(r, 2.0 * std::numbers::pi * k / 16);
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
      m(1, 0) = z;
      m(0, 1) = std::conj(z);
      const Complex got = soft_threshold(HermitianMatrix(m), 1.0)(1, 0);
      const Complex want = oracle::scalar_soft_threshold(z, 1.0);
      EXPECT_NEAR(std::abs(got - want), 0.0, 1e-14) << "r=" << r << " k=" << k;
      if (r > 1.0) EXPECT_NEAR(std::arg(got), std::arg(z), 1e-12);
    }
  }
}

TEST(SoftThreshold, NonExpansiveAndHermitian) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> tau(0.0, 2.0);
  for (int rep = 0; rep < 200; ++rep) {
    const auto a = random_h(5, rng);
    const auto b = random_h(5, rng);
    const double t = tau(rng);
    const auto sa = soft_threshold(a, t);
    EXPECT_TRUE(exactly_hermitian(sa));
    EXPECT_LE(frobenius_distance(sa, soft_threshold(b, t)), frobenius_distance(a, b) + 1e-12);
  }
}

TEST(PsdProject, FixedPointOnPsd) {
  std::mt19937_64 rng(4);
  const HermitianMatrix p(oracle::random_psd(6, rng, 3));
  EXPECT_LT(frobenius_distance(psd_project(p), p), 1e-12 * frobenius_norm(p));
}

TEST(PsdProject, ClampsNegativeEigenvalue) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  const auto p = psd_project(HermitianMatrix(m));
  EXPECT_NEAR(p(0, 0).real(), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(p(1, 1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(p(0, 1)), 0.0, 1e-15);
}

TEST(PsdProject, NearestPointAgainstMonteCarlo) {
  std::mt19937_64 rng(5);
  const auto z = random_h(5, rng);
  const auto pz = psd_project(z);
  const double dist = frobenius_distance(z, pz);
  EXPECT_GE(min_eigenvalue(pz), -1e-12);
  EXPECT_LT((pz.matrix() - oracle::clamp_psd(z.matrix())).norm(), 1e-10);
  std::uniform_int_distribution<int> rank(1, 5);
  for (int rep = 0; rep < 1000; ++rep) {
    const HermitianMatrix p(oracle::random_psd(5, rng, rank(rng)) * 0.3);
    EXPECT_LE(dist, frobenius_distance(z, p) + 1e-12);
  }
}

TEST(PsdProject, IdempotentAndHermitian) {
  std::mt19937_64 rng(6);
  for (int rep = 0; rep < 50; ++rep) {
    const auto p = psd_project(random_h(6, rng));
    EXPECT_TRUE(exactly_hermitian(p));
    EXPECT_LT(frobenius_distance(psd_project(p), p), 2e-12 * std::max(1.0, frobenius_norm(p)));
  }
}

TEST(PhaseAlignedDistance, Basics) {
  std::mt19937_64 rng(9);
  const auto x = oracle::random_vector(6, rng);
  EXPECT_NEAR(phase_aligned_distance(x, x, Field::kComplex), 0.0, 1e-7);
  for (double theta : {0.3, 1.7, 3.0, -2.2}) {
    EXPECT_NEAR(phase_aligned_distance(std::polar(1.0, theta) * x, x, Field::kComplex), 0.0, 1e-7);
  }
  const ComplexVector xr = x.real().cast<Complex>();
  EXPECT_EQ(phase_aligned_distance(-xr, xr, Field::kReal), 0.0);
  EXPECT_THROW(phase_aligned_distance(x, ComplexVector::Zero(3), Field::kComplex), Error);
}

TEST(PhaseAlignedDistance, ClosedFormMatchesThetaGrid) {
  std::mt19937_64 rng(10);
  for (int rep = 0; rep < 10; ++rep) {
    const auto z = oracle::random_vector(4, rng);
    const auto x = oracle::random_vector(4, rng);
    const double closed = phase_aligned_distance(z, x, Field::kComplex);
    const double grid = oracle::phase_grid_distance(z, x, 100000);
    // Grid spacing 2 pi / 1e5 bounds the excess of the grid minimum.
    EXPECT_GE(grid, closed - 1e-12);
    EXPECT_LE(grid - closed, 2.0 * std::numbers::pi / 1e5 * z.norm());
  }
}

TEST(PhaseAlignedDistance, PseudoMetric) {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 200; ++rep) {
    const auto a = oracle::random_vector(5, rng);
    const auto b = oracle::random_vector(5, rng);
    const auto c = oracle::random_vector(5, rng);
    const double ab = phase_aligned_distance(a, b, Field::kComplex);
    EXPECT_NEAR(ab, phase_aligned_distance(b, a, Field::kComplex), 1e-12);
    EXPECT_LE(phase_aligned_distance(a, c, Field::kComplex),
              ab + phase_aligned_distance(b, c, Field::kComplex) + 1e-12);
    const Complex g = std::polar(1.0, 0.77 * rep);
    EXPECT_NEAR(phase_aligned_distance(g * a, g * b, Field::kComplex), ab, 1e-10);
  }
}

TEST(RankOneExtract, ExactRankOne) {
  std::mt19937_64 rng(12);
  const auto v = oracle::random_vector(5, rng);
  const auto r = rank_one_extract(HermitianMatrix::outer(v));
  EXPECT_LT(phase_aligned_distance(r.x, v, Field::kComplex), 1e-12 * v.norm() * 10);
  EXPECT_LT(r.eigengap, 1e-14);
  Eigen::Index pivot = 0;
  r.x.cwiseAbs().maxCoeff(&pivot);
  EXPECT_EQ(r.x(pivot).imag(), 0.0);
  EXPECT_GE(r.x(pivot).real(), 0.0);
}

TEST(RankOneExtract, ZeroMatrix) {
  const auto r = rank_one_extract(HermitianMatrix::zero(4));
  EXPECT_EQ(r.x.norm(), 0.0);
  EXPECT_EQ(r.eigengap, 0.0);
}

TEST(RankOneExtract, TwoTermSpectrum) {
  // v, w orthonormal; X = vv^* + 0.01 ww^* has eigenvalues 1 and 0.01.
  ComplexVector v = ComplexVector::Zero(4), w = ComplexVector::Zero(4);
  v << Complex(0.5, 0.5), Complex(0.5, 0), Complex(0, 0.5), 0.0;
  w << 0.0, 0.0, 0.0, Complex(0, 1);
  const auto r = rank_one_extract(HermitianMatrix::outer(v) + 0.01 * HermitianMatrix::outer(w));
  EXPECT_NEAR(r.eigengap, 0.01, 1e-12);
  EXPECT_LT(phase_aligned_distance(r.x, v, Field::kComplex), 1e-12);
}

TEST(RealInputs, StayReal) {
  std::mt19937_64 rng(13);
  const Eigen::MatrixXd g = Eigen::MatrixXd::Random(6, 6);
  const HermitianMatrix h(Eigen::MatrixXcd(g.cast<Complex>()));
  ASSERT_TRUE(h.is_real());
  EXPECT_TRUE(soft_threshold(h, 0.3).is_real());
  EXPECT_TRUE(psd_project(h).is_real());
  EXPECT_TRUE(rank_one_extract(psd_project(h)).x.imag().isZero(0.0));
}
