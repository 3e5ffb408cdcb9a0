#include "liftoff/error.hpp"
#include "liftoff/synth.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

using namespace liftoff;

TEST(Seeds, DeriveSeedIsDeterministicAndSpread) {
  EXPECT_EQ(derive_seed(1, 2, 3), derive_seed(1, 2, 3));
  std::set<std::uint64_t> seen;
  for (std::uint64_t c = 0; c < 20; ++c)
    for (std::uint64_t t = 0; t < 50; ++t) seen.insert(derive_seed(7, c, t));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_EQ(derive_seed(5, 0, 0), mix64(mix64(mix64(5))));
  // Reference SplitMix64 output for state 0 after one increment.
  EXPECT_EQ(mix64(0), 0xe220a8397b1dcdafULL);
}

TEST(Synth, SameSeedSameInstance) {
  const auto a = make_instance(8, 20, 3, Field::kComplex, 15.0, 99);
  const auto b = make_instance(8, 20, 3, Field::kComplex, 15.0, 99);
  EXPECT_EQ(a.ensemble.vectors(), b.ensemble.vectors());
  EXPECT_EQ(a.x0, b.x0);
  EXPECT_EQ(a.b, b.b);
  EXPECT_EQ(a.w, b.w);
  EXPECT_EQ(a.support, b.support);
  const auto c = make_instance(8, 20, 3, Field::kComplex, 15.0, 100);
  EXPECT_NE(a.ensemble.vectors(), c.ensemble.vectors());
}

TEST(Synth, ComplexEnsembleHasUnitEntryPower) {
  const auto e = gen_ensemble(1000, 4, Field::kComplex, 1);
  const double n = static_cast<double>(e.vectors().size());
  const double mean = e.vectors().cwiseAbs2().sum() / n;
  // |a|^2 ~ Exp(1): standard error 1 / sqrt(n).
  EXPECT_NEAR(mean, 1.0, 3.0 / std::sqrt(n));
  const double re_power = e.vectors().real().squaredNorm() / n;
  EXPECT_NEAR(re_power, 0.5, 3.0 * 0.5 * std::sqrt(2.0 / n));
}

TEST(Synth, RealEnsembleIsReal) {
  const auto e = gen_ensemble(1000, 4, Field::kReal, 2);
  EXPECT_TRUE(e.vectors().imag().isZero(0.0));
  const double n = static_cast<double>(e.vectors().size());
  EXPECT_NEAR(e.vectors().cwiseAbs2().sum() / n, 1.0, 3.0 * std::sqrt(2.0 / n));
  const auto s = gen_sparse_signal(10, 4, Field::kReal, 3);
  EXPECT_TRUE(s.x0.imag().isZero(0.0));
}

TEST(Synth, SupportIsUniform) {
  // 15 possible 2-subsets of {0..5}; chi-square with 14 degrees of freedom.
  std::map<std::pair<Eigen::Index, Eigen::Index>, int> counts;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const auto s = gen_sparse_signal(6, 2, Field::kComplex, derive_seed(4, 0, i));
    ASSERT_EQ(s.support.size(), 2u);
    ASSERT_LT(s.support[0], s.support[1]);
    ++counts[{s.support[0], s.support[1]}];
  }
  ASSERT_EQ(counts.size(), 15u);
  const double expected = draws / 15.0;
  double chi2 = 0.0;
  for (const auto& [key, c] : counts) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_LT(chi2, 36.12);  // 0.999 quantile
}

TEST(Synth, SignalShape) {
  const auto full = gen_sparse_signal(7, 7, Field::kComplex, 5);
  EXPECT_EQ(full.support.size(), 7u);
  EXPECT_NEAR(full.x0.norm(), 1.0, 1e-14);
  for (Eigen::Index i = 0; i < 7; ++i) EXPECT_NE(std::abs(full.x0(i)), 0.0);
  const auto one = gen_sparse_signal(9, 1, Field::kComplex, 6);
  EXPECT_NEAR(std::abs(one.x0(one.support[0])), 1.0, 1e-14);
  EXPECT_NEAR(one.x0.norm(), 1.0, 1e-14);
  EXPECT_THROW(gen_sparse_signal(3, 4, Field::kComplex, 1), Error);
  EXPECT_THROW(gen_sparse_signal(3, 0, Field::kComplex, 1), Error);
}

TEST(Synth, NoiselessMeasurements) {
  const auto inst = make_instance(6, 30, 2, Field::kComplex, std::nullopt, 7);
  EXPECT_EQ(inst.w.norm(), 0.0);
  EXPECT_GE(inst.b.minCoeff(), 0.0);
  EXPECT_LT((inst.b - forward_apply(inst.ensemble, HermitianMatrix::outer(inst.x0))).norm(), 1e-12);
}

TEST(Synth, AwgnCalibration) {
  const auto inst = make_instance(8, 10000, 2, Field::kComplex, 20.0, 8);
  const RealVector clean = inst.b - inst.w;
  EXPECT_NEAR(inst.w.squaredNorm() / clean.squaredNorm(), 1e-2, 1e-3);
  EXPECT_NEAR(awgn_sigma(RealVector::Constant(4, 2.0), 20.0), 0.2, 1e-15);
  EXPECT_EQ(awgn_sigma(RealVector::Zero(4), 20.0), 0.0);
}
