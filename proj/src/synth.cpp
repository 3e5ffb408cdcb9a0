#include "liftoff/synth.hpp"

#include "liftoff/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace liftoff {

namespace {

constexpr std::uint64_t kEnsembleStream = 0x656e73656d626c65ULL;
constexpr std::uint64_t kSignalStream = 0x7369676e616c3030ULL;
constexpr std::uint64_t kNoiseStream = 0x6e6f697365303030ULL;

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t sweep_point, std::uint64_t trial_index) {
  return mix64(mix64(mix64(base_seed) ^ sweep_point) ^ trial_index);
}

MeasurementEnsemble gen_ensemble(Eigen::Index d, Eigen::Index m, Field field, std::uint64_t seed) {
  if (d < 1 || m < 0) fail(ErrorCode::kInvalidArgument, "gen_ensemble: need d >= 1 and m >= 0");
  std::mt19937_64 rng(seed);
  Eigen::MatrixXcd a(d, m);
  if (field == Field::kReal) {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < d; ++j) a(j, i) = Complex(normal(rng), 0.0);
  } else {
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < d; ++j) {
        const double re = normal(rng);
        const double im = normal(rng);
        a(j, i) = Complex(re, im);
      }
  }
  return MeasurementEnsemble(std::move(a), field, seed);
}

SparseSignal gen_sparse_signal(Eigen::Index d, Eigen::Index k, Field field, std::uint64_t seed) {
  if (k < 1 || k > d) fail(ErrorCode::kInvalidArgument, "gen_sparse_signal: need 1 <= k <= d");
  std::mt19937_64 rng(seed);
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(d));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  for (Eigen::Index i = 0; i < k; ++i) {
    std::uniform_int_distribution<Eigen::Index> pick(i, d - 1);
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(pick(rng))]);
  }
  SparseSignal s;
  s.support.assign(idx.begin(), idx.begin() + k);
  std::sort(s.support.begin(), s.support.end());

  std::normal_distribution<double> normal(0.0, 1.0);
  s.x0 = ComplexVector::Zero(d);
  double norm = 0.0;
  do {
    for (auto j : s.support) {
      const double re = normal(rng);
      const double im = field == Field::kComplex ? normal(rng) : 0.0;
      s.x0(j) = Complex(re, im);
    }
    norm = s.x0.norm();
  } while (norm == 0.0);
  s.x0 /= norm;
  return s;
}

double awgn_sigma(const RealVector& clean, double snr_db) {
  if (clean.size() == 0) return 0.0;
  const double power = clean.squaredNorm() / static_cast<double>(clean.size());
  return std::sqrt(power / std::pow(10.0, snr_db / 10.0));
}

Measurements gen_measurements(const MeasurementEnsemble& e, const ComplexVector& x0,
                              std::optional<double> snr_db, std::uint64_t seed) {
  if (x0.size() != e.d()) fail(ErrorCode::kDimensionMismatch, "gen_measurements: x0 dimension mismatch");
  Measurements out;
  out.b = forward_apply(e, HermitianMatrix::outer(x0));
  out.w = RealVector::Zero(e.m());
  if (snr_db) {
    if (std::isnan(*snr_db)) fail(ErrorCode::kInvalidArgument, "gen_measurements: snr is NaN");
    const double sigma = awgn_sigma(out.b, *snr_db);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Eigen::Index i = 0; i < e.m(); ++i) out.w(i) = sigma * normal(rng);
    out.b += out.w;
  }
  return out;
}

ProblemInstance make_instance(Eigen::Index d, Eigen::Index m, Eigen::Index k, Field field,
                              std::optional<double> snr_db, std::uint64_t seed) {
  ProblemInstance inst;
  inst.seed = seed;
  inst.snr_db = snr_db;
  inst.ensemble = gen_ensemble(d, m, field, mix64(seed ^ kEnsembleStream));
  SparseSignal sig = gen_sparse_signal(d, k, field, mix64(seed ^ kSignalStream));
  inst.x0 = std::move(sig.x0);
  inst.support = std::move(sig.support);
  Measurements meas = gen_measurements(inst.ensemble, inst.x0, snr_db, mix64(seed ^ kNoiseStream));
  inst.b = std::move(meas.b);
  inst.w = std::move(meas.w);
  return inst;
}

}  // namespace liftoff
