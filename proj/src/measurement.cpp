#include "liftoff/measurement.hpp"

#include "liftoff/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

namespace liftoff {

MeasurementEnsemble::MeasurementEnsemble(Eigen::MatrixXcd vectors, Field field, std::uint64_t seed)
    : vectors_(std::move(vectors)), field_(field), seed_(seed) {
  if (!vectors_.allFinite()) fail(ErrorCode::kInvalidArgument, "ensemble has non-finite entries");
  if (field_ == Field::kReal && !(vectors_.imag().array() == 0.0).all()) {
    fail(ErrorCode::kInvalidArgument, "real ensemble has nonzero imaginary parts");
  }
}

RealVector forward_apply(const MeasurementEnsemble& e, const HermitianMatrix& x) {
  if (x.dim() != e.d()) {
    fail(ErrorCode::kDimensionMismatch, "forward_apply: X is " + std::to_string(x.dim()) +
                                            "-dimensional, ensemble expects " + std::to_string(e.d()));
  }
  if (e.m() == 0) return RealVector(0);
  const auto& a = e.vectors();
  if (e.field() == Field::kReal && x.is_real()) {
    const Eigen::MatrixXd ar = a.real();
    const Eigen::MatrixXd xa = x.matrix().real() * ar;
    return ar.cwiseProduct(xa).colwise().sum().transpose();
  }
  const Eigen::MatrixXcd xa = x.matrix() * a;
  const Eigen::VectorXcd vals = a.conjugate().cwiseProduct(xa).colwise().sum().transpose();
  // a^* X a is real for Hermitian X; anything left in the imaginary part is
  // round-off from the product above.
  const double scale = x.matrix().norm() * a.colwise().squaredNorm().maxCoeff();
  if (vals.imag().cwiseAbs().maxCoeff() > 1e-10 * std::max(scale, 1.0)) {
    fail(ErrorCode::kNumerical, "forward_apply: imaginary residue above round-off");
  }
  return vals.real();
}

HermitianMatrix adjoint_apply(const MeasurementEnsemble& e, const RealVector& v) {
  if (v.size() != e.m()) {
    fail(ErrorCode::kDimensionMismatch, "adjoint_apply: vector has length " + std::to_string(v.size()) +
                                            ", ensemble has m = " + std::to_string(e.m()));
  }
  if (e.m() == 0) return HermitianMatrix(e.d());
  const auto& a = e.vectors();
  if (e.field() == Field::kReal) {
    const Eigen::MatrixXd ar = a.real();
    const Eigen::MatrixXd out = (ar * v.asDiagonal()) * ar.transpose();
    return HermitianMatrix(Eigen::MatrixXcd(out.cast<Complex>()));
  }
  return HermitianMatrix(Eigen::MatrixXcd((a * v.asDiagonal()) * a.adjoint()));
}

GramCache::GramCache(const MeasurementEnsemble& e, double delta) {
  gram_ = (e.vectors().adjoint() * e.vectors()).cwiseAbs2();
  refactor(delta);
}

void GramCache::refactor(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    fail(ErrorCode::kInvalidArgument, "gram_factorize: delta must be finite and > 0");
  }
  delta_ = delta;
  Eigen::MatrixXd shifted = gram_;
  shifted.diagonal().array() += delta;
  factor_.compute(shifted);
  if (factor_.info() != Eigen::Success) {
    fail(ErrorCode::kNumerical, "gram_factorize: (delta I + K) is not positive definite");
  }
}

RealVector GramCache::solve(const RealVector& rhs) const {
  if (gram_.rows() == 0) return RealVector(0);
  return factor_.solve(rhs);
}

GramCache gram_factorize(const MeasurementEnsemble& e, double delta) { return GramCache(e, delta); }

HermitianMatrix solve_regularized(const MeasurementEnsemble& e, const GramCache& cache,
                                  const HermitianMatrix& r, double delta) {
  if (cache.delta() != delta) {
    fail(ErrorCode::kContractViolation, "solve_regularized: cache built for delta = " +
                                            std::to_string(cache.delta()) + ", requested " +
                                            std::to_string(delta));
  }
  if (cache.m() != e.m()) fail(ErrorCode::kContractViolation, "solve_regularized: cache/ensemble size mismatch");
  if (r.dim() != e.d()) fail(ErrorCode::kDimensionMismatch, "solve_regularized: dimension mismatch");
  if (e.m() == 0) return (1.0 / delta) * r;
  const RealVector coeffs = cache.solve(forward_apply(e, r));
  HermitianMatrix x = r - adjoint_apply(e, coeffs);
  x *= 1.0 / delta;
  return x;
}

double operator_norm_estimate(const MeasurementEnsemble& e, PowerIterationOptions opts) {
  if (e.m() == 0 || e.d() == 0) return 0.0;
  // Start inside range(A^*), where the top right singular vector lives.
  HermitianMatrix x = adjoint_apply(e, RealVector::Ones(e.m()));
  double nx = frobenius_norm(x);
  if (nx == 0.0) return 0.0;
  x *= 1.0 / nx;
  double estimate = 0.0;
  for (int it = 0; it < opts.max_iters; ++it) {
    HermitianMatrix y = adjoint_apply(e, forward_apply(e, x));
    const double ny = frobenius_norm(y);  // ||A^*A x|| -> sigma_max^2
    if (ny == 0.0) return 0.0;
    const double next = std::sqrt(ny);
    x = (1.0 / ny) * y;
    const bool done = it > 0 && std::abs(next - estimate) <= opts.rel_tol * next;
    estimate = next;
    if (done) break;
  }
  return estimate;
}

std::vector<HermitianMatrix> rip_probe_samples(Eigen::Index d, int s, int samples, Field field,
                                               std::uint64_t seed) {
  if (s < 1 || s > d) fail(ErrorCode::kInvalidArgument, "rip probe: sparsity must satisfy 1 <= s <= d");
  if (samples < 1) fail(ErrorCode::kInvalidArgument, "rip probe: samples must be >= 1");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(d));

  auto draw = [&] {
    return field == Field::kReal ? Complex(normal(rng), 0.0) : Complex(normal(rng), normal(rng));
  };

  std::vector<HermitianMatrix> out;
  out.reserve(static_cast<std::size_t>(samples));
  for (int n = 0; n < samples; ++n) {
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    for (int i = 0; i < s; ++i) {
      std::uniform_int_distribution<Eigen::Index> pick(i, d - 1);
      std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(pick(rng))]);
    }
    ComplexVector x = ComplexVector::Zero(d);
    ComplexVector y = ComplexVector::Zero(d);
    for (int i = 0; i < s; ++i) {
      const auto j = idx[static_cast<std::size_t>(i)];
      x(j) = draw();
      y(j) = draw();
    }
    const double phi = angle(rng);
    HermitianMatrix sample = std::cos(phi) * HermitianMatrix::outer(x) + std::sin(phi) * HermitianMatrix::outer(y);
    const double nf = frobenius_norm(sample);
    if (nf > 0.0) sample *= 1.0 / nf;
    out.push_back(std::move(sample));
  }
  return out;
}

RipProbeReport rip_ratio_probe(const MeasurementEnsemble& e, int s, int samples, std::uint64_t seed) {
  RipProbeReport report;
  report.sparsity = s;
  report.sample_count = samples;
  if (e.m() == 0) fail(ErrorCode::kInvalidArgument, "rip probe: ensemble has no measurements");
  bool first = true;
  for (const auto& x : rip_probe_samples(e.d(), s, samples, e.field(), seed)) {
    const double ratio = forward_apply(e, x).lpNorm<1>() / static_cast<double>(e.m());
    if (first) {
      report.min_ratio = report.max_ratio = ratio;
      first = false;
    } else {
      report.min_ratio = std::min(report.min_ratio, ratio);
      report.max_ratio = std::max(report.max_ratio, ratio);
    }
  }
  return report;
}

}  // namespace liftoff
