#pragma once

#include "liftoff/linalg.hpp"

#include <Eigen/Cholesky>

#include <cstdint>
#include <vector>

namespace liftoff {

/// The m sensing vectors a_1..a_m stored as the columns of a d x m matrix.
class MeasurementEnsemble {
 public:
  MeasurementEnsemble() = default;
  /// Throws kInvalidArgument when field == kReal but some imaginary part is
  /// nonzero.
  MeasurementEnsemble(Eigen::MatrixXcd vectors, Field field, std::uint64_t seed = 0);

  Eigen::Index d() const { return vectors_.rows(); }
  Eigen::Index m() const { return vectors_.cols(); }
  Field field() const { return field_; }
  std::uint64_t seed() const { return seed_; }
  const Eigen::MatrixXcd& vectors() const { return vectors_; }
  auto vector(Eigen::Index i) const { return vectors_.col(i); }

 private:
  Eigen::MatrixXcd vectors_;
  Field field_ = Field::kComplex;
  std::uint64_t seed_ = 0;
};

/// A(X)_i = a_i^* X a_i.
RealVector forward_apply(const MeasurementEnsemble& e, const HermitianMatrix& x);

/// A^*(v) = sum_i v_i a_i a_i^*.
HermitianMatrix adjoint_apply(const MeasurementEnsemble& e, const RealVector& v);

/// Gram matrix K_ij = |<a_i, a_j>|^2 of A A^* together with a Cholesky factor
/// of (delta I_m + K). K is computed once; refactor() only redoes the
/// O(m^3) factorization.
class GramCache {
 public:
  GramCache(const MeasurementEnsemble& e, double delta);

  double delta() const { return delta_; }
  Eigen::Index m() const { return gram_.rows(); }
  const Eigen::MatrixXd& gram() const { return gram_; }

  void refactor(double delta);
  /// (delta I + K)^{-1} rhs
  RealVector solve(const RealVector& rhs) const;

 private:
  Eigen::MatrixXd gram_;
  Eigen::LLT<Eigen::MatrixXd> factor_;
  double delta_ = 0.0;
};

GramCache gram_factorize(const MeasurementEnsemble& e, double delta);

/// Solves A^*(A(X)) + delta X = R via the Woodbury identity
///   X = (R - A^*((delta I + K)^{-1} A(R))) / delta.
/// Throws kContractViolation if the cache was built for a different delta or
/// a different ensemble size.
HermitianMatrix solve_regularized(const MeasurementEnsemble& e, const GramCache& cache,
                                  const HermitianMatrix& r, double delta);

struct PowerIterationOptions {
  int max_iters = 1000;
  double rel_tol = 1e-6;
};

/// Power-iteration estimate of ||A|| = sup ||A(X)||_2 over ||X||_F = 1.
double operator_norm_estimate(const MeasurementEnsemble& e, PowerIterationOptions opts = {});

struct RipProbeReport {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  int sample_count = 0;
  int sparsity = 0;
};

/// Unit-Frobenius rank <= 2 test matrices alpha x x^* + beta y y^* with x, y
/// Gaussian on a shared random s-subset and (alpha, beta) uniform on the unit
/// circle. Deterministic in (d, s, samples, field, seed).
std::vector<HermitianMatrix> rip_probe_samples(Eigen::Index d, int s, int samples, Field field,
                                               std::uint64_t seed);

/// min/max of (1/m) ||A(X)||_1 over rip_probe_samples().
RipProbeReport rip_ratio_probe(const MeasurementEnsemble& e, int s, int samples, std::uint64_t seed);

}  // namespace liftoff
