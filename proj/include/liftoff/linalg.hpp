#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <utility>

namespace liftoff {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

enum class Field { kReal, kComplex };

/// Dense d x d complex Hermitian matrix.
///
/// Every constructor and every arithmetic operation routes through
/// (M + M^*) / 2, so entry(i,j) == conj(entry(j,i)) holds bit-exactly and the
/// diagonal has an exactly zero imaginary part.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(Eigen::Index dim);
  explicit HermitianMatrix(const Eigen::MatrixXcd& m);

  static HermitianMatrix zero(Eigen::Index dim) { return HermitianMatrix(dim); }
  static HermitianMatrix identity(Eigen::Index dim);
  /// x x^*
  static HermitianMatrix outer(const ComplexVector& x);

  Eigen::Index dim() const { return data_.rows(); }
  const Eigen::MatrixXcd& matrix() const { return data_; }
  Complex operator()(Eigen::Index i, Eigen::Index j) const { return data_(i, j); }

  bool is_real() const;

  HermitianMatrix& operator+=(const HermitianMatrix& o);
  HermitianMatrix& operator-=(const HermitianMatrix& o);
  HermitianMatrix& operator*=(double s);

  friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
  friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) { return a -= b; }
  friend HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }
  friend HermitianMatrix operator*(HermitianMatrix a, double s) { return a *= s; }

 private:
  void symmetrize();
  Eigen::MatrixXcd data_;
};

/// Real Frobenius inner product Re Tr(A^* B).
double inner(const HermitianMatrix& a, const HermitianMatrix& b);
double frobenius_norm(const HermitianMatrix& a);
double frobenius_distance(const HermitianMatrix& a, const HermitianMatrix& b);

struct MatrixNorms {
  double trace = 0.0;
  double frobenius = 0.0;
  double entrywise_l1 = 0.0;
};

MatrixNorms norms(const HermitianMatrix& x);

/// Entrywise complex soft-threshold: z -> (|z| - tau) z / |z| when |z| >= tau,
/// 0 otherwise.
HermitianMatrix soft_threshold(const HermitianMatrix& z, double tau);

/// Frobenius-nearest PSD matrix: zero the strictly negative eigenvalues.
HermitianMatrix psd_project(const HermitianMatrix& z);

/// Smallest eigenvalue; used by the PSD assertions.
double min_eigenvalue(const HermitianMatrix& z);

/// Distance modulo the global sign (real) or phase (complex) ambiguity.
double phase_aligned_distance(const ComplexVector& z, const ComplexVector& x, Field field);

struct RankOne {
  ComplexVector x;
  double eigengap = 0.0;  // lambda_2 / lambda_1, 0 when lambda_1 <= 0
};

/// Top eigenpair x = sqrt(lambda_1) u_1, rotated so that its largest-modulus
/// entry is real and nonnegative.
RankOne rank_one_extract(const HermitianMatrix& x);

}  // namespace liftoff
