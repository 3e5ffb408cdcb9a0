#include "liftoff/linalg.hpp"

#include "liftoff/error.hpp"

#include <algorithm>
#include <cmath>

namespace liftoff {

namespace {

// Positive part of a Hermitian spectrum, reassembled as B B^* with
// B = U_+ sqrt(Lambda_+).
template <typename Solver>
Eigen::MatrixXcd positive_part(const Solver& es) {
  const auto& evals = es.eigenvalues();
  const auto& evecs = es.eigenvectors();
  const Eigen::Index n = evals.size();
  Eigen::Index first = 0;
  while (first < n && !(evals(first) > 0.0)) ++first;
  const Eigen::Index count = n - first;
  if (count == 0) return Eigen::MatrixXcd::Zero(n, n);
  Eigen::MatrixXcd b = evecs.rightCols(count).template cast<Complex>();
  for (Eigen::Index j = 0; j < count; ++j) b.col(j) *= std::sqrt(evals(first + j));
  return b * b.adjoint();
}

void check_eigen(Eigen::ComputationInfo info) {
  if (info != Eigen::Success) {
    fail(ErrorCode::kNumerical, "Hermitian eigendecomposition did not converge");
  }
}

}  // namespace

HermitianMatrix::HermitianMatrix(Eigen::Index dim) : data_(Eigen::MatrixXcd::Zero(dim, dim)) {}

HermitianMatrix::HermitianMatrix(const Eigen::MatrixXcd& m) : data_(m) {
  if (m.rows() != m.cols()) fail(ErrorCode::kDimensionMismatch, "Hermitian matrix must be square");
  symmetrize();
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index dim) {
  return HermitianMatrix(Eigen::MatrixXcd::Identity(dim, dim));
}

HermitianMatrix HermitianMatrix::outer(const ComplexVector& x) {
  return HermitianMatrix(Eigen::MatrixXcd(x * x.adjoint()));
}

void HermitianMatrix::symmetrize() {
  const Eigen::Index n = data_.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    data_(j, j) = Complex(data_(j, j).real(), 0.0);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const Complex v = 0.5 * (data_(i, j) + std::conj(data_(j, i)));
      data_(i, j) = v;
      data_(j, i) = std::conj(v);
    }
  }
}

bool HermitianMatrix::is_real() const {
  return (data_.imag().array() == 0.0).all();
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& o) {
  if (o.dim() != dim()) fail(ErrorCode::kDimensionMismatch, "Hermitian sum: dimension mismatch");
  data_ += o.data_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& o) {
  if (o.dim() != dim()) fail(ErrorCode::kDimensionMismatch, "Hermitian difference: dimension mismatch");
  data_ -= o.data_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double s) {
  data_ *= s;
  return *this;
}

double inner(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) fail(ErrorCode::kDimensionMismatch, "inner product: dimension mismatch");
  return (a.matrix().real().array() * b.matrix().real().array()).sum() +
         (a.matrix().imag().array() * b.matrix().imag().array()).sum();
}

double frobenius_norm(const HermitianMatrix& a) { return a.matrix().norm(); }

double frobenius_distance(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) fail(ErrorCode::kDimensionMismatch, "distance: dimension mismatch");
  return (a.matrix() - b.matrix()).norm();
}

MatrixNorms norms(const HermitianMatrix& x) {
  MatrixNorms n;
  n.trace = x.matrix().diagonal().real().sum();
  n.frobenius = x.matrix().norm();
  n.entrywise_l1 = x.matrix().cwiseAbs().sum();
  return n;
}

HermitianMatrix soft_threshold(const HermitianMatrix& z, double tau) {
  if (!(tau >= 0.0)) fail(ErrorCode::kInvalidArgument, "soft_threshold: tau must be >= 0");
  Eigen::MatrixXcd out = z.matrix();
  if (tau == 0.0) return HermitianMatrix(out);
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      const Complex v = out(i, j);
      const double mod = std::abs(v);
      out(i, j) = mod >= tau && mod > 0.0 ? v * ((mod - tau) / mod) : Complex(0.0, 0.0);
    }
  }
  return HermitianMatrix(out);
}

HermitianMatrix psd_project(const HermitianMatrix& z) {
  // z is Hermitian by construction, so the (Z + Z^*)/2 step already happened.
  if (z.dim() == 0) return z;
  if (z.is_real()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(z.matrix().real());
    check_eigen(es.info());
    return HermitianMatrix(positive_part(es));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(z.matrix());
  check_eigen(es.info());
  return HermitianMatrix(positive_part(es));
}

double min_eigenvalue(const HermitianMatrix& z) {
  if (z.dim() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(z.matrix(), Eigen::EigenvaluesOnly);
  check_eigen(es.info());
  return es.eigenvalues()(0);
}

double phase_aligned_distance(const ComplexVector& z, const ComplexVector& x, Field field) {
  if (z.size() != x.size()) fail(ErrorCode::kDimensionMismatch, "phase_aligned_distance: dimension mismatch");
  if (field == Field::kReal) {
    return std::min((z - x).norm(), (z + x).norm());
  }
  const double sq = z.squaredNorm() + x.squaredNorm() - 2.0 * std::abs(z.dot(x));
  return std::sqrt(std::max(sq, 0.0));
}

RankOne rank_one_extract(const HermitianMatrix& x) {
  const Eigen::Index n = x.dim();
  RankOne out;
  out.x = ComplexVector::Zero(n);
  if (n == 0) return out;

  double l1 = 0.0;
  double l2 = 0.0;
  ComplexVector u;
  if (x.is_real()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x.matrix().real());
    check_eigen(es.info());
    l1 = es.eigenvalues()(n - 1);
    l2 = n > 1 ? es.eigenvalues()(n - 2) : 0.0;
    u = es.eigenvectors().col(n - 1).cast<Complex>();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(x.matrix());
    check_eigen(es.info());
    l1 = es.eigenvalues()(n - 1);
    l2 = n > 1 ? es.eigenvalues()(n - 2) : 0.0;
    u = es.eigenvectors().col(n - 1);
  }
  if (!(l1 > 0.0)) return out;

  out.eigengap = std::clamp(l2 / l1, 0.0, 1.0);
  Eigen::Index pivot = 0;
  u.cwiseAbs().maxCoeff(&pivot);
  const Complex p = u(pivot);
  const double mod = std::abs(p);
  if (mod > 0.0) u *= std::conj(p) / mod;
  u(pivot) = Complex(u(pivot).real(), 0.0);
  out.x = std::sqrt(l1) * u;
  return out;
}

}  // namespace liftoff
