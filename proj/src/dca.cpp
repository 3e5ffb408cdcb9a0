#include "liftoff/dca.hpp"

#include "liftoff/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

namespace liftoff {

namespace {

constexpr double kSqrt2Minus1 = std::numbers::sqrt2 - 1.0;

void validate(const MeasurementEnsemble& e, const RealVector& b, const DcaConfig& cfg) {
  if (b.size() != e.m()) fail(ErrorCode::kDimensionMismatch, "dca: b has length " + std::to_string(b.size()) +
                                                                  ", expected m = " + std::to_string(e.m()));
  if (!b.allFinite()) fail(ErrorCode::kInvalidArgument, "dca: b has non-finite entries");
  if (!(cfg.lambda >= 0.0) || !(cfg.mu >= 0.0)) fail(ErrorCode::kInvalidArgument, "dca: lambda and mu must be >= 0");
  if (!(cfg.tol >= 0.0)) fail(ErrorCode::kInvalidArgument, "dca: tol must be >= 0");
  if (cfg.max_iters < 1) fail(ErrorCode::kInvalidArgument, "dca: max_iters must be >= 1");
}

HermitianMatrix linearization_weight(const HermitianMatrix& x, double lambda) {
  HermitianMatrix w = HermitianMatrix::identity(x.dim()) - linearization_direction(x);
  w *= lambda;
  return w;
}

}  // namespace

HermitianMatrix linearization_direction(const HermitianMatrix& x) {
  const double nx = frobenius_norm(x);
  if (nx == 0.0) return HermitianMatrix(x.dim());
  return (1.0 / nx) * x;
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kConverged: return "converged";
    case SolveStatus::kMaxIters: return "max_iters";
    case SolveStatus::kDiverged: return "diverged";
  }
  return "unknown";
}

double objective(const MeasurementEnsemble& e, const RealVector& b, double lambda, double mu,
                 const HermitianMatrix& x) {
  const MatrixNorms n = norms(x);
  const double fit = 0.5 * (forward_apply(e, x) - b).squaredNorm();
  return lambda * (n.trace - n.frobenius) + mu * n.entrywise_l1 + fit;
}

SolveResult dca_run(const MeasurementEnsemble& e, const RealVector& b, const DcaConfig& cfg,
                    const std::optional<HermitianMatrix>& initial) {
  validate(e, b, cfg);
  if (initial && initial->dim() != e.d()) fail(ErrorCode::kDimensionMismatch, "dca: initial iterate has wrong dimension");
  if (initial && initial->dim() > 0 &&
      min_eigenvalue(*initial) < -1e-10 * std::max(1.0, frobenius_norm(*initial)))
    fail(ErrorCode::kInvalidArgument, "dca: initial iterate is not positive semidefinite");
  SolveResult result;
  HermitianMatrix x = initial ? *initial : HermitianMatrix(e.d());
  result.objective_trace.push_back(objective(e, b, cfg.lambda, cfg.mu, x));

  AdmmSolver solver(e, b, cfg.admm);
  AdmmState state = AdmmState::zero(e.d(), cfg.admm.delta0);

  for (int k = 0; k < cfg.max_iters; ++k) {
    const HermitianMatrix w = linearization_weight(x, cfg.lambda);
    if (!cfg.warm_start || k == 0) {
      state = AdmmState::zero(e.d(), cfg.admm.delta0);
    }

    HermitianMatrix next;
    int inner = 0;
    try {
      // Accept the ADMM output only if it does not raise g above g(x); one
      // continuation from the current state before falling back to x.
      const double g_current = subproblem_objective(e, b, w, cfg.mu, x);
      solver.solve(state, w, cfg.mu);
      inner += state.iter;
      if (subproblem_objective(e, b, w, cfg.mu, state.x3) > g_current) {
        solver.solve(state, w, cfg.mu);
        inner += state.iter;
      }
      next = subproblem_objective(e, b, w, cfg.mu, state.x3) > g_current ? x : state.x3;
    } catch (const Error& err) {
      if (err.code() != ErrorCode::kDiverged) throw;
      result.total_inner_iters += inner;
      result.status = SolveStatus::kDiverged;
      result.message = err.what();
      break;
    }
    result.total_inner_iters += inner;

    const double f = objective(e, b, cfg.lambda, cfg.mu, next);
    const double step = frobenius_distance(next, x) / std::max(frobenius_norm(next), 1.0);
    x = std::move(next);
    result.outer_iters = k + 1;
    result.final_step = step;
    result.objective_trace.push_back(f);
    result.trace.push_back({k + 1, f, step, rank_one_extract(x).eigengap, inner});

    if (!std::isfinite(f)) {
      result.status = SolveStatus::kDiverged;
      result.message = "non-finite objective at outer iteration " + std::to_string(k + 1);
      break;
    }
    if (step <= cfg.tol) {
      result.status = SolveStatus::kConverged;
      break;
    }
  }

  result.x_final = x;
  if (x.matrix().allFinite()) {
    RankOne r1 = rank_one_extract(x);
    result.x_extracted = std::move(r1.x);
    result.eigengap = r1.eigengap;
  } else {
    result.x_extracted = ComplexVector::Zero(e.d());
    result.eigengap = 0.0;
  }
  return result;
}

Parameters default_parameters(int k, double noise_norm) {
  if (k < 1) fail(ErrorCode::kInvalidArgument, "default_parameters: k must be >= 1");
  if (!(noise_norm >= 0.0)) fail(ErrorCode::kInvalidArgument, "default_parameters: noise norm must be >= 0");
  Parameters p;
  p.mu = std::max(0.5 * noise_norm, 1e-3);
  p.lambda = p.mu * k / kSqrt2Minus1;
  return p;
}

double rank_one_lambda_bound(double mu, Eigen::Index d, double x0_l1, double noise_norm, double opnorm) {
  if (mu < 0.0 || x0_l1 < 0.0 || noise_norm < 0.0 || opnorm < 0.0 || d < 0) {
    fail(ErrorCode::kInvalidArgument, "rank_one_lambda_bound: inputs must be >= 0");
  }
  return (mu * static_cast<double>(d) + opnorm * (std::sqrt(2.0 * mu) * x0_l1 + noise_norm)) / kSqrt2Minus1;
}

RankOneCertificate rank_one_certificate(const HermitianMatrix& x, double threshold) {
  RankOneCertificate c;
  c.eigengap = rank_one_extract(x).eigengap;
  // The zero matrix has no top eigenvector to certify.
  c.is_rank_one = frobenius_norm(x) > 0.0 && c.eigengap < threshold;
  return c;
}

}  // namespace liftoff
