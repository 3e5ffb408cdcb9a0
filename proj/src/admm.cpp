#include "liftoff/admm.hpp"

#include "liftoff/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace liftoff {

AdmmState AdmmState::zero(Eigen::Index dim, double delta) {
  AdmmState s;
  s.x1 = s.x2 = s.x3 = s.y1 = s.y2 = HermitianMatrix(dim);
  s.delta = delta;
  return s;
}

double update_penalty(double delta, double primal_res, double dual_res) {
  if (primal_res > 10.0 * dual_res) return 2.0 * delta;
  if (primal_res < dual_res / 10.0) return delta / 2.0;
  return delta;
}

double subproblem_objective(const MeasurementEnsemble& e, const RealVector& b, const HermitianMatrix& w,
                            double mu, const HermitianMatrix& x) {
  const RealVector r = forward_apply(e, x) - b;
  return 0.5 * r.squaredNorm() + inner(x, w) + mu * norms(x).entrywise_l1;
}

AdmmSolver::AdmmSolver(const MeasurementEnsemble& e, const RealVector& b, AdmmConfig cfg)
    : ensemble_(e), b_(b), atb_(adjoint_apply(e, b)), cfg_(cfg), cache_(e, cfg.delta0) {
  if (!(cfg_.delta0 > 0.0)) fail(ErrorCode::kInvalidArgument, "admm: delta0 must be > 0");
  if (cfg_.max_iters < 1) fail(ErrorCode::kInvalidArgument, "admm: max_iters must be >= 1");
  if (!(cfg_.tol_inner >= 0.0)) fail(ErrorCode::kInvalidArgument, "admm: tol_inner must be >= 0");
}

void AdmmSolver::set_delta(AdmmState& s, double delta) {
  s.delta = delta;
  if (cache_.delta() != delta) cache_.refactor(delta);
}

void AdmmSolver::step(AdmmState& s, const HermitianMatrix& w, double mu) {
  const double delta = s.delta;
  if (cache_.delta() != delta) cache_.refactor(delta);

  HermitianMatrix rhs = atb_ - w;
  rhs += delta * s.x3;
  rhs -= s.y1;
  s.x1 = solve_regularized(ensemble_, cache_, rhs, delta);

  s.x2 = soft_threshold(s.x3 - (1.0 / delta) * s.y2, mu / delta);

  HermitianMatrix avg = 0.5 * (s.x1 + s.x2);
  avg += (0.5 / delta) * (s.y1 + s.y2);
  HermitianMatrix x3 = psd_project(avg);

  s.y1 += delta * (s.x1 - x3);
  s.y2 += delta * (s.x2 - x3);

  const double r1 = frobenius_distance(s.x1, x3);
  const double r2 = frobenius_distance(s.x2, x3);
  s.primal_res = std::sqrt(r1 * r1 + r2 * r2);
  s.dual_res = std::sqrt(2.0) * delta * frobenius_distance(x3, s.x3);
  s.x3 = std::move(x3);
}

bool AdmmSolver::solve(AdmmState& s, const HermitianMatrix& w, double mu, const AdmmTraceSink& trace) {
  if (w.dim() != ensemble_.d() || s.x3.dim() != ensemble_.d()) {
    fail(ErrorCode::kDimensionMismatch, "admm: W/state dimension does not match the ensemble");
  }
  if (!(mu >= 0.0)) fail(ErrorCode::kInvalidArgument, "admm: mu must be >= 0");
  for (int l = 0; l < cfg_.max_iters; ++l) {
    step(s, w, mu);
    s.iter = l + 1;
    if (!std::isfinite(s.primal_res) || !std::isfinite(s.dual_res) || !s.x3.matrix().allFinite()) {
      fail(ErrorCode::kDiverged, "admm: non-finite iterate at iteration " + std::to_string(l + 1));
    }
    if (trace) {
      trace({l + 1, s.delta, s.primal_res, s.dual_res, subproblem_objective(ensemble_, b_, w, mu, s.x3)});
    }
    const double scale = std::max(frobenius_norm(s.x3), 1.0);
    if (std::max(s.primal_res, s.dual_res) / scale <= cfg_.tol_inner) return true;
    if (cfg_.adaptive && l < cfg_.freeze_after) set_delta(s, update_penalty(s));
  }
  return false;
}

AdmmOutcome admm_solve_subproblem(const MeasurementEnsemble& e, const RealVector& b, const HermitianMatrix& w,
                                  double mu, const AdmmConfig& cfg, const AdmmTraceSink& trace) {
  if (b.size() != e.m()) fail(ErrorCode::kDimensionMismatch, "admm: b has wrong length");
  AdmmSolver solver(e, b, cfg);
  AdmmOutcome out;
  out.state = AdmmState::zero(e.d(), cfg.delta0);
  out.converged = solver.solve(out.state, w, mu, trace);
  out.x = out.state.x3;
  return out;
}

}  // namespace liftoff
