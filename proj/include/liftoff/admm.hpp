#pragma once

#include "liftoff/linalg.hpp"
#include "liftoff/measurement.hpp"

#include <functional>
#include <optional>

namespace liftoff {

struct AdmmConfig {
  double delta0 = 1.0;
  bool adaptive = true;
  int max_iters = 2000;
  double tol_inner = 1e-7;
  // Penalty updates stop after this many iterations of a single solve.
  int freeze_after = 500;
};

/// Consensus-ADMM iterate: local copies x1 (data term) and x2 (l1 term), the
/// global PSD variable x3, and the unscaled duals y1, y2.
struct AdmmState {
  HermitianMatrix x1, x2, x3, y1, y2;
  double delta = 1.0;
  int iter = 0;  // iterations taken by the most recent solve
  double primal_res = 0.0;
  double dual_res = 0.0;

  static AdmmState zero(Eigen::Index dim, double delta);
};

struct AdmmTraceRow {
  int iteration = 0;
  double delta = 0.0;
  double primal_res = 0.0;
  double dual_res = 0.0;
  double objective = 0.0;
};

using AdmmTraceSink = std::function<void(const AdmmTraceRow&)>;

/// Residual-balancing rule: double delta when ||R|| > 10 ||S||, halve it when
/// ||R|| < ||S|| / 10.
double update_penalty(double delta, double primal_res, double dual_res);
inline double update_penalty(const AdmmState& s) { return update_penalty(s.delta, s.primal_res, s.dual_res); }

/// g(X) = 1/2 ||A(X) - b||^2 + <X, W> + mu ||X||_1
double subproblem_objective(const MeasurementEnsemble& e, const RealVector& b, const HermitianMatrix& w,
                            double mu, const HermitianMatrix& x);

/// Solves min_{X >= 0} 1/2 ||A(X) - b||^2 + <X, W> + mu ||X||_1 with
/// three-block consensus ADMM. Owns its GramCache, which is refactored
/// whenever the adaptive penalty moves.
class AdmmSolver {
 public:
  AdmmSolver(const MeasurementEnsemble& e, const RealVector& b, AdmmConfig cfg);

  const AdmmConfig& config() const { return cfg_; }
  const GramCache& cache() const { return cache_; }

  /// One pass of the five updates. Leaves the penalty untouched; the caller
  /// decides whether to apply update_penalty().
  void step(AdmmState& s, const HermitianMatrix& w, double mu);

  /// Iterates from `s` until the relative residual drops below tol_inner or
  /// max_iters is reached. Returns true on convergence. Throws kDiverged on a
  /// non-finite iterate.
  bool solve(AdmmState& s, const HermitianMatrix& w, double mu, const AdmmTraceSink& trace = {});

  void set_delta(AdmmState& s, double delta);

 private:
  const MeasurementEnsemble& ensemble_;
  RealVector b_;
  HermitianMatrix atb_;
  AdmmConfig cfg_;
  GramCache cache_;
};

struct AdmmOutcome {
  HermitianMatrix x;
  AdmmState state;
  bool converged = false;
};

/// Cold-start convenience wrapper: zero initial state, delta = cfg.delta0.
AdmmOutcome admm_solve_subproblem(const MeasurementEnsemble& e, const RealVector& b, const HermitianMatrix& w,
                                  double mu, const AdmmConfig& cfg, const AdmmTraceSink& trace = {});

}  // namespace liftoff
