#pragma once

#include "liftoff/admm.hpp"
#include "liftoff/linalg.hpp"
#include "liftoff/measurement.hpp"

#include <optional>
#include <string>
#include <vector>

namespace liftoff {

struct DcaConfig {
  double lambda = 0.0;
  double mu = 0.0;
  double tol = 1e-6;
  int max_iters = 100;
  AdmmConfig admm;
  // Carry the ADMM state across outer iterations instead of restarting from
  // zero for every subproblem.
  bool warm_start = true;
};

enum class SolveStatus { kConverged, kMaxIters, kDiverged };

const char* to_string(SolveStatus s);

struct OuterTraceRow {
  int iteration = 0;
  double objective = 0.0;
  double step = 0.0;
  double eigengap = 0.0;
  int inner_iters = 0;
};

struct SolveResult {
  HermitianMatrix x_final;
  ComplexVector x_extracted;
  double eigengap = 0.0;
  std::vector<double> objective_trace;  // F(X^0), F(X^1), ...
  std::vector<OuterTraceRow> trace;
  int outer_iters = 0;
  int total_inner_iters = 0;
  double final_step = 0.0;
  SolveStatus status = SolveStatus::kMaxIters;
  std::string message;
};

/// F(X) = lambda (Tr X - ||X||_F) + mu ||X||_1 + 1/2 ||A(X) - b||^2
double objective(const MeasurementEnsemble& e, const RealVector& b, double lambda, double mu,
                 const HermitianMatrix& x);

/// Y = X / ||X||_F, or 0 when X = 0.
HermitianMatrix linearization_direction(const HermitianMatrix& x);

/// Difference-of-convex outer loop. Each step linearizes -lambda ||X||_F at
/// X^k through linearization_direction() and hands W = lambda (I - Y^k) to
/// the ADMM subproblem solver. Starts from X^0 = 0 unless `initial` is given
/// (it must be PSD).
SolveResult dca_run(const MeasurementEnsemble& e, const RealVector& b, const DcaConfig& cfg,
                    const std::optional<HermitianMatrix>& initial = std::nullopt);

struct Parameters {
  double lambda = 0.0;
  double mu = 0.0;
};

/// mu = max(0.5 ||w||_2, 1e-3), lambda = mu k / (sqrt 2 - 1).
Parameters default_parameters(int k, double noise_norm);

/// Right-hand side of the rank-one guarantee on lambda:
/// (mu d + ||A|| (sqrt(2 mu) ||x0||_1 + ||w||_2)) / (sqrt 2 - 1).
/// Reported only; the solver never enforces it.
double rank_one_lambda_bound(double mu, Eigen::Index d, double x0_l1, double noise_norm, double opnorm);

struct RankOneCertificate {
  bool is_rank_one = false;
  double eigengap = 0.0;
};

inline constexpr double kRankOneGapThreshold = 1e-3;

RankOneCertificate rank_one_certificate(const HermitianMatrix& x, double threshold = kRankOneGapThreshold);

}  // namespace liftoff
