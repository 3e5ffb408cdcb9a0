// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// fails. Pass criterion numbers as arguments to run a subset.

#include "liftoff/admm.hpp"
#include "liftoff/dca.hpp"
#include "liftoff/experiment.hpp"
#include "liftoff/measurement.hpp"
#include "liftoff/synth.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace liftoff;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

constexpr std::uint64_t kSeed = 20240501;

std::map<double, CellSummary> by_value(const std::vector<TrialRecord>& recs) {
  std::map<double, CellSummary> out;
  for (const auto& c : summarize(recs)) out[c.sweep_value] = c;
  return out;
}

ExperimentSpec recovery_spec() {
  ExperimentSpec s;
  s.d = 50;
  s.k = 5;
  s.field = Field::kComplex;
  s.mu = 1e-3;
  s.success_threshold = 1e-3;
  s.base_seed = kSeed;
  s.threads = 0;
  return s;
}

Outcome noiseless_recovery() {
  auto s = recovery_spec();
  s.kind = ExperimentKind::kSingle;
  s.m = 150;
  s.trials = 20;
  const auto cell = summarize(run_experiment(s)).front();
  return {cell.success_rate >= 0.9, fmt("success rate %.2f (%d/%d) at d=50 k=5 m=150", cell.success_rate,
                                        cell.successes, cell.trials)};
}

Outcome phase_transition() {
  auto s = recovery_spec();
  s.kind = ExperimentKind::kSweepM;
  s.md_range = parse_range("0.5:4:3.5");
  s.trials = 20;
  auto cells = by_value(run_experiment(s));
  const double lo = cells.at(0.5).success_rate;
  const double hi = cells.at(4.0).success_rate;
  return {lo == 0.0 && hi >= 0.9 && hi >= lo, fmt("rate(m/d=0.5) = %.2f, rate(m/d=4) = %.2f", lo, hi)};
}

Outcome sparsity_sweep() {
  auto s = recovery_spec();
  s.kind = ExperimentKind::kSweepK;
  s.m = 100;
  s.k_range = parse_range("5:5:1");
  s.trials = 20;
  const double r5 = summarize(run_experiment(s)).front().success_rate;
  s.k_range = parse_range("15:25:10");
  s.trials = 10;
  s.base_seed = kSeed + 1;
  auto cells = by_value(run_experiment(s));
  const double r15 = cells.at(15.0).success_rate;
  const double r25 = cells.at(25.0).success_rate;
  const bool monotone = r15 <= r5 + 0.1 && r25 <= r15 + 0.1;
  return {r5 >= 0.9 && monotone, fmt("rate(k=5) = %.2f, rate(k=15) = %.2f, rate(k=25) = %.2f", r5, r15, r25)};
}

Outcome robustness() {
  ExperimentSpec s;
  s.kind = ExperimentKind::kRobustness;
  s.d = 50;
  s.m = 100;
  s.k = 5;
  s.snr_db = {10, 20, 30, 40, 50};
  s.trials = 10;
  s.base_seed = kSeed;
  s.threads = 0;
  auto cells = by_value(run_experiment(s));
  std::string detail = "recon SNR dB:";
  bool increasing = true;
  double prev = -1e300;
  for (double snr : s.snr_db) {
    const auto& c = cells.at(snr);
    detail += fmt(" %g->%.1f", snr, c.recon_snr_db);
    increasing = increasing && c.finite_trials == c.trials && c.recon_snr_db > prev;
    prev = c.recon_snr_db;
  }
  return {increasing && cells.at(50.0).recon_snr_db >= 30.0, detail};
}

Outcome monotone_descent() {
  std::mt19937_64 rng(kSeed);
  std::uniform_int_distribution<int> dim(4, 20), ratio(2, 6), sparsity(1, 3), snr_pick(0, 4);
  const double levels[] = {10, 20, 30, 40};
  double worst = -1e300;
  int instances = 0;
  for (int i = 0; i < 100; ++i) {
    const int d = dim(rng);
    const int m = ratio(rng) * d;
    const int k = std::min(sparsity(rng), d);
    const int pick = snr_pick(rng);
    const std::optional<double> snr = pick == 4 ? std::nullopt : std::optional<double>(levels[pick]);
    const auto inst = make_instance(d, m, k, i % 3 == 0 ? Field::kReal : Field::kComplex, snr, derive_seed(kSeed, 5, i));
    const auto p = default_parameters(k, inst.w.norm());
    DcaConfig cfg;
    cfg.lambda = p.lambda;
    cfg.mu = p.mu;
    const auto r = dca_run(inst.ensemble, inst.b, cfg);
    const double scale = std::max(1.0, r.objective_trace.front());
    for (std::size_t j = 1; j < r.objective_trace.size(); ++j)
      worst = std::max(worst, (r.objective_trace[j] - r.objective_trace[j - 1]) / scale);
    ++instances;
  }
  return {worst <= 1e-8, fmt("%d instances, max scaled increase %.3e", instances, worst)};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(kSeed + 6);
  double worst = 0.0;
  long ref_iters = 0;
  for (int i = 0; i < 25; ++i) {
    const std::optional<double> snr = i % 2 ? std::optional<double>(15.0 + i) : std::nullopt;
    const auto inst = make_instance(3, 8, 1 + i % 3, Field::kComplex, snr, derive_seed(kSeed, 6, i));
    const double mu = std::max(0.5 * inst.w.norm(), 1e-3) * (1 + i % 5);
    const double lambda = mu * inst.k() / (std::sqrt(2.0) - 1.0);
    const HermitianMatrix y(oracle::random_psd(3, rng, 1 + i % 2));
    const auto w = lambda * (HermitianMatrix::identity(3) - linearization_direction(y));
    const auto ref = oracle::projected_gradient_reference(inst.ensemble.vectors(), inst.b, w.matrix(), mu, 1e-10,
                                                          5000000);
    ref_iters = std::max(ref_iters, ref.iterations);
    const auto out = admm_solve_subproblem(inst.ensemble, inst.b, w, mu, {});
    const double got = subproblem_objective(inst.ensemble, inst.b, w, mu, out.x);
    worst = std::max(worst, std::abs(got - ref.value) / std::abs(ref.value));
  }
  return {worst <= 1e-6 && ref_iters < 5000000,
          fmt("25 instances, max relative objective gap %.3e (reference <= %ld iterations)", worst, ref_iters)};
}

Outcome operator_correctness() {
  std::mt19937_64 rng(kSeed + 7);
  std::normal_distribution<double> n;
  double adj = 0.0;
  const auto e = gen_ensemble(8, 24, Field::kComplex, kSeed);
  for (int i = 0; i < 100; ++i) {
    const HermitianMatrix x(oracle::random_hermitian(8, rng));
    RealVector v(24);
    for (auto& c : v) c = n(rng);
    adj = std::max(adj, std::abs(forward_apply(e, x).dot(v) - inner(x, adjoint_apply(e, v))) /
                            (frobenius_norm(x) * v.norm()));
  }
  double resid = 0.0, dense = 0.0;
  for (Eigen::Index d : {2, 3, 4}) {
    for (Eigen::Index m : {d, 3 * d, 6 * d}) {
      for (double delta : {0.1, 1.0, 10.0}) {
        const auto ens = gen_ensemble(d, m, Field::kComplex, derive_seed(kSeed, d, m));
        const auto cache = gram_factorize(ens, delta);
        const HermitianMatrix r(oracle::random_hermitian(d, rng));
        const auto x = solve_regularized(ens, cache, r, delta);
        const auto lhs = adjoint_apply(ens, forward_apply(ens, x)) + delta * x;
        resid = std::max(resid, frobenius_distance(lhs, r) / frobenius_norm(r));
        const auto ref = oracle::dense_regularized_solve(ens.vectors(), delta, r.matrix());
        dense = std::max(dense, (x.matrix() - ref).norm() / std::max(1.0, ref.norm()));
      }
    }
  }
  return {adj <= 1e-10 && resid <= 1e-8 && dense <= 1e-8,
          fmt("adjoint %.2e, Woodbury residual %.2e, dense mismatch %.2e", adj, resid, dense)};
}

Outcome rip_envelope() {
  const auto e = gen_ensemble(64, 160, Field::kComplex, kSeed);
  const auto rep = rip_ratio_probe(e, 4, 1000, kSeed + 8);
  return {rep.sample_count == 1000 && rep.min_ratio >= 0.10 && rep.max_ratio <= 2.6,
          fmt("ratios in [%.4f, %.4f] over %d samples", rep.min_ratio, rep.max_ratio, rep.sample_count)};
}

Outcome awgn_calibration() {
  const auto inst = make_instance(16, 10000, 3, Field::kComplex, 20.0, kSeed);
  const RealVector clean = inst.b - inst.w;
  const double ratio = inst.w.squaredNorm() / clean.squaredNorm();
  return {std::abs(ratio - 1e-2) <= 1e-3, fmt("noise/signal power %.5f (target 0.01)", ratio)};
}

Outcome determinism() {
  const auto csv = [](ExperimentSpec s, int threads) {
    s.threads = threads;
    std::ostringstream os;
    write_records_csv(os, s, run_experiment(s));
    return os.str();
  };
  ExperimentSpec sweep;
  sweep.kind = ExperimentKind::kSweepM;
  sweep.d = 10;
  sweep.k = 2;
  sweep.md_range = parse_range("1:4:1");
  sweep.trials = 4;
  sweep.base_seed = kSeed;
  ExperimentSpec noisy;
  noisy.kind = ExperimentKind::kRobustness;
  noisy.d = 10;
  noisy.m = 40;
  noisy.k = 2;
  noisy.snr_db = {10, 30};
  noisy.trials = 3;
  noisy.base_seed = kSeed;
  bool same = true;
  for (const auto& s : {sweep, noisy}) {
    const auto a = csv(s, 1);
    same = same && a == csv(s, 1) && a == csv(s, 2) && a == csv(s, 4);
  }
  return {same, same ? "byte-identical CSV for 1, 2 and 4 threads" : "CSV differs between runs"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"noiseless recovery", noiseless_recovery},
      {"phase transition endpoints", phase_transition},
      {"sparsity sweep", sparsity_sweep},
      {"robustness trend", robustness},
      {"monotone descent", monotone_descent},
      {"subproblem oracle equivalence", oracle_equivalence},
      {"operator correctness", operator_correctness},
      {"RIP probe envelope", rip_envelope},
      {"AWGN calibration", awgn_calibration},
      {"determinism", determinism},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2d %-30s %s  %s  [%.1fs]\n", id, criteria[i].first, o.pass ? "PASS" : "FAIL",
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
