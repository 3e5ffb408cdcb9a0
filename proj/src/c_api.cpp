#include "liftoff/liftoff.h"

#include "liftoff/dca.hpp"
#include "liftoff/error.hpp"
#include "liftoff/experiment.hpp"
#include "liftoff/io.hpp"
#include "liftoff/measurement.hpp"
#include "liftoff/synth.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <new>
#include <string>

struct lo_ensemble {
  liftoff::MeasurementEnsemble value;
};

struct lo_instance {
  liftoff::ProblemInstance value;
};

struct lo_result {
  liftoff::SolveResult value;
  liftoff::Field field = liftoff::Field::kComplex;
  double lambda = 0.0;
  double mu = 0.0;
};

struct lo_experiment {
  liftoff::ExperimentSpec spec;
  std::vector<liftoff::TrialRecord> records;
  std::vector<liftoff::CellSummary> cells;
  bool ran = false;
};

namespace {

thread_local std::string g_last_error;

lo_status to_status(liftoff::ErrorCode code) {
  using liftoff::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidArgument: return LO_ERR_INVALID_ARGUMENT;
    case ErrorCode::kDimensionMismatch: return LO_ERR_DIMENSION;
    case ErrorCode::kIo: return LO_ERR_IO;
    case ErrorCode::kNumerical: return LO_ERR_NUMERICAL;
    case ErrorCode::kDiverged: return LO_ERR_DIVERGED;
    case ErrorCode::kContractViolation: return LO_ERR_CONTRACT;
  }
  return LO_ERR_INTERNAL;
}

lo_status set_error(lo_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

// Runs `fn`, translating every exception into a status code.
template <typename Fn>
lo_status guarded(Fn&& fn) {
  try {
    fn();
    return LO_OK;
  } catch (const liftoff::Error& e) {
    return set_error(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(LO_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(LO_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(LO_ERR_INTERNAL, "unknown error");
  }
}

template <typename... Ptrs>
bool any_null(Ptrs... ptrs) {
  return ((ptrs == nullptr) || ...);
}

lo_status null_arg() { return set_error(LO_ERR_INVALID_ARGUMENT, "null argument"); }

liftoff::Field to_field(lo_field f) {
  if (f == LO_FIELD_REAL) return liftoff::Field::kReal;
  if (f == LO_FIELD_COMPLEX) return liftoff::Field::kComplex;
  liftoff::fail(liftoff::ErrorCode::kInvalidArgument, "unknown field value");
}

liftoff::DcaConfig to_config(const lo_solver_options& o) {
  liftoff::DcaConfig cfg;
  cfg.lambda = o.lambda;
  cfg.mu = o.mu;
  cfg.tol = o.tol;
  cfg.max_iters = o.max_outer;
  cfg.admm.delta0 = o.delta0;
  cfg.admm.adaptive = o.adaptive != 0;
  cfg.admm.max_iters = o.max_inner;
  cfg.admm.tol_inner = o.tol_inner;
  cfg.warm_start = o.warm_start != 0;
  return cfg;
}

lo_result* make_result(const liftoff::MeasurementEnsemble& e, const liftoff::RealVector& b,
                       const liftoff::DcaConfig& cfg) {
  auto* r = new lo_result{liftoff::dca_run(e, b, cfg), e.field(), cfg.lambda, cfg.mu};
  return r;
}

}  // namespace

extern "C" {

const char* lo_version(void) { return "0.1.0"; }

const char* lo_last_error(void) { return g_last_error.c_str(); }

const char* lo_status_string(lo_status status) {
  switch (status) {
    case LO_OK: return "ok";
    case LO_ERR_INVALID_ARGUMENT: return "invalid argument";
    case LO_ERR_DIMENSION: return "dimension mismatch";
    case LO_ERR_IO: return "i/o failure";
    case LO_ERR_NUMERICAL: return "numerical failure";
    case LO_ERR_DIVERGED: return "diverged";
    case LO_ERR_CONTRACT: return "contract violation";
    case LO_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

lo_status lo_ensemble_generate(size_t d, size_t m, lo_field field, uint64_t seed, lo_ensemble** out) {
  if (any_null(out)) return null_arg();
  return guarded([&] {
    *out = new lo_ensemble{liftoff::gen_ensemble(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(m),
                                                 to_field(field), seed)};
  });
}

lo_status lo_ensemble_load(const char* path, lo_ensemble** out) {
  if (any_null(path, out)) return null_arg();
  return guarded([&] { *out = new lo_ensemble{liftoff::load_ensemble(path)}; });
}

lo_status lo_ensemble_save(const lo_ensemble* e, const char* path) {
  if (any_null(e, path)) return null_arg();
  return guarded([&] { liftoff::save_ensemble(path, e->value); });
}

void lo_ensemble_free(lo_ensemble* e) { delete e; }

lo_status lo_ensemble_dims(const lo_ensemble* e, size_t* d, size_t* m) {
  if (any_null(e, d, m)) return null_arg();
  *d = static_cast<size_t>(e->value.d());
  *m = static_cast<size_t>(e->value.m());
  return LO_OK;
}

lo_status lo_ensemble_operator_norm(const lo_ensemble* e, double* out) {
  if (any_null(e, out)) return null_arg();
  return guarded([&] { *out = liftoff::operator_norm_estimate(e->value); });
}

lo_status lo_rip_probe(const lo_ensemble* e, int sparsity, int samples, uint64_t seed, lo_rip_report* out) {
  if (any_null(e, out)) return null_arg();
  return guarded([&] {
    const auto r = liftoff::rip_ratio_probe(e->value, sparsity, samples, seed);
    *out = {r.min_ratio, r.max_ratio, r.sample_count, r.sparsity};
  });
}

lo_status lo_instance_generate(size_t d, size_t m, size_t k, lo_field field, int has_snr, double snr_db,
                               uint64_t seed, lo_instance** out) {
  if (any_null(out)) return null_arg();
  return guarded([&] {
    const std::optional<double> snr = has_snr ? std::optional<double>(snr_db) : std::nullopt;
    *out = new lo_instance{liftoff::make_instance(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(m),
                                                  static_cast<Eigen::Index>(k), to_field(field), snr, seed)};
  });
}

lo_status lo_instance_load(const char* path, lo_instance** out) {
  if (any_null(path, out)) return null_arg();
  return guarded([&] { *out = new lo_instance{liftoff::load_instance(path)}; });
}

lo_status lo_instance_save(const lo_instance* inst, const char* path) {
  if (any_null(inst, path)) return null_arg();
  return guarded([&] { liftoff::save_instance(path, inst->value); });
}

void lo_instance_free(lo_instance* inst) { delete inst; }

lo_status lo_instance_info_get(const lo_instance* inst, lo_instance_info* out) {
  if (any_null(inst, out)) return null_arg();
  const auto& v = inst->value;
  out->d = static_cast<size_t>(v.d());
  out->m = static_cast<size_t>(v.m());
  out->k = static_cast<size_t>(v.k());
  out->field = v.field() == liftoff::Field::kReal ? LO_FIELD_REAL : LO_FIELD_COMPLEX;
  out->seed = v.seed;
  out->has_snr = v.snr_db.has_value() ? 1 : 0;
  out->snr_db = v.snr_db.value_or(0.0);
  out->noise_norm = v.w.norm();
  out->x0_l1 = v.x0.lpNorm<1>();
  return LO_OK;
}

lo_status lo_instance_measurements(const lo_instance* inst, double* buf, size_t len) {
  if (any_null(inst, buf)) return null_arg();
  const auto& b = inst->value.b;
  if (len < static_cast<size_t>(b.size())) return set_error(LO_ERR_DIMENSION, "buffer shorter than m");
  std::copy(b.data(), b.data() + b.size(), buf);
  return LO_OK;
}

lo_status lo_instance_ensemble(const lo_instance* inst, lo_ensemble** out) {
  if (any_null(inst, out)) return null_arg();
  return guarded([&] { *out = new lo_ensemble{inst->value.ensemble}; });
}

void lo_solver_options_default(lo_solver_options* opts) {
  if (opts == nullptr) return;
  const liftoff::DcaConfig cfg;
  opts->auto_params = 1;
  opts->lambda = 0.0;
  opts->mu = 0.0;
  opts->tol = cfg.tol;
  opts->max_outer = cfg.max_iters;
  opts->delta0 = cfg.admm.delta0;
  opts->adaptive = cfg.admm.adaptive ? 1 : 0;
  opts->max_inner = cfg.admm.max_iters;
  opts->tol_inner = cfg.admm.tol_inner;
  opts->warm_start = cfg.warm_start ? 1 : 0;
}

lo_status lo_solve(const lo_instance* inst, const lo_solver_options* opts, lo_result** out) {
  if (any_null(inst, opts, out)) return null_arg();
  return guarded([&] {
    liftoff::DcaConfig cfg = to_config(*opts);
    if (opts->auto_params) {
      const auto p = liftoff::default_parameters(static_cast<int>(inst->value.k()), inst->value.w.norm());
      cfg.lambda = p.lambda;
      cfg.mu = p.mu;
    }
    *out = make_result(inst->value.ensemble, inst->value.b, cfg);
  });
}

lo_status lo_solve_measurements(const lo_ensemble* e, const double* b, size_t m, const lo_solver_options* opts,
                                lo_result** out) {
  if (any_null(e, b, opts, out)) return null_arg();
  if (opts->auto_params) {
    return set_error(LO_ERR_INVALID_ARGUMENT, "auto_params needs a sparsity level; use lo_solve");
  }
  return guarded([&] {
    const liftoff::RealVector bv = Eigen::Map<const liftoff::RealVector>(b, static_cast<Eigen::Index>(m));
    *out = make_result(e->value, bv, to_config(*opts));
  });
}

void lo_result_free(lo_result* r) { delete r; }

lo_status lo_result_summary_get(const lo_result* r, lo_result_summary* out) {
  if (any_null(r, out)) return null_arg();
  return guarded([&] {
    const auto& v = r->value;
    out->status = v.status == liftoff::SolveStatus::kConverged  ? LO_SOLVE_CONVERGED
                  : v.status == liftoff::SolveStatus::kMaxIters ? LO_SOLVE_MAX_ITERS
                                                                : LO_SOLVE_DIVERGED;
    out->outer_iters = v.outer_iters;
    out->inner_iters = v.total_inner_iters;
    out->eigengap = v.eigengap;
    out->is_rank_one = liftoff::rank_one_certificate(v.x_final).is_rank_one ? 1 : 0;
    out->final_step = v.final_step;
    out->objective_initial = v.objective_trace.front();
    out->objective_final = v.objective_trace.back();
    out->lambda = r->lambda;
    out->mu = r->mu;
  });
}

lo_status lo_result_signal(const lo_result* r, double* buf, size_t len) {
  if (any_null(r, buf)) return null_arg();
  const auto& x = r->value.x_extracted;
  if (len < 2 * static_cast<size_t>(x.size())) return set_error(LO_ERR_DIMENSION, "buffer shorter than 2d");
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    buf[2 * j] = x(j).real();
    buf[2 * j + 1] = x(j).imag();
  }
  return LO_OK;
}

lo_status lo_result_objective_trace(const lo_result* r, double* buf, size_t len, size_t* count) {
  if (any_null(r, count)) return null_arg();
  const auto& t = r->value.objective_trace;
  *count = t.size();
  if (buf != nullptr) std::copy_n(t.begin(), std::min(len, t.size()), buf);
  return LO_OK;
}

lo_status lo_result_relative_error(const lo_result* r, const lo_instance* inst, double* out) {
  if (any_null(r, inst, out)) return null_arg();
  return guarded([&] {
    *out = liftoff::phase_aligned_distance(r->value.x_extracted, inst->value.x0, inst->value.field()) /
           inst->value.x0.norm();
  });
}

lo_status lo_result_write_trace(const lo_result* r, const char* path) {
  if (any_null(r, path)) return null_arg();
  return guarded([&] {
    std::ofstream os(path, std::ios::binary);
    if (!os) liftoff::fail(liftoff::ErrorCode::kIo, std::string("cannot open '") + path + "'");
    liftoff::write_objective_trace(os, r->value);
  });
}

lo_status lo_rank_one_lambda_bound(const lo_instance* inst, double mu, double* out) {
  if (any_null(inst, out)) return null_arg();
  return guarded([&] {
    const auto& v = inst->value;
    *out = liftoff::rank_one_lambda_bound(mu, v.d(), v.x0.lpNorm<1>(), v.w.norm(),
                                       liftoff::operator_norm_estimate(v.ensemble));
  });
}

lo_status lo_experiment_create(lo_experiment** out) {
  if (any_null(out)) return null_arg();
  return guarded([&] { *out = new lo_experiment{}; });
}

void lo_experiment_free(lo_experiment* x) { delete x; }

lo_status lo_experiment_set(lo_experiment* x, const char* key, const char* value) {
  if (any_null(x, key, value)) return null_arg();
  return guarded([&] { liftoff::apply_setting(x->spec, key, value); });
}

lo_status lo_experiment_load_file(lo_experiment* x, const char* path) {
  if (any_null(x, path)) return null_arg();
  return guarded([&] { liftoff::load_spec_file(x->spec, path); });
}

lo_status lo_experiment_validate(const lo_experiment* x) {
  if (any_null(x)) return null_arg();
  return guarded([&] { liftoff::validate(x->spec); });
}

lo_status lo_experiment_output_path(const lo_experiment* x, char* buf, size_t len) {
  if (any_null(x, buf)) return null_arg();
  const auto& p = x->spec.output_path;
  if (len < p.size() + 1) return set_error(LO_ERR_DIMENSION, "buffer too short for output path");
  std::memcpy(buf, p.c_str(), p.size() + 1);
  return LO_OK;
}

lo_status lo_experiment_run(lo_experiment* x) {
  if (any_null(x)) return null_arg();
  return guarded([&] {
    x->records = liftoff::run_experiment(x->spec);
    x->cells = liftoff::summarize(x->records);
    x->ran = true;
  });
}

lo_status lo_experiment_record_count(const lo_experiment* x, size_t* out) {
  if (any_null(x, out)) return null_arg();
  *out = x->records.size();
  return LO_OK;
}

lo_status lo_experiment_record(const lo_experiment* x, size_t i, lo_trial_record* out) {
  if (any_null(x, out)) return null_arg();
  if (i >= x->records.size()) return set_error(LO_ERR_INVALID_ARGUMENT, "record index out of range");
  const auto& r = x->records[i];
  *out = {r.sweep_value, r.trial_index,       r.seed,        r.relative_error, r.success ? 1 : 0,
          r.eigengap,    r.outer_iters,       r.total_inner_iters, r.wall_time};
  return LO_OK;
}

lo_status lo_experiment_cell_count(const lo_experiment* x, size_t* out) {
  if (any_null(x, out)) return null_arg();
  *out = x->cells.size();
  return LO_OK;
}

lo_status lo_experiment_cell(const lo_experiment* x, size_t i, lo_cell_summary* out) {
  if (any_null(x, out)) return null_arg();
  if (i >= x->cells.size()) return set_error(LO_ERR_INVALID_ARGUMENT, "cell index out of range");
  const auto& c = x->cells[i];
  *out = {c.sweep_value, c.trials, c.successes, c.success_rate, c.recon_snr_db};
  return LO_OK;
}

lo_status lo_experiment_write_csv(const lo_experiment* x, const char* path) {
  if (any_null(x, path)) return null_arg();
  if (!x->ran) return set_error(LO_ERR_CONTRACT, "experiment has not been run");
  return guarded([&] {
    std::ofstream os(path, std::ios::binary);
    if (!os) liftoff::fail(liftoff::ErrorCode::kIo, std::string("cannot open '") + path + "'");
    liftoff::write_records_csv(os, x->spec, x->records);
    if (!os) liftoff::fail(liftoff::ErrorCode::kIo, std::string("write failed for '") + path + "'");
  });
}

lo_status lo_experiment_write_summary(const lo_experiment* x, const char* path) {
  if (any_null(x, path)) return null_arg();
  if (!x->ran) return set_error(LO_ERR_CONTRACT, "experiment has not been run");
  return guarded([&] {
    std::ofstream os(path, std::ios::binary);
    if (!os) liftoff::fail(liftoff::ErrorCode::kIo, std::string("cannot open '") + path + "'");
    liftoff::write_summary_csv(os, x->cells);
  });
}

}  // extern "C"
