/* C interface to the liftoff sparse phase retrieval solver.
 *
 * All objects are opaque handles created by a create, generate or load call
 * and released with the matching free call. Every fallible call returns a
 * lo_status; on failure lo_last_error() holds a message for the calling
 * thread until its next failing call.
 */
#ifndef LIFTOFF_H
#define LIFTOFF_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(LIFTOFF_BUILDING)
#    define LIFTOFF_API __declspec(dllexport)
#  else
#    define LIFTOFF_API __declspec(dllimport)
#  endif
#else
#  define LIFTOFF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lo_status {
  LO_OK = 0,
  LO_ERR_INVALID_ARGUMENT = 1,
  LO_ERR_DIMENSION = 2,
  LO_ERR_IO = 3,
  LO_ERR_NUMERICAL = 4,
  LO_ERR_DIVERGED = 5,
  LO_ERR_CONTRACT = 6,
  LO_ERR_INTERNAL = 99
} lo_status;

typedef enum lo_field { LO_FIELD_REAL = 0, LO_FIELD_COMPLEX = 1 } lo_field;

typedef enum lo_solve_status {
  LO_SOLVE_CONVERGED = 0,
  LO_SOLVE_MAX_ITERS = 1,
  LO_SOLVE_DIVERGED = 2
} lo_solve_status;

typedef struct lo_ensemble lo_ensemble;
typedef struct lo_instance lo_instance;
typedef struct lo_result lo_result;
typedef struct lo_experiment lo_experiment;

LIFTOFF_API const char* lo_version(void);
LIFTOFF_API const char* lo_last_error(void);
LIFTOFF_API const char* lo_status_string(lo_status status);

/* ---- measurement ensembles ------------------------------------------- */

LIFTOFF_API lo_status lo_ensemble_generate(size_t d, size_t m, lo_field field, uint64_t seed, lo_ensemble** out);
LIFTOFF_API lo_status lo_ensemble_load(const char* path, lo_ensemble** out);
LIFTOFF_API lo_status lo_ensemble_save(const lo_ensemble* e, const char* path);
LIFTOFF_API void lo_ensemble_free(lo_ensemble* e);
LIFTOFF_API lo_status lo_ensemble_dims(const lo_ensemble* e, size_t* d, size_t* m);
/* Power-iteration estimate of the operator norm of the lifting map. */
LIFTOFF_API lo_status lo_ensemble_operator_norm(const lo_ensemble* e, double* out);

typedef struct lo_rip_report {
  double min_ratio;
  double max_ratio;
  int sample_count;
  int sparsity;
} lo_rip_report;

LIFTOFF_API lo_status lo_rip_probe(const lo_ensemble* e, int sparsity, int samples, uint64_t seed,
                                   lo_rip_report* out);

/* ---- problem instances ----------------------------------------------- */

/* has_snr == 0 generates noiseless measurements and ignores snr_db. */
LIFTOFF_API lo_status lo_instance_generate(size_t d, size_t m, size_t k, lo_field field, int has_snr, double snr_db,
                                           uint64_t seed, lo_instance** out);
LIFTOFF_API lo_status lo_instance_load(const char* path, lo_instance** out);
LIFTOFF_API lo_status lo_instance_save(const lo_instance* inst, const char* path);
LIFTOFF_API void lo_instance_free(lo_instance* inst);

typedef struct lo_instance_info {
  size_t d;
  size_t m;
  size_t k;
  lo_field field;
  uint64_t seed;
  int has_snr;
  double snr_db;
  double noise_norm; /* ||w||_2 */
  double x0_l1;      /* ||x0||_1 */
} lo_instance_info;

LIFTOFF_API lo_status lo_instance_info_get(const lo_instance* inst, lo_instance_info* out);
/* Copies b into buf; len must be at least m. */
LIFTOFF_API lo_status lo_instance_measurements(const lo_instance* inst, double* buf, size_t len);
/* New handle holding a copy of the instance's ensemble. */
LIFTOFF_API lo_status lo_instance_ensemble(const lo_instance* inst, lo_ensemble** out);

/* ---- solver ---------------------------------------------------------- */

typedef struct lo_solver_options {
  int auto_params; /* nonzero: derive (lambda, mu) from k and ||w||_2 */
  double lambda;
  double mu;
  double tol;
  int max_outer;
  double delta0;
  int adaptive;
  int max_inner;
  double tol_inner;
  int warm_start;
} lo_solver_options;

LIFTOFF_API void lo_solver_options_default(lo_solver_options* opts);

LIFTOFF_API lo_status lo_solve(const lo_instance* inst, const lo_solver_options* opts, lo_result** out);
/* Solve from raw measurements; auto_params is not available here. */
LIFTOFF_API lo_status lo_solve_measurements(const lo_ensemble* e, const double* b, size_t m,
                                            const lo_solver_options* opts, lo_result** out);
LIFTOFF_API void lo_result_free(lo_result* r);

typedef struct lo_result_summary {
  lo_solve_status status;
  int outer_iters;
  int inner_iters;
  double eigengap;
  int is_rank_one;
  double final_step;
  double objective_initial;
  double objective_final;
  double lambda;
  double mu;
} lo_result_summary;

LIFTOFF_API lo_status lo_result_summary_get(const lo_result* r, lo_result_summary* out);
/* Extracted signal as interleaved (re, im) pairs; len must be at least 2d. */
LIFTOFF_API lo_status lo_result_signal(const lo_result* r, double* buf, size_t len);
LIFTOFF_API lo_status lo_result_objective_trace(const lo_result* r, double* buf, size_t len, size_t* count);
LIFTOFF_API lo_status lo_result_relative_error(const lo_result* r, const lo_instance* inst, double* out);
LIFTOFF_API lo_status lo_result_write_trace(const lo_result* r, const char* path);

/* Rank-one sufficient lambda for the instance (diagnostic only). */
LIFTOFF_API lo_status lo_rank_one_lambda_bound(const lo_instance* inst, double mu, double* out);

/* ---- experiments ----------------------------------------------------- */

typedef struct lo_trial_record {
  double sweep_value;
  int trial_index;
  uint64_t seed;
  double relative_error;
  int success;
  double eigengap;
  int outer_iters;
  int inner_iters;
  double wall_time_s;
} lo_trial_record;

typedef struct lo_cell_summary {
  double sweep_value;
  int trials;
  int successes;
  double success_rate;
  double recon_snr_db;
} lo_cell_summary;

LIFTOFF_API lo_status lo_experiment_create(lo_experiment** out);
LIFTOFF_API void lo_experiment_free(lo_experiment* x);
/* key/value spelling matches the CLI flags and spec files. */
LIFTOFF_API lo_status lo_experiment_set(lo_experiment* x, const char* key, const char* value);
LIFTOFF_API lo_status lo_experiment_load_file(lo_experiment* x, const char* path);
LIFTOFF_API lo_status lo_experiment_validate(const lo_experiment* x);
/* Copies the configured output path (possibly empty) into buf. */
LIFTOFF_API lo_status lo_experiment_output_path(const lo_experiment* x, char* buf, size_t len);
LIFTOFF_API lo_status lo_experiment_run(lo_experiment* x);
LIFTOFF_API lo_status lo_experiment_record_count(const lo_experiment* x, size_t* out);
LIFTOFF_API lo_status lo_experiment_record(const lo_experiment* x, size_t i, lo_trial_record* out);
LIFTOFF_API lo_status lo_experiment_cell_count(const lo_experiment* x, size_t* out);
LIFTOFF_API lo_status lo_experiment_cell(const lo_experiment* x, size_t i, lo_cell_summary* out);
LIFTOFF_API lo_status lo_experiment_write_csv(const lo_experiment* x, const char* path);
LIFTOFF_API lo_status lo_experiment_write_summary(const lo_experiment* x, const char* path);

#ifdef __cplusplus
}
#endif

#endif /* LIFTOFF_H */
