#pragma once

#include "liftoff/admm.hpp"
#include "liftoff/dca.hpp"
#include "liftoff/linalg.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace liftoff {

enum class ExperimentKind { kSweepM, kSweepK, kRobustness, kSingle };

const char* to_string(ExperimentKind k);
ExperimentKind parse_kind(const std::string& s);

/// Inclusive arithmetic grid "start:stop:step".
struct Range {
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;

  std::vector<double> values() const;
  std::string str() const;
};

Range parse_range(const std::string& s);

/// Declarative description of a Monte-Carlo run. Every field has a
/// "key = value" spelling (see apply_setting) that matches the CLI flag name.
struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::kSingle;
  Eigen::Index d = 50;
  int k = 5;
  Eigen::Index m = 100;
  Range md_range{0.1, 4.0, 0.1};
  Range k_range{1.0, 25.0, 1.0};
  Field field = Field::kComplex;
  int trials = 40;
  std::vector<double> snr_db;  // empty: noiseless
  double success_threshold = 1e-3;
  std::uint64_t base_seed = 0;

  std::optional<double> mu;
  std::optional<double> lambda;
  double tol = 1e-6;
  int max_outer = 100;
  AdmmConfig admm;
  bool warm_start = true;

  int threads = 1;  // 0: one per hardware thread
  std::string output_path;
  bool timing = false;  // wall_time_s is "NA" unless set
};

/// Sets one field from its textual form. Throws kInvalidArgument for unknown
/// keys or malformed values.
void apply_setting(ExperimentSpec& spec, const std::string& key, const std::string& value);
/// Reads "key = value" lines; blank lines and '#' comments are skipped.
void load_spec_file(ExperimentSpec& spec, const std::string& path);
void validate(const ExperimentSpec& spec);
/// Canonical "key = value" lines for every setting that affects results
/// (threads and output path excluded).
std::vector<std::string> describe(const ExperimentSpec& spec);

struct SweepCell {
  double value = 0.0;
  Eigen::Index m = 0;
  int k = 0;
  std::optional<double> snr_db;
};

std::vector<SweepCell> sweep_cells(const ExperimentSpec& spec);

struct TrialRecord {
  double sweep_value = 0.0;
  int trial_index = 0;
  std::uint64_t seed = 0;
  double relative_error = 0.0;  // +inf for diverged trials
  bool success = false;
  double eigengap = 0.0;
  int outer_iters = 0;
  int total_inner_iters = 0;
  double wall_time = 0.0;
};

/// One trial: instance from `seed`, (lambda, mu) from default_parameters
/// unless overridden, then dca_run and the phase-aligned relative error.
TrialRecord run_trial(const ExperimentSpec& spec, const SweepCell& cell, int trial_index, std::uint64_t seed);

/// Runs every (cell, trial) pair. Trial t of cell c uses
/// derive_seed(base_seed, c, t). Output is sorted by (sweep_value,
/// trial_index) and does not depend on the thread count.
std::vector<TrialRecord> run_experiment(const ExperimentSpec& spec);

struct CellSummary {
  double sweep_value = 0.0;
  int trials = 0;
  int successes = 0;
  double success_rate = 0.0;
  double recon_snr_db = 0.0;  // mean of -20 log10(err) over finite errors
  int finite_trials = 0;
};

std::vector<CellSummary> summarize(const std::vector<TrialRecord>& records);

/// Reconstruction SNR in dB, errors clamped below at 1e-16.
double reconstruction_snr_db(double relative_error);

void write_records_csv(std::ostream& os, const ExperimentSpec& spec, const std::vector<TrialRecord>& records);
void write_summary_csv(std::ostream& os, const std::vector<CellSummary>& cells);

}  // namespace liftoff
