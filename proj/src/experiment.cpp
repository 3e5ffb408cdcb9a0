#include "liftoff/experiment.hpp"

#include "liftoff/error.hpp"
#include "liftoff/io.hpp"
#include "liftoff/synth.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace liftoff {

namespace {

constexpr const char* kVersion = "0.1.0";

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  fail(ErrorCode::kInvalidArgument, "invalid value '" + value + "' for '" + key + "'");
}

double to_double(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, value);
  return out;
}

template <typename Int>
Int to_int(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  Int out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, value);
  return out;
}

bool to_bool(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad_value(key, value);
}

// "10,20,30", a range "10:50:10", or "none".
std::vector<double> to_snr_list(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (v.empty() || v == "none") return {};
  if (v.find(':') != std::string::npos) return parse_range(v).values();
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, item));
  return out;
}

double snap(double v) { return std::round(v * 1e9) / 1e9; }

}  // namespace

const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::kSweepM: return "sweep-m";
    case ExperimentKind::kSweepK: return "sweep-k";
    case ExperimentKind::kRobustness: return "robustness";
    case ExperimentKind::kSingle: return "single";
  }
  return "unknown";
}

ExperimentKind parse_kind(const std::string& s) {
  const std::string v = trim(s);
  if (v == "sweep-m" || v == "sweep_m") return ExperimentKind::kSweepM;
  if (v == "sweep-k" || v == "sweep_k") return ExperimentKind::kSweepK;
  if (v == "robustness") return ExperimentKind::kRobustness;
  if (v == "single" || v == "solve") return ExperimentKind::kSingle;
  bad_value("kind", s);
}

std::vector<double> Range::values() const {
  std::vector<double> out;
  if (!(step > 0.0) || !std::isfinite(start) || !std::isfinite(stop)) return out;
  const double slack = 1e-9 * step;
  for (long i = 0;; ++i) {
    const double v = start + static_cast<double>(i) * step;
    if (v > stop + slack) break;
    out.push_back(snap(v));
    if (out.size() > 1000000) fail(ErrorCode::kInvalidArgument, "range has too many points");
  }
  return out;
}

std::string Range::str() const {
  return format_double(start) + ":" + format_double(stop) + ":" + format_double(step);
}

Range parse_range(const std::string& s) {
  const std::string v = trim(s);
  Range r;
  const auto c1 = v.find(':');
  if (c1 == std::string::npos) {
    r.start = r.stop = to_double("range", v);
    r.step = 1.0;
    return r;
  }
  const auto c2 = v.find(':', c1 + 1);
  r.start = to_double("range", v.substr(0, c1));
  if (c2 == std::string::npos) {
    r.stop = to_double("range", v.substr(c1 + 1));
    r.step = 1.0;
  } else {
    r.stop = to_double("range", v.substr(c1 + 1, c2 - c1 - 1));
    r.step = to_double("range", v.substr(c2 + 1));
  }
  if (!(r.step > 0.0) || r.stop < r.start) bad_value("range", s);
  return r;
}

void apply_setting(ExperimentSpec& spec, const std::string& raw_key, const std::string& value) {
  std::string key = trim(raw_key);
  std::replace(key.begin(), key.end(), '_', '-');
  if (key == "kind") spec.kind = parse_kind(value);
  else if (key == "d") spec.d = to_int<Eigen::Index>(key, value);
  else if (key == "k") spec.k = to_int<int>(key, value);
  else if (key == "m") spec.m = to_int<Eigen::Index>(key, value);
  else if (key == "md-range") spec.md_range = parse_range(value);
  else if (key == "k-range") spec.k_range = parse_range(value);
  else if (key == "field") spec.field = parse_field(trim(value));
  else if (key == "trials") spec.trials = to_int<int>(key, value);
  else if (key == "snr-db") spec.snr_db = to_snr_list(key, value);
  else if (key == "success-threshold") spec.success_threshold = to_double(key, value);
  else if (key == "seed") spec.base_seed = to_int<std::uint64_t>(key, value);
  else if (key == "mu") spec.mu = trim(value) == "auto" ? std::nullopt : std::optional(to_double(key, value));
  else if (key == "lambda") spec.lambda = trim(value) == "auto" ? std::nullopt : std::optional(to_double(key, value));
  else if (key == "tol") spec.tol = to_double(key, value);
  else if (key == "max-outer") spec.max_outer = to_int<int>(key, value);
  else if (key == "max-inner") spec.admm.max_iters = to_int<int>(key, value);
  else if (key == "tol-inner") spec.admm.tol_inner = to_double(key, value);
  else if (key == "delta0") spec.admm.delta0 = to_double(key, value);
  else if (key == "adaptive") spec.admm.adaptive = to_bool(key, value);
  else if (key == "freeze-after") spec.admm.freeze_after = to_int<int>(key, value);
  else if (key == "warm-start") spec.warm_start = to_bool(key, value);
  else if (key == "threads") spec.threads = to_int<int>(key, value);
  else if (key == "out") spec.output_path = trim(value);
  else if (key == "timing") spec.timing = to_bool(key, value);
  else fail(ErrorCode::kInvalidArgument, "unknown setting '" + raw_key + "'");
}

void load_spec_file(ExperimentSpec& spec, const std::string& path) {
  std::ifstream is(path);
  if (!is) fail(ErrorCode::kIo, "cannot open spec file '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      fail(ErrorCode::kInvalidArgument, path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    apply_setting(spec, t.substr(0, eq), t.substr(eq + 1));
  }
}

void validate(const ExperimentSpec& spec) {
  auto bad = [](const std::string& msg) { fail(ErrorCode::kInvalidArgument, "invalid spec: " + msg); };
  if (spec.d < 1) bad("d must be >= 1");
  if (spec.trials < 1) bad("trials must be >= 1");
  if (!(spec.success_threshold > 0.0)) bad("success-threshold must be > 0");
  if (!(spec.tol >= 0.0)) bad("tol must be >= 0");
  if (spec.max_outer < 1) bad("max-outer must be >= 1");
  if (spec.admm.max_iters < 1) bad("max-inner must be >= 1");
  if (!(spec.admm.delta0 > 0.0)) bad("delta0 must be > 0");
  if (!(spec.admm.tol_inner >= 0.0)) bad("tol-inner must be >= 0");
  if (spec.mu && !(*spec.mu >= 0.0)) bad("mu must be >= 0");
  if (spec.lambda && !(*spec.lambda >= 0.0)) bad("lambda must be >= 0");
  if (spec.threads < 0) bad("threads must be >= 0");
  for (double s : spec.snr_db)
    if (!std::isfinite(s)) bad("snr-db values must be finite");
  if (spec.kind == ExperimentKind::kRobustness) {
    if (spec.snr_db.empty()) bad("robustness needs a nonempty snr-db list");
  } else if (spec.snr_db.size() > 1) {
    bad("snr-db may list several values only for robustness");
  }
  const auto cells = sweep_cells(spec);
  if (cells.empty()) bad("sweep range is empty");
  for (const auto& c : cells) {
    if (c.k < 1 || c.k > spec.d) bad("k must satisfy 1 <= k <= d (got " + std::to_string(c.k) + ")");
    if (c.m < 1) bad("m must be >= 1 (got " + std::to_string(c.m) + ")");
  }
}

std::vector<std::string> describe(const ExperimentSpec& spec) {
  std::vector<std::string> lines;
  auto add = [&](const std::string& k, const std::string& v) { lines.push_back(k + " = " + v); };
  add("kind", to_string(spec.kind));
  add("d", std::to_string(spec.d));
  add("field", to_string(spec.field));
  switch (spec.kind) {
    case ExperimentKind::kSweepM:
      add("k", std::to_string(spec.k));
      add("md-range", spec.md_range.str());
      break;
    case ExperimentKind::kSweepK:
      add("m", std::to_string(spec.m));
      add("k-range", spec.k_range.str());
      break;
    case ExperimentKind::kRobustness:
    case ExperimentKind::kSingle:
      add("k", std::to_string(spec.k));
      add("m", std::to_string(spec.m));
      break;
  }
  std::string snr;
  for (std::size_t i = 0; i < spec.snr_db.size(); ++i) snr += (i ? "," : "") + format_double(spec.snr_db[i]);
  add("snr-db", snr.empty() ? "none" : snr);
  add("trials", std::to_string(spec.trials));
  add("seed", std::to_string(spec.base_seed));
  add("success-threshold", format_double(spec.success_threshold));
  add("mu", spec.mu ? format_double(*spec.mu) : "auto");
  add("lambda", spec.lambda ? format_double(*spec.lambda) : "auto");
  add("tol", format_double(spec.tol));
  add("max-outer", std::to_string(spec.max_outer));
  add("max-inner", std::to_string(spec.admm.max_iters));
  add("tol-inner", format_double(spec.admm.tol_inner));
  add("delta0", format_double(spec.admm.delta0));
  add("adaptive", spec.admm.adaptive ? "true" : "false");
  add("freeze-after", std::to_string(spec.admm.freeze_after));
  add("warm-start", spec.warm_start ? "true" : "false");
  add("timing", spec.timing ? "true" : "false");
  return lines;
}

std::vector<SweepCell> sweep_cells(const ExperimentSpec& spec) {
  std::vector<SweepCell> cells;
  const std::optional<double> snr =
      spec.snr_db.empty() ? std::nullopt : std::optional<double>(spec.snr_db.front());
  switch (spec.kind) {
    case ExperimentKind::kSweepM:
      for (double r : spec.md_range.values()) {
        const auto m = static_cast<Eigen::Index>(std::llround(r * static_cast<double>(spec.d)));
        cells.push_back({r, m, spec.k, snr});
      }
      break;
    case ExperimentKind::kSweepK:
      for (double kv : spec.k_range.values()) {
        const int k = static_cast<int>(std::llround(kv));
        cells.push_back({static_cast<double>(k), spec.m, k, snr});
      }
      break;
    case ExperimentKind::kRobustness:
      for (double s : spec.snr_db) cells.push_back({s, spec.m, spec.k, s});
      break;
    case ExperimentKind::kSingle:
      cells.push_back({snap(static_cast<double>(spec.m) / static_cast<double>(spec.d)), spec.m, spec.k, snr});
      break;
  }
  return cells;
}

TrialRecord run_trial(const ExperimentSpec& spec, const SweepCell& cell, int trial_index, std::uint64_t seed) {
  TrialRecord rec;
  rec.sweep_value = cell.value;
  rec.trial_index = trial_index;
  rec.seed = seed;

  const auto t0 = std::chrono::steady_clock::now();
  const ProblemInstance inst = make_instance(spec.d, cell.m, cell.k, spec.field, cell.snr_db, seed);
  const Parameters auto_params = default_parameters(cell.k, inst.w.norm());
  DcaConfig cfg;
  cfg.mu = spec.mu.value_or(auto_params.mu);
  cfg.lambda = spec.lambda.value_or(cfg.mu * cell.k / (std::sqrt(2.0) - 1.0));
  cfg.tol = spec.tol;
  cfg.max_iters = spec.max_outer;
  cfg.admm = spec.admm;
  cfg.warm_start = spec.warm_start;

  rec.relative_error = std::numeric_limits<double>::infinity();
  try {
    const SolveResult r = dca_run(inst.ensemble, inst.b, cfg);
    rec.outer_iters = r.outer_iters;
    rec.total_inner_iters = r.total_inner_iters;
    rec.eigengap = r.eigengap;
    if (r.status != SolveStatus::kDiverged) {
      rec.relative_error = phase_aligned_distance(r.x_extracted, inst.x0, spec.field) / inst.x0.norm();
    }
  } catch (const Error& err) {
    if (err.code() != ErrorCode::kDiverged && err.code() != ErrorCode::kNumerical) throw;
  }
  if (!std::isfinite(rec.relative_error)) rec.relative_error = std::numeric_limits<double>::infinity();
  rec.success = rec.relative_error < spec.success_threshold;
  rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

std::vector<TrialRecord> run_experiment(const ExperimentSpec& spec) {
  validate(spec);
  const auto cells = sweep_cells(spec);
  struct Job {
    std::size_t cell;
    int trial;
  };
  std::vector<Job> jobs;
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (int t = 0; t < spec.trials; ++t) jobs.push_back({c, t});

  std::vector<TrialRecord> records(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      try {
        const Job& job = jobs[j];
        const auto seed = derive_seed(spec.base_seed, job.cell, static_cast<std::uint64_t>(job.trial));
        records[j] = run_trial(spec, cells[job.cell], job.trial, seed);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next = jobs.size();
      }
    }
  };

  unsigned n_threads = spec.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                         : static_cast<unsigned>(spec.threads);
  n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, std::max<std::size_t>(jobs.size(), 1)));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }
  if (first_error) std::rethrow_exception(first_error);

  std::stable_sort(records.begin(), records.end(), [](const TrialRecord& a, const TrialRecord& b) {
    return a.sweep_value != b.sweep_value ? a.sweep_value < b.sweep_value : a.trial_index < b.trial_index;
  });
  return records;
}

double reconstruction_snr_db(double relative_error) {
  return -20.0 * std::log10(std::max(relative_error, 1e-16));
}

std::vector<CellSummary> summarize(const std::vector<TrialRecord>& records) {
  if (records.empty()) fail(ErrorCode::kInvalidArgument, "summarize: no records");
  std::map<double, CellSummary> cells;
  std::map<double, double> snr_sum;
  for (const auto& r : records) {
    auto& c = cells[r.sweep_value];
    c.sweep_value = r.sweep_value;
    ++c.trials;
    if (r.success) ++c.successes;
    if (std::isfinite(r.relative_error)) {
      ++c.finite_trials;
      snr_sum[r.sweep_value] += reconstruction_snr_db(r.relative_error);
    }
  }
  std::vector<CellSummary> out;
  for (auto& [value, c] : cells) {
    c.success_rate = static_cast<double>(c.successes) / c.trials;
    c.recon_snr_db = c.finite_trials > 0 ? snr_sum[value] / c.finite_trials
                                         : std::numeric_limits<double>::quiet_NaN();
    out.push_back(c);
  }
  return out;
}

void write_records_csv(std::ostream& os, const ExperimentSpec& spec, const std::vector<TrialRecord>& records) {
  os << "# liftoff " << kVersion << " trial records\n";
  os << "# Strip the '# spec: ' prefix from the lines below to obtain a spec file.\n";
  for (const auto& line : describe(spec)) os << "# spec: " << line << '\n';
  os << "# relative_error = inf marks a diverged trial (counted as a failure, excluded from SNR means)\n";
  os << "# sweep_value = " << (spec.kind == ExperimentKind::kSweepM      ? "m/d"
                               : spec.kind == ExperimentKind::kSweepK    ? "k"
                               : spec.kind == ExperimentKind::kRobustness ? "input SNR (dB)"
                                                                          : "m/d")
     << '\n';
  if (!spec.timing) os << "# wall_time_s = NA unless timing = true (keeps the file byte-reproducible)\n";
  os << "sweep_value,trial_index,seed,relative_error,success,eigengap,outer_iters,inner_iters,wall_time_s\n";
  for (const auto& r : records) {
    os << format_double(r.sweep_value) << ',' << r.trial_index << ',' << r.seed << ','
       << (std::isfinite(r.relative_error) ? format_double(r.relative_error) : "inf") << ',' << (r.success ? 1 : 0)
       << ',' << format_double(r.eigengap) << ',' << r.outer_iters << ',' << r.total_inner_iters << ','
       << (spec.timing ? format_double(r.wall_time) : "NA") << '\n';
  }
}

void write_summary_csv(std::ostream& os, const std::vector<CellSummary>& cells) {
  os << "sweep_value,trials,successes,success_rate,recon_snr_db\n";
  for (const auto& c : cells) {
    os << format_double(c.sweep_value) << ',' << c.trials << ',' << c.successes << ','
       << format_double(c.success_rate) << ','
       << (std::isnan(c.recon_snr_db) ? std::string("nan") : format_double(c.recon_snr_db)) << '\n';
  }
}

}  // namespace liftoff
