#pragma once

#include "liftoff/admm.hpp"
#include "liftoff/dca.hpp"
#include "liftoff/measurement.hpp"
#include "liftoff/synth.hpp"

#include <iosfwd>
#include <string>

namespace liftoff {

// Text formats share one layout: '#'-prefixed "key=value" header lines, then
// comma-separated numeric rows. Doubles are written in shortest round-trip
// form, so dump -> load is bit-exact.
//
// Ensemble file:
//   # liftoff-ensemble v1
//   # d=<int>  m=<int>  field=real|complex  seed=<uint64>   (one per line)
//   then m rows, row i = re(a_i[0]),im(a_i[0]),...,re(a_i[d-1]),im(a_i[d-1])
//
// Instance file:
//   # liftoff-instance v1
//   # d, m, k, field, seed, snr_db (=none when noiseless)
//   [x0]       d rows "re,im"
//   [support]  k rows "index"
//   [b]        m rows
//   [w]        m rows
//   [ensemble] m rows as in the ensemble file

std::string format_double(double v);
Field parse_field(const std::string& s);
const char* to_string(Field f);

void write_ensemble(std::ostream& os, const MeasurementEnsemble& e);
MeasurementEnsemble read_ensemble(std::istream& is);
void save_ensemble(const std::string& path, const MeasurementEnsemble& e);
MeasurementEnsemble load_ensemble(const std::string& path);

void write_instance(std::ostream& os, const ProblemInstance& inst);
ProblemInstance read_instance(std::istream& is);
void save_instance(const std::string& path, const ProblemInstance& inst);
ProblemInstance load_instance(const std::string& path);

/// Columns: outer_iter,objective,step,eigengap,inner_iters. Row 0 is F(X^0).
void write_objective_trace(std::ostream& os, const SolveResult& r);

/// Trace sink emitting "iteration,delta,primal_res,dual_res,objective" rows
/// (no header) to `os`.
AdmmTraceSink csv_admm_trace(std::ostream& os);

}  // namespace liftoff
