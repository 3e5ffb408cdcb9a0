#pragma once

#include "liftoff/linalg.hpp"
#include "liftoff/measurement.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace liftoff {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Per-trial seed: mix64(mix64(mix64(base) ^ sweep_point) ^ trial_index).
/// sweep_point is the index of the sweep cell, not its value.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t sweep_point, std::uint64_t trial_index);

/// Real: a_i ~ N(0, I_d). Complex: a_i ~ N(0, I_d / 2) + i N(0, I_d / 2).
MeasurementEnsemble gen_ensemble(Eigen::Index d, Eigen::Index m, Field field, std::uint64_t seed);

struct SparseSignal {
  ComplexVector x0;
  std::vector<Eigen::Index> support;  // sorted ascending
};

/// Uniform k-subset support, N(0,1) (real) or N(0,1) + i N(0,1) (complex)
/// nonzeros, then normalized to unit l2 norm.
SparseSignal gen_sparse_signal(Eigen::Index d, Eigen::Index k, Field field, std::uint64_t seed);

struct Measurements {
  RealVector b;
  RealVector w;
};

/// Per-component noise standard deviation for a target SNR in dB:
/// sqrt((||clean||^2 / m) / 10^(snr/10)).
double awgn_sigma(const RealVector& clean, double snr_db);

/// b = A(x0 x0^*) + w with w ~ awgn_sigma * N(0, I_m), or w = 0 when snr_db
/// is absent. Noisy b is never clipped.
Measurements gen_measurements(const MeasurementEnsemble& e, const ComplexVector& x0,
                              std::optional<double> snr_db, std::uint64_t seed);

struct ProblemInstance {
  MeasurementEnsemble ensemble;
  ComplexVector x0;
  std::vector<Eigen::Index> support;
  RealVector b;
  RealVector w;
  std::optional<double> snr_db;
  std::uint64_t seed = 0;

  Eigen::Index d() const { return ensemble.d(); }
  Eigen::Index m() const { return ensemble.m(); }
  Eigen::Index k() const { return static_cast<Eigen::Index>(support.size()); }
  Field field() const { return ensemble.field(); }
};

/// Full instance from one seed; the ensemble, signal and noise each draw
/// from their own substream mix64(seed ^ tag).
ProblemInstance make_instance(Eigen::Index d, Eigen::Index m, Eigen::Index k, Field field,
                              std::optional<double> snr_db, std::uint64_t seed);

}  // namespace liftoff
