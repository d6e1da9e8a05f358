// Copyright 2026 The modaljump Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file unravel.hpp
 * @brief Hidden-variable trajectories and seeded ensembles over a shared,
 *        read-only guiding trajectory.
 *
 * At every grid point j a walker records the Bloch vector of its conditioned
 * state, then samples the configuration for point j + 1 from Bell's rates
 * evaluated on snapshot j. Every step consumes exactly one uniform draw, and
 * the initial configuration consumes one more, so trajectory i of an ensemble
 * is bit-identical to run_trajectory with trajectory_seed(master, i).
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "modaljump/beable.hpp"
#include "modaljump/bloch.hpp"
#include "modaljump/guiding.hpp"

namespace modaljump {

PreferredMeasure spectral_measure(const HilbertSpec& spec);
PreferredMeasure temporal_measure(const HilbertSpec& spec);
/// Measure matching the model's bath basis.
PreferredMeasure measure_for(const HamiltonianModel& model);

/// Counter-based seed for trajectory `index` (independent of scheduling).
std::uint64_t trajectory_seed(std::uint64_t master_seed, std::uint64_t index) noexcept;

struct JumpEvent {
  std::size_t step{0};  // first grid point carrying the new configuration
  double t{0.0};
  PointerConfig from;
  PointerConfig to;
  int mode{-1};         // slot that changed, -1 if the jump was not single-quantum
  int direction{0};     // +1 photon gained, -1 lost
  Bloch before;         // conditioned state at step - 1 (old configuration)
  Bloch after;          // conditioned state at step (new configuration)
};

struct TrajectoryOptions {
  RateOptions rates;
  SamplingOptions sampling;
  std::size_t record_stride{1};
};

struct RunDiagnostics {
  std::uint64_t jumps{0};
  std::uint64_t up_jumps{0};
  std::uint64_t down_jumps{0};
  std::uint64_t invalid_jumps{0};  // |delta n| != 1; any nonzero value is a bug
  std::uint64_t clamp_events{0};
  std::uint64_t p_max_warnings{0};
  bool leakage_flagged{false};

  RunDiagnostics& operator+=(const RunDiagnostics& o) noexcept;
};

struct Trajectory {
  TimeGrid grid;
  std::size_t record_stride{1};
  std::uint64_t seed{0};
  std::vector<PointerConfig> configs;  // at j = 0, s, 2s, ...
  std::vector<Bloch> bloch;
  std::vector<double> norms;           // Pr(config) at recorded points
  std::vector<JumpEvent> jumps;
  RunDiagnostics diagnostics;

  std::size_t recorded_step(std::size_t r) const noexcept { return r * record_stride; }
};

Trajectory run_trajectory(const HamiltonianModel& model, const PreferredMeasure& measure,
                          const GuidingTrajectory& guiding, std::uint64_t seed, const TrajectoryOptions& options = {});

struct EnsembleOptions {
  TrajectoryOptions trajectory;
  unsigned threads{0};             // 0 = hardware concurrency
  std::size_t histogram_stride{0}; // 0 = no configuration histograms
  bool keep_jumps{false};
};

struct Ensemble {
  std::size_t size{0};
  std::uint64_t master_seed{0};
  TimeGrid grid;
  std::size_t record_stride{1};
  std::vector<Bloch> mean;  // at j = 0, s, 2s, ...
  std::vector<Bloch> se;    // sample standard deviation / sqrt(N); zero when N = 1
  std::vector<std::size_t> histogram_steps;
  std::vector<std::vector<std::uint32_t>> histograms;  // [sample][config] trajectory counts
  std::vector<std::vector<JumpEvent>> jumps;            // [trajectory], only with keep_jumps
  RunDiagnostics diagnostics;

  std::size_t recorded_step(std::size_t r) const noexcept { return r * record_stride; }
};

Ensemble run_ensemble(const HamiltonianModel& model, const PreferredMeasure& measure, const GuidingTrajectory& guiding,
                      std::size_t n_trajectories, std::uint64_t master_seed, const EnsembleOptions& options = {});

/// Deterministic pairwise sum.
double pairwise_sum(std::span<const double> values) noexcept;

}  // namespace modaljump
