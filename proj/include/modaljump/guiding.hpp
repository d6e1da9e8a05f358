// Copyright 2026 The modaljump Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file guiding.hpp
 * @brief Fixed-step RK4 integration of the guiding state and snapshot storage.
 *
 * The guiding state never sees the hidden-variable jumps, so it is integrated
 * once per parameter set and then read concurrently by every trajectory.
 * When the full snapshot set does not fit in the memory budget only every
 * `stride`-th state is kept; the states in between are regenerated block by
 * block with the same arithmetic, so they are bit-identical to the originals.
 */

#pragma once

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "modaljump/errors.hpp"
#include "modaljump/hilbert.hpp"
#include "modaljump/models.hpp"

namespace modaljump {

struct TimeGrid {
  double t0{0.0};
  double dt{1e-3};
  std::size_t steps{1};

  static TimeGrid until(double t_final, double dt, double t0 = 0.0);
  double time(std::size_t j) const noexcept { return t0 + static_cast<double>(j) * dt; }
  double t_final() const noexcept { return time(steps); }
  std::size_t points() const noexcept { return steps + 1; }
  void validate() const;
  bool operator==(const TimeGrid&) const = default;
};

/// Scratch vectors reused across RK4 steps.
struct Rk4Workspace {
  StateVector k, tmp, acc;
};

/// One classical RK4 step of d|psi>/dt = -i H(t) |psi> into `out`. No
/// renormalisation. `out` may alias `state`.
template <HamiltonianGenerator G>
void rk4_step(std::span<const cplx> state, const G& gen, double t, double dt, Rk4Workspace& ws, std::span<cplx> out) {
  const std::size_t n = state.size();
  const cplx mi{0.0, -1.0};
  const cplx h = mi * (0.5 * dt), f = mi * dt, w1 = mi * (dt / 6.0), w2 = mi * (dt / 3.0);
  ws.k.resize(n);
  ws.tmp.resize(n);
  ws.acc.resize(n);

  gen.apply(t, state, ws.k);
  for (std::size_t i = 0; i < n; ++i) {
    ws.acc[i] = state[i] + w1 * ws.k[i];
    ws.tmp[i] = state[i] + h * ws.k[i];
  }
  gen.apply(t + 0.5 * dt, ws.tmp, ws.k);
  for (std::size_t i = 0; i < n; ++i) {
    ws.acc[i] += w2 * ws.k[i];
    ws.tmp[i] = state[i] + h * ws.k[i];
  }
  gen.apply(t + 0.5 * dt, ws.tmp, ws.k);
  for (std::size_t i = 0; i < n; ++i) {
    ws.acc[i] += w2 * ws.k[i];
    ws.tmp[i] = state[i] + f * ws.k[i];
  }
  gen.apply(t + dt, ws.tmp, ws.k);
  for (std::size_t i = 0; i < n; ++i) {
    const cplx v = ws.acc[i] + w1 * ws.k[i];
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw NumericalError("rk4_step: non-finite amplitude at t = " + std::to_string(t) + " (index " +
                           std::to_string(i) + ")");
    }
    out[i] = v;
  }
}

template <HamiltonianGenerator G>
StateVector rk4_step(std::span<const cplx> state, const G& gen, double t, double dt) {
  Rk4Workspace ws;
  StateVector out(state.size());
  rk4_step(state, gen, t, dt, ws, out);
  return out;
}

struct GuidingOptions {
  double leakage_tolerance{1e-4};
  // Upper bound on stored complex amplitudes before switching to strided storage.
  std::size_t snapshot_limit{std::size_t{1} << 24};
};

/// Probability in basis states with any mode at the cutoff.
double leakage(const HilbertSpec& spec, std::span<const cplx> state);

class GuidingTrajectory {
 public:
  const HamiltonianModel& model() const noexcept { return model_; }
  const HilbertSpec& space() const noexcept { return model_.space(); }
  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t stride() const noexcept { return stride_; }

  const std::vector<double>& leakage_series() const noexcept { return leakage_; }
  const std::vector<double>& norm_series() const noexcept { return norms_; }
  double max_leakage() const noexcept { return max_leakage_; }
  bool leakage_flagged() const noexcept { return leakage_flagged_; }
  double leakage_tolerance() const noexcept { return leakage_tolerance_; }

  /// Blocks partition [0, points) into consecutive runs of grid points: one
  /// checkpoint interval when strided, fixed-size chunks when dense.
  std::size_t block_length() const noexcept { return stride_ > 1 ? stride_ : kDenseBlock; }
  std::size_t num_blocks() const noexcept { return (grid_.points() + block_length() - 1) / block_length(); }
  std::size_t block_begin(std::size_t b) const noexcept { return b * block_length(); }
  std::size_t block_end(std::size_t b) const noexcept;

  /// States of block b. Points into internal storage when dense, otherwise into `scratch`.
  std::span<const StateVector> block(std::size_t b, std::vector<StateVector>& scratch) const;
  StateVector state_at(std::size_t j) const;

  /// Versioned binary checkpoint file.
  void save(const std::filesystem::path& path) const;
  static GuidingTrajectory load(const std::filesystem::path& path, const HamiltonianModel& model,
                                const TimeGrid& grid);

 private:
  friend GuidingTrajectory evolve(std::span<const cplx>, const HamiltonianModel&, const TimeGrid&,
                                  const GuidingOptions&);
  GuidingTrajectory(HamiltonianModel model, TimeGrid grid) : model_(std::move(model)), grid_(grid) {}

  static constexpr std::size_t kDenseBlock = 256;

  HamiltonianModel model_;
  TimeGrid grid_;
  std::size_t stride_{1};
  std::vector<StateVector> checkpoints_;  // state at block_begin(b); all states when stride_ == 1
  std::vector<double> leakage_;
  std::vector<double> norms_;
  double leakage_tolerance_{1e-4};
  double max_leakage_{0.0};
  bool leakage_flagged_{false};
};

GuidingTrajectory evolve(std::span<const cplx> initial, const HamiltonianModel& model, const TimeGrid& grid,
                         const GuidingOptions& options = {});

/// Atom state (excited, ground) times the bath vacuum.
StateVector product_initial_state(const HilbertSpec& spec, cplx excited, cplx ground);

}  // namespace modaljump
