// Copyright 2026 The modaljump Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file beable.hpp
 * @brief Bell's modal jump dynamics for a bath-occupation preferred measure.
 *
 * The preferred measure is {1_sys ⊗ |n><n|} over the bath occupation basis of
 * the model (spectral or temporal modes). A pointer configuration is a flat
 * bath index; its projector covers the two composite indices {c, B + c}.
 *
 * Because V(t) is linear in the ladder operators, the current J_nm vanishes
 * unless n and m differ by exactly one photon in one slot. For such an edge
 * (l -> h = l + e_k) it is evaluated from the unnormalised slices as
 *
 *     J_hl = 2 sqrt(h_k) Re[ conj(u_k) conj(psi_b[h]) psi_e[l] ],   J_lh = -J_hl
 *
 * and the two orientations are produced from the same number, so
 * antisymmetry holds exactly.
 */

#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "modaljump/hilbert.hpp"
#include "modaljump/models.hpp"

namespace modaljump {

struct PointerConfig {
  std::size_t index{0};
  auto operator<=>(const PointerConfig&) const = default;
};

class PreferredMeasure {
 public:
  PreferredMeasure(BasisKind kind, HilbertSpec spec) : kind_(kind), spec_(std::move(spec)) {}

  BasisKind kind() const noexcept { return kind_; }
  const HilbertSpec& space() const noexcept { return spec_; }
  std::size_t num_configs() const noexcept { return spec_.bath_dim(); }

  /// Composite indices of pi_n: {ground, excited}.
  std::array<std::size_t, 2> support(PointerConfig c) const noexcept { return {c.index, spec_.bath_dim() + c.index}; }
  std::vector<int> occupations(PointerConfig c) const { return spec_.bath_occupations(c.index); }
  PointerConfig config(std::span<const int> occupations) const { return {spec_.bath_flat(occupations)}; }

  /// Configurations one quantum away from c (up and down in every slot, within the cutoff).
  std::vector<PointerConfig> neighbors(PointerConfig c) const;

  /// Slot whose occupation differs by exactly one between a and b, or -1.
  int single_quantum_mode(PointerConfig a, PointerConfig b) const noexcept;

 private:
  BasisKind kind_;
  HilbertSpec spec_;
};

double born_probability(std::span<const cplx> state, const PreferredMeasure& measure, PointerConfig config);
std::vector<double> born_distribution(std::span<const cplx> state, const PreferredMeasure& measure);

/// J_nm(t). Zero unless n and m are single-quantum neighbours.
double current(std::span<const cplx> state, const HamiltonianModel& model, const PreferredMeasure& measure,
               PointerConfig n, PointerConfig m, double t);

/// Same as above with u_k(t) already evaluated.
double current(std::span<const cplx> state, std::span<const cplx> couplings, const PreferredMeasure& measure,
               PointerConfig n, PointerConfig m);

struct Transition {
  PointerConfig target;
  double current{0.0};  // J_{target, source}
  double rate{0.0};     // T_{target, source}
};

struct RateTable {
  PointerConfig source;
  double source_probability{0.0};
  bool below_floor{false};
  std::vector<Transition> transitions;

  double total_rate() const noexcept;
};

struct RateOptions {
  double probability_floor{1e-12};
};

/// Bell's rates out of m: T_nm = max(J_nm, 0) / Pr(m) over the single-quantum
/// neighbours of m. Below the probability floor Pr(m) is replaced by the floor
/// and the table is marked; sample_step then clamps the jump probability.
RateTable bell_rates(std::span<const cplx> state, const HamiltonianModel& model, const PreferredMeasure& measure,
                     PointerConfig m, double t, const RateOptions& options = {});
RateTable bell_rates(std::span<const cplx> state, std::span<const cplx> couplings, const PreferredMeasure& measure,
                     PointerConfig m, const RateOptions& options = {});
void bell_rates(std::span<const cplx> state, std::span<const cplx> couplings, const PreferredMeasure& measure,
                PointerConfig m, const RateOptions& options, RateTable& out);

struct SamplingOptions {
  double p_max{0.1};
};

struct StepDiagnostics {
  std::uint64_t clamp_events{0};
  std::uint64_t p_max_warnings{0};
};

/// Zero or one jump per step from a single uniform draw u in [0, 1): the
/// cumulative sums of T_n dt partition [0, p) among the targets.
PointerConfig sample_step(const RateTable& rates, double dt, double u, const SamplingOptions& options = {},
                          StepDiagnostics* diag = nullptr);
PointerConfig sample_step(const RateTable& rates, double dt, std::mt19937_64& rng,
                          const SamplingOptions& options = {}, StepDiagnostics* diag = nullptr);

/// Uniform double in [0, 1) from the top 53 bits of one draw.
double uniform01(std::mt19937_64& rng) noexcept;

struct ConditionedState {
  cplx excited;
  cplx ground;
  double norm{0.0};  // Pr(config)
};

/// <n|Psi> / sqrt(N). Throws std::domain_error on an empty slice.
ConditionedState conditioned_state(std::span<const cplx> state, const PreferredMeasure& measure, PointerConfig config);

}  // namespace modaljump
