// Copyright 2026 The modaljump Authors
// SPDX-License-Identifier: Apache-2.0

#include "modaljump/beable.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "modaljump/errors.hpp"

namespace modaljump {

std::vector<PointerConfig> PreferredMeasure::neighbors(PointerConfig c) const {
  std::vector<PointerConfig> out;
  out.reserve(2 * static_cast<std::size_t>(spec_.num_modes()));
  for (int k = 0; k < spec_.num_modes(); ++k) {
    const int n = spec_.occupation(c.index, k);
    if (n < spec_.cutoff()) out.push_back({c.index + spec_.mode_stride(k)});
    if (n > 0) out.push_back({c.index - spec_.mode_stride(k)});
  }
  return out;
}

int PreferredMeasure::single_quantum_mode(PointerConfig a, PointerConfig b) const noexcept {
  int mode = -1;
  for (int k = 0; k < spec_.num_modes(); ++k) {
    const int d = spec_.occupation(a.index, k) - spec_.occupation(b.index, k);
    if (d == 0) continue;
    if (std::abs(d) != 1 || mode != -1) return -1;
    mode = k;
  }
  return mode;
}

double born_probability(std::span<const cplx> state, const PreferredMeasure& measure, PointerConfig config) {
  const auto [g, e] = measure.support(config);
  return std::norm(state[g]) + std::norm(state[e]);
}

std::vector<double> born_distribution(std::span<const cplx> state, const PreferredMeasure& measure) {
  std::vector<double> p(measure.num_configs());
  for (std::size_t c = 0; c < p.size(); ++c) p[c] = born_probability(state, measure, {c});
  return p;
}

namespace {

void check_measure(const HamiltonianModel& model, const PreferredMeasure& measure) {
  if (!(model.space() == measure.space())) throw std::invalid_argument("preferred measure built on a different space");
  if (model.kind() != measure.kind() && model.space().num_modes() > 1) {
    throw std::invalid_argument(std::string("preferred measure is ") + std::string(to_string(measure.kind())) +
                                " but the model is " + std::string(to_string(model.kind())));
  }
}

// J_{high, low} for high = low + e_k.
double edge_current(std::span<const cplx> state, std::span<const cplx> u, const HilbertSpec& spec, std::size_t low,
                    std::size_t high, int k) {
  const double amp = std::sqrt(static_cast<double>(spec.occupation(high, k)));
  const cplx z = std::conj(u[static_cast<std::size_t>(k)]) * std::conj(state[high]) * state[spec.bath_dim() + low];
  return 2.0 * amp * z.real();
}

}  // namespace

double current(std::span<const cplx> state, std::span<const cplx> couplings, const PreferredMeasure& measure,
               PointerConfig n, PointerConfig m) {
  const int k = measure.single_quantum_mode(n, m);
  if (k < 0) return 0.0;
  const auto& spec = measure.space();
  if (n.index > m.index) return edge_current(state, couplings, spec, m.index, n.index, k);
  return -edge_current(state, couplings, spec, n.index, m.index, k);
}

double current(std::span<const cplx> state, const HamiltonianModel& model, const PreferredMeasure& measure,
               PointerConfig n, PointerConfig m, double t) {
  check_measure(model, measure);
  if (state.size() != model.space().dim()) throw std::invalid_argument("current: state dimension mismatch");
  const auto u = model.mode_couplings(t);
  return current(state, u, measure, n, m);
}

double RateTable::total_rate() const noexcept {
  double s = 0.0;
  for (const auto& tr : transitions) s += tr.rate;
  return s;
}

void bell_rates(std::span<const cplx> state, std::span<const cplx> couplings, const PreferredMeasure& measure,
                PointerConfig m, const RateOptions& options, RateTable& out) {
  const auto& spec = measure.space();
  out.source = m;
  out.source_probability = born_probability(state, measure, m);
  out.below_floor = out.source_probability < options.probability_floor;
  const double denom = out.below_floor ? options.probability_floor : out.source_probability;
  out.transitions.clear();
  for (int k = 0; k < spec.num_modes(); ++k) {
    const auto stride = spec.mode_stride(k);
    const int occ = spec.occupation(m.index, k);
    if (occ < spec.cutoff()) {
      const double j = edge_current(state, couplings, spec, m.index, m.index + stride, k);
      out.transitions.push_back({{m.index + stride}, j, j > 0.0 ? j / denom : 0.0});
    }
    if (occ > 0) {
      const double j = -edge_current(state, couplings, spec, m.index - stride, m.index, k);
      out.transitions.push_back({{m.index - stride}, j, j > 0.0 ? j / denom : 0.0});
    }
  }
}

RateTable bell_rates(std::span<const cplx> state, std::span<const cplx> couplings, const PreferredMeasure& measure,
                     PointerConfig m, const RateOptions& options) {
  RateTable t;
  bell_rates(state, couplings, measure, m, options, t);
  return t;
}

RateTable bell_rates(std::span<const cplx> state, const HamiltonianModel& model, const PreferredMeasure& measure,
                     PointerConfig m, double t, const RateOptions& options) {
  check_measure(model, measure);
  if (state.size() != model.space().dim()) throw std::invalid_argument("bell_rates: state dimension mismatch");
  if (m.index >= measure.num_configs()) throw std::out_of_range("bell_rates: configuration out of range");
  const auto u = model.mode_couplings(t);
  return bell_rates(state, u, measure, m, options);
}

PointerConfig sample_step(const RateTable& rates, double dt, double u, const SamplingOptions& options,
                          StepDiagnostics* diag) {
  double p = rates.total_rate() * dt;
  if (p <= 0.0) return rates.source;
  double scale = 1.0;
  if (rates.below_floor && p > options.p_max) {
    scale = options.p_max / p;
    p = options.p_max;
    if (diag) ++diag->clamp_events;
  } else if (p > 1.0) {
    throw NumericalError("sample_step: jump probability " + std::to_string(p) + " exceeds one; reduce dt");
  } else if (p > options.p_max && diag) {
    ++diag->p_max_warnings;
  }
  if (u >= p) return rates.source;
  double acc = 0.0;
  for (const auto& tr : rates.transitions) {
    if (tr.rate <= 0.0) continue;
    acc += tr.rate * dt * scale;
    if (u < acc) return tr.target;
  }
  // Rounding in the cumulative sum: assign to the last target with a positive rate.
  for (auto it = rates.transitions.rbegin(); it != rates.transitions.rend(); ++it) {
    if (it->rate > 0.0) return it->target;
  }
  return rates.source;
}

double uniform01(std::mt19937_64& rng) noexcept { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

PointerConfig sample_step(const RateTable& rates, double dt, std::mt19937_64& rng, const SamplingOptions& options,
                          StepDiagnostics* diag) {
  return sample_step(rates, dt, uniform01(rng), options, diag);
}

ConditionedState conditioned_state(std::span<const cplx> state, const PreferredMeasure& measure, PointerConfig config) {
  const auto [g, e] = measure.support(config);
  const double p = std::norm(state[g]) + std::norm(state[e]);
  if (!(p > 0.0)) {
    throw std::domain_error("conditioned_state: configuration " + std::to_string(config.index) +
                            " has zero probability");
  }
  const double s = 1.0 / std::sqrt(p);
  return {state[e] * s, state[g] * s, p};
}

}  // namespace modaljump
