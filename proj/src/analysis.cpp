// Copyright 2026 The modaljump Authors
// SPDX-License-Identifier: Apache-2.0

#include "modaljump/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace modaljump {

ReducedState ReducedState::from_bloch(const Bloch& r) noexcept {
  ReducedState s;
  s.rho[1][1] = 0.5 * (1.0 + r.z);
  s.rho[0][0] = 0.5 * (1.0 - r.z);
  s.rho[1][0] = 0.5 * cplx{r.x, -r.y};  // <e|rho|b>
  s.rho[0][1] = 0.5 * cplx{r.x, r.y};
  return s;
}

Bloch bloch_of(cplx excited, cplx ground) noexcept {
  const cplx z = std::conj(excited) * ground;
  return {2.0 * z.real(), 2.0 * z.imag(), std::norm(excited) - std::norm(ground)};
}

Bloch bloch_of(const ReducedState& rho) noexcept {
  const cplx be = rho(Atom::ground, Atom::excited);
  return {2.0 * be.real(), 2.0 * be.imag(), (rho(Atom::excited, Atom::excited) - rho(Atom::ground, Atom::ground)).real()};
}

ReducedState reduced_state(std::span<const cplx> state, const HilbertSpec& spec) {
  if (state.size() != spec.dim()) throw std::invalid_argument("reduced_state: state dimension mismatch");
  const auto B = spec.bath_dim();
  ReducedState r;
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) {
      cplx s = 0.0;
      for (std::size_t c = 0; c < B; ++c) s += state[a * B + c] * std::conj(state[b * B + c]);
      r.rho[a][b] = s;
    }
  }
  return r;
}

ReducedState mixture_of_conditioned(std::span<const cplx> state, const PreferredMeasure& measure) {
  ReducedState r;
  for (std::size_t c = 0; c < measure.num_configs(); ++c) {
    if (born_probability(state, measure, {c}) <= 0.0) continue;
    const auto cs = conditioned_state(state, measure, {c});
    const cplx amp[2] = {cs.ground, cs.excited};
    for (std::size_t a = 0; a < 2; ++a) {
      for (std::size_t b = 0; b < 2; ++b) r.rho[a][b] += cs.norm * amp[a] * std::conj(amp[b]);
    }
  }
  return r;
}

double trace_distance(const Bloch& a, const Bloch& b) noexcept {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return 0.5 * std::sqrt(dx * dx + dy * dy + dz * dz);
}

double EnsembleComparison::fraction_within(double k) const noexcept {
  if (difference.empty()) return 1.0;
  std::size_t ok = 0;
  for (std::size_t i = 0; i < difference.size(); ++i) {
    const auto& d = difference[i];
    const auto& s = se[i];
    auto within = [k](double diff, double err) { return std::abs(diff) <= k * err + kAbsoluteSlack; };
    if (within(d.x, s.x) && within(d.y, s.y) && within(d.z, s.z)) ++ok;
  }
  return static_cast<double>(ok) / static_cast<double>(difference.size());
}

double EnsembleComparison::max_trace_distance() const noexcept {
  return trace_distance.empty() ? 0.0 : *std::max_element(trace_distance.begin(), trace_distance.end());
}

std::vector<Bloch> exact_bloch_series(const GuidingTrajectory& guiding, std::size_t stride) {
  if (stride < 1) throw std::invalid_argument("exact_bloch_series: stride must be >= 1");
  std::vector<Bloch> out;
  std::vector<StateVector> scratch;
  for (std::size_t b = 0; b < guiding.num_blocks(); ++b) {
    const auto states = guiding.block(b, scratch);
    const auto begin = guiding.block_begin(b);
    for (std::size_t i = 0; i < states.size(); ++i) {
      if ((begin + i) % stride == 0) out.push_back(bloch_of(reduced_state(states[i], guiding.space())));
    }
  }
  return out;
}

EnsembleComparison ensemble_vs_exact(const Ensemble& ensemble, const GuidingTrajectory& guiding) {
  if (!(ensemble.grid == guiding.grid())) throw std::invalid_argument("ensemble_vs_exact: time grids differ");
  EnsembleComparison cmp;
  cmp.exact = exact_bloch_series(guiding, ensemble.record_stride);
  if (cmp.exact.size() != ensemble.mean.size()) throw std::invalid_argument("ensemble_vs_exact: record layout differs");
  const auto n = cmp.exact.size();
  cmp.steps.resize(n);
  cmp.difference.resize(n);
  cmp.trace_distance.resize(n);
  cmp.se = ensemble.se;
  for (std::size_t r = 0; r < n; ++r) {
    const auto& m = ensemble.mean[r];
    const auto& e = cmp.exact[r];
    cmp.steps[r] = ensemble.recorded_step(r);
    cmp.difference[r] = {m.x - e.x, m.y - e.y, m.z - e.z};
    cmp.trace_distance[r] = trace_distance(m, e);
  }
  return cmp;
}

std::vector<double> markovian_limit_profile(int kappa, double g, double omega_spacing, int tau,
                                            std::span<const double> times) {
  if (kappa < 1 || kappa % 2 == 0) throw std::invalid_argument("markovian_limit_profile: kappa must be odd and >= 1");
  std::vector<double> out;
  out.reserve(times.size());
  const double pref = g / std::sqrt(static_cast<double>(kappa));
  const double shift = 2.0 * std::numbers::pi * tau / kappa;
  for (double t : times) {
    const double phase = omega_spacing * t - shift;
    double s = 1.0;
    for (int k = 1; k <= (kappa - 1) / 2; ++k) s += 2.0 * std::cos(k * phase);
    out.push_back(pref * s);
  }
  return out;
}

}  // namespace modaljump
