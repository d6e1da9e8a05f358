// Copyright 2026 The modaljump Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file analysis.hpp
 * @brief Exact reference quantities: partial trace over the bath, ensemble
 *        versus exact comparisons, and temporal-coupling profiles.
 */

#pragma once

#include <span>
#include <vector>

#include "modaljump/beable.hpp"
#include "modaljump/bloch.hpp"
#include "modaljump/guiding.hpp"
#include "modaljump/unravel.hpp"

namespace modaljump {

/// rho[a][b] = sum_c Psi[a, c] conj(Psi[b, c]).
ReducedState reduced_state(std::span<const cplx> state, const HilbertSpec& spec);

/// sum_n Pr(n) |psi_n><psi_n| over every configuration with nonzero weight.
ReducedState mixture_of_conditioned(std::span<const cplx> state, const PreferredMeasure& measure);

/// Half the Euclidean distance between Bloch vectors.
double trace_distance(const Bloch& a, const Bloch& b) noexcept;

struct EnsembleComparison {
  std::vector<std::size_t> steps;
  std::vector<Bloch> exact;
  std::vector<Bloch> difference;  // ensemble mean - exact
  std::vector<Bloch> se;
  std::vector<double> trace_distance;

  /// Absolute slack added to k * se, so points where every trajectory agrees (se = 0) compare by rounding only.
  static constexpr double kAbsoluteSlack = 1e-12;

  /// Fraction of points where every component satisfies |difference| <= k * se + kAbsoluteSlack.
  double fraction_within(double k) const noexcept;
  double max_trace_distance() const noexcept;
};

/// Throws std::invalid_argument when grids differ.
EnsembleComparison ensemble_vs_exact(const Ensemble& ensemble, const GuidingTrajectory& guiding);

/// Exact Bloch vector of the reduced state at every recorded point (stride s).
std::vector<Bloch> exact_bloch_series(const GuidingTrajectory& guiding, std::size_t stride = 1);

/**
 * c_tau(t) = (g / sqrt(kappa)) {1 + 2 sum_{k=1}^{(kappa-1)/2} cos[k (W t - 2 pi tau / kappa)]}
 * for flat couplings and equally spaced detunings k W. `tau` is the centered
 * label. Throws std::invalid_argument for even kappa.
 */
std::vector<double> markovian_limit_profile(int kappa, double g, double omega_spacing, int tau,
                                            std::span<const double> times);

}  // namespace modaljump
