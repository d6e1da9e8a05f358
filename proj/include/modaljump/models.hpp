// Copyright 2026 The modaljump Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file models.hpp
 * @brief Interaction-frame Hamiltonians of a resonantly driven two-level atom
 *        coupled linearly to a few bosonic modes (hbar = 1, time in 1/g).
 *
 * Every model here has the form
 *
 *     H(t) = (Omega/2) sigma_x + i sum_k [ conj(u_k(t)) sigma A_k^dag - u_k(t) sigma^dag A_k ]
 *
 * where A_k is the ladder operator of slot k of the bath factor. In the
 * spectral basis A_k = a_k and u_k(t) = g_k exp(-i Omega_k t). In the temporal
 * basis the bath factor holds temporal-mode occupations, A_k = b_tau and
 * u_k(t) = c_tau(t).
 */

#pragma once

#include <concepts>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "modaljump/hilbert.hpp"

namespace modaljump {

enum class BasisKind { spectral, temporal };

std::string_view to_string(BasisKind kind) noexcept;
BasisKind basis_kind_from_string(std::string_view s);

struct ModelParams {
  double rabi{0.0};
  std::vector<cplx> couplings;
  std::vector<double> detunings;

  int num_modes() const noexcept { return static_cast<int>(couplings.size()); }
  void validate() const;
  bool operator==(const ModelParams&) const = default;
};

// kappa = 1, resonant mode.
ModelParams single_mode_params(double rabi = 5.0, cplx g = 1.0);
// kappa = 3, detunings (-Omega, 0, +Omega) on labels (-1, 0, +1).
ModelParams three_mode_params(double rabi = 20.0, cplx g = 1.0);

template <typename G>
concept HamiltonianGenerator = requires(const G& g, double t, std::span<const cplx> in, std::span<cplx> out) {
  { g.apply(t, in, out) };
};

inline constexpr int kMaxFastModes = 64;

class HamiltonianModel {
 public:
  HamiltonianModel(HilbertSpec spec, ModelParams params, BasisKind kind);

  const HilbertSpec& space() const noexcept { return spec_; }
  const ModelParams& params() const noexcept { return params_; }
  BasisKind kind() const noexcept { return kind_; }

  /// u_k(t) for every bath slot.
  std::vector<cplx> mode_couplings(double t) const;
  void mode_couplings(double t, std::span<cplx> out) const;

  /// out = H(t) in (overwrites out).
  void apply(double t, std::span<const cplx> in, std::span<cplx> out) const;

  const SparseOperator& driving() const noexcept { return driving_; }
  SparseOperator interaction(double t) const;
  SparseOperator hamiltonian(double t) const { return driving_ + interaction(t); }

  /// Stable 64-bit fingerprint of (spec, params, kind) for cache validation.
  std::uint64_t fingerprint() const;

 private:
  HilbertSpec spec_;
  ModelParams params_;
  BasisKind kind_;
  SparseOperator driving_;
  std::vector<double> sqrt_table_;  // sqrt(n), n = 0..cutoff
};

/// (Omega/2) sigma_x.
SparseOperator driving_hamiltonian(const HilbertSpec& spec, double rabi);

SparseOperator spectral_interaction(const HilbertSpec& spec, const ModelParams& params, double t);

/// Built directly on temporal-mode occupations (bath slot tau holds b_tau).
SparseOperator temporal_interaction(const HilbertSpec& spec, const ModelParams& params, double t);

/// c_tau(t) = kappa^{-1/2} sum_k g_k exp(-i Omega_k t + i 2 pi l_tau l_k / kappa), tau a slot index.
cplx temporal_coefficient(const ModelParams& params, int tau, double t);

/**
 * Strong-driving approximation of the three-mode interaction: of the
 * sigma_x-frame terms only the non-rotating ones are kept, then the result is
 * mapped back into the atom/bath interaction frame. Throws std::invalid_argument
 * for anything other than three modes detuned by (-Omega, 0, +Omega).
 */
SparseOperator second_rwa_interaction(const HilbertSpec& spec, const ModelParams& params, double t);

/// |sigma_x = +1><sigma_x = -1| and its adjoint, padded with the bath identity.
SparseOperator sigma_x_raise(const HilbertSpec& spec);
SparseOperator sigma_x_lower(const HilbertSpec& spec);

}  // namespace modaljump
