// Copyright 2026 The modaljump Authors
// SPDX-License-Identifier: Apache-2.0

#include "modaljump/models.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace modaljump {

std::string_view to_string(BasisKind kind) noexcept {
  return kind == BasisKind::spectral ? "spectral" : "temporal";
}

BasisKind basis_kind_from_string(std::string_view s) {
  if (s == "spectral") return BasisKind::spectral;
  if (s == "temporal") return BasisKind::temporal;
  throw std::invalid_argument("unknown basis kind '" + std::string(s) + "'");
}

void ModelParams::validate() const {
  if (couplings.empty()) throw std::invalid_argument("ModelParams: at least one mode required");
  if (couplings.size() != detunings.size()) {
    throw std::invalid_argument("ModelParams: couplings and detunings must have the same length");
  }
  if (!(rabi >= 0.0) || !std::isfinite(rabi)) throw std::invalid_argument("ModelParams: rabi must be finite and >= 0");
}

ModelParams single_mode_params(double rabi, cplx g) { return {rabi, {g}, {0.0}}; }

ModelParams three_mode_params(double rabi, cplx g) { return {rabi, {g, g, g}, {-rabi, 0.0, rabi}}; }

namespace {

void check_consistent(const HilbertSpec& spec, const ModelParams& params) {
  params.validate();
  if (params.num_modes() != spec.num_modes()) {
    throw std::invalid_argument("model has " + std::to_string(params.num_modes()) + " couplings but space has " +
                                std::to_string(spec.num_modes()) + " modes");
  }
}

cplx spectral_coupling(const ModelParams& p, int k, double t) {
  const auto i = static_cast<std::size_t>(k);
  return p.couplings[i] * std::polar(1.0, -p.detunings[i] * t);
}

cplx temporal_coupling(const ModelParams& p, int tau, double t) {
  const int kappa = p.num_modes();
  cplx c = 0.0;
  for (int k = 0; k < kappa; ++k) {
    const int prod = (centered_label(kappa, tau) * centered_label(kappa, k)) % kappa;
    c += spectral_coupling(p, k, t) * std::polar(1.0, 2.0 * std::numbers::pi * prod / kappa);
  }
  return c / std::sqrt(static_cast<double>(kappa));
}

// i sum_k [conj(u_k) sigma A_k^dag - u_k sigma^dag A_k] with A_k the slot-k ladder.
SparseOperator linear_coupling(const HilbertSpec& spec, std::span<const cplx> u) {
  const auto lower = atom_operator(spec, AtomOp::lower);
  const auto raise = atom_operator(spec, AtomOp::raise);
  SparseOperator v(spec.dim());
  const cplx I{0.0, 1.0};
  for (int k = 0; k < spec.num_modes(); ++k) {
    const auto a = annihilation(spec, k);
    const auto uk = u[static_cast<std::size_t>(k)];
    v = v + (lower * a.adjoint()).scaled(I * std::conj(uk)) + (raise * a).scaled(-I * uk);
  }
  return v;
}

}  // namespace

SparseOperator driving_hamiltonian(const HilbertSpec& spec, double rabi) {
  if (rabi < 0.0) throw std::invalid_argument("driving_hamiltonian: rabi must be >= 0");
  return atom_operator(spec, AtomOp::sigma_x).scaled(0.5 * rabi);
}

SparseOperator spectral_interaction(const HilbertSpec& spec, const ModelParams& params, double t) {
  check_consistent(spec, params);
  std::vector<cplx> u(static_cast<std::size_t>(spec.num_modes()));
  for (int k = 0; k < spec.num_modes(); ++k) u[static_cast<std::size_t>(k)] = spectral_coupling(params, k, t);
  return linear_coupling(spec, u);
}

cplx temporal_coefficient(const ModelParams& params, int tau, double t) {
  params.validate();
  if (tau < 0 || tau >= params.num_modes()) throw std::out_of_range("temporal_coefficient: tau out of range");
  return temporal_coupling(params, tau, t);
}

SparseOperator temporal_interaction(const HilbertSpec& spec, const ModelParams& params, double t) {
  check_consistent(spec, params);
  std::vector<cplx> u(static_cast<std::size_t>(spec.num_modes()));
  for (int tau = 0; tau < spec.num_modes(); ++tau) u[static_cast<std::size_t>(tau)] = temporal_coefficient(params, tau, t);
  return linear_coupling(spec, u);
}

SparseOperator sigma_x_raise(const HilbertSpec& spec) {
  // |+><-| = (sigma_z + sigma - sigma^dag) / 2 in the {e, b} basis.
  const auto B = spec.bath_dim();
  std::vector<SparseOperator::Entry> e;
  for (std::size_t c = 0; c < B; ++c) {
    const std::size_t g = c;
    const std::size_t x = B + c;
    e.push_back({x, x, 0.5});
    e.push_back({x, g, -0.5});
    e.push_back({g, x, 0.5});
    e.push_back({g, g, -0.5});
  }
  return SparseOperator::from_entries(spec.dim(), std::move(e));
}

SparseOperator sigma_x_lower(const HilbertSpec& spec) { return sigma_x_raise(spec).adjoint(); }

SparseOperator second_rwa_interaction(const HilbertSpec& spec, const ModelParams& params, double t) {
  check_consistent(spec, params);
  const double W = params.rabi;
  if (spec.num_modes() != 3 || params.detunings[0] != -W || params.detunings[1] != 0.0 || params.detunings[2] != W) {
    throw std::invalid_argument("second_rwa_interaction: requires the three-mode (-Omega, 0, +Omega) model");
  }
  const auto sxp = sigma_x_raise(spec);
  const auto sxm = sigma_x_lower(spec);
  const auto sx = atom_operator(spec, AtomOp::sigma_x);
  const auto& g = params.couplings;
  const cplx I{0.0, 1.0};
  const cplx rot = std::polar(1.0, -W * t);  // e^{-i Omega t}

  const auto a_lo = annihilation(spec, 0);
  const auto a_c = annihilation(spec, 1);
  const auto a_hi = annihilation(spec, 2);

  // sigma = (sigma_x + sigma_x^+ - sigma_x^-)/2; in the sigma_x frame only the
  // lower sideband pairs with sigma_x^+ and the upper sideband with -sigma_x^-.
  SparseOperator v = (sxp * a_lo.adjoint()).scaled(std::conj(g[0]) * rot);
  v = v + (sxm * a_lo).scaled(-g[0] * std::conj(rot));
  v = v + (sx * a_c.adjoint()).scaled(std::conj(g[1]));
  v = v + (sx * a_c).scaled(-g[1]);
  v = v + (sxm * a_hi.adjoint()).scaled(-std::conj(g[2]) * std::conj(rot));
  v = v + (sxp * a_hi).scaled(g[2] * rot);
  return v.scaled(0.5 * I);
}

// ---------------------------------------------------------------------------

HamiltonianModel::HamiltonianModel(HilbertSpec spec, ModelParams params, BasisKind kind)
    : spec_(std::move(spec)), params_(std::move(params)), kind_(kind) {
  check_consistent(spec_, params_);
  driving_ = driving_hamiltonian(spec_, params_.rabi);
  if (spec_.num_modes() > kMaxFastModes) {
    throw std::invalid_argument("HamiltonianModel: at most " + std::to_string(kMaxFastModes) + " modes");
  }
  for (int n = 0; n <= spec_.cutoff(); ++n) sqrt_table_.push_back(std::sqrt(static_cast<double>(n)));
}

void HamiltonianModel::mode_couplings(double t, std::span<cplx> out) const {
  const int kappa = spec_.num_modes();
  if (out.size() != static_cast<std::size_t>(kappa)) throw std::invalid_argument("mode_couplings: size mismatch");
  if (kind_ == BasisKind::spectral) {
    for (int k = 0; k < kappa; ++k) out[static_cast<std::size_t>(k)] = spectral_coupling(params_, k, t);
    return;
  }
  for (int tau = 0; tau < kappa; ++tau) out[static_cast<std::size_t>(tau)] = temporal_coupling(params_, tau, t);
}

std::vector<cplx> HamiltonianModel::mode_couplings(double t) const {
  std::vector<cplx> u(static_cast<std::size_t>(spec_.num_modes()));
  mode_couplings(t, u);
  return u;
}

namespace {

// Gather form of (Omega/2) sigma_x + sum_k [i conj(u_k) sigma A_k^dag - i u_k sigma^dag A_k].
// up[k][n] = i conj(u_k) sqrt(n) feeds |b, n> from |e, n - 1>; down[k][n] = -i u_k sqrt(n + 1)
// feeds |e, n> from |b, n + 1>. K > 0 fixes the mode count at compile time.
template <int K>
void ladder_apply(int kappa_dyn, int N, std::size_t B, double half, const cplx* const* up, const cplx* const* down,
                  const std::size_t* stride, const cplx* pin, cplx* pout) {
  const int kappa = K > 0 ? K : kappa_dyn;
  std::array<int, kMaxFastModes> occ{};
  for (std::size_t c = 0; c < B; ++c) {
    cplx ob = half * pin[B + c];
    cplx oe = half * pin[c];
    for (int k = 0; k < kappa; ++k) {
      const int n = occ[k];
      if (n > 0) ob += up[k][n] * pin[B + c - stride[k]];
      if (n < N) oe += down[k][n] * pin[c + stride[k]];
    }
    pout[c] = ob;
    pout[B + c] = oe;
    for (int k = kappa - 1; k >= 0; --k) {
      if (++occ[k] <= N) break;
      occ[k] = 0;
    }
  }
}

}  // namespace

void HamiltonianModel::apply(double t, std::span<const cplx> in, std::span<cplx> out) const {
  const std::size_t B = spec_.bath_dim();
  if (in.size() != 2 * B || out.size() != 2 * B) throw std::invalid_argument("HamiltonianModel::apply: size mismatch");
  const cplx I{0.0, 1.0};
  const auto us = mode_couplings(t);
  const int kappa = spec_.num_modes();
  const int N = spec_.cutoff();
  const auto width = static_cast<std::size_t>(N + 1);
  std::vector<cplx> table(2 * static_cast<std::size_t>(kappa) * width);
  std::array<const cplx*, kMaxFastModes> up{}, down{};
  std::array<std::size_t, kMaxFastModes> stride{};
  for (int k = 0; k < kappa; ++k) {
    cplx* pu = table.data() + 2 * static_cast<std::size_t>(k) * width;
    cplx* pd = pu + width;
    const cplx a = I * std::conj(us[k]);
    const cplx b = -I * us[k];
    for (int n = 0; n <= N; ++n) {
      pu[n] = a * sqrt_table_[static_cast<std::size_t>(n)];
      pd[n] = n < N ? b * sqrt_table_[static_cast<std::size_t>(n + 1)] : cplx{};
    }
    up[k] = pu;
    down[k] = pd;
    stride[k] = spec_.mode_stride(k);
  }
  const double half = 0.5 * params_.rabi;
  switch (kappa) {
    case 1: ladder_apply<1>(kappa, N, B, half, up.data(), down.data(), stride.data(), in.data(), out.data()); break;
    case 3: ladder_apply<3>(kappa, N, B, half, up.data(), down.data(), stride.data(), in.data(), out.data()); break;
    default: ladder_apply<0>(kappa, N, B, half, up.data(), down.data(), stride.data(), in.data(), out.data()); break;
  }
}

SparseOperator HamiltonianModel::interaction(double t) const {
  return kind_ == BasisKind::spectral ? spectral_interaction(spec_, params_, t)
                                      : temporal_interaction(spec_, params_, t);
}

std::uint64_t HamiltonianModel::fingerprint() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
  };
  const std::int64_t ints[] = {spec_.num_modes(), spec_.cutoff(), static_cast<std::int64_t>(kind_)};
  mix(ints, sizeof ints);
  mix(&params_.rabi, sizeof(double));
  for (const auto& g : params_.couplings) {
    const double re = g.real(), im = g.imag();
    mix(&re, sizeof re);
    mix(&im, sizeof im);
  }
  for (const auto& d : params_.detunings) mix(&d, sizeof d);
  return h;
}

}  // namespace modaljump
