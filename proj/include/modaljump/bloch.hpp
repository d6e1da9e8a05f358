// Copyright 2026 The modaljump Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <span>

#include "modaljump/hilbert.hpp"

namespace modaljump {

struct Bloch {
  double x{0.0};
  double y{0.0};
  double z{0.0};

  double length_squared() const noexcept { return x * x + y * y + z * z; }
  bool operator==(const Bloch&) const = default;
};

/// 2x2 atom density matrix, indexed by Atom (0 = ground, 1 = excited).
struct ReducedState {
  std::array<std::array<cplx, 2>, 2> rho{};

  cplx operator()(Atom a, Atom b) const noexcept {
    return rho[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
  }
  cplx trace() const noexcept { return rho[0][0] + rho[1][1]; }
  static ReducedState from_bloch(const Bloch& r) noexcept;
};

/// <sigma_x>, <sigma_y>, <sigma_z> of a pure state (excited, ground).
Bloch bloch_of(cplx excited, cplx ground) noexcept;
Bloch bloch_of(const ReducedState& rho) noexcept;

}  // namespace modaljump
