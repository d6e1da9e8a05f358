// Copyright 2026 The modaljump Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>

namespace modaljump {

// NaN/Inf amplitudes, jump probabilities above one, and similar breakdowns of
// the numerics (as opposed to bad input, which is std::invalid_argument).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace modaljump
