// Copyright 2026 The modaljump Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file config.hpp
 * @brief Run configuration: an INI-style `key = value` file with sections.
 *
 * A preset fixes the model structure (mode count, detuning pattern, bath
 * basis) and supplies figure-caption defaults for everything else. Explicit
 * keys may override rabi, couplings and any state/numerics/run setting, but
 * an explicit `modes`, `detunings` or `basis` that disagrees with the preset
 * is a conflict and is rejected.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "modaljump/models.hpp"

namespace modaljump {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Preset { single_mode, three_mode_spectral, three_mode_temporal };

std::string_view to_string(Preset p) noexcept;
Preset preset_from_string(std::string_view s);

struct InitialState {
  std::string name{"ground"};  // ground | excited | plus | minus | explicit
  cplx excited{0.0};
  cplx ground{1.0};
};

struct RunConfig {
  std::optional<Preset> preset;
  ModelParams params;
  BasisKind basis{BasisKind::spectral};
  InitialState initial;

  int cutoff{20};
  double dt{1e-3};
  double t_final{20.0};
  double leakage_tolerance{1e-4};
  double leakage_hard_limit{1e-2};
  double p_max{0.1};
  double probability_floor{1e-12};
  std::size_t snapshot_limit{std::size_t{1} << 24};

  BasisKind unraveling{BasisKind::spectral};
  std::size_t n_trajectories{1000};
  bool n_trajectories_explicit{false};
  std::uint64_t seed{1};
  unsigned threads{0};
  std::size_t record_stride{1};
  std::string output_dir{"out"};

  std::string probe_what{"ctau"};
  double probe_time{0.0};

  void validate() const;
};

RunConfig preset_config(Preset p);

/// Parse config text. `cli_preset` is a preset requested on the command line;
/// it conflicts with a different `preset` key in the file.
RunConfig parse_config(std::string_view text, std::string_view source_name = "config",
                       std::optional<Preset> cli_preset = std::nullopt);
RunConfig load_config(const std::filesystem::path& path, std::optional<Preset> cli_preset = std::nullopt);

/// Fully resolved, re-loadable config text (used for manifests and templates).
std::string serialize_config(const RunConfig& cfg, bool with_comments = false);

cplx parse_complex(std::string_view s);
std::string format_complex(cplx z);

}  // namespace modaljump
