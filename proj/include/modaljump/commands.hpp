// Copyright 2026 The modaljump Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file commands.hpp
 * @brief The CLI verbs as library calls. Each writes its files into an output
 *        directory and returns a process exit code.
 *
 * Exit codes: 0 success, 1 usage/config error, 2 acceptance failure,
 * 3 numerical failure. Config problems are thrown as ConfigError, numerical
 * ones as NumericalError; run_command maps both to codes.
 */

#pragma once

#include <filesystem>
#include <ostream>
#include <string_view>

#include "modaljump/config.hpp"
#include "modaljump/guiding.hpp"
#include "modaljump/models.hpp"

namespace modaljump {

inline constexpr std::string_view kVersion = "0.3.1";
inline constexpr int kCsvSchemaVersion = 1;

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitAcceptance = 2, kExitNumerical = 3 };

HamiltonianModel build_model(const RunConfig& cfg);

/// Guiding state for the config. Throws NumericalError when leakage passes the hard limit.
GuidingTrajectory build_guiding(const RunConfig& cfg, const HamiltonianModel& model);

/// trajectory.csv, jumps.csv, run_manifest.ini.
int cmd_trajectory(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
/// ensemble.csv, run_manifest.ini. Returns 2 when fewer than 99% of points lie within 3 SE.
int cmd_ensemble(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
/// ctau.csv + ctau_peaks.csv, rates.csv, or born.csv depending on cfg.probe_what.
int cmd_probe(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
/// Commented default config for a preset (or the generic defaults).
std::string config_template(std::optional<Preset> preset);

/// Fraction of ensemble points required inside the 3-SE band.
inline constexpr double kAcceptanceFraction = 0.99;
inline constexpr double kAcceptanceSigmas = 3.0;

}  // namespace modaljump
