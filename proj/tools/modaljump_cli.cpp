// Copyright 2026 The modaljump Authors
// SPDX-License-Identifier: Apache-2.0

// modaljump: modal-jump unravelings of a driven two-level atom in a small bosonic bath.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "modaljump/commands.hpp"
#include "modaljump/io.hpp"

namespace mj = modaljump;

int main(int argc, char** argv) {
  CLI::App app{"Bell-style modal jump trajectories for a driven two-level atom"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mj::kVersion));

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::string out_dir;
  std::string preset_name;
  app.add_option("--config", config_path, "Run configuration file")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Master seed (overrides run.seed)");
  app.add_option("--threads", threads, "Ensemble worker threads, 0 = all (overrides run.threads)");
  app.add_option("--out", out_dir, "Output directory (overrides MODALJUMP_OUTPUT_DIR and run.output_dir)");
  app.add_option("--preset", preset_name, "single-mode | three-mode-spectral | three-mode-temporal")
      ->check(CLI::IsMember({"single-mode", "three-mode-spectral", "three-mode-temporal"}));

  auto* traj = app.add_subcommand("trajectory", "Run one trajectory; writes trajectory.csv, jumps.csv");
  auto* ens = app.add_subcommand("ensemble", "Run an ensemble and compare with the exact reduced state");
  auto* probe = app.add_subcommand("probe", "Write c_tau(t) profiles, a rate table or a Born distribution");
  auto* tmpl = app.add_subcommand("template", "Print a commented default configuration");
  std::optional<std::string> what;
  std::optional<double> probe_time;
  probe->add_option("what", what, "ctau | rates-at | born-at")
      ->check(CLI::IsMember({"ctau", "rates-at", "born-at"}));
  probe->add_option("--time", probe_time, "Probe time for rates-at / born-at");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? mj::kExitOk : mj::kExitConfig;
  }

  try {
    std::optional<mj::Preset> preset;
    if (!preset_name.empty()) preset = mj::preset_from_string(preset_name);

    if (tmpl->parsed()) {
      std::cout << mj::config_template(preset);
      return mj::kExitOk;
    }

    mj::RunConfig cfg;
    if (!config_path.empty()) {
      cfg = mj::load_config(config_path, preset);
    } else {
      cfg = mj::preset_config(preset.value_or(mj::Preset::single_mode));
    }
    if (seed) cfg.seed = *seed;
    if (threads) cfg.threads = *threads;
    if (what) cfg.probe_what = *what;
    if (probe_time) cfg.probe_time = *probe_time;
    cfg.validate();
    std::filesystem::path out = cfg.output_dir;
    if (!out_dir.empty()) {
      out = out_dir;
    } else if (const char* env = std::getenv("MODALJUMP_OUTPUT_DIR"); env && *env) {
      out = env;
    }

    if (traj->parsed()) return mj::cmd_trajectory(cfg, out, std::cerr);
    if (ens->parsed()) return mj::cmd_ensemble(cfg, out, std::cerr);
    if (probe->parsed()) return mj::cmd_probe(cfg, out, std::cerr);
  } catch (const mj::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return mj::kExitConfig;
  } catch (const mj::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return mj::kExitConfig;
  } catch (const mj::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return mj::kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return mj::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return mj::kExitNumerical;
  }
  return mj::kExitConfig;
}
