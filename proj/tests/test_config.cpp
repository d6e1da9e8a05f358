// Copyright 2026 The modaljump Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "modaljump/commands.hpp"
#include "modaljump/config.hpp"
#include "modaljump/io.hpp"

namespace mj = modaljump;
using mj::BasisKind;
using mj::ConfigError;
using mj::cplx;
using mj::Preset;

namespace {

// Message of the ConfigError thrown by parse_config, or "" if none.
std::string error_of(const std::string& text, std::optional<Preset> cli = std::nullopt) {
  try {
    mj::parse_config(text, "test.ini", cli);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

const char* kCustom =
    "[model]\n"
    "modes = 2\n"
    "rabi = 3\n"
    "couplings = 1, 0.5+0.25i\n"
    "detunings = -1, 1\n";

}  // namespace

TEST(Config, PresetOnly) {
  for (auto p : {Preset::single_mode, Preset::three_mode_spectral, Preset::three_mode_temporal}) {
    const auto c = mj::parse_config("[model]\npreset = " + std::string(mj::to_string(p)) + "\n");
    EXPECT_EQ(mj::serialize_config(c), mj::serialize_config(mj::preset_config(p)));
    EXPECT_EQ(mj::preset_from_string(mj::to_string(p)), p);
  }
  const auto c = mj::parse_config("", "x", Preset::three_mode_temporal);
  EXPECT_EQ(c.basis, BasisKind::temporal);
  EXPECT_EQ(c.unraveling, BasisKind::temporal);
  EXPECT_NE(error_of("[model]\npreset = two-mode\n").find("unknown preset"), std::string::npos);
}

TEST(Config, PresetDefaults) {
  const auto s = mj::preset_config(Preset::single_mode);
  EXPECT_EQ(s.params.rabi, 5.0);
  EXPECT_EQ(s.initial.name, "ground");
  EXPECT_GE(s.cutoff, 15);
  const auto sp = mj::preset_config(Preset::three_mode_spectral);
  EXPECT_EQ(sp.params.rabi, 20.0);
  EXPECT_EQ(sp.initial.name, "plus");
  EXPECT_NEAR(std::abs(sp.initial.excited - sp.initial.ground), 0.0, 1e-15);
  const auto tp = mj::preset_config(Preset::three_mode_temporal);
  EXPECT_EQ(tp.basis, BasisKind::temporal);
  EXPECT_EQ(s.dt, 1e-3);
  EXPECT_EQ(s.leakage_tolerance, 1e-4);
}

TEST(Config, CustomModel) {
  const auto c = mj::parse_config(kCustom);
  EXPECT_FALSE(c.preset.has_value());
  EXPECT_EQ(c.params.num_modes(), 2);
  EXPECT_EQ(c.params.couplings[1], cplx(0.5, 0.25));
  EXPECT_EQ(c.params.detunings, (std::vector<double>{-1.0, 1.0}));
  EXPECT_EQ(c.basis, BasisKind::spectral);

  const auto b = mj::parse_config("[model]\nmodes = 3\nrabi = 1\ncouplings = 0.5\ndetunings = 0, 1, 2\n");
  EXPECT_EQ(b.params.couplings, std::vector<cplx>(3, 0.5));

  EXPECT_NE(error_of("[model]\nrabi = 1\ndetunings = 0\n").find("couplings is required"), std::string::npos);
  EXPECT_NE(error_of("[model]\nrabi = 1\ncouplings = 1\n").find("detunings is required"), std::string::npos);
  EXPECT_NE(error_of("[model]\nmodes = 2\nrabi = 1\ncouplings = 1, 2, 3\ndetunings = 0, 0\n").find("expected 2 values"),
            std::string::npos);
}

TEST(Config, ErrorsCarryLineNumbers) {
  EXPECT_EQ(error_of("[model]\npreset = single-mode\n\n[numerics]\ndt = fast\n"),
            "test.ini:5: numerics.dt: expected a number, got 'fast'");
  EXPECT_EQ(error_of("[model]\n# comment\nprest = single-mode\n"), "test.ini:3: unknown key 'model.prest'");
  EXPECT_EQ(error_of("[model]\npreset = single-mode\npreset = single-mode\n"),
            "test.ini:3: duplicate key 'model.preset'");
  EXPECT_EQ(error_of("cutoff = 3\n"), "test.ini:1: key outside of any [section]");
  EXPECT_EQ(error_of("[model\n"), "test.ini:1: unterminated section header");
  EXPECT_EQ(error_of("[model]\npreset\n"), "test.ini:2: expected 'key = value'");
  EXPECT_EQ(error_of("[model]\npreset = single-mode\n[numerics]\ncutoff = 2.5\n"),
            "test.ini:4: numerics.cutoff: expected an integer, got '2.5'");
}

TEST(Config, PresetConflicts) {
  EXPECT_NE(error_of("[model]\npreset = single-mode\nmodes = 3\n").find("test.ini:3: model.modes: conflicts"),
            std::string::npos);
  EXPECT_NE(error_of("[model]\npreset = three-mode-spectral\nbasis = temporal\n").find("model.basis: conflicts"),
            std::string::npos);
  EXPECT_NE(error_of("[model]\npreset = three-mode-spectral\ndetunings = -1, 0, 1\n").find("conflicts"),
            std::string::npos);
  EXPECT_NE(error_of("[model]\npreset = single-mode\n", Preset::three_mode_temporal).find("conflicts with --preset"),
            std::string::npos);
  EXPECT_EQ(error_of("[model]\npreset = single-mode\n", Preset::single_mode), "");
  // Consistent explicit values are fine.
  EXPECT_EQ(error_of("[model]\npreset = three-mode-spectral\nmodes = 3\nbasis = spectral\ndetunings = -20, 0, 20\n"),
            "");
}

TEST(Config, RabiOverrideRederivesDetunings) {
  const auto c = mj::parse_config("[model]\npreset = three-mode-spectral\nrabi = 8\ncouplings = 0.5\n");
  EXPECT_EQ(c.params.rabi, 8.0);
  EXPECT_EQ(c.params.detunings, (std::vector<double>{-8.0, 0.0, 8.0}));
  EXPECT_EQ(c.params.couplings, std::vector<cplx>(3, 0.5));
}

TEST(Config, Validation) {
  EXPECT_NE(error_of("[model]\npreset = three-mode-spectral\n[run]\nunraveling = temporal\n").find("does not match"),
            std::string::npos);
  EXPECT_EQ(error_of("[model]\npreset = single-mode\n[run]\nunraveling = temporal\n"), "");
  EXPECT_NE(error_of("[model]\npreset = single-mode\n[numerics]\ndt = 0.3\nt_final = 1\n").find("multiple of dt"),
            std::string::npos);
  EXPECT_NE(error_of("[model]\npreset = single-mode\n[numerics]\np_max = 2\n").find("p_max"), std::string::npos);
  EXPECT_NE(error_of("[model]\npreset = single-mode\n[numerics]\ncutoff = 0\n").find("cutoff"), std::string::npos);
  EXPECT_NE(error_of("[model]\npreset = single-mode\n[run]\nn_trajectories = 0\n").find("n_trajectories"),
            std::string::npos);
  EXPECT_NE(error_of("[model]\npreset = single-mode\n[probe]\nwhat = spectrum\n").find("probe.what"),
            std::string::npos);
  EXPECT_NE(error_of("[model]\npreset = single-mode\n[numerics]\nleakage_hard_limit = 1e-6\n").find("hard_limit"),
            std::string::npos);
}

TEST(Config, InitialStates) {
  const std::string base = "[model]\npreset = single-mode\n[state]\n";
  EXPECT_EQ(mj::parse_config(base + "initial = excited\n").initial.excited, cplx(1.0));
  EXPECT_EQ(mj::parse_config(base + "initial = minus\n").initial.ground, cplx(-M_SQRT1_2));
  const auto e = mj::parse_config(base + "initial = explicit\namplitudes = 0.6i, 0.8\n");
  EXPECT_EQ(e.initial.excited, cplx(0.0, 0.6));
  EXPECT_EQ(e.initial.ground, cplx(0.8));
  EXPECT_NE(error_of(base + "initial = explicit\namplitudes = 1, 1\n").find("normalised"), std::string::npos);
  EXPECT_NE(error_of(base + "initial = explicit\n").find("needs state.amplitudes"), std::string::npos);
  EXPECT_NE(error_of(base + "initial = ground\namplitudes = 1, 0\n").find("only valid"), std::string::npos);
  EXPECT_NE(error_of(base + "initial = sideways\n").find("test.ini:4: state.initial"), std::string::npos);
}

TEST(Config, RunKeys) {
  const auto c = mj::parse_config(
      "[model]\npreset = single-mode\n[run]\nn_trajectories = 50\nseed = 18446744073709551615\nthreads = 3\n"
      "record_stride = 10\noutput_dir = results/a b\n[probe]\nwhat = rates-at\ntime = 1.5\n");
  EXPECT_EQ(c.n_trajectories, 50u);
  EXPECT_TRUE(c.n_trajectories_explicit);
  EXPECT_EQ(c.seed, 18446744073709551615ull);
  EXPECT_EQ(c.threads, 3u);
  EXPECT_EQ(c.record_stride, 10u);
  EXPECT_EQ(c.output_dir, "results/a b");
  EXPECT_EQ(c.probe_what, "rates-at");
  EXPECT_EQ(c.probe_time, 1.5);
  EXPECT_FALSE(mj::parse_config("[model]\npreset = single-mode\n").n_trajectories_explicit);
}

TEST(Config, ManifestSectionIgnored) {
  const auto c = mj::parse_config("[model]\npreset = single-mode\n[manifest]\ncommand = trajectory\nversion = 9\n");
  EXPECT_EQ(mj::serialize_config(c), mj::serialize_config(mj::preset_config(Preset::single_mode)));
}

TEST(Complex, Parse) {
  EXPECT_EQ(mj::parse_complex("1"), cplx(1.0));
  EXPECT_EQ(mj::parse_complex("1+0.5i"), cplx(1.0, 0.5));
  EXPECT_EQ(mj::parse_complex("1 - 0.5i"), cplx(1.0, -0.5));
  EXPECT_EQ(mj::parse_complex("2i"), cplx(0.0, 2.0));
  EXPECT_EQ(mj::parse_complex("-i"), cplx(0.0, -1.0));
  EXPECT_EQ(mj::parse_complex("i"), cplx(0.0, 1.0));
  EXPECT_EQ(mj::parse_complex("-2.5"), cplx(-2.5));
  EXPECT_EQ(mj::parse_complex("1e-3-2e-2i"), cplx(1e-3, -2e-2));
  EXPECT_EQ(mj::parse_complex("3+j"), cplx(3.0, 1.0));
  EXPECT_THROW(mj::parse_complex(""), ConfigError);
  EXPECT_THROW(mj::parse_complex("abc"), ConfigError);
  EXPECT_THROW(mj::parse_complex("1+xi"), ConfigError);
}

TEST(Complex, FormatRoundTrip) {
  for (cplx z : {cplx(1.0), cplx(0.1, -0.3), cplx(-2.0, 1e-17), cplx(0.0, 1.0), cplx(1.0 / 3.0, 2.0 / 7.0)}) {
    EXPECT_EQ(mj::parse_complex(mj::format_complex(z)), z) << mj::format_complex(z);
  }
  EXPECT_EQ(mj::format_complex(cplx(1.0, -0.5)), "1-0.5i");
  EXPECT_EQ(mj::format_number(0.1), "0.1");
  EXPECT_EQ(mj::format_number(-0.0), "0");
  EXPECT_EQ(mj::format_number(1e-300), "1e-300");
}

TEST(Serialize, RoundTrip) {
  std::vector<mj::RunConfig> cfgs = {mj::preset_config(Preset::single_mode),
                                     mj::preset_config(Preset::three_mode_spectral),
                                     mj::preset_config(Preset::three_mode_temporal), mj::parse_config(kCustom)};
  auto odd = mj::parse_config(
      "[model]\npreset = single-mode\nrabi = 0.3333333333333333\ncouplings = 0.1-0.7i\n[state]\ninitial = explicit\n"
      "amplitudes = 0.6, 0.8i\n[numerics]\ndt = 0.002\nt_final = 0.5\ncutoff = 7\n[run]\nseed = 99\n");
  cfgs.push_back(odd);
  for (const auto& c : cfgs) {
    for (bool comments : {false, true}) {
      const auto text = mj::serialize_config(c, comments);
      const auto back = mj::parse_config(text, "roundtrip");
      EXPECT_EQ(mj::serialize_config(back), mj::serialize_config(c));
      EXPECT_EQ(back.params, c.params);
      EXPECT_EQ(back.initial.excited, c.initial.excited);
      EXPECT_EQ(back.initial.ground, c.initial.ground);
      EXPECT_EQ(back.dt, c.dt);
      EXPECT_EQ(back.seed, c.seed);
    }
  }
}

TEST(Serialize, TemplatesReload) {
  for (auto p : {std::optional<Preset>{}, std::optional<Preset>{Preset::single_mode},
                 std::optional<Preset>{Preset::three_mode_spectral}, std::optional<Preset>{Preset::three_mode_temporal}}) {
    const auto text = mj::config_template(p);
    EXPECT_NE(text.find("# "), std::string::npos);
    const auto c = mj::parse_config(text, "template");
    EXPECT_EQ(mj::serialize_config(c), mj::serialize_config(mj::preset_config(p.value_or(Preset::single_mode))));
  }
}

TEST(Config, LoadFromFile) {
  const auto dir = std::filesystem::temp_directory_path() / "modaljump_config_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "run.ini";
  {
    std::ofstream os(path);
    os << "[model]\npreset = single-mode\n[numerics]\ncutoff = 12\n";
  }
  EXPECT_EQ(mj::load_config(path).cutoff, 12);
  {
    std::ofstream os(path);
    os << "[model]\npreset = single-mode\n[run]\nseed = -1\n";
  }
  try {
    mj::load_config(path);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find(path.string() + ":4: run.seed"), std::string::npos) << e.what();
  }
  std::filesystem::remove_all(dir);
  EXPECT_THROW(mj::load_config(path), ConfigError);
}
