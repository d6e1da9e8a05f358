// Copyright 2026 The modaljump Authors
// SPDX-License-Identifier: Apache-2.0

#include "modaljump/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "modaljump/io.hpp"

namespace modaljump {

std::string_view to_string(Preset p) noexcept {
  switch (p) {
    case Preset::single_mode: return "single-mode";
    case Preset::three_mode_spectral: return "three-mode-spectral";
    case Preset::three_mode_temporal: return "three-mode-temporal";
  }
  return "";
}

Preset preset_from_string(std::string_view s) {
  if (s == "single-mode") return Preset::single_mode;
  if (s == "three-mode-spectral") return Preset::three_mode_spectral;
  if (s == "three-mode-temporal") return Preset::three_mode_temporal;
  throw ConfigError("unknown preset '" + std::string(s) +
                    "' (expected single-mode, three-mode-spectral or three-mode-temporal)");
}

RunConfig preset_config(Preset p) {
  RunConfig c;
  c.preset = p;
  switch (p) {
    case Preset::single_mode:
      c.params = single_mode_params(5.0, 1.0);
      c.basis = BasisKind::spectral;
      c.initial = {"ground", 0.0, 1.0};
      c.cutoff = 50;
      c.t_final = 20.0;
      break;
    case Preset::three_mode_spectral:
      c.params = three_mode_params(20.0, 1.0);
      c.basis = BasisKind::spectral;
      c.initial = {"plus", M_SQRT1_2, M_SQRT1_2};
      c.cutoff = 46;
      c.t_final = 10.0;
      break;
    case Preset::three_mode_temporal:
      c.params = three_mode_params(20.0, 1.0);
      c.basis = BasisKind::temporal;
      c.initial = {"ground", 0.0, 1.0};
      c.cutoff = 22;
      c.t_final = 10.0;
      break;
  }
  c.unraveling = c.basis;
  return c;
}

void RunConfig::validate() const {
  auto fail = [](const std::string& m) { throw ConfigError(m); };
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  if (cutoff < 1) fail("cutoff must be >= 1");
  if (!(dt > 0.0)) fail("dt must be > 0");
  if (!(t_final > 0.0)) fail("t_final must be > 0");
  if (!(leakage_tolerance > 0.0)) fail("leakage_tolerance must be > 0");
  if (!(leakage_hard_limit >= leakage_tolerance)) fail("leakage_hard_limit must be >= leakage_tolerance");
  if (!(p_max > 0.0 && p_max <= 1.0)) fail("p_max must lie in (0, 1]");
  if (!(probability_floor > 0.0)) fail("probability_floor must be > 0");
  if (snapshot_limit < 1) fail("snapshot_limit must be >= 1");
  if (n_trajectories < 1) fail("n_trajectories must be >= 1");
  if (record_stride < 1) fail("record_stride must be >= 1");
  if (unraveling != basis && params.num_modes() > 1) {
    fail("unraveling '" + std::string(to_string(unraveling)) + "' does not match model basis '" +
         std::string(to_string(basis)) + "'");
  }
  const double n2 = std::norm(initial.excited) + std::norm(initial.ground);
  if (std::abs(n2 - 1.0) > 1e-12) fail("initial state amplitudes must be normalised");
  if (probe_what != "ctau" && probe_what != "rates-at" && probe_what != "born-at") {
    fail("probe.what must be ctau, rates-at or born-at");
  }
  const double steps = t_final / dt;
  if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps)) fail("t_final must be a multiple of dt");
}

// ---------------------------------------------------------------------------

cplx parse_complex(std::string_view s) {
  std::string t;
  for (char ch : s) {
    if (ch != ' ' && ch != '\t') t.push_back(ch);
  }
  if (t.empty()) throw ConfigError("empty complex number");
  auto to_d = [](std::string_view v) {
    double d = 0.0;
    if (v == "" || v == "+") return 1.0;
    if (v == "-") return -1.0;
    auto [p, ec] = std::from_chars(v.data() + (v.front() == '+' ? 1 : 0), v.data() + v.size(), d);
    if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError("bad number '" + std::string(v) + "'");
    return d;
  };
  if (t.back() != 'i' && t.back() != 'j') return to_d(t);
  t.pop_back();
  // Split at the last sign that is not an exponent sign or the leading one.
  std::size_t split = std::string::npos;
  for (std::size_t i = t.size(); i-- > 1;) {
    if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string::npos) return {0.0, to_d(t)};
  return {to_d(std::string_view(t).substr(0, split)), to_d(std::string_view(t).substr(split))};
}

std::string format_complex(cplx z) {
  if (z.imag() == 0.0) return format_number(z.real());
  std::string im = format_number(std::abs(z.imag()));
  return format_number(z.real()) + (std::signbit(z.imag()) ? "-" : "+") + im + "i";
}

namespace {

struct Value {
  std::string text;
  int line;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "model.preset", "model.modes", "model.rabi", "model.couplings", "model.detunings", "model.basis",
      "state.initial", "state.amplitudes",
      "numerics.cutoff", "numerics.dt", "numerics.t_final", "numerics.leakage_tolerance",
      "numerics.leakage_hard_limit", "numerics.p_max", "numerics.probability_floor", "numerics.snapshot_limit",
      "run.unraveling", "run.n_trajectories", "run.seed", "run.threads", "run.record_stride", "run.output_dir",
      "probe.what", "probe.time",
      // Written by manifests; ignored on load.
      "manifest.command", "manifest.version", "manifest.jumps", "manifest.up_jumps", "manifest.down_jumps",
      "manifest.invalid_jumps", "manifest.clamp_events", "manifest.p_max_warnings", "manifest.max_leakage",
      "manifest.leakage_flagged", "manifest.max_norm_error", "manifest.acceptance_fraction",
      "manifest.acceptance_pass", "manifest.snapshot_stride"};
  return keys;
}

class Reader {
 public:
  Reader(std::map<std::string, Value> kv, std::string source) : kv_(std::move(kv)), source_(std::move(source)) {}

  bool has(const std::string& k) const { return kv_.count(k) != 0; }
  int line(const std::string& k) const { return has(k) ? kv_.at(k).line : 0; }
  const std::string& raw(const std::string& k) const { return kv_.at(k).text; }

  [[noreturn]] void fail(const std::string& k, const std::string& msg) const {
    if (has(k)) throw ConfigError(source_ + ":" + std::to_string(line(k)) + ": " + k + ": " + msg);
    throw ConfigError(source_ + ": " + msg);
  }

  double real(const std::string& k) const {
    double d = 0.0;
    const auto& s = raw(k);
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), d);
    if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(d)) fail(k, "expected a number, got '" + s + "'");
    return d;
  }

  template <typename Int>
  Int integer(const std::string& k) const {
    Int v{};
    const auto& s = raw(k);
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) fail(k, "expected an integer, got '" + s + "'");
    return v;
  }

  std::vector<std::string> list(const std::string& k) const {
    std::vector<std::string> out;
    std::stringstream ss(raw(k));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) fail(k, "empty list element");
      out.push_back(item);
    }
    if (out.empty()) fail(k, "empty list");
    return out;
  }

  std::vector<cplx> complex_list(const std::string& k) const {
    std::vector<cplx> out;
    for (const auto& s : list(k)) {
      try {
        out.push_back(parse_complex(s));
      } catch (const ConfigError& e) {
        fail(k, e.what());
      }
    }
    return out;
  }

  std::vector<double> real_list(const std::string& k) const {
    std::vector<double> out;
    for (const auto& s : list(k)) {
      double d = 0.0;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), d);
      if (ec != std::errc() || p != s.data() + s.size()) fail(k, "bad number '" + s + "'");
      out.push_back(d);
    }
    return out;
  }

 private:
  std::map<std::string, Value> kv_;
  std::string source_;
};

}  // namespace

RunConfig parse_config(std::string_view text, std::string_view source_name, std::optional<Preset> cli_preset) {
  const std::string source(source_name);
  std::map<std::string, Value> kv;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw_line;
  int lineno = 0;
  while (std::getline(in, raw_line)) {
    ++lineno;
    auto hash = raw_line.find('#');
    std::string line = trim(hash == std::string::npos ? raw_line : raw_line.substr(0, hash));
    if (line.empty()) continue;
    auto where = [&] { return source + ":" + std::to_string(lineno) + ": "; };
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where() + "unterminated section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where() + "expected 'key = value'");
    if (section.empty()) throw ConfigError(where() + "key outside of any [section]");
    const std::string key = section + "." + trim(std::string_view(line).substr(0, eq));
    if (!known_keys().count(key)) throw ConfigError(where() + "unknown key '" + key + "'");
    if (kv.count(key)) throw ConfigError(where() + "duplicate key '" + key + "'");
    kv[key] = {trim(std::string_view(line).substr(eq + 1)), lineno};
  }
  Reader r(std::move(kv), source);

  // Preset selection.
  std::optional<Preset> preset = cli_preset;
  if (r.has("model.preset")) {
    Preset file_preset{};
    try {
      file_preset = preset_from_string(r.raw("model.preset"));
    } catch (const ConfigError& e) {
      r.fail("model.preset", e.what());
    }
    if (preset && *preset != file_preset) {
      r.fail("model.preset", "conflicts with --preset " + std::string(to_string(*preset)));
    }
    preset = file_preset;
  }

  RunConfig c = preset ? preset_config(*preset) : RunConfig{};
  c.preset = preset;

  // Model.
  if (r.has("model.rabi")) c.params.rabi = r.real("model.rabi");
  if (r.has("model.basis")) {
    BasisKind b{};
    try {
      b = basis_kind_from_string(r.raw("model.basis"));
    } catch (const std::invalid_argument& e) {
      r.fail("model.basis", e.what());
    }
    if (preset && b != c.basis) r.fail("model.basis", "conflicts with preset " + std::string(to_string(*preset)));
    c.basis = b;
  }
  int modes = preset ? c.params.num_modes() : 0;
  if (r.has("model.modes")) {
    const int m = r.integer<int>("model.modes");
    if (m < 1) r.fail("model.modes", "must be >= 1");
    if (preset && m != modes) r.fail("model.modes", "conflicts with preset " + std::string(to_string(*preset)));
    modes = m;
  }
  if (preset) {
    // Re-derive the detuning pattern for a possibly overridden rabi.
    const auto g = c.params.couplings;
    c.params = modes == 1 ? single_mode_params(c.params.rabi, g[0]) : three_mode_params(c.params.rabi, g[0]);
  }
  if (r.has("model.couplings")) {
    auto g = r.complex_list("model.couplings");
    if (modes == 0) modes = static_cast<int>(g.size());
    if (g.size() == 1) g.assign(static_cast<std::size_t>(modes), g[0]);
    if (static_cast<int>(g.size()) != modes) r.fail("model.couplings", "expected " + std::to_string(modes) + " values");
    c.params.couplings = g;
  } else if (!preset) {
    r.fail("model.couplings", "model.couplings is required without a preset");
  }
  if (r.has("model.detunings")) {
    const auto d = r.real_list("model.detunings");
    if (static_cast<int>(d.size()) != modes) r.fail("model.detunings", "expected " + std::to_string(modes) + " values");
    if (preset && d != c.params.detunings) {
      r.fail("model.detunings", "conflicts with preset " + std::string(to_string(*preset)));
    }
    c.params.detunings = d;
  } else if (!preset) {
    r.fail("model.detunings", "model.detunings is required without a preset");
  }

  // State.
  if (r.has("state.initial")) {
    const auto& name = r.raw("state.initial");
    if (name == "ground") {
      c.initial = {"ground", 0.0, 1.0};
    } else if (name == "excited") {
      c.initial = {"excited", 1.0, 0.0};
    } else if (name == "plus") {
      c.initial = {"plus", M_SQRT1_2, M_SQRT1_2};
    } else if (name == "minus") {
      c.initial = {"minus", M_SQRT1_2, -M_SQRT1_2};
    } else if (name == "explicit") {
      if (!r.has("state.amplitudes")) r.fail("state.initial", "explicit initial state needs state.amplitudes");
      const auto a = r.complex_list("state.amplitudes");
      if (a.size() != 2) r.fail("state.amplitudes", "expected 'excited, ground'");
      c.initial = {"explicit", a[0], a[1]};
    } else {
      r.fail("state.initial", "expected ground, excited, plus, minus or explicit");
    }
  }
  if (r.has("state.amplitudes") && c.initial.name != "explicit") {
    r.fail("state.amplitudes", "only valid with initial = explicit");
  }

  // Numerics.
  if (r.has("numerics.cutoff")) c.cutoff = r.integer<int>("numerics.cutoff");
  if (r.has("numerics.dt")) c.dt = r.real("numerics.dt");
  if (r.has("numerics.t_final")) c.t_final = r.real("numerics.t_final");
  if (r.has("numerics.leakage_tolerance")) c.leakage_tolerance = r.real("numerics.leakage_tolerance");
  if (r.has("numerics.leakage_hard_limit")) c.leakage_hard_limit = r.real("numerics.leakage_hard_limit");
  if (r.has("numerics.p_max")) c.p_max = r.real("numerics.p_max");
  if (r.has("numerics.probability_floor")) c.probability_floor = r.real("numerics.probability_floor");
  if (r.has("numerics.snapshot_limit")) c.snapshot_limit = r.integer<std::size_t>("numerics.snapshot_limit");

  // Run.
  c.unraveling = c.basis;
  if (r.has("run.unraveling")) {
    try {
      c.unraveling = basis_kind_from_string(r.raw("run.unraveling"));
    } catch (const std::invalid_argument& e) {
      r.fail("run.unraveling", e.what());
    }
  }
  if (r.has("run.n_trajectories")) {
    c.n_trajectories = r.integer<std::size_t>("run.n_trajectories");
    c.n_trajectories_explicit = true;
  }
  if (r.has("run.seed")) c.seed = r.integer<std::uint64_t>("run.seed");
  if (r.has("run.threads")) c.threads = r.integer<unsigned>("run.threads");
  if (r.has("run.record_stride")) c.record_stride = r.integer<std::size_t>("run.record_stride");
  if (r.has("run.output_dir")) c.output_dir = r.raw("run.output_dir");

  // Probe.
  if (r.has("probe.what")) c.probe_what = r.raw("probe.what");
  if (r.has("probe.time")) c.probe_time = r.real("probe.time");

  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path, std::optional<Preset> cli_preset) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str(), path.string(), cli_preset);
}

std::string serialize_config(const RunConfig& c, bool with_comments) {
  std::ostringstream os;
  auto note = [&](const char* text) {
    if (with_comments) os << "# " << text << "\n";
  };
  auto join_c = [](const std::vector<cplx>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_complex(v[i]);
    return s;
  };
  auto join_d = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_number(v[i]);
    return s;
  };

  if (with_comments) {
    os << "# modaljump run configuration. Lines are 'key = value'; '#' starts a comment.\n"
          "# With a preset, modes/detunings/basis are fixed by the preset; rabi,\n"
          "# couplings and every other key may be overridden.\n\n";
  }
  os << "[model]\n";
  note("single-mode | three-mode-spectral | three-mode-temporal (omit for a custom model)");
  if (c.preset) os << "preset = " << to_string(*c.preset) << "\n";
  note("number of bath modes");
  os << "modes = " << c.params.num_modes() << "\n";
  note("Rabi frequency of the classical drive, in units of g");
  os << "rabi = " << format_number(c.params.rabi) << "\n";
  note("complex couplings g_k (e.g. 1, 0.5+0.2i); a single value is broadcast");
  os << "couplings = " << join_c(c.params.couplings) << "\n";
  note("detunings omega_k - omega_0 of each mode; modes are ordered by centered label (-1, 0, +1 for three)");
  os << "detunings = " << join_d(c.params.detunings) << "\n";
  note("bath basis of the simulation: spectral | temporal");
  os << "basis = " << to_string(c.basis) << "\n\n";

  os << "[state]\n";
  note("ground | excited | plus | minus | explicit (then amplitudes = excited, ground)");
  os << "initial = " << c.initial.name << "\n";
  if (c.initial.name == "explicit") {
    os << "amplitudes = " << format_complex(c.initial.excited) << ", " << format_complex(c.initial.ground) << "\n";
  }
  os << "\n[numerics]\n";
  note("maximum photon number per mode");
  os << "cutoff = " << c.cutoff << "\n";
  note("RK4 step and jump-sampling step, in 1/g");
  os << "dt = " << format_number(c.dt) << "\n";
  os << "t_final = " << format_number(c.t_final) << "\n";
  note("cutoff-level probability that flags a run / aborts it with exit code 3");
  os << "leakage_tolerance = " << format_number(c.leakage_tolerance) << "\n";
  os << "leakage_hard_limit = " << format_number(c.leakage_hard_limit) << "\n";
  note("per-step jump probability above which a warning is counted (and the clamp for near-empty configs)");
  os << "p_max = " << format_number(c.p_max) << "\n";
  note("configurations with Born probability below this have their outgoing rates clamped");
  os << "probability_floor = " << format_number(c.probability_floor) << "\n";
  note("stored complex amplitudes before the guiding state switches to strided checkpoints");
  os << "snapshot_limit = " << c.snapshot_limit << "\n\n";

  os << "[run]\n";
  note("preferred measure: spectral | temporal (must match basis when modes > 1)");
  os << "unraveling = " << to_string(c.unraveling) << "\n";
  note("ensemble size (ignored by the trajectory command)");
  os << "n_trajectories = " << c.n_trajectories << "\n";
  os << "seed = " << c.seed << "\n";
  note("0 = use all hardware threads");
  os << "threads = " << c.threads << "\n";
  note("write every n-th grid point");
  os << "record_stride = " << c.record_stride << "\n";
  os << "output_dir = " << c.output_dir << "\n\n";

  os << "[probe]\n";
  note("ctau | rates-at | born-at");
  os << "what = " << c.probe_what << "\n";
  note("probe time for rates-at / born-at");
  os << "time = " << format_number(c.probe_time) << "\n";
  return os.str();
}

}  // namespace modaljump
