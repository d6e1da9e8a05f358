// Copyright 2026 The modaljump Authors
// SPDX-License-Identifier: Apache-2.0

#include "modaljump/commands.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "modaljump/analysis.hpp"
#include "modaljump/beable.hpp"
#include "modaljump/io.hpp"
#include "modaljump/unravel.hpp"

namespace modaljump {

HamiltonianModel build_model(const RunConfig& cfg) {
  HilbertSpec spec;
  try {
    spec = build_space(cfg.params.num_modes(), cfg.cutoff);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("cannot build Hilbert space: ") + e.what());
  }
  return HamiltonianModel(spec, cfg.params, cfg.basis);
}

namespace {

TimeGrid grid_of(const RunConfig& cfg) { return TimeGrid::until(cfg.t_final, cfg.dt); }

std::string join_occupations(const PreferredMeasure& m, PointerConfig c) {
  std::string s;
  const auto occ = m.occupations(c);
  for (std::size_t k = 0; k < occ.size(); ++k) s += (k ? ";" : "") + std::to_string(occ[k]);
  return s;
}

void prepare_dir(const std::filesystem::path& out) {
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec || !std::filesystem::is_directory(out)) {
    throw IoError("cannot create output directory '" + out.string() + "'");
  }
}

std::size_t probe_index(const RunConfig& cfg, const TimeGrid& grid) {
  const double x = (cfg.probe_time - grid.t0) / grid.dt;
  const double j = std::round(x);
  if (!(j >= 0.0 && j <= static_cast<double>(grid.steps)) || std::abs(x - j) > 1e-6) {
    throw ConfigError("probe time " + format_number(cfg.probe_time) + " is not a point of the grid [0, " +
                      format_number(grid.t_final()) + "] with dt = " + format_number(grid.dt));
  }
  return static_cast<std::size_t>(j);
}

struct ManifestInfo {
  std::string command;
  const RunDiagnostics* diag{nullptr};
  const GuidingTrajectory* guiding{nullptr};
  double acceptance_fraction{-1.0};
};

void write_manifest(const RunConfig& cfg, const std::filesystem::path& out, const ManifestInfo& info) {
  std::ostringstream os;
  os << "# modaljump run manifest; reload with --config to reproduce this run.\n";
  os << serialize_config(cfg) << "\n[manifest]\n";
  os << "command = " << info.command << "\n";
  os << "version = " << kVersion << "\n";
  if (info.guiding) {
    const auto& n = info.guiding->norm_series();
    double err = 0.0;
    for (double v : n) err = std::max(err, std::abs(v - 1.0));
    os << "max_leakage = " << format_number(info.guiding->max_leakage()) << "\n";
    os << "leakage_flagged = " << (info.guiding->leakage_flagged() ? "true" : "false") << "\n";
    os << "max_norm_error = " << format_number(err) << "\n";
    os << "snapshot_stride = " << info.guiding->stride() << "\n";
  }
  if (info.diag) {
    os << "jumps = " << info.diag->jumps << "\n";
    os << "up_jumps = " << info.diag->up_jumps << "\n";
    os << "down_jumps = " << info.diag->down_jumps << "\n";
    os << "invalid_jumps = " << info.diag->invalid_jumps << "\n";
    os << "clamp_events = " << info.diag->clamp_events << "\n";
    os << "p_max_warnings = " << info.diag->p_max_warnings << "\n";
  }
  if (info.acceptance_fraction >= 0.0) {
    os << "acceptance_fraction = " << format_number(info.acceptance_fraction) << "\n";
    os << "acceptance_pass = " << (info.acceptance_fraction >= kAcceptanceFraction ? "true" : "false") << "\n";
  }
  write_file(out / "run_manifest.ini", os.str());
}

void report_diagnostics(const RunDiagnostics& d, std::ostream& log) {
  if (d.invalid_jumps) log << "error: " << d.invalid_jumps << " jumps violated the single-quantum selection rule\n";
  if (d.p_max_warnings) log << "warning: " << d.p_max_warnings << " steps had jump probability above p_max\n";
  if (d.clamp_events) log << "warning: " << d.clamp_events << " steps were clamped at the probability floor\n";
}

TrajectoryOptions trajectory_options(const RunConfig& cfg) {
  TrajectoryOptions o;
  o.rates.probability_floor = cfg.probability_floor;
  o.sampling.p_max = cfg.p_max;
  o.record_stride = cfg.record_stride;
  return o;
}

}  // namespace

GuidingTrajectory build_guiding(const RunConfig& cfg, const HamiltonianModel& model) {
  GuidingOptions go;
  go.leakage_tolerance = cfg.leakage_tolerance;
  go.snapshot_limit = cfg.snapshot_limit;
  const auto psi0 = product_initial_state(model.space(), cfg.initial.excited, cfg.initial.ground);
  auto g = evolve(psi0, model, grid_of(cfg), go);
  if (g.max_leakage() > cfg.leakage_hard_limit) {
    throw NumericalError("cutoff leakage " + format_number(g.max_leakage()) + " exceeds the hard limit " +
                         format_number(cfg.leakage_hard_limit) + "; increase numerics.cutoff");
  }
  return g;
}

int cmd_trajectory(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
  if (cfg.n_trajectories_explicit) log << "warning: n_trajectories is ignored by the trajectory command\n";
  prepare_dir(out);
  const auto model = build_model(cfg);
  const auto guiding = build_guiding(cfg, model);
  if (guiding.leakage_flagged()) {
    log << "warning: cutoff leakage " << format_number(guiding.max_leakage()) << " exceeds tolerance\n";
  }
  const PreferredMeasure measure(cfg.unraveling, model.space());
  const auto tr = run_trajectory(model, measure, guiding, cfg.seed, trajectory_options(cfg));

  const int k = model.space().num_modes();
  CsvBuilder csv;
  csv.field("t");
  for (int m = 1; m <= k; ++m) csv.field("config_" + std::to_string(m));
  for (auto h : {"x", "y", "z", "norm", "jump_flag"}) csv.field(h);
  csv.end_row();
  std::size_t next_jump = 0;
  for (std::size_t r = 0; r < tr.configs.size(); ++r) {
    const auto j = tr.recorded_step(r);
    bool jumped = false;
    while (next_jump < tr.jumps.size() && tr.jumps[next_jump].step <= j) {
      jumped = jumped || r > 0;
      ++next_jump;
    }
    csv.field(tr.grid.time(j));
    for (int occ : measure.occupations(tr.configs[r])) csv.integer(occ);
    csv.field(tr.bloch[r].x).field(tr.bloch[r].y).field(tr.bloch[r].z).field(tr.norms[r]);
    csv.integer(jumped ? 1 : 0);
    csv.end_row();
  }
  csv.save(out / "trajectory.csv");

  CsvBuilder jumps({"t", "from", "to"});
  for (const auto& ev : tr.jumps) {
    jumps.field(ev.t).field(join_occupations(measure, ev.from)).field(join_occupations(measure, ev.to));
    jumps.end_row();
  }
  jumps.save(out / "jumps.csv");

  write_manifest(cfg, out, {"trajectory", &tr.diagnostics, &guiding, -1.0});
  report_diagnostics(tr.diagnostics, log);
  log << "trajectory: " << tr.diagnostics.jumps << " jumps (" << tr.diagnostics.up_jumps << " up, "
      << tr.diagnostics.down_jumps << " down) written to " << out.string() << "\n";
  return tr.diagnostics.invalid_jumps ? kExitNumerical : kExitOk;
}

int cmd_ensemble(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
  if (cfg.n_trajectories == 1) log << "warning: a single trajectory has no standard error; se columns are 0\n";
  prepare_dir(out);
  const auto model = build_model(cfg);
  const auto guiding = build_guiding(cfg, model);
  if (guiding.leakage_flagged()) {
    log << "warning: cutoff leakage " << format_number(guiding.max_leakage()) << " exceeds tolerance\n";
  }
  const PreferredMeasure measure(cfg.unraveling, model.space());
  EnsembleOptions eo;
  eo.trajectory = trajectory_options(cfg);
  eo.threads = cfg.threads;
  const auto ens = run_ensemble(model, measure, guiding, cfg.n_trajectories, cfg.seed, eo);
  const auto cmp = ensemble_vs_exact(ens, guiding);

  CsvBuilder csv({"t", "x_mean", "y_mean", "z_mean", "x_exact", "y_exact", "z_exact", "x_se", "y_se", "z_se",
                  "trace_distance"});
  for (std::size_t r = 0; r < ens.mean.size(); ++r) {
    const auto& m = ens.mean[r];
    const auto& e = cmp.exact[r];
    const auto& s = ens.se[r];
    csv.field(ens.grid.time(ens.recorded_step(r)));
    csv.field(m.x).field(m.y).field(m.z).field(e.x).field(e.y).field(e.z).field(s.x).field(s.y).field(s.z);
    csv.field(cmp.trace_distance[r]);
    csv.end_row();
  }
  csv.save(out / "ensemble.csv");

  const double frac = cmp.fraction_within(kAcceptanceSigmas);
  write_manifest(cfg, out, {"ensemble", &ens.diagnostics, &guiding, frac});
  report_diagnostics(ens.diagnostics, log);
  const bool pass = frac >= kAcceptanceFraction;
  log << "ensemble: " << ens.size << " trajectories, " << format_number(100.0 * frac)
      << "% of points within 3 SE, max trace distance " << format_number(cmp.max_trace_distance()) << " -> "
      << (pass ? "PASS" : "FAIL") << "\n";
  if (ens.diagnostics.invalid_jumps) return kExitNumerical;
  return pass ? kExitOk : kExitAcceptance;
}

int cmd_probe(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
  const auto grid = grid_of(cfg);
  const int k = cfg.params.num_modes();

  if (cfg.probe_what == "ctau") {
    prepare_dir(out);
    std::vector<std::vector<double>> abs2(static_cast<std::size_t>(k));
    CsvBuilder csv;
    csv.field("t");
    for (int m = 0; m < k; ++m) {
      const auto l = std::to_string(centered_label(k, m));
      csv.field("re_c_" + l).field("im_c_" + l).field("abs2_c_" + l);
    }
    csv.end_row();
    for (std::size_t j = 0; j < grid.points(); ++j) {
      const double t = grid.time(j);
      csv.field(t);
      for (int m = 0; m < k; ++m) {
        const cplx c = temporal_coefficient(cfg.params, m, t);
        csv.field(c.real()).field(c.imag()).field(std::norm(c));
        abs2[static_cast<std::size_t>(m)].push_back(std::norm(c));
      }
      csv.end_row();
    }
    csv.save(out / "ctau.csv");

    CsvBuilder peaks({"tau", "step", "t", "abs2_c"});
    for (int m = 0; m < k; ++m) {
      const auto& a = abs2[static_cast<std::size_t>(m)];
      for (std::size_t j = 1; j + 1 < a.size(); ++j) {
        if (a[j] > a[j - 1] && a[j] >= a[j + 1]) {
          peaks.integer(centered_label(k, m)).integer(static_cast<long long>(j)).field(grid.time(j)).field(a[j]);
          peaks.end_row();
        }
      }
    }
    peaks.save(out / "ctau_peaks.csv");
    log << "probe ctau: " << grid.points() << " samples for " << k << " temporal modes\n";
    return kExitOk;
  }

  const auto j = probe_index(cfg, grid);
  prepare_dir(out);
  const auto model = build_model(cfg);
  const auto guiding = build_guiding(cfg, model);
  const auto psi = guiding.state_at(j);
  const double t = grid.time(j);
  const PreferredMeasure measure(cfg.unraveling, model.space());

  if (cfg.probe_what == "born-at") {
    CsvBuilder csv({"config", "probability"});
    const auto dist = born_distribution(psi, measure);
    for (std::size_t c = 0; c < dist.size(); ++c) {
      csv.field(join_occupations(measure, {c})).field(dist[c]);
      csv.end_row();
    }
    csv.save(out / "born.csv");
    log << "probe born-at t = " << format_number(t) << ": " << dist.size() << " configurations\n";
    return kExitOk;
  }

  CsvBuilder csv({"from", "to", "probability_from", "current", "rate"});
  const auto u = model.mode_couplings(t);
  RateOptions ro;
  ro.probability_floor = cfg.probability_floor;
  RateTable table;
  std::size_t rows = 0;
  for (std::size_t c = 0; c < measure.num_configs(); ++c) {
    bell_rates(psi, u, measure, {c}, ro, table);
    for (const auto& tr : table.transitions) {
      if (!(tr.rate > 0.0)) continue;
      csv.field(join_occupations(measure, table.source)).field(join_occupations(measure, tr.target));
      csv.field(table.source_probability).field(tr.current).field(tr.rate);
      csv.end_row();
      ++rows;
    }
  }
  csv.save(out / "rates.csv");
  log << "probe rates-at t = " << format_number(t) << ": " << rows << " nonzero rates\n";
  return kExitOk;
}

std::string config_template(std::optional<Preset> preset) {
  RunConfig c = preset_config(preset.value_or(Preset::single_mode));
  return serialize_config(c, true);
}

}  // namespace modaljump
