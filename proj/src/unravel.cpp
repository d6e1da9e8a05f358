// Copyright 2026 The modaljump Authors
// SPDX-License-Identifier: Apache-2.0

#include "modaljump/unravel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>
#include <thread>

namespace modaljump {

PreferredMeasure spectral_measure(const HilbertSpec& spec) { return {BasisKind::spectral, spec}; }
PreferredMeasure temporal_measure(const HilbertSpec& spec) { return {BasisKind::temporal, spec}; }
PreferredMeasure measure_for(const HamiltonianModel& model) { return {model.kind(), model.space()}; }

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t trajectory_seed(std::uint64_t master_seed, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(master_seed) ^ splitmix64(index + 0x632BE59BD9B4E019ull));
}

RunDiagnostics& RunDiagnostics::operator+=(const RunDiagnostics& o) noexcept {
  jumps += o.jumps;
  up_jumps += o.up_jumps;
  down_jumps += o.down_jumps;
  invalid_jumps += o.invalid_jumps;
  clamp_events += o.clamp_events;
  p_max_warnings += o.p_max_warnings;
  leakage_flagged = leakage_flagged || o.leakage_flagged;
  return *this;
}

double pairwise_sum(std::span<const double> v) noexcept {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const auto half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

namespace {

void check_inputs(const HamiltonianModel& model, const PreferredMeasure& measure, const GuidingTrajectory& guiding) {
  if (model.fingerprint() != guiding.model().fingerprint()) {
    throw std::invalid_argument("guiding trajectory was computed for a different model");
  }
  if (!(measure.space() == model.space())) throw std::invalid_argument("measure built on a different space");
  if (measure.kind() != model.kind() && model.space().num_modes() > 1) {
    throw std::invalid_argument(std::string("a ") + std::string(to_string(measure.kind())) +
                                " measure cannot unravel a " + std::string(to_string(model.kind())) + " model");
  }
}

// One hidden-variable walker. Owns its RNG stream and recycles a rate table.
class Walker {
 public:
  Walker(const PreferredMeasure& measure, std::uint64_t seed, const TrajectoryOptions& options)
      : measure_(&measure), options_(&options), rng_(seed) {}

  void start(std::span<const cplx> psi0) {
    // Inverse-CDF draw from the Born distribution; always consumes one draw.
    const double u = uniform01(rng_);
    double acc = 0.0;
    std::size_t chosen = 0;
    // u beyond the rounded total falls on the last populated config.
    for (std::size_t c = 0; c < measure_->num_configs(); ++c) {
      const double p = born_probability(psi0, *measure_, {c});
      if (p <= 0.0) continue;
      chosen = c;
      acc += p;
      if (u < acc) break;
    }
    config_ = {chosen};
  }

  // Visit grid point `step` with snapshot psi and couplings u(t_step).
  // Returns the Bloch vector of the conditioned state at this point.
  Bloch visit(std::size_t step, double t, double dt, bool last, std::span<const cplx> psi,
              std::span<const cplx> couplings, double& norm_out) {
    const auto cond = conditioned_state(psi, *measure_, config_);
    const Bloch b = bloch_of(cond.excited, cond.ground);
    norm_out = cond.norm;
    if (pending_) {
      pending_->after = b;
      jumps_.push_back(*pending_);
      pending_.reset();
    }
    if (!last) {
      bell_rates(psi, couplings, *measure_, config_, options_->rates, table_);
      StepDiagnostics sd;
      const auto next = sample_step(table_, dt, rng_, options_->sampling, &sd);
      diag_.clamp_events += sd.clamp_events;
      diag_.p_max_warnings += sd.p_max_warnings;
      if (next != config_) {
        JumpEvent ev;
        ev.step = step + 1;
        ev.t = t + dt;
        ev.from = config_;
        ev.to = next;
        ev.mode = measure_->single_quantum_mode(config_, next);
        ev.before = b;
        if (ev.mode >= 0) {
          const auto& spec = measure_->space();
          ev.direction = spec.occupation(next.index, ev.mode) > spec.occupation(config_.index, ev.mode) ? 1 : -1;
          ++(ev.direction > 0 ? diag_.up_jumps : diag_.down_jumps);
        } else {
          ++diag_.invalid_jumps;
        }
        ++diag_.jumps;
        pending_ = ev;
        config_ = next;
      }
    }
    return b;
  }

  PointerConfig config() const noexcept { return config_; }
  const RunDiagnostics& diagnostics() const noexcept { return diag_; }
  std::vector<JumpEvent>& jumps() noexcept { return jumps_; }

 private:
  const PreferredMeasure* measure_;
  const TrajectoryOptions* options_;
  std::mt19937_64 rng_;
  PointerConfig config_;
  RateTable table_;
  RunDiagnostics diag_;
  std::optional<JumpEvent> pending_;
  std::vector<JumpEvent> jumps_;
};

std::vector<std::vector<cplx>> block_couplings(const HamiltonianModel& model, const TimeGrid& grid, std::size_t begin,
                                               std::size_t end) {
  std::vector<std::vector<cplx>> u;
  u.reserve(end - begin);
  for (auto j = begin; j < end; ++j) u.push_back(model.mode_couplings(grid.time(j)));
  return u;
}

}  // namespace

Trajectory run_trajectory(const HamiltonianModel& model, const PreferredMeasure& measure,
                          const GuidingTrajectory& guiding, std::uint64_t seed, const TrajectoryOptions& options) {
  check_inputs(model, measure, guiding);
  if (options.record_stride < 1) throw std::invalid_argument("run_trajectory: record_stride must be >= 1");
  const auto& grid = guiding.grid();

  Trajectory tr;
  tr.grid = grid;
  tr.record_stride = options.record_stride;
  tr.seed = seed;
  tr.diagnostics.leakage_flagged = guiding.leakage_flagged();
  const auto n_rec = (grid.points() + options.record_stride - 1) / options.record_stride;
  tr.configs.reserve(n_rec);
  tr.bloch.reserve(n_rec);
  tr.norms.reserve(n_rec);

  Walker w(measure, seed, options);
  std::vector<StateVector> scratch;
  for (std::size_t b = 0; b < guiding.num_blocks(); ++b) {
    const auto states = guiding.block(b, scratch);
    const auto begin = guiding.block_begin(b);
    if (b == 0) w.start(states[0]);
    const auto u = block_couplings(model, grid, begin, guiding.block_end(b));
    for (std::size_t i = 0; i < states.size(); ++i) {
      const auto j = begin + i;
      const auto cfg = w.config();
      double nrm = 0.0;
      const Bloch bl = w.visit(j, grid.time(j), grid.dt, j == grid.steps, states[i], u[i], nrm);
      if (j % options.record_stride == 0) {
        tr.configs.push_back(cfg);
        tr.bloch.push_back(bl);
        tr.norms.push_back(nrm);
      }
    }
  }
  tr.jumps = std::move(w.jumps());
  const bool flagged = tr.diagnostics.leakage_flagged;
  tr.diagnostics = w.diagnostics();
  tr.diagnostics.leakage_flagged = flagged;
  return tr;
}

Ensemble run_ensemble(const HamiltonianModel& model, const PreferredMeasure& measure, const GuidingTrajectory& guiding,
                      std::size_t n_trajectories, std::uint64_t master_seed, const EnsembleOptions& options) {
  check_inputs(model, measure, guiding);
  if (n_trajectories < 1) throw std::invalid_argument("run_ensemble: need at least one trajectory");
  const auto stride = options.trajectory.record_stride;
  if (stride < 1) throw std::invalid_argument("run_ensemble: record_stride must be >= 1");
  const auto& grid = guiding.grid();
  const auto N = n_trajectories;

  Ensemble ens;
  ens.size = N;
  ens.master_seed = master_seed;
  ens.grid = grid;
  ens.record_stride = stride;

  std::vector<Walker> walkers;
  walkers.reserve(N);
  for (std::size_t i = 0; i < N; ++i) walkers.emplace_back(measure, trajectory_seed(master_seed, i), options.trajectory);

  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, N));

  std::vector<StateVector> scratch;
  std::vector<double> bx, by, bz;      // [point-in-block][trajectory]
  std::vector<std::uint32_t> cfgs;     // [point-in-block][trajectory]

  for (std::size_t b = 0; b < guiding.num_blocks(); ++b) {
    const auto states = guiding.block(b, scratch);
    const auto begin = guiding.block_begin(b);
    const auto len = states.size();
    const auto u = block_couplings(model, grid, begin, guiding.block_end(b));
    bx.assign(len * N, 0.0);
    by.assign(len * N, 0.0);
    bz.assign(len * N, 0.0);
    cfgs.assign(len * N, 0);

    auto work = [&](std::size_t i) {
      auto& w = walkers[i];
      if (b == 0) w.start(states[0]);
      for (std::size_t p = 0; p < len; ++p) {
        const auto j = begin + p;
        cfgs[p * N + i] = static_cast<std::uint32_t>(w.config().index);
        double nrm = 0.0;
        const Bloch bl = w.visit(j, grid.time(j), grid.dt, j == grid.steps, states[p], u[p], nrm);
        bx[p * N + i] = bl.x;
        by[p * N + i] = bl.y;
        bz[p * N + i] = bl.z;
      }
      if (!options.keep_jumps) w.jumps().clear();
    };

    if (threads <= 1) {
      for (std::size_t i = 0; i < N; ++i) work(i);
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
          for (std::size_t i = next++; i < N; i = next++) work(i);
        });
      }
    }

    std::vector<double> dev(N);
    for (std::size_t p = 0; p < len; ++p) {
      const auto j = begin + p;
      if (options.histogram_stride && j % options.histogram_stride == 0) {
        std::vector<std::uint32_t> h(measure.num_configs(), 0);
        for (std::size_t i = 0; i < N; ++i) ++h[cfgs[p * N + i]];
        ens.histogram_steps.push_back(j);
        ens.histograms.push_back(std::move(h));
      }
      if (j % stride != 0) continue;
      auto stats = [&](const std::vector<double>& comp, double& mean, double& se) {
        const std::span<const double> row(comp.data() + p * N, N);
        mean = pairwise_sum(row) / static_cast<double>(N);
        if (N == 1) {
          se = 0.0;
          return;
        }
        for (std::size_t i = 0; i < N; ++i) dev[i] = (row[i] - mean) * (row[i] - mean);
        const double var = pairwise_sum(dev) / static_cast<double>(N - 1);
        se = std::sqrt(var / static_cast<double>(N));
      };
      Bloch m, s;
      stats(bx, m.x, s.x);
      stats(by, m.y, s.y);
      stats(bz, m.z, s.z);
      ens.mean.push_back(m);
      ens.se.push_back(s);
    }
  }

  for (auto& w : walkers) {
    ens.diagnostics += w.diagnostics();
    if (options.keep_jumps) ens.jumps.push_back(std::move(w.jumps()));
  }
  ens.diagnostics.leakage_flagged = guiding.leakage_flagged();
  return ens;
}

}  // namespace modaljump
