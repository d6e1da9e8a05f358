// Copyright 2026 The modaljump Authors
// SPDX-License-Identifier: Apache-2.0

#include "modaljump/guiding.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace modaljump {

TimeGrid TimeGrid::until(double t_final, double dt, double t0) {
  if (!(dt > 0.0)) throw std::invalid_argument("TimeGrid: dt must be > 0");
  const double span = t_final - t0;
  if (!(span > 0.0)) throw std::invalid_argument("TimeGrid: t_final must exceed t0");
  const auto steps = static_cast<std::size_t>(std::llround(span / dt));
  if (std::abs(static_cast<double>(steps) * dt - span) > 1e-9 * std::max(1.0, span)) {
    throw std::invalid_argument("TimeGrid: (t_final - t0) is not an integer multiple of dt");
  }
  return {t0, dt, steps};
}

void TimeGrid::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("TimeGrid: dt must be finite and > 0");
  if (steps < 1) throw std::invalid_argument("TimeGrid: steps must be >= 1");
}

namespace {

// Bath indices with at least one mode at the cutoff.
std::vector<std::size_t> boundary_configs(const HilbertSpec& spec) {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < spec.bath_dim(); ++c) {
    for (int k = 0; k < spec.num_modes(); ++k) {
      if (spec.occupation(c, k) == spec.cutoff()) {
        out.push_back(c);
        break;
      }
    }
  }
  return out;
}

double boundary_weight(std::span<const std::size_t> boundary, std::size_t bath_dim, std::span<const cplx> state) {
  double p = 0.0;
  for (auto c : boundary) p += std::norm(state[c]) + std::norm(state[bath_dim + c]);
  return p;
}

}  // namespace

double leakage(const HilbertSpec& spec, std::span<const cplx> state) {
  if (state.size() != spec.dim()) throw std::invalid_argument("leakage: state dimension mismatch");
  return boundary_weight(boundary_configs(spec), spec.bath_dim(), state);
}

StateVector product_initial_state(const HilbertSpec& spec, cplx excited, cplx ground) {
  StateVector v(spec.dim(), 0.0);
  v[0] = ground;
  v[spec.bath_dim()] = excited;
  return v;
}

std::size_t GuidingTrajectory::block_end(std::size_t b) const noexcept {
  return std::min((b + 1) * block_length(), grid_.points());
}

std::span<const StateVector> GuidingTrajectory::block(std::size_t b, std::vector<StateVector>& scratch) const {
  if (b >= num_blocks()) throw std::out_of_range("GuidingTrajectory::block: index out of range");
  const auto begin = block_begin(b);
  const auto end = block_end(b);
  if (stride_ == 1) return {checkpoints_.data() + begin, end - begin};
  scratch.resize(end - begin);
  scratch[0] = checkpoints_[begin / stride_];
  Rk4Workspace ws;
  for (auto j = begin + 1; j < end; ++j) {
    scratch[j - begin].resize(scratch[0].size());
    rk4_step(scratch[j - begin - 1], model_, grid_.time(j - 1), grid_.dt, ws, scratch[j - begin]);
  }
  return {scratch.data(), end - begin};
}

StateVector GuidingTrajectory::state_at(std::size_t j) const {
  if (j >= grid_.points()) throw std::out_of_range("GuidingTrajectory::state_at: grid index out of range");
  if (stride_ == 1) return checkpoints_[j];
  const auto b = j / stride_;
  StateVector s = checkpoints_[b];
  Rk4Workspace ws;
  for (auto i = b * stride_; i < j; ++i) rk4_step(s, model_, grid_.time(i), grid_.dt, ws, s);
  return s;
}

GuidingTrajectory evolve(std::span<const cplx> initial, const HamiltonianModel& model, const TimeGrid& grid,
                         const GuidingOptions& options) {
  grid.validate();
  const auto& spec = model.space();
  if (initial.size() != spec.dim()) throw std::invalid_argument("evolve: initial state dimension mismatch");
  if (std::abs(norm(initial) - 1.0) > 1e-8) throw std::invalid_argument("evolve: initial state is not normalised");

  GuidingTrajectory g(model, grid);
  g.leakage_tolerance_ = options.leakage_tolerance;
  const auto points = grid.points();
  const auto total = points * spec.dim();
  g.stride_ = total <= options.snapshot_limit ? 1 : (total + options.snapshot_limit - 1) / options.snapshot_limit;
  g.checkpoints_.reserve((points + g.stride_ - 1) / g.stride_);
  g.leakage_.reserve(points);
  g.norms_.reserve(points);

  const auto boundary = boundary_configs(spec);
  StateVector psi(initial.begin(), initial.end());
  Rk4Workspace ws;
  for (std::size_t j = 0; j < points; ++j) {
    if (j > 0) rk4_step(psi, model, grid.time(j - 1), grid.dt, ws, psi);
    if (j % g.stride_ == 0) g.checkpoints_.push_back(psi);
    const double leak = boundary_weight(boundary, spec.bath_dim(), psi);
    g.leakage_.push_back(leak);
    g.norms_.push_back(norm(psi));
    g.max_leakage_ = std::max(g.max_leakage_, leak);
  }
  g.leakage_flagged_ = g.max_leakage_ > options.leakage_tolerance;
  return g;
}

// ---------------------------------------------------------------------------
// Cache file layout (native little-endian):
//   char[8] magic, u32 version, i32 kappa, i32 cutoff, u64 dim, u64 fingerprint,
//   f64 t0, f64 dt, u64 steps, u64 stride, f64 leakage_tolerance, u64 checkpoints,
//   checkpoints * dim * (f64 re, f64 im), points * f64 leakage, points * f64 norm

namespace {

constexpr std::array<char, 8> kMagic{'M', 'J', 'G', 'U', 'I', 'D', 'E', '\0'};
constexpr std::uint32_t kCacheVersion = 1;

template <typename T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("guiding cache: truncated file");
  return v;
}

}  // namespace

void GuidingTrajectory::save(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("guiding cache: cannot open '" + path.string() + "' for writing");
  os.write(kMagic.data(), kMagic.size());
  put(os, kCacheVersion);
  put(os, static_cast<std::int32_t>(space().num_modes()));
  put(os, static_cast<std::int32_t>(space().cutoff()));
  put(os, static_cast<std::uint64_t>(space().dim()));
  put(os, model_.fingerprint());
  put(os, grid_.t0);
  put(os, grid_.dt);
  put(os, static_cast<std::uint64_t>(grid_.steps));
  put(os, static_cast<std::uint64_t>(stride_));
  put(os, leakage_tolerance_);
  put(os, static_cast<std::uint64_t>(checkpoints_.size()));
  for (const auto& s : checkpoints_) os.write(reinterpret_cast<const char*>(s.data()), static_cast<std::streamsize>(s.size() * sizeof(cplx)));
  os.write(reinterpret_cast<const char*>(leakage_.data()), static_cast<std::streamsize>(leakage_.size() * sizeof(double)));
  os.write(reinterpret_cast<const char*>(norms_.data()), static_cast<std::streamsize>(norms_.size() * sizeof(double)));
  if (!os) throw std::runtime_error("guiding cache: write failed for '" + path.string() + "'");
}

GuidingTrajectory GuidingTrajectory::load(const std::filesystem::path& path, const HamiltonianModel& model,
                                          const TimeGrid& grid) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("guiding cache: cannot open '" + path.string() + "'");
  std::array<char, 8> magic{};
  is.read(magic.data(), magic.size());
  if (!is || magic != kMagic) throw std::runtime_error("guiding cache: bad magic in '" + path.string() + "'");
  if (get<std::uint32_t>(is) != kCacheVersion) throw std::runtime_error("guiding cache: unsupported version");

  const auto kappa = get<std::int32_t>(is);
  const auto cutoff = get<std::int32_t>(is);
  const auto dim = get<std::uint64_t>(is);
  const auto fp = get<std::uint64_t>(is);
  TimeGrid g;
  g.t0 = get<double>(is);
  g.dt = get<double>(is);
  g.steps = get<std::uint64_t>(is);
  if (kappa != model.space().num_modes() || cutoff != model.space().cutoff() || dim != model.space().dim() ||
      fp != model.fingerprint()) {
    throw std::runtime_error("guiding cache: model does not match '" + path.string() + "'");
  }
  if (!(g == grid)) throw std::runtime_error("guiding cache: time grid does not match '" + path.string() + "'");

  GuidingTrajectory out(model, grid);
  out.stride_ = get<std::uint64_t>(is);
  out.leakage_tolerance_ = get<double>(is);
  const auto n = get<std::uint64_t>(is);
  if (out.stride_ < 1 || n != (grid.points() + out.stride_ - 1) / out.stride_) {
    throw std::runtime_error("guiding cache: inconsistent checkpoint layout");
  }
  out.checkpoints_.assign(n, StateVector(dim));
  for (auto& s : out.checkpoints_) is.read(reinterpret_cast<char*>(s.data()), static_cast<std::streamsize>(dim * sizeof(cplx)));
  out.leakage_.resize(grid.points());
  out.norms_.resize(grid.points());
  is.read(reinterpret_cast<char*>(out.leakage_.data()), static_cast<std::streamsize>(out.leakage_.size() * sizeof(double)));
  is.read(reinterpret_cast<char*>(out.norms_.data()), static_cast<std::streamsize>(out.norms_.size() * sizeof(double)));
  if (!is) throw std::runtime_error("guiding cache: truncated file");
  out.max_leakage_ = *std::max_element(out.leakage_.begin(), out.leakage_.end());
  out.leakage_flagged_ = out.max_leakage_ > out.leakage_tolerance_;
  return out;
}

}  // namespace modaljump
