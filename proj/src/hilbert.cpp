// Copyright 2026 The modaljump Authors
// SPDX-License-Identifier: Apache-2.0

#include "modaljump/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace modaljump {

HilbertSpec build_space(int num_modes, int cutoff, std::size_t dim_limit) {
  if (num_modes < 1) throw std::invalid_argument("build_space: num_modes must be >= 1");
  if (cutoff < 1) throw std::invalid_argument("build_space: cutoff must be >= 1");

  const auto levels = static_cast<std::size_t>(cutoff) + 1;
  std::size_t bath = 1;
  for (int k = 0; k < num_modes; ++k) {
    if (bath > dim_limit / (2 * levels)) {
      throw std::length_error("build_space: dimension 2*(" + std::to_string(cutoff) + "+1)^" +
                              std::to_string(num_modes) + " exceeds limit " +
                              std::to_string(dim_limit));
    }
    bath *= levels;
  }

  HilbertSpec spec;
  spec.num_modes_ = num_modes;
  spec.cutoff_ = cutoff;
  spec.bath_dim_ = bath;
  spec.strides_.assign(static_cast<std::size_t>(num_modes), 1);
  for (int k = num_modes - 2; k >= 0; --k) {
    spec.strides_[static_cast<std::size_t>(k)] = spec.strides_[static_cast<std::size_t>(k) + 1] * levels;
  }
  return spec;
}

std::size_t HilbertSpec::bath_flat(std::span<const int> occupations) const {
  if (occupations.size() != static_cast<std::size_t>(num_modes_)) {
    throw std::invalid_argument("bath_flat: occupation tuple has wrong length");
  }
  std::size_t idx = 0;
  for (int k = 0; k < num_modes_; ++k) {
    const int n = occupations[static_cast<std::size_t>(k)];
    if (n < 0 || n > cutoff_) throw std::out_of_range("bath_flat: occupation outside [0, cutoff]");
    idx += static_cast<std::size_t>(n) * mode_stride(k);
  }
  return idx;
}

std::vector<int> HilbertSpec::bath_occupations(std::size_t bath_index) const {
  if (bath_index >= bath_dim_) throw std::out_of_range("bath_occupations: index out of range");
  std::vector<int> occ(static_cast<std::size_t>(num_modes_));
  for (int k = 0; k < num_modes_; ++k) occ[static_cast<std::size_t>(k)] = occupation(bath_index, k);
  return occ;
}

std::size_t HilbertSpec::flat(const BasisIndex& idx) const {
  return static_cast<std::size_t>(idx.atom) * bath_dim_ + bath_flat(idx.occupations);
}

BasisIndex HilbertSpec::structured(std::size_t flat) const {
  if (flat >= dim()) throw std::out_of_range("structured: index out of range");
  return {flat >= bath_dim_ ? Atom::excited : Atom::ground, bath_occupations(flat % bath_dim_)};
}

int centered_label(int num_modes, int mode) noexcept { return mode - (num_modes - 1) / 2; }

int mode_from_label(int num_modes, int label) {
  const int mode = label + (num_modes - 1) / 2;
  if (mode < 0 || mode >= num_modes) {
    throw std::out_of_range("mode label " + std::to_string(label) + " not valid for " +
                            std::to_string(num_modes) + " modes");
  }
  return mode;
}

// ---------------------------------------------------------------------------

SparseOperator SparseOperator::from_entries(std::size_t dim, std::vector<Entry> entries) {
  for (const auto& e : entries) {
    if (e.row >= dim || e.col >= dim) throw std::out_of_range("SparseOperator: entry outside matrix");
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseOperator op(dim);
  std::size_t i = 0;
  while (i < entries.size()) {
    const auto row = entries[i].row;
    const auto col = entries[i].col;
    cplx sum = 0.0;
    for (; i < entries.size() && entries[i].row == row && entries[i].col == col; ++i) sum += entries[i].value;
    if (sum != cplx{0.0, 0.0}) {
      op.cols_.push_back(col);
      op.values_.push_back(sum);
      ++op.row_ptr_[row + 1];
    }
  }
  for (std::size_t r = 0; r < dim; ++r) op.row_ptr_[r + 1] += op.row_ptr_[r];
  return op;
}

SparseOperator SparseOperator::identity(std::size_t dim) {
  std::vector<Entry> e;
  e.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i) e.push_back({i, i, 1.0});
  return from_entries(dim, std::move(e));
}

std::vector<SparseOperator::Entry> SparseOperator::entries() const {
  std::vector<Entry> out;
  out.reserve(values_.size());
  for (std::size_t r = 0; r < dim_; ++r) {
    for (auto p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) out.push_back({r, cols_[p], values_[p]});
  }
  return out;
}

cplx SparseOperator::at(std::size_t row, std::size_t col) const {
  if (row >= dim_ || col >= dim_) throw std::out_of_range("SparseOperator::at");
  const auto first = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row]);
  const auto last = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row + 1]);
  const auto it = std::lower_bound(first, last, col);
  if (it == last || *it != col) return 0.0;
  return values_[static_cast<std::size_t>(it - cols_.begin())];
}

void SparseOperator::apply_add(std::span<const cplx> in, std::span<cplx> out, cplx scale) const {
  if (in.size() != dim_ || out.size() != dim_) throw std::invalid_argument("SparseOperator::apply_add: size mismatch");
  for (std::size_t r = 0; r < dim_; ++r) {
    cplx acc = 0.0;
    for (auto p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) acc += values_[p] * in[cols_[p]];
    out[r] += scale * acc;
  }
}

StateVector SparseOperator::apply(std::span<const cplx> in) const {
  StateVector out(dim_, 0.0);
  apply_add(in, out);
  return out;
}

SparseOperator SparseOperator::adjoint() const {
  auto e = entries();
  for (auto& x : e) {
    std::swap(x.row, x.col);
    x.value = std::conj(x.value);
  }
  return from_entries(dim_, std::move(e));
}

SparseOperator SparseOperator::scaled(cplx s) const {
  auto e = entries();
  for (auto& x : e) x.value *= s;
  return from_entries(dim_, std::move(e));
}

SparseOperator operator+(const SparseOperator& a, const SparseOperator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("SparseOperator +: dimension mismatch");
  auto e = a.entries();
  auto eb = b.entries();
  e.insert(e.end(), eb.begin(), eb.end());
  return SparseOperator::from_entries(a.dim(), std::move(e));
}

SparseOperator operator-(const SparseOperator& a, const SparseOperator& b) { return a + b.scaled(-1.0); }

SparseOperator operator*(const SparseOperator& a, const SparseOperator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("SparseOperator *: dimension mismatch");
  std::vector<SparseOperator::Entry> e;
  for (std::size_t r = 0; r < a.dim_; ++r) {
    for (auto p = a.row_ptr_[r]; p < a.row_ptr_[r + 1]; ++p) {
      const auto mid = a.cols_[p];
      for (auto q = b.row_ptr_[mid]; q < b.row_ptr_[mid + 1]; ++q) {
        e.push_back({r, b.cols_[q], a.values_[p] * b.values_[q]});
      }
    }
  }
  return SparseOperator::from_entries(a.dim(), std::move(e));
}

double SparseOperator::hermiticity_error() const {
  double worst = 0.0;
  for (const auto& e : entries()) worst = std::max(worst, std::abs(e.value - std::conj(at(e.col, e.row))));
  return worst;
}

double SparseOperator::frobenius_norm() const {
  double s = 0.0;
  for (const auto& v : values_) s += std::norm(v);
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------

namespace {

void check_mode(const HilbertSpec& spec, int mode) {
  if (mode < 0 || mode >= spec.num_modes()) {
    throw std::out_of_range("mode index " + std::to_string(mode) + " outside [0, " +
                            std::to_string(spec.num_modes()) + ")");
  }
}

}  // namespace

SparseOperator annihilation(const HilbertSpec& spec, int mode) {
  check_mode(spec, mode);
  const auto stride = spec.mode_stride(mode);
  std::vector<SparseOperator::Entry> e;
  for (std::size_t col = 0; col < spec.dim(); ++col) {
    const int n = spec.occupation(col % spec.bath_dim(), mode);
    if (n > 0) e.push_back({col - stride, col, std::sqrt(static_cast<double>(n))});
  }
  return SparseOperator::from_entries(spec.dim(), std::move(e));
}

SparseOperator creation(const HilbertSpec& spec, int mode) { return annihilation(spec, mode).adjoint(); }

SparseOperator number_operator(const HilbertSpec& spec, int mode) {
  check_mode(spec, mode);
  std::vector<SparseOperator::Entry> e;
  for (std::size_t i = 0; i < spec.dim(); ++i) {
    const int n = spec.occupation(i % spec.bath_dim(), mode);
    if (n > 0) e.push_back({i, i, static_cast<double>(n)});
  }
  return SparseOperator::from_entries(spec.dim(), std::move(e));
}

SparseOperator atom_operator(const HilbertSpec& spec, AtomOp which) {
  const auto B = spec.bath_dim();
  std::vector<SparseOperator::Entry> e;
  for (std::size_t c = 0; c < B; ++c) {
    const std::size_t g = c;
    const std::size_t x = B + c;
    switch (which) {
      case AtomOp::lower: e.push_back({g, x, 1.0}); break;
      case AtomOp::raise: e.push_back({x, g, 1.0}); break;
      case AtomOp::sigma_x:
        e.push_back({g, x, 1.0});
        e.push_back({x, g, 1.0});
        break;
      case AtomOp::sigma_y:
        e.push_back({x, g, cplx{0.0, -1.0}});
        e.push_back({g, x, cplx{0.0, 1.0}});
        break;
      case AtomOp::sigma_z:
        e.push_back({g, g, -1.0});
        e.push_back({x, x, 1.0});
        break;
      case AtomOp::identity:
        e.push_back({g, g, 1.0});
        e.push_back({x, x, 1.0});
        break;
    }
  }
  return SparseOperator::from_entries(spec.dim(), std::move(e));
}

std::vector<std::vector<cplx>> dft_matrix(int num_modes) {
  if (num_modes < 1) throw std::invalid_argument("dft_matrix: num_modes must be >= 1");
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(num_modes));
  std::vector<std::vector<cplx>> gamma(static_cast<std::size_t>(num_modes),
                                       std::vector<cplx>(static_cast<std::size_t>(num_modes)));
  for (int tau = 0; tau < num_modes; ++tau) {
    for (int k = 0; k < num_modes; ++k) {
      // Reduce the integer product first so the phase stays exact for large kappa.
      const int prod = (centered_label(num_modes, tau) * centered_label(num_modes, k)) % num_modes;
      const double phase = 2.0 * std::numbers::pi * prod / num_modes;
      gamma[static_cast<std::size_t>(tau)][static_cast<std::size_t>(k)] = std::polar(inv_sqrt, phase);
    }
  }
  return gamma;
}

SparseOperator temporal_annihilation(const HilbertSpec& spec, int tau) {
  check_mode(spec, tau);
  const auto gamma = dft_matrix(spec.num_modes());
  SparseOperator b(spec.dim());
  for (int k = 0; k < spec.num_modes(); ++k) {
    b = b + annihilation(spec, k).scaled(std::conj(gamma[static_cast<std::size_t>(tau)][static_cast<std::size_t>(k)]));
  }
  return b;
}

StateVector basis_state(const HilbertSpec& spec, const BasisIndex& idx) {
  StateVector v(spec.dim(), 0.0);
  v[spec.flat(idx)] = 1.0;
  return v;
}

double norm(std::span<const cplx> v) {
  double s = 0.0;
  for (const auto& a : v) s += std::norm(a);
  return std::sqrt(s);
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw std::invalid_argument("inner: size mismatch");
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

}  // namespace modaljump
