// Copyright 2026 The modaljump Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file hilbert.hpp
 * @brief Composite atom ⊗ truncated-Fock basis, sparse operators and the
 *        elementary ladder / Pauli operators built on it.
 *
 * Index ordering: the atom level is the slowest index, then bath mode 0,
 * mode 1, ... with the last mode fastest. A composite index is therefore
 *
 *     flat = atom * B + sum_k n_k * (N_max+1)^(kappa-1-k),   B = (N_max+1)^kappa
 *
 * so the two atom levels of one bath configuration c sit at c and B + c.
 * Modes are addressed 0-based; `centered_label` gives the physical label
 * used in DFT phases and detuning patterns ({-1, 0, +1} for three modes).
 */

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace modaljump {

using cplx = std::complex<double>;
using StateVector = std::vector<cplx>;

enum class Atom : int { ground = 0, excited = 1 };

inline constexpr std::size_t kDefaultDimLimit = std::size_t{1} << 24;

struct BasisIndex {
  Atom atom{Atom::ground};
  std::vector<int> occupations;

  bool operator==(const BasisIndex&) const = default;
};

class HilbertSpec {
 public:
  HilbertSpec() = default;

  int num_modes() const noexcept { return num_modes_; }
  int cutoff() const noexcept { return cutoff_; }
  std::size_t dim() const noexcept { return 2 * bath_dim_; }
  // Number of bath configurations, (N_max+1)^kappa.
  std::size_t bath_dim() const noexcept { return bath_dim_; }
  // Flat-index stride of mode k inside a bath configuration.
  std::size_t mode_stride(int k) const noexcept { return strides_[static_cast<std::size_t>(k)]; }

  std::size_t flat(const BasisIndex& idx) const;
  BasisIndex structured(std::size_t flat) const;

  std::size_t bath_flat(std::span<const int> occupations) const;
  std::vector<int> bath_occupations(std::size_t bath_index) const;
  int occupation(std::size_t bath_index, int mode) const noexcept {
    return static_cast<int>((bath_index / mode_stride(mode)) % static_cast<std::size_t>(cutoff_ + 1));
  }

  bool operator==(const HilbertSpec& o) const noexcept {
    return num_modes_ == o.num_modes_ && cutoff_ == o.cutoff_;
  }

 private:
  friend HilbertSpec build_space(int, int, std::size_t);
  int num_modes_{0};
  int cutoff_{0};
  std::size_t bath_dim_{0};
  std::vector<std::size_t> strides_;
};

/// Throws std::invalid_argument on bad arguments and std::length_error when
/// 2(N_max+1)^kappa exceeds `dim_limit`.
HilbertSpec build_space(int num_modes, int cutoff, std::size_t dim_limit = kDefaultDimLimit);

/// Physical label of mode k: k - floor((kappa-1)/2).
int centered_label(int num_modes, int mode) noexcept;
int mode_from_label(int num_modes, int label);

/**
 * Complex sparse matrix in CSR form with entries sorted by (row, col).
 *
 * Construction goes through triplets; duplicates are summed in insertion
 * order and explicit zeros are dropped, so two operators built from the
 * same triplet sequence are bit-identical.
 */
class SparseOperator {
 public:
  struct Entry {
    std::size_t row;
    std::size_t col;
    cplx value;
  };

  SparseOperator() = default;
  explicit SparseOperator(std::size_t dim) : dim_(dim), row_ptr_(dim + 1, 0) {}
  static SparseOperator from_entries(std::size_t dim, std::vector<Entry> entries);
  static SparseOperator identity(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t nonzeros() const noexcept { return values_.size(); }
  std::vector<Entry> entries() const;
  cplx at(std::size_t row, std::size_t col) const;

  /// out += scale * A * in.
  void apply_add(std::span<const cplx> in, std::span<cplx> out, cplx scale = 1.0) const;
  StateVector apply(std::span<const cplx> in) const;

  SparseOperator adjoint() const;
  SparseOperator scaled(cplx s) const;

  friend SparseOperator operator+(const SparseOperator& a, const SparseOperator& b);
  friend SparseOperator operator-(const SparseOperator& a, const SparseOperator& b);
  friend SparseOperator operator*(const SparseOperator& a, const SparseOperator& b);
  friend SparseOperator operator*(cplx s, const SparseOperator& a) { return a.scaled(s); }

  /// max_{ij} |A_ij - conj(A_ji)|.
  double hermiticity_error() const;
  double frobenius_norm() const;

 private:
  std::size_t dim_{0};
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> cols_;
  std::vector<cplx> values_;
};

enum class AtomOp { lower, raise, sigma_x, sigma_y, sigma_z, identity };

/// a_k on the composite space; the top Fock level is annihilated downward only.
SparseOperator annihilation(const HilbertSpec& spec, int mode);
SparseOperator creation(const HilbertSpec& spec, int mode);
SparseOperator number_operator(const HilbertSpec& spec, int mode);
SparseOperator atom_operator(const HilbertSpec& spec, AtomOp which);

/// gamma[tau][k] = exp(i 2 pi l_tau l_k / kappa) / sqrt(kappa), centered labels.
/// b_tau = sum_k conj(gamma[tau][k]) a_k.
std::vector<std::vector<cplx>> dft_matrix(int num_modes);

/// b_tau = kappa^{-1/2} sum_k a_k exp(-i 2 pi l_tau l_k / kappa) expressed on the
/// spectral Fock basis.
SparseOperator temporal_annihilation(const HilbertSpec& spec, int tau);

StateVector basis_state(const HilbertSpec& spec, const BasisIndex& idx);
double norm(std::span<const cplx> v);
cplx inner(std::span<const cplx> a, std::span<const cplx> b);

}  // namespace modaljump
