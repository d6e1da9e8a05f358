// Copyright 2026 The modaljump Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <numbers>

#include "modaljump/guiding.hpp"
#include "modaljump/models.hpp"
#include "test_support.hpp"

namespace mj = modaljump;
using mj::Atom;
using mj::AtomOp;
using mj::BasisKind;
using mj::cplx;
using mjtest::Dense;
using mjtest::to_dense;

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I{0.0, 1.0};

mj::ModelParams complex_three_mode() {
  mj::ModelParams p;
  p.rabi = 7.0;
  p.couplings = {cplx(0.8, 0.3), cplx(1.1, -0.2), cplx(0.4, 0.9)};
  p.detunings = {-3.0, 0.5, 2.0};
  return p;
}

}  // namespace

TEST(Params, Presets) {
  const auto s = mj::single_mode_params();
  EXPECT_EQ(s.rabi, 5.0);
  EXPECT_EQ(s.num_modes(), 1);
  EXPECT_EQ(s.detunings, std::vector<double>{0.0});
  const auto t = mj::three_mode_params();
  EXPECT_EQ(t.rabi, 20.0);
  EXPECT_EQ(t.detunings, (std::vector<double>{-20.0, 0.0, 20.0}));
  EXPECT_EQ(t.couplings, std::vector<cplx>(3, 1.0));
}

TEST(Params, Validation) {
  auto p = mj::three_mode_params();
  p.detunings.pop_back();
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = mj::single_mode_params();
  p.rabi = -1.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = mj::single_mode_params();
  EXPECT_THROW(mj::spectral_interaction(mj::build_space(2, 2), p, 0.0), std::invalid_argument);
  EXPECT_THROW(mj::HamiltonianModel(mj::build_space(3, 2), p, BasisKind::spectral), std::invalid_argument);
  EXPECT_EQ(mj::basis_kind_from_string("temporal"), BasisKind::temporal);
  EXPECT_EQ(mj::to_string(BasisKind::spectral), "spectral");
  EXPECT_THROW(mj::basis_kind_from_string("fourier"), std::invalid_argument);
}

TEST(Driving, SpectrumAndZero) {
  const auto s = mj::build_space(2, 2);
  EXPECT_EQ(mj::driving_hamiltonian(s, 0.0).nonzeros(), 0u);
  Eigen::SelfAdjointEigenSolver<Dense> es(to_dense(mj::driving_hamiltonian(s, 5.0)));
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    EXPECT_NEAR(std::abs(es.eigenvalues()(i)), 2.5, 1e-12);
  }
  EXPECT_NEAR(es.eigenvalues().sum(), 0.0, 1e-12);
}

TEST(SpectralInteraction, SingleModeForm) {
  const auto s = mj::build_space(1, 4);
  const auto p = mj::single_mode_params(5.0, 1.0);
  const Dense sig = to_dense(mj::atom_operator(s, AtomOp::lower));
  const Dense a = to_dense(mj::annihilation(s, 0));
  const Dense expect = I * (sig * a.adjoint() - sig.adjoint() * a);
  for (double t : {0.0, 0.37, 12.5}) {
    EXPECT_LT(mjtest::max_abs_diff(to_dense(mj::spectral_interaction(s, p, t)), expect), 1e-15);
  }
  auto z = p;
  z.couplings = {0.0};
  EXPECT_EQ(mj::spectral_interaction(s, z, 1.0).nonzeros(), 0u);
}

TEST(SpectralInteraction, MatchesDefinitionWithComplexCouplings) {
  const auto s = mj::build_space(3, 2);
  const auto p = complex_three_mode();
  const Dense sig = to_dense(mj::atom_operator(s, AtomOp::lower));
  for (double t : {0.0, 0.41, 3.3}) {
    Dense expect = Dense::Zero(sig.rows(), sig.cols());
    for (int k = 0; k < 3; ++k) {
      const Dense a = to_dense(mj::annihilation(s, k));
      const cplx g = p.couplings[k];
      const double w = p.detunings[k];
      expect += I * (std::conj(g) * std::exp(I * w * t) * sig * a.adjoint() -
                     g * std::exp(-I * w * t) * sig.adjoint() * a);
    }
    EXPECT_LT(mjtest::max_abs_diff(to_dense(mj::spectral_interaction(s, p, t)), expect), 1e-14);
  }
}

TEST(SpectralInteraction, PeriodicInDriving) {
  const auto s = mj::build_space(3, 2);
  const auto p = mj::three_mode_params(20.0, 1.0);
  const Dense a = to_dense(mj::spectral_interaction(s, p, 0.0));
  const Dense b = to_dense(mj::spectral_interaction(s, p, 2.0 * kPi / 20.0));
  EXPECT_LT(mjtest::max_abs_diff(a, b), 1e-13);
}

TEST(Hamiltonian, HermitianAtRandomTimes) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ut(0.0, 50.0);
  for (auto kind : {BasisKind::spectral, BasisKind::temporal}) {
    const mj::HamiltonianModel m(mj::build_space(3, 3), complex_three_mode(), kind);
    for (int i = 0; i < 1000; ++i) EXPECT_LT(m.hamiltonian(ut(rng)).hermiticity_error(), 1e-12);
  }
  const mj::HamiltonianModel m1(mj::build_space(1, 8), mj::single_mode_params(), BasisKind::spectral);
  for (int i = 0; i < 1000; ++i) EXPECT_LT(m1.hamiltonian(ut(rng)).hermiticity_error(), 1e-12);
}

TEST(Hamiltonian, FastApplyMatchesSparseOperator) {
  std::mt19937_64 rng(12);
  for (auto kind : {BasisKind::spectral, BasisKind::temporal}) {
    for (auto [k, n] : {std::pair{1, 6}, std::pair{2, 3}, std::pair{3, 3}}) {
      auto p = complex_three_mode();
      p.couplings.resize(static_cast<std::size_t>(k));
      p.detunings.resize(static_cast<std::size_t>(k));
      const mj::HamiltonianModel m(mj::build_space(k, n), p, kind);
      for (double t : {0.0, 0.77, 4.2}) {
        const auto v = mjtest::random_state(m.space().dim(), rng);
        mj::StateVector out(v.size());
        m.apply(t, v, out);
        const auto ref = m.hamiltonian(t).apply(v);
        for (std::size_t i = 0; i < v.size(); ++i) EXPECT_LT(std::abs(out[i] - ref[i]), 1e-13);
      }
    }
  }
}

TEST(Hamiltonian, InteractionConservesExcitationNumber) {
  const auto s = mj::build_space(3, 3);
  Dense nexc = to_dense(mj::atom_operator(s, AtomOp::raise) * mj::atom_operator(s, AtomOp::lower));
  for (int k = 0; k < 3; ++k) nexc += to_dense(mj::number_operator(s, k));
  for (auto kind : {BasisKind::spectral, BasisKind::temporal}) {
    const mj::HamiltonianModel m(s, complex_three_mode(), kind);
    for (double t : {0.0, 0.3, 1.9}) {
      const Dense v = to_dense(m.interaction(t));
      EXPECT_LT((v * nexc - nexc * v).cwiseAbs().maxCoeff(), 1e-13);
      const Dense h = to_dense(m.hamiltonian(t));
      EXPECT_GT((h * nexc - nexc * h).cwiseAbs().maxCoeff(), 0.1);  // driving breaks it
    }
  }
}

TEST(TemporalCoefficient, ThreeFlatModes) {
  const auto p = mj::three_mode_params(20.0, 1.0);
  EXPECT_NEAR(std::abs(mj::temporal_coefficient(p, 1, 0.0) - std::sqrt(3.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::sqrt(3.0), 1.7320508, 1e-7);
  EXPECT_NEAR(std::abs(mj::temporal_coefficient(p, 1, 2.0 * kPi / (3.0 * 20.0))), 0.0, 1e-14);
  // Closed form (g / sqrt 3) {1 + 2 cos(W t - 2 pi l / 3)} for label l; real-valued.
  for (int tau = 0; tau < 3; ++tau) {
    const int l = mj::centered_label(3, tau);
    for (double t : {0.0, 0.013, 0.2, 1.7}) {
      const cplx c = mj::temporal_coefficient(p, tau, t);
      EXPECT_NEAR(c.real(), (1.0 + 2.0 * std::cos(20.0 * t - 2.0 * kPi * l / 3.0)) / std::sqrt(3.0), 1e-13);
      EXPECT_NEAR(c.imag(), 0.0, 1e-13);
    }
  }
  auto z = p;
  z.couplings.assign(3, 0.0);
  for (int tau = 0; tau < 3; ++tau) EXPECT_EQ(mj::temporal_coefficient(z, tau, 0.4), cplx(0.0));
  EXPECT_THROW(mj::temporal_coefficient(p, 3, 0.0), std::out_of_range);
}

TEST(TemporalCoefficient, PeakTimes) {
  // |c_tau|^2 peaks at t = 2 pi (l/3 + n) / W with value 3 g^2 (|c| = sqrt 3 g).
  const auto p = mj::three_mode_params(20.0, 1.0);
  for (int tau = 0; tau < 3; ++tau) {
    const int l = mj::centered_label(3, tau);
    for (int n = 0; n < 4; ++n) {
      const double tp = 2.0 * kPi * (l / 3.0 + n) / 20.0;
      if (tp < 0) continue;
      const double peak = std::norm(mj::temporal_coefficient(p, tau, tp));
      EXPECT_NEAR(peak, 3.0, 1e-12);
      EXPECT_LT(std::norm(mj::temporal_coefficient(p, tau, tp + 1e-3)), peak);
      EXPECT_LT(std::norm(mj::temporal_coefficient(p, tau, tp - 1e-3)), peak);
    }
  }
}

TEST(TemporalInteraction, SingleModeEqualsSpectral) {
  const auto s = mj::build_space(1, 5);
  auto p = mj::single_mode_params(5.0, cplx(0.7, 0.2));
  p.detunings = {1.3};
  for (double t : {0.0, 0.5, 2.1}) {
    EXPECT_LT(mjtest::max_abs_diff(to_dense(mj::temporal_interaction(s, p, t)), to_dense(mj::spectral_interaction(s, p, t))),
              1e-15);
  }
}

TEST(TemporalInteraction, CentralCouplingDominatesAtPeak) {
  const mj::HamiltonianModel m(mj::build_space(3, 2), mj::three_mode_params(20.0, 1.0), BasisKind::temporal);
  const auto u = m.mode_couplings(0.0);
  EXPECT_NEAR(std::abs(u[1]), std::sqrt(3.0), 1e-14);
  EXPECT_NEAR(std::abs(u[0]), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(u[2]), 0.0, 1e-14);
}

// Oracle: W maps temporal-occupation basis states to spectral Fock states
// prod_tau (b_tau^dag)^n / sqrt(n!) |0>. On states with total photon number
// at most N_max - 1 the map is exact and intertwines the two interactions.
TEST(TemporalInteraction, UnitarilyRelatedToSpectral) {
  const int N = 3;
  const auto s = mj::build_space(3, N);
  const auto p = complex_three_mode();
  std::vector<Dense> bdag;
  for (int tau = 0; tau < 3; ++tau) bdag.push_back(to_dense(mj::temporal_annihilation(s, tau)).adjoint());

  const auto dim = static_cast<Eigen::Index>(s.dim());
  const auto B = s.bath_dim();
  Dense W = Dense::Zero(dim, dim);
  std::vector<std::size_t> inner;  // composite indices with total photons <= N - 1
  for (int a = 0; a < 2; ++a) {
    for (std::size_t c = 0; c < B; ++c) {
      const auto occ = s.bath_occupations(c);
      const int total = occ[0] + occ[1] + occ[2];
      if (total > N) continue;
      mjtest::DenseVec v = mjtest::to_dense(mj::basis_state(s, {static_cast<Atom>(a), {0, 0, 0}}));
      for (int tau = 0; tau < 3; ++tau) {
        for (int q = 0; q < occ[tau]; ++q) v = bdag[tau] * v;
        v /= std::sqrt(std::tgamma(occ[tau] + 1.0));
      }
      const auto col = static_cast<std::size_t>(a) * B + c;
      W.col(static_cast<Eigen::Index>(col)) = v;
      if (total <= N - 1) inner.push_back(col);
    }
  }
  // Isometry on the representable subspace.
  for (auto i : inner) {
    for (auto j : inner) {
      const cplx ip = W.col(static_cast<Eigen::Index>(i)).dot(W.col(static_cast<Eigen::Index>(j)));
      EXPECT_LT(std::abs(ip - (i == j ? 1.0 : 0.0)), 1e-13);
    }
  }
  for (double t : {0.0, 0.31, 2.7}) {
    const Dense vs = to_dense(mj::spectral_interaction(s, p, t));
    const Dense vt = to_dense(mj::temporal_interaction(s, p, t));
    for (auto i : inner) {
      const mjtest::DenseVec lhs = vs * W.col(static_cast<Eigen::Index>(i));
      const mjtest::DenseVec rhs = W * vt.col(static_cast<Eigen::Index>(i));
      EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-13);
    }
  }
}

TEST(SecondRwa, RequiresThreeModePreset) {
  EXPECT_THROW(mj::second_rwa_interaction(mj::build_space(3, 2), complex_three_mode(), 0.0), std::invalid_argument);
  EXPECT_THROW(mj::second_rwa_interaction(mj::build_space(1, 2), mj::single_mode_params(), 0.0), std::invalid_argument);
  auto p = mj::three_mode_params(20.0, 0.0);
  EXPECT_EQ(mj::second_rwa_interaction(mj::build_space(3, 2), p, 0.3).nonzeros(), 0u);
}

TEST(SecondRwa, SigmaXLadder) {
  const auto s = mj::build_space(1, 1);
  const Dense sx = to_dense(mj::atom_operator(s, AtomOp::sigma_x));
  const Dense up = to_dense(mj::sigma_x_raise(s));
  const Dense dn = to_dense(mj::sigma_x_lower(s));
  // [sigma_x, sigma_x^+] = 2 sigma_x^+ and sigma = (sigma_x + sigma_x^+ - sigma_x^-)/2.
  EXPECT_LT(mjtest::max_abs_diff(sx * up - up * sx, 2.0 * up), 1e-15);
  EXPECT_LT(mjtest::max_abs_diff(to_dense(mj::atom_operator(s, AtomOp::lower)), 0.5 * (sx + up - dn)), 1e-15);
}

// Oracle: in the frame rotating with the drive, exp(i W sigma_x t / 2), the
// second-RWA operator must equal the period average of the exact interaction.
TEST(SecondRwa, EqualsPeriodAverageInSigmaXFrame) {
  const auto s = mj::build_space(3, 2);
  auto p = mj::three_mode_params(20.0, 1.0);
  p.couplings = {cplx(0.9, 0.2), cplx(1.0, -0.4), cplx(0.6, 0.5)};
  const double W = p.rabi;
  const Dense sx = to_dense(mj::atom_operator(s, AtomOp::sigma_x));
  const Dense id = Dense::Identity(sx.rows(), sx.cols());
  auto frame = [&](double t) -> Dense { return std::cos(W * t / 2) * id + I * std::sin(W * t / 2) * sx; };

  const int M = 16;  // exact for the harmonics 0, +-W, +-2W present
  const double T = 2.0 * kPi / W;
  Dense avg = Dense::Zero(sx.rows(), sx.cols());
  for (int q = 0; q < M; ++q) {
    const double t = T * q / M;
    avg += frame(t) * to_dense(mj::spectral_interaction(s, p, t)) * frame(t).adjoint();
  }
  avg /= static_cast<double>(M);
  for (double t : {0.0, 0.05, 0.7, 3.1}) {
    const Dense rot = frame(t) * to_dense(mj::second_rwa_interaction(s, p, t)) * frame(t).adjoint();
    EXPECT_LT(mjtest::max_abs_diff(rot, avg), 1e-13) << "t = " << t;
  }
  EXPECT_GT(avg.norm(), 1.0);
  EXPECT_LT(mj::second_rwa_interaction(s, p, 0.4).hermiticity_error(), 1e-14);
}

TEST(SecondRwa, OnlyOuterModesMixSigmaXSectors) {
  const auto s = mj::build_space(3, 2);
  const auto p = mj::three_mode_params(20.0, 1.0);
  const Dense sx = to_dense(mj::atom_operator(s, AtomOp::sigma_x));
  const Dense v = to_dense(mj::second_rwa_interaction(s, p, 0.3));
  const Dense ac = to_dense(mj::annihilation(s, 1));
  const Dense central = 0.5 * I * (sx * ac.adjoint() - sx * ac);
  EXPECT_LT((central * sx - sx * central).cwiseAbs().maxCoeff(), 1e-15);
  const Dense outer = v - central;
  // Outer-mode part anticommutes with sigma_x: it only flips the sigma_x eigenvalue.
  EXPECT_LT((outer * sx + sx * outer).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_GT(outer.norm(), 1.0);
}

namespace {

struct RwaGenerator {
  mj::HilbertSpec spec;
  mj::ModelParams params;
  mj::SparseOperator driving;
  void apply(double t, std::span<const cplx> in, std::span<cplx> out) const {
    const auto h = driving + mj::second_rwa_interaction(spec, params, t);
    std::fill(out.begin(), out.end(), cplx{});
    h.apply_add(in, out);
  }
};

double rwa_error(double W) {
  const auto s = mj::build_space(3, 3);
  const auto p = mj::three_mode_params(W, 1.0);
  const mj::HamiltonianModel exact(s, p, BasisKind::spectral);
  const RwaGenerator rwa{s, p, mj::driving_hamiltonian(s, W)};
  auto a = mj::product_initial_state(s, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0));
  auto b = a;
  const double dt = 5e-4;
  for (int j = 0; j < 1000; ++j) {
    a = mj::rk4_step(a, exact, j * dt, dt);
    b = mj::rk4_step(b, rwa, j * dt, dt);
  }
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::norm(a[i] - b[i]);
  return std::sqrt(d);
}

}  // namespace

TEST(SecondRwa, ApproachesExactDynamicsForStrongDriving) {
  const double e20 = rwa_error(20.0);
  const double e80 = rwa_error(80.0);
  EXPECT_LT(e20, 0.15) << e20;
  EXPECT_LT(e80, 0.5 * e20) << e80;
}

TEST(Model, FingerprintAndCouplings) {
  const auto s = mj::build_space(3, 2);
  const mj::HamiltonianModel a(s, mj::three_mode_params(), BasisKind::spectral);
  const mj::HamiltonianModel b(s, mj::three_mode_params(), BasisKind::spectral);
  const mj::HamiltonianModel c(s, mj::three_mode_params(21.0), BasisKind::spectral);
  const mj::HamiltonianModel d(s, mj::three_mode_params(), BasisKind::temporal);
  EXPECT_EQ(a.fingerprint(), b.fingerprint());
  EXPECT_NE(a.fingerprint(), c.fingerprint());
  EXPECT_NE(a.fingerprint(), d.fingerprint());
  const auto u = a.mode_couplings(0.1);
  EXPECT_LT(std::abs(u[0] - std::exp(I * 2.0)), 1e-15);  // g e^{-i (-20) 0.1}
  EXPECT_LT(std::abs(u[1] - 1.0), 1e-15);
  std::vector<cplx> wrong(2);
  EXPECT_THROW(a.mode_couplings(0.0, wrong), std::invalid_argument);
}
