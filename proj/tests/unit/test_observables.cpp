#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qsync/observables.hpp"

using namespace qsync;

namespace {

constexpr double kTwoOverPi = 2.0 / std::numbers::pi;

DensityMatrix random_state(const FockSpace& s, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Matrix g(s.dim(), s.dim());
  for (int i = 0; i < s.dim(); ++i)
    for (int j = 0; j < s.dim(); ++j) g(i, j) = cplx(n(rng), n(rng));
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(s, rho);
}

}  // namespace

TEST(Wigner, VacuumAndFockValuesAtOrigin) {
  const FockSpace s(10);
  EXPECT_NEAR(wigner_point(fock_state(s, {0}), 0.0), kTwoOverPi, 1e-13);
  EXPECT_NEAR(wigner_point(fock_state(s, {1}), 0.0), -kTwoOverPi, 1e-13);
  EXPECT_NEAR(wigner_radial_fock({0.0, 0.0, 1.0}, 0.0), kTwoOverPi, 1e-13);
}

TEST(Wigner, CoherentStateIsDisplacedGaussian) {
  const FockSpace s(40);
  const cplx alpha(0.8, -0.5);
  const DensityMatrix rho = coherent_state(s, alpha);
  for (cplx z : {alpha, cplx(0.0, 0.0), cplx(1.0, 0.3), cplx(-0.4, 0.9)}) {
    const double expected = kTwoOverPi * std::exp(-2.0 * std::norm(z - alpha));
    EXPECT_NEAR(wigner_point(rho, z), expected, 1e-10) << z;
  }
  // Grid orientation: values(i, j) is W at xs[i] + i ys[j].
  const Eigen::MatrixXd w = wigner_2d(rho, {0.8, -0.8}, {-0.5, 0.5});
  EXPECT_NEAR(w(0, 0), kTwoOverPi, 1e-10);
  EXPECT_LT(w(1, 1), 1e-2);
}

TEST(Wigner, RadialMatchesPointForDiagonalStates) {
  const FockSpace s(8);
  Matrix m = Matrix::Zero(8, 8);
  const std::vector<double> pops{0.4, 0.3, 0.2, 0.1};
  for (int n = 0; n < 4; ++n) m(n, n) = pops[static_cast<std::size_t>(n)];
  const DensityMatrix rho(s, m);
  const WignerRadial w = wigner_radial(rho, std::vector<double>{0.0, 0.3, 0.9, 1.7});
  for (std::size_t i = 0; i < w.radii.size(); ++i) {
    EXPECT_NEAR(w.values[i], wigner_point(rho, w.radii[i]), 1e-12);
    EXPECT_NEAR(w.values[i], wigner_radial_fock(pops, w.radii[i]), 1e-12);
  }
}

TEST(Wigner, Normalization) {
  const FockSpace s(30);
  for (const DensityMatrix& rho : {fock_state(s, {0}), fock_state(s, {3}), coherent_state(s, cplx(1.2, 0.0))}) {
    const WignerRadial w = wigner_radial(rho, 1.5);
    EXPECT_NEAR(w.normalization(), 1.0, 1e-3);
  }
}

TEST(Wigner, ShortGridWarns) {
  const FockSpace s(10);
  const WignerRadial w = wigner_radial(fock_state(s, {0}), std::vector<double>{0.0, 0.5, 1.0}, 2.0);
  EXPECT_TRUE(w.grid_warning);
  EXPECT_FALSE(wigner_radial(fock_state(s, {0}), 2.0).grid_warning);
}

TEST(AmplitudeDeath, VacuumVersusRing) {
  const FockSpace s(12);
  EXPECT_TRUE(is_amplitude_death(wigner_radial(fock_state(s, {0}), 1.0)).dead);
  EXPECT_FALSE(is_amplitude_death(wigner_radial(fock_state(s, {1}), 1.0)).dead);
  EXPECT_FALSE(is_amplitude_death(wigner_radial(coherent_state(s, cplx(1.5, 0.0)), 1.5)).dead);
  // Even Fock states still peak at the origin.
  EXPECT_TRUE(is_amplitude_death(wigner_radial(fock_state(s, {2}), 1.0)).dead);
  Matrix m = Matrix::Zero(12, 12);
  m(0, 0) = 0.5;
  m(1, 1) = 0.5;
  // p0 = p1: flat at the origin, ring from the n = 1 component.
  EXPECT_FALSE(is_amplitude_death(wigner_radial(DensityMatrix(s, m), 1.0)).dead);
  m(0, 0) = 0.8;
  m(1, 1) = 0.2;
  EXPECT_TRUE(is_amplitude_death(wigner_radial(DensityMatrix(s, m), 1.0)).dead);
}

TEST(Pearson, ProductStateIsUncorrelated) {
  const FockSpace s({6, 6});
  EXPECT_NEAR(pearson_sigma(fock_state(s, {1, 2})), 0.0, 1e-14);
}

TEST(Pearson, BoundedForRandomStates) {
  std::mt19937_64 rng(5);
  const FockSpace s({4, 4});
  for (int k = 0; k < 25; ++k) EXPECT_LE(std::abs(pearson_sigma(random_state(s, rng))), 1.0);
}

TEST(Pearson, TwoModeCorrelation) {
  // (|00> + |11>)/sqrt 2 has <x1 x2> = 1 and unit-plus-one variances: Sigma = 1/2.
  const FockSpace s({3, 3});
  Vector ket = Vector::Zero(9);
  ket(s.flatten({0, 0})) = 1.0;
  ket(s.flatten({1, 1})) = 1.0;
  EXPECT_NEAR(pearson_sigma(pure_state(s, ket)), 0.5, 1e-12);
}

TEST(Pearson, RequiresTwoOscillators) { EXPECT_THROW(pearson_sigma(fock_state(FockSpace(3), {0})), Error); }

TEST(Locking, LabelNames) {
  EXPECT_EQ(to_string(SyncClassification::Label::frequency_locked), "frequency_locked");
  EXPECT_EQ(to_string(SyncClassification::Label::amplitude_death), "amplitude_death");
  EXPECT_EQ(to_string(SyncClassification::Label::unclassified), "unclassified");
}

TEST(Locking, StrongCouplingLocksIdenticalOscillators) {
  CoupledParams c;
  c.lambda = 0.3;
  c.r = 1.0;
  c.eta = 0.8;
  c.delta = 0.02;
  LockingOptions o;
  const auto cls = coupled_frequency_locking(build_coupled_dissipative(c, 8), o);
  EXPECT_EQ(cls.label, SyncClassification::Label::frequency_locked);
  EXPECT_GT(cls.sigma, 0.0);
}

TEST(Locking, DeepQuantumDeathAtZeroDetuning) {
  DeepQuantumParams p;
  p.gamma = 50.0;
  p.eta = 2.0;
  const auto cls = coupled_frequency_locking(build_deep_quantum_sl(p, 4), LockingOptions{0.5});
  EXPECT_EQ(cls.label, SyncClassification::Label::amplitude_death);
}

TEST(Bandwidth, UndrivenHasZeroBandwidth) {
  DvdpParams p;
  p.lambda = 0.2;
  const auto r = quantum_bandwidth_scan(p, {0.9, 1.1});
  EXPECT_EQ(r.bandwidth, 0.0);
  EXPECT_FALSE(r.diagnostic.empty());
  EXPECT_THROW(quantum_bandwidth_scan(p, {1.0}), Error);
}
