#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qsync/dynamics.hpp"

using namespace qsync;

namespace {

cplx drift(const Liouvillian& L, const DensityMatrix& rho, double t) {
  return (destroy(rho.space()).data() * L.apply(t, rho.data())).trace();
}

}  // namespace

TEST(Params, ValidationRejectsBadValues) {
  DvdpParams p;
  p.lambda = -0.1;
  EXPECT_THROW(p.validate(), Error);
  p = DvdpParams{};
  p.r = 0.0;
  EXPECT_THROW(p.validate(), Error);
  p = DvdpParams{};
  p.omega_d = std::nan("");
  EXPECT_THROW(p.validate(), Error);
  EXPECT_NO_THROW(DvdpParams{}.validate());
}

TEST(Params, BarredRoundTrip) {
  const DvdpParams p = DvdpParams::from_bar(0.2, 0.5, 2.0, 0.3, 1.1);
  EXPECT_NEAR(p.lambda_bar(), 0.2, 1e-15);
  EXPECT_NEAR(p.beta_bar(), 0.5, 1e-15);
  EXPECT_NEAR(p.F_bar(), 0.3, 1e-15);
}

TEST(Params, DimensionalRoundTrip) {
  DvdpParams p{0.3, 0.2, 1.5, 0.1, 0.97};
  const DimensionalParams d = DimensionalParams::from_dimensionless(p, 2.5, 0.7);
  const DvdpParams back = d.to_dimensionless();
  EXPECT_NEAR(back.lambda, p.lambda, 1e-14);
  EXPECT_NEAR(back.beta, p.beta, 1e-14);
  EXPECT_NEAR(back.F, p.F, 1e-14);
  EXPECT_NEAR(back.omega_d, p.omega_d, 1e-14);
}

TEST(Builders, TruncationFloor) {
  DvdpParams p;
  p.lambda = 0.1;
  EXPECT_THROW(build_approx_dvdp(p, min_truncation_approx(p) - 1), Error);
  EXPECT_THROW(build_exact_dvdp(p, kMinTruncationExact - 1), Error);
  try {
    build_exact_dvdp(p, 3);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::truncation);
  }
}

TEST(Builders, DriveOnlyWhenForced) {
  DvdpParams p;
  p.lambda = 0.2;
  EXPECT_FALSE(build_approx_dvdp(p, 10).has_drive());
  p.F = 0.1;
  p.omega_d = 1.2;
  const Liouvillian L = build_approx_dvdp(p, 10);
  ASSERT_TRUE(L.has_drive());
  EXPECT_DOUBLE_EQ(L.drive().omega, 1.2);
}

class MeanField : public ::testing::TestWithParam<int> {};

TEST_P(MeanField, CoherentStateDriftMatchesClassicalEquation) {
  std::mt19937_64 rng(static_cast<unsigned>(GetParam()));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  DvdpParams p;
  p.lambda = 0.5 * u(rng);
  p.beta = 0.5 * u(rng);
  p.r = 0.5 + u(rng);
  p.F = 0.3 * u(rng);
  p.omega_d = 0.8 + 0.4 * u(rng);
  const double t = 5.0 * u(rng);
  const cplx alpha = std::polar(u(rng), 6.283 * u(rng));
  const FockSpace s(36);
  const DensityMatrix rho = coherent_state(s, alpha);
  EXPECT_LT(std::abs(drift(build_approx_dvdp(p, 36), rho, t) - mean_field_rhs_approx(alpha, p, t)), 1e-8);
  EXPECT_LT(std::abs(drift(build_exact_dvdp(p, 36), rho, t) - mean_field_rhs_exact(alpha, p, t)), 1e-8);
}

INSTANTIATE_TEST_SUITE_P(RandomParameters, MeanField, ::testing::Range(1, 7));

TEST(MeanField, StuartLandauLimit) {
  // Without the second-order terms and beta = F = 0 the averaged drift is lambda/2 (r^2 - |alpha|^2) alpha - i alpha.
  DvdpParams p;
  p.lambda = 0.3;
  p.r = 1.0;
  const FockSpace s(36);
  const cplx alpha(0.4, 0.2);
  const cplx d = drift(build_approx_dvdp(p, 36, ApproxTerms{false}), coherent_state(s, alpha), 0.0);
  const cplx expected = 0.5 * p.lambda * (1.0 - std::norm(alpha)) * alpha - cplx(0.0, 1.0) * alpha;
  EXPECT_LT(std::abs(d - expected), 1e-10);
}

TEST(Coupled, DetuningAndCouplingAppearInDrift) {
  CoupledParams c;
  c.lambda = 0.0;
  c.delta = 0.3;
  c.eta = 0.4;
  const int N = 12;
  const Liouvillian L = build_coupled_dissipative(c, N);
  // Vacuum in oscillator 1, coherent amplitude in oscillator 2: d<a1>/dt = (eta/2) alpha2.
  const FockSpace s({N, N});
  Vector ket = Vector::Zero(s.dim());
  double term = std::exp(-0.125);
  for (int n = 0; n < N; ++n) {
    ket(s.flatten({0, n})) = term;
    term *= 0.5 / std::sqrt(n + 1.0);
  }
  const DensityMatrix rho = pure_state(s, ket);
  const Matrix out = L.apply(0.0, rho.data());
  const cplx d1 = (destroy(s, 0).data() * out).trace();
  const cplx d2 = (destroy(s, 1).data() * out).trace();
  EXPECT_LT(std::abs(d1 - 0.5 * c.eta * 0.5), 1e-8);
  const cplx expected2 = cplx(0.0, -(1.0 + c.delta)) * 0.5 - 0.5 * c.eta * 0.5;
  EXPECT_LT(std::abs(d2 - expected2), 1e-8);
}

TEST(DeepQuantum, ValidatesRates) {
  DeepQuantumParams p;
  p.gamma = 0.0;
  EXPECT_THROW(build_deep_quantum_sl(p, 4), Error);
  p.gamma = 10.0;
  EXPECT_EQ(build_deep_quantum_sl(p, 4).dim(), 16);
}
