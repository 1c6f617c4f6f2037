#pragma once

// Parameter types and Liouvillian builders for the oscillator models, plus
// the classical mean-field right-hand sides they reproduce for coherent states.

#include <complex>

#include "qsync/superop.hpp"

namespace qsync {

struct DvdpParams {
  double lambda = 0.0;
  double beta = 0.0;
  double r = 1.0;
  double F = 0.0;
  double omega_d = 1.0;

  double lambda_bar() const { return lambda * r * r; }
  double beta_bar() const { return beta * r * r; }
  double F_bar() const { return F / r; }

  /// Throws Error(invalid_argument) on lambda < 0, r <= 0, F < 0, omega_d <= 0 or non-finite input.
  void validate() const;
  static DvdpParams from_bar(double lambda_bar, double beta_bar, double r, double F_bar, double omega_d);
};

struct DimensionalParams {
  double mu = 0.0;
  double zeta = 0.0;
  double omega0 = 1.0;
  double q = 1.0;
  double f = 0.0;
  double Omega_d = 1.0;
  double r = 1.0;

  DvdpParams to_dimensionless() const;
  /// Inverse map for a chosen (omega0, q); r is taken from `p`.
  static DimensionalParams from_dimensionless(const DvdpParams& p, double omega0, double q);
};

struct CoupledParams {
  double lambda = 0.0;
  double r = 1.0;
  double delta = 0.0;
  double eta = 0.0;
  double g = 0.0;
  /// Duffing nonlinearity shared by both oscillators (zero in the reference models).
  double beta = 0.0;

  void validate() const;
};

struct DeepQuantumParams {
  double kappa = 1.0;
  double gamma = 1.0;
  double delta = 0.0;
  double eta = 0.0;

  double delta_bar() const { return delta / kappa; }
  double eta_bar() const { return eta / kappa; }
  void validate() const;
};

struct ApproxTerms {
  /// Include the lambda^2 Hamiltonian corrections; off gives the plain
  /// Stuart-Landau Liouvillian.
  bool second_order = true;
};

/// -i[H,.] + lambda r^2 D[a^dag] + (lambda/2) D[a^2], H with Kerr corrections and
/// the drive -(F/2) cos(omega_d t)(a + a^dag) kept in the time-dependent slot.
Liouvillian build_approx_dvdp(const DvdpParams& p, int N, ApproxTerms terms = {});

/// Unaveraged model: lambda D[a^dag a - a^dag^2/2] + lambda r^2 D[a^dag] + (3 lambda/4) D[a^2]
/// with the matching non-Hermitian-looking but Hermitian Hamiltonian corrections.
Liouvillian build_exact_dvdp(const DvdpParams& p, int N);

/// L_1 + L_2 - i Delta [a2^dag a2, .] + eta D[a1 - a2] with approximate single-oscillator parts.
Liouvillian build_coupled_dissipative(const CoupledParams& p, int N);

/// L_1^exact + L_2^exact - i Delta [a2^dag a2, .] - i g [a1 a2^dag + a1^dag a2, .].
Liouvillian build_coupled_reactive(const CoupledParams& p, int N);

/// Deep-quantum Stuart-Landau pair with dissipative coupling; detuning on oscillator 1:
/// -i Delta [a1^dag a1, .] + kappa (D[a1^dag] + D[a2^dag]) + gamma (D[a1^2] + D[a2^2]) + eta D[a1 - a2].
Liouvillian build_deep_quantum_sl(const DeepQuantumParams& p, int N);

/// Reactively coupled Stuart-Landau pair:
/// -i g [a1^dag a2 + a2^dag a1, .] - i Delta [a2^dag a2, .] + kappa (D[a1^dag] + D[a2^dag]) + gamma (D[a1^2] + D[a2^2]).
Liouvillian build_reactive_sl(double g, double kappa, double gamma, double delta, int N);

/// Averaged complex-amplitude equation (second order in lambda).
std::complex<double> mean_field_rhs_approx(std::complex<double> alpha, const DvdpParams& p, double t);
/// Full unaveraged complex-amplitude equation, alpha = (x + i y)/2.
std::complex<double> mean_field_rhs_exact(std::complex<double> alpha, const DvdpParams& p, double t);

/// Minimum single-oscillator truncation accepted by each builder.
int min_truncation_approx(const DvdpParams& p);
inline constexpr int kMinTruncationExact = 5;

}  // namespace qsync
