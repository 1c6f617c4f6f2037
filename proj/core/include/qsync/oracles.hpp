#pragma once

// Closed-form deep-quantum references: the adiabatically eliminated two-level
// pair with dissipative coupling, and the three-level reactively coupled
// Stuart-Landau pair to first order in 1/gamma.
//
// Two-level basis ordering is {|00>, |01>, |10>, |11>} with oscillator 1 on the
// left; the detuning sits on oscillator 1.

#include "qsync/observables.hpp"

namespace qsync {

struct TwoLevelSteadyState {
  double rho11 = 0.0;
  double rho22 = 0.0;
  double rho33 = 0.0;
  double rho44 = 0.0;
  cplx rho23{0.0, 0.0};
  double nu = 0.0;

  /// Ground-state population of the reduced state of oscillator 1.
  double reduced_ground() const { return rho11 + rho22; }
  Matrix matrix() const;
  DensityMatrix density() const;
};

TwoLevelSteadyState two_level_steady_state(double delta_bar, double eta_bar);

/// Effective generator on FockSpace{2, 2}:
/// -i Delta [s1+ s1-, .] + D[s1+] + D[s2+] + 2 D[s1-] + 2 D[s2-] + eta D[s1- - s2-].
Liouvillian two_level_liouvillian(double delta_bar, double eta_bar);

/// 2 eta (eta + 1) / (8 eta^2 + 27 eta + (eta + 3) Delta^2 + 27).
double two_level_sigma(double delta_bar, double eta_bar);
/// (rho23 + rho32) / Tr rho evaluated from the state.
double two_level_sigma_from_state(const TwoLevelSteadyState& s);

/// Delta^2 threshold implied by rho11 + rho22 >= 3/4:
/// (27 - 15 eta^2 - 4 eta^3) / ((eta - 1)(eta + 3)). Meaningful for eta > 1.
double two_level_ad_threshold(double eta_bar);
/// The same bound with denominator (eta - 1)(eta - 2), as usually quoted.
double two_level_ad_threshold_printed(double eta_bar);
/// Authoritative test: rho11 + rho22 >= 3/4.
bool two_level_is_ad(double delta_bar, double eta_bar);
/// Coupling at which rho11 + rho22 = 3/4, found by bisection on [lo, hi].
double two_level_ad_boundary(double delta_bar, double lo = 1.0, double hi = 3.0, double tol = 1e-12);

/// Radial Wigner function of the reduced state of oscillator 1.
WignerRadial two_level_wigner(double delta_bar, double eta_bar, const std::vector<double>& radii);

/// O(1/gamma) steady state of two reactively coupled SL oscillators (kappa = 1,
/// Delta = 0) on FockSpace{3, 3}. Throws out_of_validity when gamma is too small.
DensityMatrix reactive_three_level_state(double g, double gamma);
/// Position correlation of reactive_three_level_state.
double reactive_sigma(double g, double gamma);

}  // namespace qsync
