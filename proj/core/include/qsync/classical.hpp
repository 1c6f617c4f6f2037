#pragma once

// Classical driven Duffing-van der Pol oscillators: direct integration of the
// second-order equations, averaged complex-amplitude equations, closed-form
// averaging / harmonic-balance / coupled-stability results and trajectory
// statistics.
//
// Single oscillator: x'' + x = lambda (r^2 - x^2) x' - beta x^3 + F cos(omega_d t),
// with y = x' and alpha = (x + i y)/2.

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include <Eigen/Core>

#include "qsync/models.hpp"

namespace qsync {

struct ClassicalState {
  double x = 0.0;
  double y = 0.0;

  std::complex<double> alpha() const { return {0.5 * x, 0.5 * y}; }
  static ClassicalState from_alpha(std::complex<double> a) { return {2.0 * a.real(), 2.0 * a.imag()}; }
};

struct PolarState {
  double R1 = 0.0;
  double R2 = 0.0;
  /// Phase difference arg(alpha_1) - arg(alpha_2).
  double phi = 0.0;
};

/// Uniform sampling grid [t0, t1] with spacing dt.
struct TimeSpan {
  double t0 = 0.0;
  double t1 = 0.0;
  double dt = 0.05;
};

struct ClassicalOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  double blowup = 1e6;
  /// Samples with t < t0 + transient are flagged as transient. Negative selects 50/lambda.
  double transient = -1.0;
};

struct Trajectory {
  std::vector<double> times;
  /// One row per sample: (x1, y1[, x2, y2]).
  Eigen::MatrixXd states;
  double dt = 0.0;
  std::size_t transient_cut = 0;
  double rtol = 0.0;
  double atol = 0.0;

  int oscillators() const { return static_cast<int>(states.cols() / 2); }
  std::size_t size() const { return times.size(); }
  ClassicalState state(std::size_t i, int k = 0) const {
    return {states(static_cast<Eigen::Index>(i), 2 * k), states(static_cast<Eigen::Index>(i), 2 * k + 1)};
  }
  std::complex<double> alpha(std::size_t i, int k = 0) const { return state(i, k).alpha(); }
  /// Position samples of oscillator k from the transient cut on.
  std::vector<double> positions(int k = 0) const;
};

Trajectory integrate_dvdp(const DvdpParams& p, const TimeSpan& span, ClassicalState s0,
                          const ClassicalOptions& opt = {});

enum class CoupledKind {
  /// x1'' + lambda (x1^2 - r^2) x1' + x1 + beta x1^3 = (eta/2)(x2' - x1') and the same for
  /// oscillator 2 with (1 + Delta) x2.
  dissipative,
  /// Unaveraged vdP pair in complex form with the exchange coupling -i g alpha_other.
  reactive_vdp,
  /// Averaged Stuart-Landau pair with i g (alpha_other - alpha_self).
  reactive_sl,
};

Trajectory integrate_coupled(const CoupledParams& p, CoupledKind kind, const TimeSpan& span,
                             std::array<ClassicalState, 2> s0, const ClassicalOptions& opt = {});

/// Averaged single-oscillator equation; order 1 is Stuart-Landau, order 2 adds
/// the lambda^2 frequency and amplitude corrections.
Trajectory integrate_averaged(std::complex<double> alpha0, const DvdpParams& p, int order, const TimeSpan& span,
                              const ClassicalOptions& opt = {});
/// Averaged dissipatively coupled pair (first order in lambda), Duffing shifts included.
Trajectory integrate_averaged(std::array<std::complex<double>, 2> alpha0, const CoupledParams& p,
                              const TimeSpan& span, const ClassicalOptions& opt = {});

/// Right-hand side of the averaged coupled pair; exposed for stability checks.
std::array<std::complex<double>, 2> averaged_coupled_rhs(std::array<std::complex<double>, 2> a,
                                                         const CoupledParams& p);

// ----------------------------------------------------------------- analytics

/// Lindstedt frequency 1 - lambda^2/16. Accuracy degrades past lambda ~ 1.
double pl_frequency(double lambda);
/// First-order Lindstedt solution 2 cos(w t) + lambda sin^3(w t) (r = 1).
double pl_solution(double lambda, double t);

/// Harmonic-balance locking bandwidth in scaled units.
double hb_bandwidth(double lambda_bar, double beta_bar, double F_bar);
/// Half-width omega_c of the critical interval (per unit F/lambda).
double hb_critical_frequency(double lambda, double beta, double r);

/// Minimum beta_bar for bandwidth enhancement; +infinity when lambda_bar >= 1.
double enhancement_threshold(double lambda_bar);
inline constexpr double kNoEnhancement = std::numeric_limits<double>::infinity();

/// Largest |Delta| that still locks: eta for eta <= lambda, sqrt(lambda (2 eta - lambda)) beyond.
double coupled_sync_boundary(double lambda, double eta);

struct LockedSolution {
  double R_star = 0.0;
  double phi_star = 0.0;
};
/// Stable locked fixed point of the averaged pair (r = 1).
LockedSolution locked_solution(double lambda, double eta, double delta);

bool amplitude_death_condition(double lambda, double eta, double delta);
/// Eigenvalues of the averaged pair linearized about the origin.
std::array<std::complex<double>, 4> stability_eigenvalues(double lambda, double eta, double omega1, double omega2);
/// Largest real part over stability_eigenvalues.
double max_growth_rate(double lambda, double eta, double omega1, double omega2);

/// Integral of Delta_max over the coupling range 0..eta_max (eta_max > lambda).
double total_bandwidth(double lambda, double eta_max);

/// Polar-form vector field (R1', R2', phi') of the averaged coupled pair with
/// second-order vdP and Duffing phase corrections. Radii in units of r = 1.
PolarState polar_rhs(const PolarState& s, double lambda, double beta, double eta, double delta);

// ---------------------------------------------------------------- statistics

struct PearsonOptions {
  /// Samples skipped after trajectory.transient_cut.
  std::size_t extra_cut = 0;
  std::size_t M = 10000;
  std::size_t stride = 1;
};

/// Sample Pearson coefficient of (x1, x2) pairs taken after the transient.
double trajectory_pearson(const Trajectory& traj, const PearsonOptions& opt = {});
/// Plain sample Pearson coefficient.
double pearson(const std::vector<double>& a, const std::vector<double>& b);

enum class FrequencyMethod { zero_crossings, fft_peak };

/// Mean angular frequency of x_k after the transient.
double classical_observed_frequency(const Trajectory& traj, int k = 0,
                                    FrequencyMethod method = FrequencyMethod::zero_crossings);

struct ClassicalBandwidthOptions {
  /// Locking threshold on |omega_obs - omega_d|.
  double threshold = 1e-3;
  double settle = 400.0;
  double window = 20000.0;
  double dt = 0.1;
  /// Bisection resolution on the edges.
  double refine = 1e-4;
  ClassicalOptions ode{};
};

struct ClassicalBandwidthResult {
  double bandwidth = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  /// False when the locked run touches the grid edge.
  bool bracketed = true;
};

/// True when the driven oscillator at omega_d locks to the drive.
bool classical_is_locked(const DvdpParams& p, const ClassicalBandwidthOptions& opt = {});

/// Width of the contiguous locked omega_d interval containing the best-locked grid point
/// (p.omega_d ignored).
ClassicalBandwidthResult classical_bandwidth_scan(const DvdpParams& p, const std::vector<double>& omega_grid,
                                                  const ClassicalBandwidthOptions& opt = {});

// --------------------------------------------------------- coupled locking

enum class ClassicalSync { locked, amplitude_death, drifting };

struct ClassicalSyncOptions {
  double t_end = 3000.0;
  double dt = 0.1;
  double death_amplitude = 1e-4;
  double lock_threshold = 1e-3;
  std::uint64_t seed = 12345;
  ClassicalOptions ode{};
};

/// Classifies the long-time state of the averaged dissipative pair from a seeded
/// random start in the annulus 0.5 <= |alpha| <= 1.5.
ClassicalSync classify_averaged_pair(const CoupledParams& p, const ClassicalSyncOptions& opt = {});

}  // namespace qsync
