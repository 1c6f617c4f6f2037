#pragma once

// Wigner functions, amplitude-death detection, position correlations and
// frequency-locking classifiers.
//
// Wigner convention: W(alpha) = (2/pi) Tr[rho D(alpha) P D(alpha)^dag] with
// parity P, normalised as int W d^2 alpha = 1. Radial functions are phase
// averages over arg(alpha) at |alpha| = radius.

#include <string>
#include <string_view>
#include <vector>

#include "qsync/dynamics.hpp"

namespace qsync {

struct WignerRadial {
  std::vector<double> radii;
  std::vector<double> values;
  /// Set when the grid stops short of 2(r + 2) for the supplied scale.
  bool grid_warning = false;

  /// 2 pi int W(rho) rho d rho by the trapezoid rule.
  double normalization() const;
};

/// 121 points on [0, 2r + 4].
std::vector<double> default_wigner_grid(double r, int points = 241);

WignerRadial wigner_radial(const DensityMatrix& rho, const std::vector<double>& r_grid, double scale_r = 0.0);
/// Uses default_wigner_grid(scale_r).
WignerRadial wigner_radial(const DensityMatrix& rho, double scale_r);

/// Full phase-space Wigner function at a single point.
double wigner_point(const DensityMatrix& rho, cplx alpha);
/// W on the grid alpha = x_i + i y_j, returned as values(i, j).
Eigen::MatrixXd wigner_2d(const DensityMatrix& rho, const std::vector<double>& xs, const std::vector<double>& ys);

/// Radial Wigner function of a Fock-diagonal state, closed-form Laguerre sum.
double wigner_radial_fock(const std::vector<double>& populations, double radius);

struct AmplitudeDeath {
  bool dead = false;
  /// W(0) - max over radii beyond the first grid step.
  double margin = 0.0;
};

AmplitudeDeath is_amplitude_death(const WignerRadial& w);

/// Pearson correlation of x_k = a_k + a_k^dag for a two-oscillator state.
double pearson_sigma(const DensityMatrix& rho);

struct SyncClassification {
  enum class Label { frequency_locked, amplitude_death, unclassified };
  Label label = Label::unclassified;
  double omega1 = 0.0;
  double omega2 = 0.0;
  double tolerance = 0.0;
  double domega = 0.0;
  AmplitudeDeath ad1;
  AmplitudeDeath ad2;
  double sigma = 0.0;
};

std::string_view to_string(SyncClassification::Label label);

struct LockingOptions {
  /// Scale for the Wigner grid (limit-cycle radius r).
  double r = 1.0;
  /// Locking tolerance; <= 0 selects max(2 dw, 1e-3).
  double tolerance = 0.0;
  CorrelationSpectrumOptions spectrum{};
  SteadyStateOptions steady{};
};

/// Classifies a time-independent two-oscillator model. Amplitude death takes
/// precedence over frequency locking.
SyncClassification coupled_frequency_locking(const Liouvillian& L, const LockingOptions& opt = {});

struct BandwidthProbe {
  double omega_d;
  double observed;
  double tolerance;
  bool locked;
};

struct BandwidthResult {
  double bandwidth = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::vector<BandwidthProbe> probes;
  /// Empty when the scan bracketed a locked interval cleanly.
  std::string diagnostic;
};

struct BandwidthOptions {
  /// Truncation for the approximate model.
  int N = 20;
  /// Fixed locking tolerance; <= 0 selects max(2 dw, 1e-3) per probe.
  double tolerance = 0.0;
  /// Bisection stops when the bracket is narrower than this.
  double refine = 1e-3;
  DrivenOptions driven{};
};

/// Width of the contiguous locked interval of drive frequencies for the
/// approximate model with parameters `p` (p.omega_d is ignored).
BandwidthResult quantum_bandwidth_scan(const DvdpParams& p, const std::vector<double>& omega_grid,
                                       const BandwidthOptions& opt = {});

}  // namespace qsync
