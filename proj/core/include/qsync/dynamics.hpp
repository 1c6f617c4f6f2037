#pragma once

// Steady states, time propagation, two-time correlations and power spectra.
//
// Spectrum convention: C(t) = <a^dag(t) a(0)> oscillates as exp(+i w0 t), and
// S(w) = 2 Re int_0^inf exp(-i w t) C(t) dt so that peaks sit at +w0.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qsync/models.hpp"
#include "qsync/ode.hpp"

namespace qsync {

// ---------------------------------------------------------------- subspaces

/// Sorted set of vectorized indices closed under the action of `L`
/// (forward reachability over the sparsity graph) starting from `seeds`.
std::vector<Eigen::Index> reachable_indices(const SparseMatrix& L, const std::vector<Eigen::Index>& seeds);

/// Rows and columns of `L` restricted to `idx` (sorted, unique).
SparseMatrix restrict_to(const SparseMatrix& L, const std::vector<Eigen::Index>& idx);

// ------------------------------------------------------------- steady state

struct SteadyStateOptions {
  /// gmres: ILUT-preconditioned GMRES on the trace-constrained system, with an LU fallback.
  enum class Method { automatic, lu, gmres, inverse_iteration };
  Method method = Method::automatic;
  /// Solve only on the invariant subspace reachable from the diagonal.
  bool reduce = true;
  /// Residual bound relative to the Frobenius norm of L.
  double residual_tol = 1e-9;
  /// Automatic mode switches to inverse iteration above this solved dimension.
  Eigen::Index inverse_iteration_threshold = 40000;
  /// Automatic mode uses GMRES above this solved dimension.
  Eigen::Index iterative_threshold = 1500;
  double ilut_droptol = 1e-3;
  int ilut_fill = 10;
  int gmres_max_iterations = 2000;
  int max_iterations = 50;
};

struct SteadyStateResult {
  DensityMatrix rho;
  /// ||L rho||_2 / ||L||_F
  double residual = 0.0;
  Eigen::Index solved_dim = 0;
  std::string method;
};

SteadyStateResult solve_steady_state(const Liouvillian& L, const SteadyStateOptions& opt = {});
inline DensityMatrix steady_state(const Liouvillian& L, const SteadyStateOptions& opt = {}) {
  return solve_steady_state(L, opt).rho;
}

// -------------------------------------------------------------- propagation

struct PropagateOptions {
  OdeOptions ode{};
  std::vector<FockOperator> expect;
  bool keep_states = true;
};

struct EvolutionResult {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  /// expectations[k][i] = Tr[expect_k rho(t_i)]
  std::vector<std::vector<cplx>> expectations;
  /// max_i |Tr rho(t_i) - 1|
  double max_trace_drift = 0.0;
  OdeStats stats;
};

EvolutionResult propagate(const Liouvillian& L, const DensityMatrix& rho0, const std::vector<double>& t_grid,
                          const PropagateOptions& opt = {});

/// Propagates an arbitrary (possibly non-Hermitian) operator X under L
/// starting at time t0 and records Tr[obs X(t0 + tau_i)].
std::vector<cplx> propagate_trace(const Liouvillian& L, const Matrix& x0, const FockOperator& obs, double t0,
                                  const std::vector<double>& tau, const OdeOptions& opt = {});

// ------------------------------------------------------------- correlations

/// C(tau_i) = Tr[a_k^dag exp(L tau_i)(a_k rho_ss)] for a time-independent L.
std::vector<cplx> two_time_correlation(const Liouvillian& L, const DensityMatrix& rho_ss, int which,
                                       const std::vector<double>& t_grid, const OdeOptions& opt = {});

struct Spectrum {
  std::vector<double> freqs;
  std::vector<double> values;
  /// Grid spacing of `freqs` (finer than `resolution` when zero-padded).
  double domega = 0.0;
  /// 2 pi / T of the underlying correlation window.
  double resolution = 0.0;
  std::size_t peak_index = 0;
  /// Peak location refined by three-point parabolic interpolation.
  double peak_frequency = 0.0;
  double peak_value = 0.0;
};

struct SpectrumOptions {
  /// Zero-padding factor for the FFT (>= 1).
  int pad = 1;
  /// Required |C(T)| / |C(0)| at the end of the window.
  double decay_ratio = 1e-4;
  /// Skip the decay requirement (for correlations with a persistent part).
  bool require_decay = true;
};

/// C sampled at t_n = n dt, n = 0..M-1.
Spectrum spectrum(const std::vector<cplx>& C, double dt, const SpectrumOptions& opt = {});

/// Peak location of sampled values by three-point parabolic interpolation
/// around the discrete maximum; returns {index, location, value}.
struct Peak {
  std::size_t index;
  double location;
  double value;
};
Peak parabolic_peak(const std::vector<double>& x, const std::vector<double>& y);

struct CorrelationSpectrumOptions {
  double dt = 0.1;
  /// Initial window; doubled until C decays or `t_max` is reached.
  double t_initial = 100.0;
  double t_max = 20000.0;
  int pad = 4;
  double decay_ratio = 1e-4;
  OdeOptions ode{};
};

/// Adaptive-window steady-state spectrum of oscillator `which`.
Spectrum correlation_spectrum(const Liouvillian& L, const DensityMatrix& rho_ss, int which,
                              const CorrelationSpectrumOptions& opt = {});

// ------------------------------------------------------------ driven models

struct DrivenOptions {
  /// Settling time before sampling; rounded up to whole drive periods.
  double settle = 200.0;
  /// Max extra settling periods while the period-to-period distance is too large.
  int max_extra_periods = 400;
  double settle_tol = 1e-5;
  /// Phase anchors per drive period.
  int anchors = 8;
  double dt = 0.1;
  double t_initial = 100.0;
  double t_max = 20000.0;
  int pad = 8;
  double decay_ratio = 1e-4;
  OdeOptions ode{};
};

struct DrivenResult {
  double frequency = 0.0;
  Spectrum spectrum;
  double settle_time = 0.0;
  double settle_distance = 0.0;
  double window = 0.0;
};

/// Observed frequency of a periodically driven oscillator (single factor),
/// from the peak of the phase-averaged spectrum in the periodic regime.
DrivenResult driven_observed_frequency(const Liouvillian& L, const DrivenOptions& opt = {});

/// Default locking tolerance max(2 dw, 1e-3).
inline double locking_tolerance(double domega) { return std::max(2.0 * domega, 1e-3); }

// -------------------------------------------------------------- truncation

struct ConvergeOptions {
  int cap = 60;
  double growth = 1.25;
  double tail_tol = 1e-6;
  double height_rtol = 0.01;
  CorrelationSpectrumOptions spectrum{};
};

struct ConvergeStep {
  int N;
  double peak_frequency;
  double peak_value;
  double domega;
  double tail;
};

struct ConvergeResult {
  int N;
  std::vector<ConvergeStep> history;
};

/// Sum of the populations of the two highest Fock levels, maximised over factors.
double tail_population(const DensityMatrix& rho);

/// Grows N until the steady-state spectrum peak moves by less than dw, its
/// height by less than height_rtol, and the tail population is below tail_tol.
ConvergeResult converge_truncation(const std::function<Liouvillian(int)>& builder, int N_start,
                                   const ConvergeOptions& opt = {});

}  // namespace qsync
