#include <algorithm>
#include <initializer_list>
#include <cmath>
#include <string>

#include "qsync/classical.hpp"
#include "qsync/errors.hpp"

namespace qsync {

namespace {

void require_finite(std::initializer_list<double> vs, const char* what) {
  for (double v : vs)
    if (!std::isfinite(v)) throw Error(ErrorKind::invalid_argument, std::string("non-finite argument to ") + what);
}

}  // namespace

double pl_frequency(double lambda) {
  require_finite({lambda}, "pl_frequency");
  if (lambda < 0.0) throw Error(ErrorKind::invalid_argument, "pl_frequency needs lambda >= 0");
  return 1.0 - lambda * lambda / 16.0;
}

double pl_solution(double lambda, double t) {
  const double w = pl_frequency(lambda);
  const double s = std::sin(w * t);
  return 2.0 * std::cos(w * t) + lambda * s * s * s;
}

double hb_critical_frequency(double lambda, double beta, double r) {
  require_finite({lambda, beta, r}, "hb_critical_frequency");
  if (!(r > 0.0)) throw Error(ErrorKind::invalid_argument, "r must be > 0");
  const double q = 1.0 + 3.0 * beta * r * r;
  return std::sqrt((9.0 * beta * beta + lambda * lambda * q) / (16.0 * r * r * q * q));
}

double hb_bandwidth(double lambda_bar, double beta_bar, double F_bar) {
  require_finite({lambda_bar, beta_bar, F_bar}, "hb_bandwidth");
  if (!(lambda_bar > 0.0)) throw Error(ErrorKind::invalid_argument, "hb_bandwidth is singular at lambda_bar = 0");
  if (beta_bar < 0.0 || F_bar < 0.0) throw Error(ErrorKind::invalid_argument, "hb_bandwidth needs beta_bar, F_bar >= 0");
  const double q = 1.0 + 3.0 * beta_bar;
  return F_bar / (2.0 * lambda_bar * q) * std::sqrt(lambda_bar * lambda_bar * q + 9.0 * beta_bar * beta_bar);
}

double enhancement_threshold(double lambda_bar) {
  require_finite({lambda_bar}, "enhancement_threshold");
  if (lambda_bar < 0.0) throw Error(ErrorKind::invalid_argument, "enhancement_threshold needs lambda_bar >= 0");
  if (lambda_bar >= 1.0) return kNoEnhancement;
  const double l2 = lambda_bar * lambda_bar;
  return l2 / (3.0 * (1.0 - l2));
}

double coupled_sync_boundary(double lambda, double eta) {
  require_finite({lambda, eta}, "coupled_sync_boundary");
  if (!(lambda > 0.0) || eta < 0.0) throw Error(ErrorKind::invalid_argument, "coupled_sync_boundary needs lambda > 0, eta >= 0");
  return eta <= lambda ? eta : std::sqrt(lambda * (2.0 * eta - lambda));
}

LockedSolution locked_solution(double lambda, double eta, double delta) {
  require_finite({lambda, eta, delta}, "locked_solution");
  if (!(lambda > 0.0) || eta < 0.0) throw Error(ErrorKind::invalid_argument, "locked_solution needs lambda > 0, eta >= 0");
  if (delta == 0.0) return {1.0, 0.0};
  if (std::abs(delta) > eta)
    throw Error(ErrorKind::no_locked_solution, "|Delta| exceeds eta: no phase-locked solution");
  const double s = delta / eta;
  const double R2 = 1.0 + (eta / lambda) * (std::sqrt(1.0 - s * s) - 1.0);
  if (!(R2 > 0.0)) throw Error(ErrorKind::no_locked_solution, "locked amplitude vanishes: amplitude-death regime");
  return {std::sqrt(R2), std::asin(s)};
}

bool amplitude_death_condition(double lambda, double eta, double delta) {
  require_finite({lambda, eta, delta}, "amplitude_death_condition");
  return eta > lambda && delta * delta > lambda * (2.0 * eta - lambda);
}

std::array<std::complex<double>, 4> stability_eigenvalues(double lambda, double eta, double omega1, double omega2) {
  require_finite({lambda, eta, omega1, omega2}, "stability_eigenvalues");
  using cplx = std::complex<double>;
  const double d = omega2 - omega1;
  const cplx root = std::sqrt(cplx(eta * eta - d * d, 0.0));
  const cplx rot(0.0, 0.5 * (omega1 + omega2));
  // Eigenvalues of the complex 2x2 generator and their conjugates (real 4x4 system).
  const cplx h1 = 0.5 * (lambda - eta + root) - rot;
  const cplx h2 = 0.5 * (lambda - eta - root) - rot;
  return {h1, h2, std::conj(h1), std::conj(h2)};
}

double max_growth_rate(double lambda, double eta, double omega1, double omega2) {
  double m = -HUGE_VAL;
  for (const auto& h : stability_eigenvalues(lambda, eta, omega1, omega2)) m = std::max(m, h.real());
  return m;
}

double total_bandwidth(double lambda, double eta_max) {
  require_finite({lambda, eta_max}, "total_bandwidth");
  if (!(lambda > 0.0) || !(eta_max > lambda))
    throw Error(ErrorKind::invalid_argument, "total_bandwidth needs 0 < lambda < eta_max");
  return lambda * lambda / 6.0 + std::sqrt(lambda) * std::pow(2.0 * eta_max - lambda, 1.5) / 3.0;
}

PolarState polar_rhs(const PolarState& s, double lambda, double beta, double eta, double delta) {
  if (!(s.R1 > 0.0) || !(s.R2 > 0.0)) throw Error(ErrorKind::invalid_argument, "polar form needs R1, R2 > 0");
  const double q1 = s.R1 * s.R1, q2 = s.R2 * s.R2;
  PolarState d;
  d.R1 = 0.5 * lambda * s.R1 * (1.0 - q1) + 0.5 * eta * (s.R2 * std::cos(s.phi) - s.R1);
  d.R2 = 0.5 * lambda * s.R2 * (1.0 - q2) + 0.5 * eta * (s.R1 * std::cos(s.phi) - s.R2);
  d.phi = delta - lambda * lambda / 8.0 * (6.0 * (q1 - q2) - 5.5 * (q1 * q1 - q2 * q2)) - 1.5 * beta * (q1 - q2) -
          0.5 * eta * (s.R1 / s.R2 + s.R2 / s.R1) * std::sin(s.phi);
  return d;
}

}  // namespace qsync
