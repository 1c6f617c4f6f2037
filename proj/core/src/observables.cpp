#include "qsync/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace qsync {

namespace {

constexpr double kTwoOverPi = 2.0 / std::numbers::pi;

// e^{-x/2} L_n^{(k)}(x) for n = 0..nmax via the three-term recurrence.
std::vector<double> scaled_laguerre(int nmax, int k, double x) {
  std::vector<double> out(static_cast<std::size_t>(nmax + 1));
  const double e = std::exp(-0.5 * x);
  out[0] = e;
  if (nmax >= 1) out[1] = e * (1.0 + k - x);
  for (int j = 1; j < nmax; ++j)
    out[static_cast<std::size_t>(j + 1)] =
        ((2.0 * j + 1.0 + k - x) * out[static_cast<std::size_t>(j)] - (j + k) * out[static_cast<std::size_t>(j - 1)]) /
        (j + 1.0);
  return out;
}

void require_single(const DensityMatrix& rho, const char* what) {
  if (rho.space().num_factors() != 1)
    throw Error(ErrorKind::invalid_argument, std::string(what) + " expects a single-oscillator state");
}

}  // namespace

double WignerRadial::normalization() const {
  double acc = 0.0;
  for (std::size_t i = 1; i < radii.size(); ++i) {
    const double f0 = values[i - 1] * radii[i - 1], f1 = values[i] * radii[i];
    acc += 0.5 * (f0 + f1) * (radii[i] - radii[i - 1]);
  }
  return 2.0 * std::numbers::pi * acc;
}

std::vector<double> default_wigner_grid(double r, int points) {
  if (points < 2) throw Error(ErrorKind::invalid_argument, "Wigner grid needs at least 2 points");
  const double rmax = 2.0 * r + 4.0;
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = rmax * i / (points - 1);
  return g;
}

double wigner_radial_fock(const std::vector<double>& populations, double radius) {
  const int nmax = static_cast<int>(populations.size()) - 1;
  if (nmax < 0) return 0.0;
  const std::vector<double> lag = scaled_laguerre(nmax, 0, 4.0 * radius * radius);
  double acc = 0.0;
  for (int n = 0; n <= nmax; ++n)
    acc += (n % 2 ? -1.0 : 1.0) * populations[static_cast<std::size_t>(n)] * lag[static_cast<std::size_t>(n)];
  return kTwoOverPi * acc;
}

WignerRadial wigner_radial(const DensityMatrix& rho, const std::vector<double>& r_grid, double scale_r) {
  require_single(rho, "wigner_radial");
  if (r_grid.empty()) throw Error(ErrorKind::invalid_argument, "empty Wigner grid");
  std::vector<double> pops(static_cast<std::size_t>(rho.space().dim()));
  for (int n = 0; n < rho.space().dim(); ++n) pops[static_cast<std::size_t>(n)] = rho.data()(n, n).real();
  WignerRadial w;
  w.radii = r_grid;
  w.values.reserve(r_grid.size());
  for (double r : r_grid) {
    if (r < 0.0) throw Error(ErrorKind::invalid_argument, "negative Wigner radius");
    w.values.push_back(wigner_radial_fock(pops, r));
  }
  w.grid_warning = scale_r > 0.0 && r_grid.back() < 2.0 * (scale_r + 2.0) - 1e-12;
  return w;
}

WignerRadial wigner_radial(const DensityMatrix& rho, double scale_r) {
  return wigner_radial(rho, default_wigner_grid(scale_r), scale_r);
}

double wigner_point(const DensityMatrix& rho, cplx alpha) {
  require_single(rho, "wigner_point");
  const int d = rho.space().dim();
  const double x = 4.0 * std::norm(alpha);
  const Matrix& m = rho.data();
  double acc = 0.0;
  std::vector<double> sqrt_fact(static_cast<std::size_t>(d));  // log(n!) / 2
  sqrt_fact[0] = 0.0;
  for (int n = 1; n < d; ++n) sqrt_fact[static_cast<std::size_t>(n)] = sqrt_fact[static_cast<std::size_t>(n - 1)] + 0.5 * std::log(n);
  for (int k = 0; k < d; ++k) {
    // Terms with n - m = k; L_m^{(k)} for m = 0..d-1-k.
    const std::vector<double> lag = scaled_laguerre(d - 1 - k, k, x);
    const cplx two_alpha_k = std::pow(2.0 * alpha, k);
    for (int mm = 0; mm + k < d; ++mm) {
      const int n = mm + k;
      const double sign = mm % 2 ? -1.0 : 1.0;
      const double ratio = std::exp(sqrt_fact[static_cast<std::size_t>(mm)] - sqrt_fact[static_cast<std::size_t>(n)]);
      const double l = lag[static_cast<std::size_t>(mm)];
      if (k == 0)
        acc += sign * m(mm, mm).real() * l;
      else
        acc += 2.0 * sign * ratio * l * (m(mm, n) * two_alpha_k).real();
    }
  }
  return kTwoOverPi * acc;
}

Eigen::MatrixXd wigner_2d(const DensityMatrix& rho, const std::vector<double>& xs, const std::vector<double>& ys) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(ys.size()));
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < ys.size(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = wigner_point(rho, cplx(xs[i], ys[j]));
  return out;
}

AmplitudeDeath is_amplitude_death(const WignerRadial& w) {
  if (w.values.size() < 3) throw Error(ErrorKind::invalid_argument, "Wigner grid too short for amplitude-death test");
  const auto it = std::max_element(w.values.begin(), w.values.end());
  const auto imax = static_cast<std::size_t>(it - w.values.begin());
  const double beyond = *std::max_element(w.values.begin() + 2, w.values.end());
  return AmplitudeDeath{imax <= 1, w.values.front() - beyond};
}

double pearson_sigma(const DensityMatrix& rho) {
  if (rho.space().num_factors() != 2) throw Error(ErrorKind::invalid_argument, "pearson_sigma expects two oscillators");
  const FockOperator a1 = destroy(rho.space(), 0), a2 = destroy(rho.space(), 1);
  const FockOperator x1 = a1 + a1.adjoint(), x2 = a2 + a2.adjoint();
  const double m1 = rho.expect(x1).real(), m2 = rho.expect(x2).real();
  const double v1 = rho.expect(x1 * x1).real() - m1 * m1;
  const double v2 = rho.expect(x2 * x2).real() - m2 * m2;
  if (!(v1 >= 1e-12) || !(v2 >= 1e-12))
    throw Error(ErrorKind::degenerate_variance, "position variance below 1e-12");
  const double cov = rho.expect(x1 * x2).real() - m1 * m2;
  return cov / std::sqrt(v1 * v2);
}

std::string_view to_string(SyncClassification::Label label) {
  switch (label) {
    case SyncClassification::Label::frequency_locked:
      return "frequency_locked";
    case SyncClassification::Label::amplitude_death:
      return "amplitude_death";
    case SyncClassification::Label::unclassified:
      return "unclassified";
  }
  return "unclassified";
}

SyncClassification coupled_frequency_locking(const Liouvillian& L, const LockingOptions& opt) {
  if (L.space().num_factors() != 2) throw Error(ErrorKind::invalid_argument, "coupled_frequency_locking expects two oscillators");
  const DensityMatrix rho = steady_state(L, opt.steady);
  SyncClassification c;
  const auto grid = default_wigner_grid(opt.r);
  c.ad1 = is_amplitude_death(wigner_radial(partial_trace(rho, 0), grid, opt.r));
  c.ad2 = is_amplitude_death(wigner_radial(partial_trace(rho, 1), grid, opt.r));
  try {
    c.sigma = pearson_sigma(rho);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::degenerate_variance) throw;
    c.sigma = std::nan("");
  }
  const Spectrum s1 = correlation_spectrum(L, rho, 0, opt.spectrum);
  const Spectrum s2 = correlation_spectrum(L, rho, 1, opt.spectrum);
  c.omega1 = s1.peak_frequency;
  c.omega2 = s2.peak_frequency;
  c.domega = std::max(s1.domega, s2.domega);
  c.tolerance = opt.tolerance > 0.0 ? opt.tolerance : locking_tolerance(c.domega);
  if (c.ad1.dead && c.ad2.dead)
    c.label = SyncClassification::Label::amplitude_death;
  else if (std::abs(c.omega1 - c.omega2) <= c.tolerance)
    c.label = SyncClassification::Label::frequency_locked;
  else
    c.label = SyncClassification::Label::unclassified;
  return c;
}

BandwidthResult quantum_bandwidth_scan(const DvdpParams& p, const std::vector<double>& omega_grid,
                                       const BandwidthOptions& opt) {
  if (omega_grid.size() < 2) throw Error(ErrorKind::invalid_argument, "bandwidth scan needs at least 2 drive frequencies");
  if (!std::is_sorted(omega_grid.begin(), omega_grid.end()))
    throw Error(ErrorKind::invalid_argument, "drive-frequency grid must be increasing");
  BandwidthResult res;
  if (p.F == 0.0) {
    res.diagnostic = "no drive: bandwidth is zero";
    return res;
  }
  auto probe = [&](double wd) {
    DvdpParams q = p;
    q.omega_d = wd;
    const DrivenResult dr = driven_observed_frequency(build_approx_dvdp(q, opt.N), opt.driven);
    const double tol = opt.tolerance > 0.0 ? opt.tolerance : locking_tolerance(dr.spectrum.domega);
    BandwidthProbe pr{wd, dr.frequency, tol, std::abs(dr.frequency - wd) <= tol};
    res.probes.push_back(pr);
    return pr.locked;
  };
  std::vector<char> locked;
  for (double wd : omega_grid) locked.push_back(probe(wd) ? 1 : 0);

  // Longest contiguous locked run.
  std::size_t best_lo = 0, best_len = 0;
  for (std::size_t i = 0; i < locked.size();) {
    if (!locked[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < locked.size() && locked[j]) ++j;
    if (j - i > best_len) {
      best_len = j - i;
      best_lo = i;
    }
    i = j;
  }
  if (best_len == 0) {
    res.diagnostic = "no locked drive frequency on the grid";
    return res;
  }
  const std::size_t best_hi = best_lo + best_len - 1;
  auto refine = [&](double in, double out) {
    while (std::abs(out - in) > opt.refine) {
      const double mid = 0.5 * (in + out);
      (probe(mid) ? in : out) = mid;
    }
    return 0.5 * (in + out);
  };
  if (best_lo == 0) {
    res.lower = omega_grid.front();
    res.diagnostic = "locked interval reaches the lower grid edge";
  } else {
    res.lower = refine(omega_grid[best_lo], omega_grid[best_lo - 1]);
  }
  if (best_hi + 1 == omega_grid.size()) {
    res.upper = omega_grid.back();
    if (!res.diagnostic.empty()) res.diagnostic += "; ";
    res.diagnostic += "locked interval reaches the upper grid edge";
  } else {
    res.upper = refine(omega_grid[best_hi], omega_grid[best_hi + 1]);
  }
  res.bandwidth = res.upper - res.lower;
  return res;
}

}  // namespace qsync
