#include "qsync/classical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "qsync/dynamics.hpp"
#include "qsync/ode.hpp"

namespace qsync {

namespace {

using cplx = std::complex<double>;
using VecR = Eigen::VectorXd;
constexpr cplx I1{0.0, 1.0};

OdeOptions ode_options(const ClassicalOptions& o) {
  OdeOptions out;
  out.rtol = o.rtol;
  out.atol = o.atol;
  out.blowup = o.blowup;
  return out;
}

void check_span(const TimeSpan& s) {
  if (!std::isfinite(s.t0) || !std::isfinite(s.t1) || !(s.t1 > s.t0))
    throw Error(ErrorKind::invalid_argument, "time span needs t1 > t0");
  if (!(s.dt > 0.0)) throw Error(ErrorKind::invalid_argument, "sample spacing must be > 0");
}

template <class Rhs>
Trajectory sample(Rhs&& rhs, VecR y0, const TimeSpan& span, double lambda, const ClassicalOptions& opt) {
  check_span(span);
  for (Eigen::Index i = 0; i < y0.size(); ++i)
    if (!std::isfinite(y0(i))) throw Error(ErrorKind::invalid_argument, "non-finite initial state");
  const auto n = static_cast<std::size_t>(std::floor((span.t1 - span.t0) / span.dt + 1e-9)) + 1;
  Trajectory tr;
  tr.dt = span.dt;
  tr.rtol = opt.rtol;
  tr.atol = opt.atol;
  tr.times.resize(n);
  for (std::size_t k = 0; k < n; ++k) tr.times[k] = span.t0 + static_cast<double>(k) * span.dt;
  tr.states.resize(static_cast<Eigen::Index>(n), y0.size());
  integrate_dopri5(
      rhs, span.t0, std::move(y0), tr.times,
      [&](std::size_t k, double, const VecR& y) {
        tr.states.row(static_cast<Eigen::Index>(k)) = y.transpose();
        return true;
      },
      ode_options(opt));
  const double cut = opt.transient >= 0.0 ? opt.transient : (lambda > 0.0 ? 50.0 / lambda : 0.0);
  tr.transient_cut = std::min(n, static_cast<std::size_t>(std::ceil(cut / span.dt - 1e-9)));
  return tr;
}

inline cplx alpha_of(const VecR& y, int k) { return {0.5 * y(2 * k), 0.5 * y(2 * k + 1)}; }
inline void store(VecR& dy, int k, cplx da) {
  dy(2 * k) = 2.0 * da.real();
  dy(2 * k + 1) = 2.0 * da.imag();
}

void check_coupled(const CoupledParams& p) {
  for (double v : {p.lambda, p.r, p.delta, p.eta, p.g, p.beta})
    if (!std::isfinite(v)) throw Error(ErrorKind::invalid_argument, "non-finite coupled parameter");
  if (p.lambda < 0.0 || p.r <= 0.0 || p.eta < 0.0)
    throw Error(ErrorKind::invalid_argument, "coupled parameters need lambda >= 0, r > 0, eta >= 0");
}

}  // namespace

std::vector<double> Trajectory::positions(int k) const {
  if (k < 0 || k >= oscillators()) throw Error(ErrorKind::invalid_argument, "oscillator index out of range");
  std::vector<double> out;
  for (std::size_t i = transient_cut; i < times.size(); ++i) out.push_back(states(static_cast<Eigen::Index>(i), 2 * k));
  return out;
}

Trajectory integrate_dvdp(const DvdpParams& p, const TimeSpan& span, ClassicalState s0, const ClassicalOptions& opt) {
  p.validate();
  const double r2 = p.r * p.r;
  auto rhs = [&](double t, const VecR& y, VecR& dy) {
    const double x = y(0), v = y(1);
    dy(0) = v;
    dy(1) = -x + p.lambda * (r2 - x * x) * v - p.beta * x * x * x + p.F * std::cos(p.omega_d * t);
  };
  VecR y0(2);
  y0 << s0.x, s0.y;
  return sample(rhs, std::move(y0), span, p.lambda, opt);
}

Trajectory integrate_coupled(const CoupledParams& p, CoupledKind kind, const TimeSpan& span,
                             std::array<ClassicalState, 2> s0, const ClassicalOptions& opt) {
  check_coupled(p);
  const double r2 = p.r * p.r;
  VecR y0(4);
  y0 << s0[0].x, s0[0].y, s0[1].x, s0[1].y;
  switch (kind) {
    case CoupledKind::dissipative: {
      auto rhs = [&](double, const VecR& y, VecR& dy) {
        const double x1 = y(0), v1 = y(1), x2 = y(2), v2 = y(3);
        dy(0) = v1;
        dy(1) = -p.lambda * (x1 * x1 - r2) * v1 - x1 - p.beta * x1 * x1 * x1 + 0.5 * p.eta * (v2 - v1);
        dy(2) = v2;
        dy(3) = -p.lambda * (x2 * x2 - r2) * v2 - (1.0 + p.delta) * x2 - p.beta * x2 * x2 * x2 +
                0.5 * p.eta * (v1 - v2);
      };
      return sample(rhs, std::move(y0), span, p.lambda, opt);
    }
    case CoupledKind::reactive_vdp: {
      DvdpParams single;
      single.lambda = p.lambda;
      single.beta = p.beta;
      single.r = p.r;
      auto rhs = [&, single](double t, const VecR& y, VecR& dy) {
        const cplx a1 = alpha_of(y, 0), a2 = alpha_of(y, 1);
        store(dy, 0, mean_field_rhs_exact(a1, single, t) - I1 * p.g * a2);
        store(dy, 1, mean_field_rhs_exact(a2, single, t) - I1 * p.delta * a2 - I1 * p.g * a1);
      };
      return sample(rhs, std::move(y0), span, p.lambda, opt);
    }
    case CoupledKind::reactive_sl: {
      auto rhs = [&](double, const VecR& y, VecR& dy) {
        const cplx a1 = alpha_of(y, 0), a2 = alpha_of(y, 1);
        const double n1 = std::norm(a1), n2 = std::norm(a2);
        store(dy, 0, -I1 * a1 + 0.5 * p.lambda * (r2 - n1) * a1 - I1 * (1.5 * p.beta * n1) * a1 + I1 * p.g * (a2 - a1));
        store(dy, 1,
              -I1 * (1.0 + p.delta) * a2 + 0.5 * p.lambda * (r2 - n2) * a2 - I1 * (1.5 * p.beta * n2) * a2 +
                  I1 * p.g * (a1 - a2));
      };
      return sample(rhs, std::move(y0), span, p.lambda, opt);
    }
  }
  throw Error(ErrorKind::invalid_argument, "unknown coupling kind");
}

Trajectory integrate_averaged(cplx alpha0, const DvdpParams& p, int order, const TimeSpan& span,
                              const ClassicalOptions& opt) {
  p.validate();
  if (order != 1 && order != 2) throw Error(ErrorKind::invalid_argument, "averaging order must be 1 or 2");
  const double r2 = p.r * p.r;
  auto rhs = [&](double t, const VecR& y, VecR& dy) {
    const cplx a = alpha_of(y, 0);
    if (order == 2) {
      store(dy, 0, mean_field_rhs_approx(a, p, t));
      return;
    }
    const double n = std::norm(a);
    store(dy, 0,
          I1 * (0.5 * p.F * std::cos(p.omega_d * t)) - I1 * a - I1 * (1.5 * p.beta * n) * a +
              0.5 * p.lambda * (r2 - n) * a);
  };
  VecR y0(2);
  y0 << 2.0 * alpha0.real(), 2.0 * alpha0.imag();
  return sample(rhs, std::move(y0), span, p.lambda, opt);
}

std::array<cplx, 2> averaged_coupled_rhs(std::array<cplx, 2> a, const CoupledParams& p) {
  const double r2 = p.r * p.r;
  const double n1 = std::norm(a[0]), n2 = std::norm(a[1]);
  return {-I1 * a[0] - I1 * (1.5 * p.beta * n1) * a[0] + 0.5 * p.lambda * (r2 - n1) * a[0] + 0.5 * p.eta * (a[1] - a[0]),
          -I1 * (1.0 + p.delta) * a[1] - I1 * (1.5 * p.beta * n2) * a[1] + 0.5 * p.lambda * (r2 - n2) * a[1] +
              0.5 * p.eta * (a[0] - a[1])};
}

Trajectory integrate_averaged(std::array<cplx, 2> alpha0, const CoupledParams& p, const TimeSpan& span,
                              const ClassicalOptions& opt) {
  check_coupled(p);
  auto rhs = [&](double, const VecR& y, VecR& dy) {
    const auto d = averaged_coupled_rhs({alpha_of(y, 0), alpha_of(y, 1)}, p);
    store(dy, 0, d[0]);
    store(dy, 1, d[1]);
  };
  VecR y0(4);
  y0 << 2.0 * alpha0[0].real(), 2.0 * alpha0[0].imag(), 2.0 * alpha0[1].real(), 2.0 * alpha0[1].imag();
  return sample(rhs, std::move(y0), span, p.lambda, opt);
}

// ---------------------------------------------------------------- statistics

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) throw Error(ErrorKind::invalid_argument, "Pearson needs two equal samples of size >= 2");
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma, db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (!(saa / n >= 1e-12) || !(sbb / n >= 1e-12))
    throw Error(ErrorKind::degenerate_variance, "sample variance below 1e-12");
  return sab / std::sqrt(saa * sbb);
}

double trajectory_pearson(const Trajectory& traj, const PearsonOptions& opt) {
  if (traj.oscillators() != 2) throw Error(ErrorKind::invalid_argument, "trajectory_pearson expects two oscillators");
  if (opt.M < 2 || opt.stride < 1) throw Error(ErrorKind::invalid_argument, "Pearson sampling needs M >= 2 and stride >= 1");
  const std::size_t start = traj.transient_cut + opt.extra_cut;
  const std::size_t avail = traj.size() > start ? traj.size() - start : 0;
  if (avail < opt.M * opt.stride)
    throw Error(ErrorKind::invalid_argument, "trajectory has " + std::to_string(avail) + " post-transient samples, need " +
                                                 std::to_string(opt.M * opt.stride));
  std::vector<double> x1(opt.M), x2(opt.M);
  for (std::size_t m = 0; m < opt.M; ++m) {
    const auto i = static_cast<Eigen::Index>(start + m * opt.stride);
    x1[m] = traj.states(i, 0);
    x2[m] = traj.states(i, 2);
  }
  return pearson(x1, x2);
}

double classical_observed_frequency(const Trajectory& traj, int k, FrequencyMethod method) {
  const std::vector<double> x = traj.positions(k);
  if (x.size() < 4) throw Error(ErrorKind::invalid_argument, "too few post-transient samples for a frequency");
  if (method == FrequencyMethod::fft_peak) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    std::vector<cplx> c(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) c[i] = x[i] - mean;
    const Spectrum s = spectrum(c, traj.dt, SpectrumOptions{4, 1.0, false});
    // Real signal: both signs carry the same peak.
    return std::abs(s.peak_frequency);
  }
  // Upward zero crossings, linearly interpolated.
  double first = 0.0, last = 0.0;
  long count = 0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (x[i - 1] < 0.0 && x[i] >= 0.0) {
      const double frac = x[i - 1] / (x[i - 1] - x[i]);
      const double t = (static_cast<double>(i - 1) + frac) * traj.dt;
      if (count == 0) first = t;
      last = t;
      ++count;
    }
  }
  if (count < 2) return 0.0;
  return 2.0 * std::numbers::pi * static_cast<double>(count - 1) / (last - first);
}

bool classical_is_locked(const DvdpParams& p, const ClassicalBandwidthOptions& opt) {
  ClassicalOptions o = opt.ode;
  o.transient = opt.settle;
  const Trajectory tr = integrate_dvdp(p, TimeSpan{0.0, opt.settle + opt.window, opt.dt}, ClassicalState{2.0 * p.r, 0.0}, o);
  return std::abs(classical_observed_frequency(tr) - p.omega_d) <= opt.threshold;
}

ClassicalBandwidthResult classical_bandwidth_scan(const DvdpParams& p, const std::vector<double>& omega_grid,
                                                  const ClassicalBandwidthOptions& opt) {
  if (omega_grid.size() < 2 || !std::is_sorted(omega_grid.begin(), omega_grid.end()))
    throw Error(ErrorKind::invalid_argument, "drive-frequency grid must be increasing with at least 2 points");
  ClassicalBandwidthResult res;
  if (p.F == 0.0) return res;
  auto probe = [&](double wd) {
    DvdpParams q = p;
    q.omega_d = wd;
    return classical_is_locked(q, opt);
  };
  std::vector<char> locked;
  for (double wd : omega_grid) locked.push_back(probe(wd) ? 1 : 0);
  std::size_t lo = 0, len = 0;
  for (std::size_t i = 0; i < locked.size();) {
    if (!locked[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < locked.size() && locked[j]) ++j;
    if (j - i > len) {
      len = j - i;
      lo = i;
    }
    i = j;
  }
  if (len == 0) return res;
  const std::size_t hi = lo + len - 1;
  auto refine = [&](double in, double out) {
    while (std::abs(out - in) > opt.refine) {
      const double mid = 0.5 * (in + out);
      (probe(mid) ? in : out) = mid;
    }
    return 0.5 * (in + out);
  };
  if (lo == 0) {
    res.lower = omega_grid.front();
    res.bracketed = false;
  } else {
    res.lower = refine(omega_grid[lo], omega_grid[lo - 1]);
  }
  if (hi + 1 == omega_grid.size()) {
    res.upper = omega_grid.back();
    res.bracketed = false;
  } else {
    res.upper = refine(omega_grid[hi], omega_grid[hi + 1]);
  }
  res.bandwidth = res.upper - res.lower;
  return res;
}

ClassicalSync classify_averaged_pair(const CoupledParams& p, const ClassicalSyncOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> rad(0.5, 1.5), ang(0.0, 2.0 * std::numbers::pi);
  std::array<cplx, 2> a0;
  for (auto& a : a0) {
    const double R = rad(rng) * p.r;
    a = std::polar(R, ang(rng));
  }
  ClassicalOptions o = opt.ode;
  o.transient = 0.0;
  const Trajectory tr = integrate_averaged(a0, p, TimeSpan{0.0, opt.t_end, opt.dt}, o);
  const std::size_t n = tr.size();
  auto amp = [&](std::size_t i) { return std::max(std::abs(tr.alpha(i, 0)), std::abs(tr.alpha(i, 1))); };
  const double a_end = amp(n - 1), a_mid = amp(n / 2);
  if (a_end < opt.death_amplitude || (a_end < 1e-2 * p.r && a_end < 0.5 * a_mid)) return ClassicalSync::amplitude_death;

  // Mean rotation rates over the last third from unwrapped phases.
  const std::size_t i0 = 2 * n / 3;
  double w[2];
  for (int k = 0; k < 2; ++k) {
    double acc = 0.0;
    for (std::size_t i = i0 + 1; i < n; ++i) acc += std::arg(tr.alpha(i, k) / tr.alpha(i - 1, k));
    w[k] = acc / (tr.times[n - 1] - tr.times[i0]);
  }
  return std::abs(w[0] - w[1]) <= opt.lock_threshold ? ClassicalSync::locked : ClassicalSync::drifting;
}

}  // namespace qsync
