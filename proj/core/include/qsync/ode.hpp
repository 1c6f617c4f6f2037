#pragma once

// Dormand-Prince 5(4) with FSAL and the 4th-order continuous extension.
// Works for any Eigen column vector type (real or complex).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "qsync/errors.hpp"

namespace qsync {

struct OdeOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  /// Initial step; 0 selects it automatically.
  double h0 = 0.0;
  double hmax = std::numeric_limits<double>::infinity();
  long max_steps = 50'000'000;
  /// Abort when any |y_i| exceeds this.
  double blowup = std::numeric_limits<double>::infinity();
};

struct OdeStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_calls = 0;
};

namespace detail {

template <class V>
double rms_error(const V& err, const V& y0, const V& y1, const OdeOptions& o) {
  double acc = 0.0;
  const Eigen::Index n = err.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sc = o.atol + o.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double e = std::abs(err[i]) / sc;
    acc += e * e;
  }
  return n > 0 ? std::sqrt(acc / static_cast<double>(n)) : 0.0;
}

template <class V>
double rms_scaled(const V& v, const V& y, const OdeOptions& o) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double e = std::abs(v[i]) / (o.atol + o.rtol * std::abs(y[i]));
    acc += e * e;
  }
  return v.size() > 0 ? std::sqrt(acc / static_cast<double>(v.size())) : 0.0;
}

}  // namespace detail

/// Integrates y' = f(t, y) from (t0, y0), calling observe(k, t_out[k], y) at
/// every requested output time (t_out non-decreasing, t_out[0] >= t0).
/// f has signature void(double t, const V& y, V& dydt).
/// observe may return false to stop early. Returns the state at the end of
/// the final accepted step.
template <class V, class Rhs, class Observer>
V integrate_dopri5(Rhs&& f, double t0, V y, const std::vector<double>& t_out, Observer&& observe,
                   const OdeOptions& opt = {}, OdeStats* stats_out = nullptr) {
  using Scalar = typename V::Scalar;
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;
  constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                   d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                   d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

  OdeStats stats;
  if (t_out.empty()) return y;
  for (std::size_t k = 1; k < t_out.size(); ++k)
    if (t_out[k] < t_out[k - 1]) throw Error(ErrorKind::invalid_argument, "output times must be non-decreasing");
  if (t_out.front() < t0) throw Error(ErrorKind::invalid_argument, "first output time precedes t0");

  const Eigen::Index n = y.size();
  V k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), err(n);
  V r1(n), r2(n), r3(n), r4(n), r5(n);
  auto call = [&](double t, const V& yy, V& out) {
    f(t, yy, out);
    ++stats.rhs_calls;
  };

  double t = t0;
  std::size_t next = 0;
  // Emit outputs that coincide with t0 before stepping.
  while (next < t_out.size() && t_out[next] == t) {
    if (!observe(next, t, static_cast<const V&>(y))) {
      if (stats_out) *stats_out = stats;
      return y;
    }
    ++next;
  }
  if (next == t_out.size()) {
    if (stats_out) *stats_out = stats;
    return y;
  }

  call(t, y, k1);
  const double t_end = t_out.back();
  double h = opt.h0;
  if (h <= 0.0) {
    const double dn0 = detail::rms_scaled(y, y, opt);
    const double dn1 = detail::rms_scaled(k1, y, opt);
    double h0 = (dn0 < 1e-5 || dn1 < 1e-5) ? 1e-6 : 0.01 * dn0 / dn1;
    h0 = std::min(h0, t_end - t);
    ytmp = y + Scalar(h0) * k1;
    call(t + h0, ytmp, k2);
    const double dn2 = detail::rms_scaled(V(k2 - k1), y, opt) / h0;
    const double dm = std::max(dn1, dn2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    h = std::min(100.0 * h0, h1);
  }
  h = std::min({h, opt.hmax, t_end - t});
  double fac_max = 5.0;

  while (next < t_out.size()) {
    if (stats.accepted + stats.rejected >= opt.max_steps)
      throw Error(ErrorKind::not_converged, "ODE integration exceeded max_steps at t=" + std::to_string(t));
    const double hmin = 1e-13 * std::max(1.0, std::abs(t));
    if (h < hmin)
      throw Error(ErrorKind::step_underflow, "ODE step size underflow at t=" + std::to_string(t));
    bool last = false;
    if (t + h >= t_end) {
      h = t_end - t;
      last = true;
    }

    ytmp = y + Scalar(h * a21) * k1;
    call(t + c2 * h, ytmp, k2);
    ytmp = y + Scalar(h * a31) * k1 + Scalar(h * a32) * k2;
    call(t + c3 * h, ytmp, k3);
    ytmp = y + Scalar(h * a41) * k1 + Scalar(h * a42) * k2 + Scalar(h * a43) * k3;
    call(t + c4 * h, ytmp, k4);
    ytmp = y + Scalar(h * a51) * k1 + Scalar(h * a52) * k2 + Scalar(h * a53) * k3 + Scalar(h * a54) * k4;
    call(t + c5 * h, ytmp, k5);
    ytmp = y + Scalar(h * a61) * k1 + Scalar(h * a62) * k2 + Scalar(h * a63) * k3 + Scalar(h * a64) * k4 +
           Scalar(h * a65) * k5;
    const double tnew = last ? t_end : t + h;
    call(tnew, ytmp, k6);
    ynew = y + Scalar(h * b1) * k1 + Scalar(h * b3) * k3 + Scalar(h * b4) * k4 + Scalar(h * b5) * k5 +
           Scalar(h * b6) * k6;
    call(tnew, ynew, k7);
    err = Scalar(h * e1) * k1 + Scalar(h * e3) * k3 + Scalar(h * e4) * k4 + Scalar(h * e5) * k5 +
          Scalar(h * e6) * k6 + Scalar(h * e7) * k7;
    const double en = detail::rms_error(err, y, ynew, opt);

    if (!std::isfinite(en)) {
      ++stats.rejected;
      h *= 0.2;
      fac_max = 1.0;
      continue;
    }
    if (en <= 1.0) {
      ++stats.accepted;
      // Continuous extension coefficients for this step.
      r1 = y;
      r2 = ynew - y;
      r3 = Scalar(h) * k1 - r2;
      r4 = r2 - Scalar(h) * k7 - r3;
      r5 = Scalar(h * d1) * k1 + Scalar(h * d3) * k3 + Scalar(h * d4) * k4 + Scalar(h * d5) * k5 +
           Scalar(h * d6) * k6 + Scalar(h * d7) * k7;
      const double tprev = t;
      t = tnew;
      bool stop = false;
      while (next < t_out.size() && (t_out[next] <= t || (last && next + 1 == t_out.size()))) {
        const double tq = t_out[next];
        if (tq >= t) {
          if (!observe(next, tq, static_cast<const V&>(ynew))) stop = true;
        } else {
          const double th = (tq - tprev) / h, th1 = 1.0 - th;
          ytmp = r1 + Scalar(th) * (r2 + Scalar(th1) * (r3 + Scalar(th) * (r4 + Scalar(th1) * r5)));
          if (!observe(next, tq, static_cast<const V&>(ytmp))) stop = true;
        }
        ++next;
        if (stop) break;
      }
      y.swap(ynew);
      k1.swap(k7);
      const double ymax = y.cwiseAbs().maxCoeff();
      if (!std::isfinite(ymax) || ymax > opt.blowup)
        throw Error(ErrorKind::blow_up, "ODE solution blew up at t=" + std::to_string(t));
      if (stop || last) break;
      const double fac = en == 0.0 ? fac_max : std::min(fac_max, std::max(0.2, 0.9 * std::pow(en, -0.2)));
      h = std::min(h * fac, opt.hmax);
      fac_max = 5.0;
    } else {
      ++stats.rejected;
      h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
      fac_max = 1.0;
    }
  }
  if (stats_out) *stats_out = stats;
  return y;
}

}  // namespace qsync
