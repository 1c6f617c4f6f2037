#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dynamics_internal.hpp"
#include "qsync/dynamics.hpp"

namespace qsync {

namespace {

Vector evolve_to(const detail::ReducedGenerator& gen, Vector x, double t0, double t1, const OdeOptions& ode) {
  if (t1 <= t0) return x;
  auto rhs = [&](double t, const Vector& y, Vector& dy) { gen.apply(t, y, dy); };
  return integrate_dopri5(rhs, t0, std::move(x), std::vector<double>{t1},
                          [](std::size_t, double, const Vector&) { return true; }, ode);
}

}  // namespace

DrivenResult driven_observed_frequency(const Liouvillian& L, const DrivenOptions& opt) {
  if (L.space().num_factors() != 1)
    throw Error(ErrorKind::invalid_argument, "driven_observed_frequency expects a single oscillator");
  if (opt.anchors < 1) throw Error(ErrorKind::invalid_argument, "need at least one phase anchor");

  DrivenResult out;
  if (!L.has_drive()) {
    // Undriven limit: stationary spectrum.
    const DensityMatrix rho = steady_state(L);
    CorrelationSpectrumOptions co;
    co.dt = opt.dt;
    co.t_initial = opt.t_initial;
    co.t_max = opt.t_max;
    co.pad = opt.pad;
    co.decay_ratio = opt.decay_ratio;
    co.ode = opt.ode;
    out.spectrum = correlation_spectrum(L, rho, 0, co);
    out.frequency = out.spectrum.peak_frequency;
    out.window = 2.0 * std::numbers::pi / out.spectrum.resolution;
    return out;
  }

  const int d = L.dim();
  const double omega = L.drive().omega;
  const double period = 2.0 * std::numbers::pi / omega;
  const detail::ReducedGenerator gen(L, {});
  const auto m = gen.size();

  // Start from the undriven steady state when it exists, else from vacuum.
  Matrix rho0 = Matrix::Zero(d, d);
  try {
    rho0 = steady_state(L.without_drive()).data();
  } catch (const Error&) {
    rho0(0, 0) = 1.0;
  }

  const double settle_periods = std::max(1.0, std::ceil(opt.settle / period));
  double t = settle_periods * period;
  Vector x = evolve_to(gen, gen.gather(rho0), 0.0, t, opt.ode);
  double dist = 0.0;
  int extra = 0;
  for (;;) {
    Vector next = evolve_to(gen, x, t, t + period, opt.ode);
    dist = trace_distance(gen.scatter(x), gen.scatter(next));
    x = std::move(next);
    t += period;
    if (dist < opt.settle_tol) break;
    if (++extra > opt.max_extra_periods)
      throw Error(ErrorKind::not_settled,
                  "periodic regime not reached: period-to-period trace distance " + std::to_string(dist));
  }
  out.settle_time = t;
  out.settle_distance = dist;

  // Phase anchors spanning one drive period.
  const int K = opt.anchors;
  std::vector<double> t_anchor(static_cast<std::size_t>(K));
  std::vector<Matrix> rho_anchor;
  {
    std::vector<double> times;
    for (int k = 0; k < K; ++k) times.push_back(t + period * k / K);
    auto rhs = [&](double tt, const Vector& y, Vector& dy) { gen.apply(tt, y, dy); };
    integrate_dopri5(rhs, t, x, times,
                     [&](std::size_t k, double tt, const Vector& y) {
                       t_anchor[k] = tt;
                       rho_anchor.push_back(gen.scatter(y));
                       return true;
                     },
                     opt.ode);
  }

  const FockOperator a = destroy(L.space());
  const FockOperator ad = a.adjoint();
  const Vector w_ad = gen.trace_weights(ad).conjugate();

  // Stacked state: blocks [a rho_k, rho_k] for k = 0..K-1, block k evolves under L(t_k + tau).
  Vector y(2 * K * m);
  std::vector<cplx> a_mean(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    const Matrix& rk = rho_anchor[static_cast<std::size_t>(k)];
    y.segment(2 * k * m, m) = gen.gather(a.data() * rk);
    y.segment((2 * k + 1) * m, m) = gen.gather(rk);
    a_mean[static_cast<std::size_t>(k)] = (a.data() * rk).trace();
  }
  auto rhs = [&](double tau, const Vector& v, Vector& dv) {
    for (int k = 0; k < K; ++k)
      for (int b = 0; b < 2; ++b) {
        const Eigen::Index off = (2 * k + b) * m;
        gen.apply_block(t_anchor[static_cast<std::size_t>(k)] + tau, v.segment(off, m), dv.segment(off, m));
      }
  };
  std::vector<cplx> full, conn;
  auto record = [&](const Vector& v) {
    cplx cf = 0.0, cc = 0.0;
    for (int k = 0; k < K; ++k) {
      const cplx f = w_ad.dot(v.segment(2 * k * m, m));
      const cplx coh = w_ad.dot(v.segment((2 * k + 1) * m, m)) * a_mean[static_cast<std::size_t>(k)];
      cf += f;
      cc += f - coh;
    }
    full.push_back(cf / static_cast<double>(K));
    conn.push_back(cc / static_cast<double>(K));
  };
  record(y);
  const double c0 = std::abs(conn.front());
  double tau = 0.0;
  double target = opt.t_initial;
  for (;;) {
    const auto n_now = full.size() - 1;
    const auto n_target = static_cast<std::size_t>(std::llround(target / opt.dt));
    std::vector<double> times;
    for (std::size_t k = n_now + 1; k <= n_target; ++k) times.push_back(static_cast<double>(k) * opt.dt);
    if (!times.empty()) {
      y = integrate_dopri5(rhs, tau, std::move(y), times,
                           [&](std::size_t, double, const Vector& v) {
                             record(v);
                             return true;
                           },
                           opt.ode);
      tau = times.back();
    }
    double tail = 0.0;
    for (std::size_t i = conn.size() - std::min<std::size_t>(10, conn.size()); i < conn.size(); ++i)
      tail = std::max(tail, std::abs(conn[i]));
    if (c0 == 0.0 || tail < opt.decay_ratio * c0) break;
    if (target >= opt.t_max)
      throw Error(ErrorKind::insufficient_decay,
                  "connected correlation decayed only to " + std::to_string(tail / c0) + " by tau=" + std::to_string(tau));
    target = std::min(2.0 * target, opt.t_max);
  }
  out.window = tau;
  out.spectrum = spectrum(full, opt.dt, SpectrumOptions{opt.pad, opt.decay_ratio, false});
  out.frequency = out.spectrum.peak_frequency;
  return out;
}

}  // namespace qsync
