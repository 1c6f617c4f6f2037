#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include <fftw3.h>

#include "dynamics_internal.hpp"
#include "qsync/dynamics.hpp"

namespace qsync {

namespace {

// FFTW planning is not thread-safe; execution with a private plan is.
std::mutex& fftw_plan_mutex() {
  static std::mutex m;
  return m;
}

std::vector<cplx> forward_fft(std::vector<cplx> data) {
  const int n = static_cast<int>(data.size());
  std::vector<cplx> out(data.size());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(data.data()),
                            reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

double tail_magnitude(const std::vector<cplx>& C) {
  const std::size_t k = std::min<std::size_t>(10, C.size());
  double m = 0.0;
  for (std::size_t i = C.size() - k; i < C.size(); ++i) m = std::max(m, std::abs(C[i]));
  return m;
}

}  // namespace

Peak parabolic_peak(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.empty()) throw Error(ErrorKind::invalid_argument, "peak search needs matching non-empty arrays");
  const auto it = std::max_element(y.begin(), y.end());
  const auto i = static_cast<std::size_t>(it - y.begin());
  Peak p{i, x[i], y[i]};
  if (i == 0 || i + 1 == y.size()) return p;
  const double ym = y[i - 1], y0 = y[i], yp = y[i + 1];
  const double denom = ym - 2.0 * y0 + yp;
  if (!(denom < 0.0)) return p;
  const double delta = 0.5 * (ym - yp) / denom;
  const double h = x[i + 1] - x[i];
  p.location = x[i] + delta * h;
  p.value = y0 - 0.25 * (ym - yp) * delta;
  return p;
}

Spectrum spectrum(const std::vector<cplx>& C, double dt, const SpectrumOptions& opt) {
  if (C.size() < 4) throw Error(ErrorKind::invalid_argument, "correlation needs at least 4 samples");
  if (!(dt > 0.0)) throw Error(ErrorKind::invalid_argument, "sample spacing must be > 0");
  if (opt.pad < 1) throw Error(ErrorKind::invalid_argument, "pad factor must be >= 1");
  const double c0 = std::abs(C.front());
  if (opt.require_decay && c0 > 0.0) {
    const double ratio = std::abs(C.back()) / c0;
    if (!(ratio < opt.decay_ratio))
      throw Error(ErrorKind::insufficient_decay,
                  "correlation decayed only to " + std::to_string(ratio) + " of its initial value");
  }
  const std::size_t M = C.size();
  const std::size_t Mp = M * static_cast<std::size_t>(opt.pad);
  std::vector<cplx> buf(Mp, cplx(0.0));
  std::copy(C.begin(), C.end(), buf.begin());
  const std::vector<cplx> F = forward_fft(std::move(buf));

  Spectrum s;
  s.domega = 2.0 * std::numbers::pi / (static_cast<double>(Mp) * dt);
  s.resolution = 2.0 * std::numbers::pi / (static_cast<double>(M) * dt);
  s.freqs.resize(Mp);
  s.values.resize(Mp);
  // Ascending order: bins Mp/2+1 .. Mp-1 are the negative frequencies.
  const std::size_t half = Mp / 2;
  const std::size_t nneg = Mp - half - 1;
  for (std::size_t q = 0; q < Mp; ++q) {
    const std::size_t k = q < nneg ? half + 1 + q : q - nneg;
    const double w = (k <= half ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(Mp)) * s.domega;
    s.freqs[q] = w;
    s.values[q] = 2.0 * (dt * (F[k] - 0.5 * C.front())).real();
  }
  const Peak p = parabolic_peak(s.freqs, s.values);
  s.peak_index = p.index;
  s.peak_frequency = p.location;
  s.peak_value = p.value;
  return s;
}

Spectrum correlation_spectrum(const Liouvillian& L, const DensityMatrix& rho_ss, int which,
                              const CorrelationSpectrumOptions& opt) {
  if (L.has_drive()) throw Error(ErrorKind::invalid_argument, "correlation_spectrum requires a time-independent Liouvillian");
  if (!(opt.dt > 0.0) || !(opt.t_initial > 0.0)) throw Error(ErrorKind::invalid_argument, "dt and t_initial must be > 0");
  const FockOperator a = destroy(L.space(), which);
  const Matrix x0 = a.data() * rho_ss.data();
  const auto support = detail::nonzero_support(x0);
  if (support.empty()) {
    const std::vector<cplx> zeros(64, cplx(0.0));
    return spectrum(zeros, opt.dt, SpectrumOptions{opt.pad, opt.decay_ratio, false});
  }
  const detail::ReducedGenerator gen(L, support);
  const Vector w = gen.trace_weights(a.adjoint()).conjugate();
  Vector x = gen.gather(x0);
  std::vector<cplx> C{w.dot(x)};
  const double c0 = std::abs(C.front());
  auto rhs = [&](double t, const Vector& y, Vector& dy) { gen.apply(t, y, dy); };

  double t = 0.0;
  double target = opt.t_initial;
  for (;;) {
    const auto n_now = C.size() - 1;
    const auto n_target = static_cast<std::size_t>(std::llround(target / opt.dt));
    std::vector<double> times;
    for (std::size_t k = n_now + 1; k <= n_target; ++k) times.push_back(static_cast<double>(k) * opt.dt);
    if (!times.empty()) {
      x = integrate_dopri5(
          rhs, t, std::move(x), times,
          [&](std::size_t, double, const Vector& y) {
            C.push_back(w.dot(y));
            return true;
          },
          opt.ode);
      t = times.back();
    }
    if (c0 == 0.0 || tail_magnitude(C) < opt.decay_ratio * c0) break;
    if (target >= opt.t_max)
      throw Error(ErrorKind::insufficient_decay,
                  "correlation decayed only to " + std::to_string(tail_magnitude(C) / c0) + " by t=" +
                      std::to_string(t));
    target = std::min(2.0 * target, opt.t_max);
  }
  return spectrum(C, opt.dt, SpectrumOptions{opt.pad, opt.decay_ratio, true});
}

}  // namespace qsync
