#include "qsync/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>
#include <set>
#include <thread>

#include "qsync/classical.hpp"
#include "qsync/observables.hpp"
#include "qsync/oracles.hpp"

namespace qsync {

namespace {

using Params = std::map<std::string, double>;

const std::vector<std::string> kDvdp{"lambda", "beta", "r", "F", "omega_d", "N", "omega_min", "omega_max", "omega_count"};
const std::vector<std::string> kCoupled{"lambda", "r", "delta", "eta", "g", "beta", "N"};

double get(const Params& p, const std::string& k, double dflt) {
  const auto it = p.find(k);
  return it == p.end() ? dflt : it->second;
}

DvdpParams dvdp_from(const Params& p) {
  DvdpParams d;
  d.lambda = get(p, "lambda", 0.1);
  d.beta = get(p, "beta", 0.0);
  d.r = get(p, "r", 1.0);
  d.F = get(p, "F", 0.0);
  d.omega_d = get(p, "omega_d", 1.0);
  return d;
}

CoupledParams coupled_from(const Params& p) {
  CoupledParams c;
  c.lambda = get(p, "lambda", 0.1);
  c.r = get(p, "r", 1.0);
  c.delta = get(p, "delta", 0.0);
  c.eta = get(p, "eta", 0.0);
  c.g = get(p, "g", 0.0);
  c.beta = get(p, "beta", 0.0);
  return c;
}

std::vector<double> omega_grid(const Params& p, double center, double half) {
  const double lo = get(p, "omega_min", center - half), hi = get(p, "omega_max", center + half);
  const int n = static_cast<int>(get(p, "omega_count", 12));
  if (!(hi > lo) || n < 2) throw Error(ErrorKind::invalid_argument, "drive-frequency grid needs omega_max > omega_min and count >= 2");
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  return g;
}

int truncation(const SweepConfig& c, const Params& p, int dflt) {
  int N = static_cast<int>(get(p, "N", c.solver.N > 0 ? c.solver.N : dflt));
  if (N > c.solver.truncation_cap)
    throw Error(ErrorKind::truncation, "truncation " + std::to_string(N) + " exceeds cap " + std::to_string(c.solver.truncation_cap));
  return N;
}

OdeOptions ode_from(const SweepConfig& c) {
  OdeOptions o;
  o.rtol = c.solver.rtol;
  o.atol = c.solver.atol;
  return o;
}

void set_label(CellResult& cell, SyncClassification::Label label) {
  cell.label = std::string(to_string(label));
  cell.value = static_cast<double>(static_cast<int>(label));
}

void eval_two_oscillator(const SweepConfig& c, const Liouvillian& L, double r, CellResult& cell) {
  SteadyStateOptions so;
  const SteadyStateResult ss = solve_steady_state(L, so);
  cell.residual = ss.residual;
  if (c.measure == "sigma") {
    cell.value = pearson_sigma(ss.rho);
  } else if (c.measure == "wigner_peak_margin") {
    const AmplitudeDeath ad = is_amplitude_death(wigner_radial(partial_trace(ss.rho, 0), r));
    cell.value = ad.margin;
    cell.label = ad.dead ? "amplitude_death" : "ring";
  } else {
    LockingOptions lo;
    lo.r = r;
    lo.tolerance = c.solver.locking_threshold;
    lo.spectrum.ode = ode_from(c);
    const SyncClassification sc = coupled_frequency_locking(L, lo);
    set_label(cell, sc.label);
  }
}

void eval_single(const SweepConfig& c, const Params& p, CellResult& cell) {
  const DvdpParams d = dvdp_from(p);
  const bool exact = c.model == "exact_dvdp";
  const int N = truncation(c, p, 20);
  cell.N = N;
  if (c.measure == "bandwidth") {
    BandwidthOptions bo;
    bo.N = N;
    bo.tolerance = c.solver.locking_threshold;
    bo.driven.ode = ode_from(c);
    const BandwidthResult br = quantum_bandwidth_scan(d, omega_grid(p, 1.0, 0.2), bo);
    cell.value = br.bandwidth;
    cell.message = br.diagnostic;
    return;
  }
  const Liouvillian L = exact ? build_exact_dvdp(d, N) : build_approx_dvdp(d, N);
  if (c.measure == "observed_frequency") {
    if (L.has_drive()) {
      DrivenOptions o;
      o.ode = ode_from(c);
      cell.value = driven_observed_frequency(L, o).frequency;
    } else {
      const SteadyStateResult ss = solve_steady_state(L);
      cell.residual = ss.residual;
      CorrelationSpectrumOptions o;
      o.ode = ode_from(c);
      cell.value = correlation_spectrum(L, ss.rho, 0, o).peak_frequency;
    }
    return;
  }
  // wigner_peak_margin
  if (L.has_drive()) throw Error(ErrorKind::invalid_argument, "wigner_peak_margin needs an undriven model (F = 0)");
  const SteadyStateResult ss = solve_steady_state(L);
  cell.residual = ss.residual;
  const AmplitudeDeath ad = is_amplitude_death(wigner_radial(ss.rho, d.r));
  cell.value = ad.margin;
  cell.label = ad.dead ? "amplitude_death" : "ring";
}

void eval_classical(const SweepConfig& c, const Params& p, std::uint64_t seed, CellResult& cell) {
  const double thr = c.solver.locking_threshold > 0.0 ? c.solver.locking_threshold : 1e-3;
  ClassicalOptions co;
  co.rtol = std::min(c.solver.rtol, 1e-9);
  co.atol = std::min(c.solver.atol, 1e-12);
  if (c.model == "classical_hb") {
    cell.value = hb_bandwidth(get(p, "lambda_bar", 0.1), get(p, "beta_bar", 0.0), get(p, "F_bar", 0.1));
    return;
  }
  if (c.model == "classical_dvdp") {
    const DvdpParams d = dvdp_from(p);
    ClassicalBandwidthOptions bo;
    bo.threshold = thr;
    bo.ode = co;
    bo.settle = get(p, "t_settle", bo.settle);
    bo.window = get(p, "t_window", bo.window);
    if (c.measure == "bandwidth") {
      const ClassicalBandwidthResult br = classical_bandwidth_scan(d, omega_grid(p, 1.0, 0.2), bo);
      cell.value = br.bandwidth;
      if (!br.bracketed) cell.message = "locked interval reaches the grid edge";
    } else {
      ClassicalOptions o = co;
      o.transient = bo.settle;
      const Trajectory tr = integrate_dvdp(d, TimeSpan{0.0, bo.settle + bo.window, bo.dt}, ClassicalState{2.0 * d.r, 0.0}, o);
      cell.value = classical_observed_frequency(tr);
    }
    return;
  }
  // classical_coupled
  const CoupledParams cp = coupled_from(p);
  const double t_end = get(p, "t_end", 3000.0);
  if (c.measure == "classification") {
    ClassicalSyncOptions so;
    so.t_end = t_end;
    so.seed = seed;
    so.lock_threshold = thr;
    so.ode = co;
    const ClassicalSync s = classify_averaged_pair(cp, so);
    cell.label = s == ClassicalSync::locked ? "frequency_locked" : s == ClassicalSync::amplitude_death ? "amplitude_death" : "unclassified";
    cell.value = s == ClassicalSync::locked ? 0.0 : s == ClassicalSync::amplitude_death ? 1.0 : 2.0;
    return;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> rad(0.5, 1.5), ang(0.0, 2.0 * std::numbers::pi);
  std::array<ClassicalState, 2> s0;
  for (auto& s : s0) s = ClassicalState::from_alpha(std::polar(rad(rng) * cp.r, ang(rng)));
  const double period = 2.0 * std::numbers::pi;
  const double dt = period / 70.0;
  const std::size_t stride = 10, M = 10000;
  co.transient = cp.lambda > 0.0 ? 50.0 / cp.lambda : 0.0;
  const double t1 = co.transient + dt * static_cast<double>(M * stride + 1);
  const Trajectory tr = integrate_coupled(cp, CoupledKind::reactive_vdp, TimeSpan{0.0, t1, dt}, s0, co);
  cell.value = trajectory_pearson(tr, PearsonOptions{0, M, stride});
}

}  // namespace

std::vector<double> Axis::values() const {
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double f = count > 1 ? static_cast<double>(i) / (count - 1) : 0.0;
    v[static_cast<std::size_t>(i)] = log ? std::exp(std::log(min) + f * (std::log(max) - std::log(min))) : min + f * (max - min);
  }
  if (count > 1) v.back() = max;
  return v;
}

const std::vector<std::string>& sweep_models() {
  static const std::vector<std::string> m{"approx_dvdp",  "exact_dvdp",     "coupled_dissipative", "coupled_reactive",
                                          "deep_quantum", "two_level",      "classical_dvdp",      "classical_hb",
                                          "classical_coupled"};
  return m;
}

std::vector<std::string> model_parameters(const std::string& model) {
  if (model == "approx_dvdp" || model == "exact_dvdp") return kDvdp;
  if (model == "coupled_dissipative" || model == "coupled_reactive") return kCoupled;
  if (model == "deep_quantum") return {"kappa", "gamma", "delta", "eta", "N"};
  if (model == "two_level") return {"delta_bar", "eta_bar"};
  if (model == "classical_dvdp")
    return {"lambda", "beta", "r", "F", "omega_d", "omega_min", "omega_max", "omega_count", "t_settle", "t_window"};
  if (model == "classical_hb") return {"lambda_bar", "beta_bar", "F_bar"};
  if (model == "classical_coupled") return {"lambda", "r", "delta", "eta", "g", "beta", "t_end"};
  return {};
}

std::vector<std::string> model_measures(const std::string& model) {
  if (model == "approx_dvdp") return {"observed_frequency", "bandwidth", "wigner_peak_margin"};
  if (model == "exact_dvdp") return {"observed_frequency", "wigner_peak_margin"};
  if (model == "coupled_dissipative" || model == "coupled_reactive" || model == "deep_quantum" || model == "two_level")
    return {"sigma", "classification", "wigner_peak_margin"};
  if (model == "classical_dvdp") return {"observed_frequency", "bandwidth"};
  if (model == "classical_hb") return {"bandwidth"};
  if (model == "classical_coupled") return {"classification", "sigma"};
  return {};
}

void SweepConfig::validate() const {
  const auto& models = sweep_models();
  if (std::find(models.begin(), models.end(), model) == models.end())
    throw Error(ErrorKind::config, "model: unknown model '" + model + "'");
  const auto measures = model_measures(model);
  if (std::find(measures.begin(), measures.end(), measure) == measures.end())
    throw Error(ErrorKind::config, "measure: '" + measure + "' is not available for model '" + model + "'");
  if (axes.empty() || axes.size() > 2) throw Error(ErrorKind::config, "axes: need one or two axes");
  const auto params = model_parameters(model);
  auto known = [&](const std::string& n) { return std::find(params.begin(), params.end(), n) != params.end(); };
  std::set<std::string> seen;
  for (const Axis& a : axes) {
    if (!known(a.name)) throw Error(ErrorKind::config, "axes: '" + a.name + "' is not a parameter of '" + model + "'");
    if (!seen.insert(a.name).second) throw Error(ErrorKind::config, "axes: duplicate axis '" + a.name + "'");
    if (a.count < 2) throw Error(ErrorKind::config, "axes." + a.name + ".count must be >= 2");
    if (!std::isfinite(a.min) || !std::isfinite(a.max)) throw Error(ErrorKind::config, "axes." + a.name + ": range must be finite");
    if (a.log && !(a.min > 0.0 && a.max > 0.0))
      throw Error(ErrorKind::config, "axes." + a.name + ": log scale needs a positive range");
  }
  for (const auto& [k, v] : fixed) {
    if (!known(k)) throw Error(ErrorKind::config, "fixed: '" + k + "' is not a parameter of '" + model + "'");
    if (seen.count(k)) throw Error(ErrorKind::config, "fixed: '" + k + "' is also an axis");
    if (!std::isfinite(v)) throw Error(ErrorKind::config, "fixed." + k + " must be finite");
  }
  if (solver.truncation_cap < 2) throw Error(ErrorKind::config, "solver.truncation_cap must be >= 2");
  if (solver.N < 0) throw Error(ErrorKind::config, "solver.N must be >= 0");
  if (!(solver.rtol > 0.0) || !(solver.atol > 0.0)) throw Error(ErrorKind::config, "solver tolerances must be > 0");
}

std::size_t SweepResult::failed() const {
  return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](const CellResult& c) { return c.status != "ok"; }));
}

std::uint64_t cell_seed(std::uint64_t seed, std::size_t index) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

CellResult evaluate_cell(const SweepConfig& c, const Params& params, std::uint64_t seed) {
  CellResult cell;
  cell.seed = seed;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (c.model == "approx_dvdp" || c.model == "exact_dvdp") {
      eval_single(c, params, cell);
    } else if (c.model == "coupled_dissipative" || c.model == "coupled_reactive") {
      const CoupledParams cp = coupled_from(params);
      const int N = truncation(c, params, 8);
      cell.N = N;
      CoupledParams q = cp;
      const Liouvillian L = c.model == "coupled_reactive" ? build_coupled_reactive(q, N) : build_coupled_dissipative(q, N);
      eval_two_oscillator(c, L, cp.r, cell);
    } else if (c.model == "deep_quantum") {
      DeepQuantumParams d;
      d.kappa = get(params, "kappa", 1.0);
      d.gamma = get(params, "gamma", 50.0);
      d.delta = get(params, "delta", 0.0);
      d.eta = get(params, "eta", 0.0);
      const int N = truncation(c, params, 4);
      cell.N = N;
      eval_two_oscillator(c, build_deep_quantum_sl(d, N), 0.5, cell);
    } else if (c.model == "two_level") {
      const double dl = get(params, "delta_bar", 0.0), e = get(params, "eta_bar", 0.0);
      cell.N = 2;
      if (c.measure == "sigma") {
        cell.value = two_level_sigma(dl, e);
      } else if (c.measure == "classification") {
        const bool ad = two_level_is_ad(dl, e);
        cell.label = ad ? "amplitude_death" : "unclassified";
        cell.value = ad ? 1.0 : 2.0;
      } else {
        const AmplitudeDeath ad = is_amplitude_death(two_level_wigner(dl, e, default_wigner_grid(0.5)));
        cell.value = ad.margin;
        cell.label = ad.dead ? "amplitude_death" : "ring";
      }
    } else {
      eval_classical(c, params, seed, cell);
    }
  } catch (const Error& e) {
    cell.status = "error:" + std::string(to_string(e.kind()));
    cell.message = e.what();
    cell.value = std::nan("");
  } catch (const std::exception& e) {
    cell.status = "error:internal";
    cell.message = e.what();
    cell.value = std::nan("");
  }
  cell.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return cell;
}

SweepResult run_sweep(const SweepConfig& config, int jobs) {
  config.validate();
  if (jobs <= 0) {
    if (const char* env = std::getenv("QSYNC_JOBS")) jobs = std::atoi(env);
    if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  }
  std::vector<std::vector<double>> axis_values;
  std::size_t total = 1;
  for (const Axis& a : config.axes) {
    axis_values.push_back(a.values());
    total *= axis_values.back().size();
  }
  SweepResult res;
  res.config = config;
  res.version = QSYNC_VERSION;
  res.cells.resize(total);

  // Row-major over axes: the last axis varies fastest.
  auto coords_of = [&](std::size_t flat) {
    std::vector<double> c(axis_values.size());
    for (std::size_t k = axis_values.size(); k-- > 0;) {
      const std::size_t n = axis_values[k].size();
      c[k] = axis_values[k][flat % n];
      flat /= n;
    }
    return c;
  };
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      Params p = config.fixed;
      const std::vector<double> c = coords_of(i);
      for (std::size_t k = 0; k < c.size(); ++k) p[config.axes[k].name] = c[k];
      CellResult cell = evaluate_cell(config, p, cell_seed(config.solver.seed, i));
      cell.coords = c;
      res.cells[i] = std::move(cell);
    }
  };
  const int n_threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(jobs), total));
  std::vector<std::thread> pool;
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return res;
}

}  // namespace qsync
