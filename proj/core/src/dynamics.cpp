#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/IterativeSolvers>

#include "dynamics_internal.hpp"
#include "qsync/dynamics.hpp"

namespace qsync {

namespace detail {

ReducedGenerator::ReducedGenerator(const Liouvillian& L, const std::vector<Eigen::Index>& seeds)
    : dim_(L.dim()) {
  SparseMatrix pattern = L.static_part();
  if (L.has_drive()) {
    pattern = SparseMatrix(pattern + L.drive().part);
    has_drive_ = true;
    omega_ = L.drive().omega;
  }
  if (seeds.empty()) {
    idx_.resize(static_cast<std::size_t>(pattern.rows()));
    std::iota(idx_.begin(), idx_.end(), Eigen::Index{0});
  } else {
    idx_ = reachable_indices(pattern, seeds);
  }
  static_ = RowSparse(restrict_to(L.static_part(), idx_));
  if (has_drive_) drive_ = RowSparse(restrict_to(L.drive().part, idx_));
}

Vector ReducedGenerator::gather(const Matrix& x) const {
  Vector out(size());
  const cplx* data = x.data();
  for (std::size_t p = 0; p < idx_.size(); ++p) out(static_cast<Eigen::Index>(p)) = data[idx_[p]];
  return out;
}

Matrix ReducedGenerator::scatter(const Vector& x) const {
  Matrix out = Matrix::Zero(dim_, dim_);
  cplx* data = out.data();
  for (std::size_t p = 0; p < idx_.size(); ++p) data[idx_[p]] = x(static_cast<Eigen::Index>(p));
  return out;
}

Vector ReducedGenerator::trace_weights(const FockOperator& obs) const {
  // Tr[O X] = sum_{ij} O_ji X_ij, and X_ij sits at i + j*dim.
  Vector w(size());
  for (std::size_t p = 0; p < idx_.size(); ++p) {
    const auto i = static_cast<int>(idx_[p] % dim_), j = static_cast<int>(idx_[p] / dim_);
    w(static_cast<Eigen::Index>(p)) = obs(j, i);
  }
  return w;
}

std::vector<Eigen::Index> nonzero_support(const Matrix& x) {
  std::vector<Eigen::Index> out;
  for (Eigen::Index k = 0; k < x.size(); ++k)
    if (x.data()[k] != cplx(0.0)) out.push_back(k);
  return out;
}

}  // namespace detail

std::vector<Eigen::Index> reachable_indices(const SparseMatrix& L, const std::vector<Eigen::Index>& seeds) {
  const Eigen::Index n = L.cols();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<Eigen::Index> stack;
  for (Eigen::Index s : seeds) {
    if (s < 0 || s >= n) throw Error(ErrorKind::invalid_argument, "seed index out of range");
    if (!seen[static_cast<std::size_t>(s)]) {
      seen[static_cast<std::size_t>(s)] = 1;
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    const Eigen::Index j = stack.back();
    stack.pop_back();
    for (SparseMatrix::InnerIterator it(L, j); it; ++it) {
      if (it.value() == cplx(0.0)) continue;
      const auto r = static_cast<std::size_t>(it.row());
      if (!seen[r]) {
        seen[r] = 1;
        stack.push_back(it.row());
      }
    }
  }
  std::vector<Eigen::Index> out;
  for (Eigen::Index k = 0; k < n; ++k)
    if (seen[static_cast<std::size_t>(k)]) out.push_back(k);
  return out;
}

SparseMatrix restrict_to(const SparseMatrix& L, const std::vector<Eigen::Index>& idx) {
  std::vector<Eigen::Index> pos(static_cast<std::size_t>(L.rows()), -1);
  for (std::size_t p = 0; p < idx.size(); ++p) pos[static_cast<std::size_t>(idx[p])] = static_cast<Eigen::Index>(p);
  const auto m = static_cast<Eigen::Index>(idx.size());
  SparseMatrix out(m, m);
  std::vector<Eigen::Triplet<cplx>> trip;
  for (std::size_t p = 0; p < idx.size(); ++p)
    for (SparseMatrix::InnerIterator it(L, idx[p]); it; ++it) {
      const Eigen::Index q = pos[static_cast<std::size_t>(it.row())];
      if (q >= 0) trip.emplace_back(q, static_cast<Eigen::Index>(p), it.value());
    }
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

// ------------------------------------------------------------- steady state

namespace {

// Number of weakly connected components of the restricted graph that touch a diagonal index.
int diagonal_components(const SparseMatrix& Ls, const std::vector<char>& is_diag) {
  const auto n = static_cast<std::size_t>(Ls.cols());
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (Eigen::Index j = 0; j < Ls.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(Ls, j); it; ++it) {
      if (it.value() == cplx(0.0)) continue;
      const std::size_t a = find(static_cast<std::size_t>(it.row())), b = find(static_cast<std::size_t>(j));
      if (a != b) parent[a] = b;
    }
  std::vector<char> root_hit(n, 0);
  int count = 0;
  for (std::size_t k = 0; k < n; ++k)
    if (is_diag[k]) {
      const std::size_t r = find(k);
      if (!root_hit[r]) {
        root_hit[r] = 1;
        ++count;
      }
    }
  return count;
}

double relative_residual(const SparseMatrix& L, const Matrix& rho, double lnorm) {
  const Vector r = L * vec(rho);
  return lnorm > 0.0 ? r.norm() / lnorm : r.norm();
}

}  // namespace

SteadyStateResult solve_steady_state(const Liouvillian& L, const SteadyStateOptions& opt) {
  if (L.has_drive()) throw Error(ErrorKind::invalid_argument, "steady_state requires a time-independent Liouvillian");
  const int d = L.dim();
  const SparseMatrix& L0 = L.static_part();
  std::vector<Eigen::Index> diag(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) diag[static_cast<std::size_t>(i)] = vec_index(i, i, d);

  std::vector<Eigen::Index> idx;
  if (opt.reduce) {
    idx = reachable_indices(L0, diag);
  } else {
    idx.resize(static_cast<std::size_t>(L0.rows()));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  }
  const SparseMatrix Ls = restrict_to(L0, idx);
  const auto m = static_cast<Eigen::Index>(idx.size());
  std::vector<char> is_diag(idx.size(), 0);
  Eigen::Index anchor = -1;
  for (std::size_t p = 0; p < idx.size(); ++p)
    if (idx[p] % d == idx[p] / d) {
      is_diag[p] = 1;
      if (anchor < 0) anchor = static_cast<Eigen::Index>(p);
    }
  const int comps = diagonal_components(Ls, is_diag);
  if (comps > 1)
    throw Error(ErrorKind::degenerate_steady_state,
                "steady state is not unique: " + std::to_string(comps) + " decoupled population blocks");

  const double lnorm = L0.norm();
  SteadyStateOptions::Method method = opt.method;
  if (method == SteadyStateOptions::Method::automatic)
    method = m > opt.inverse_iteration_threshold ? SteadyStateOptions::Method::inverse_iteration
             : m > opt.iterative_threshold       ? SteadyStateOptions::Method::gmres
                                                 : SteadyStateOptions::Method::lu;

  Vector x;
  std::string method_name;
  if (method != SteadyStateOptions::Method::inverse_iteration) {
    // Replace the anchor population equation (linearly dependent on the others) by Tr rho = 1.
    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(static_cast<std::size_t>(Ls.nonZeros()) + idx.size());
    for (Eigen::Index j = 0; j < Ls.outerSize(); ++j)
      for (SparseMatrix::InnerIterator it(Ls, j); it; ++it)
        if (it.row() != anchor) trip.emplace_back(it.row(), j, it.value());
    for (std::size_t p = 0; p < idx.size(); ++p)
      if (is_diag[p]) trip.emplace_back(anchor, static_cast<Eigen::Index>(p), 1.0);
    SparseMatrix A(m, m);
    A.setFromTriplets(trip.begin(), trip.end());
    A.makeCompressed();
    Vector b = Vector::Zero(m);
    b(anchor) = 1.0;
    if (method == SteadyStateOptions::Method::gmres) {
      Eigen::GMRES<SparseMatrix, Eigen::IncompleteLUT<cplx>> solver;
      solver.preconditioner().setDroptol(opt.ilut_droptol);
      solver.preconditioner().setFillfactor(opt.ilut_fill);
      solver.set_restart(100);
      solver.setTolerance(1e-3 * opt.residual_tol);
      solver.setMaxIterations(opt.gmres_max_iterations);
      solver.compute(A);
      if (solver.info() == Eigen::Success) {
        x = solver.solve(b);
        if (solver.info() == Eigen::Success && (Ls * x).norm() / std::max(lnorm, 1e-300) < 0.1 * opt.residual_tol)
          method_name = "gmres";
      }
      // Preconditioner breakdown or stagnation: fall back to a direct solve.
    }
    if (method_name.empty()) {
      Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
      lu.analyzePattern(A);
      lu.factorize(A);
      if (lu.info() != Eigen::Success)
        throw Error(ErrorKind::degenerate_steady_state, "trace-constrained Liouvillian is singular: " + lu.lastErrorMessage());
      x = lu.solve(b);
      // Two rounds of iterative refinement.
      for (int k = 0; k < 2; ++k) {
        const Vector r = b - A * x;
        x += lu.solve(r);
      }
      method_name = "lu";
    }
  } else {
    const double shift = 1e-10 * std::max(lnorm, 1.0);
    SparseMatrix A = Ls;
    for (Eigen::Index k = 0; k < m; ++k) A.coeffRef(k, k) -= shift;
    A.makeCompressed();
    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success)
      throw Error(ErrorKind::degenerate_steady_state, "shifted Liouvillian factorization failed");
    x = Vector::Zero(m);
    for (std::size_t p = 0; p < idx.size(); ++p)
      if (is_diag[p]) x(static_cast<Eigen::Index>(p)) = 1.0;
    x /= x.norm();
    bool done = false;
    for (int it = 0; it < opt.max_iterations && !done; ++it) {
      x = lu.solve(x);
      x /= x.norm();
      done = (Ls * x).norm() / std::max(lnorm, 1e-300) < 0.1 * opt.residual_tol;
    }
    // One more step drives the error from the tolerance down to round-off.
    if (done) {
      x = lu.solve(x);
      x /= x.norm();
    }
    method_name = "inverse_iteration";
  }

  Matrix rho = Matrix::Zero(d, d);
  for (std::size_t p = 0; p < idx.size(); ++p) rho.data()[idx[p]] = x(static_cast<Eigen::Index>(p));
  rho = 0.5 * (rho + rho.adjoint()).eval();
  const cplx tr = rho.trace();
  if (std::abs(tr) < 1e-300) throw Error(ErrorKind::not_converged, "steady-state solution has zero trace");
  rho /= tr.real();
  const double res = relative_residual(L0, rho, lnorm);
  if (!(res < opt.residual_tol))
    throw Error(ErrorKind::not_converged, "steady-state residual " + std::to_string(res) + " exceeds tolerance");
  return SteadyStateResult{DensityMatrix(L.space(), std::move(rho)), res, m, method_name};
}

// -------------------------------------------------------------- propagation

EvolutionResult propagate(const Liouvillian& L, const DensityMatrix& rho0, const std::vector<double>& t_grid,
                          const PropagateOptions& opt) {
  if (!(rho0.space() == L.space())) throw Error(ErrorKind::space_mismatch, "state and Liouvillian spaces differ");
  if (t_grid.empty()) throw Error(ErrorKind::invalid_argument, "empty time grid");
  for (std::size_t k = 1; k < t_grid.size(); ++k)
    if (!(t_grid[k] > t_grid[k - 1])) throw Error(ErrorKind::invalid_argument, "time grid must be increasing");

  const detail::ReducedGenerator gen(L, detail::nonzero_support(rho0.data()));
  std::vector<Vector> weights;
  for (const auto& op : opt.expect) weights.push_back(gen.trace_weights(op));
  const Vector tr_w = gen.trace_weights(identity(L.space()));

  EvolutionResult res;
  res.expectations.assign(opt.expect.size(), {});
  // Eigen's dot() conjugates its left operand, so keep the weights conjugated.
  for (auto& w : weights) w = w.conjugate();
  const Vector trw = tr_w.conjugate();
  auto rhs = [&](double t, const Vector& x, Vector& dx) { gen.apply(t, x, dx); };
  auto observe = [&](std::size_t, double t, const Vector& x) {
    res.times.push_back(t);
    for (std::size_t q = 0; q < weights.size(); ++q) res.expectations[q].push_back(weights[q].dot(x));
    res.max_trace_drift = std::max(res.max_trace_drift, std::abs(trw.dot(x) - 1.0));
    if (opt.keep_states) res.states.push_back(DensityMatrix::unchecked(L.space(), gen.scatter(x)));
    return true;
  };
  integrate_dopri5(rhs, t_grid.front(), gen.gather(rho0.data()), t_grid, observe, opt.ode, &res.stats);
  return res;
}

std::vector<cplx> propagate_trace(const Liouvillian& L, const Matrix& x0, const FockOperator& obsop, double t0,
                                  const std::vector<double>& tau, const OdeOptions& opt) {
  if (!(obsop.space() == L.space())) throw Error(ErrorKind::space_mismatch, "observable and Liouvillian spaces differ");
  std::vector<cplx> out(tau.size(), cplx(0.0));
  auto support = detail::nonzero_support(x0);
  if (support.empty()) return out;
  const detail::ReducedGenerator gen(L, support);
  const Vector w = gen.trace_weights(obsop).conjugate();
  std::vector<double> times(tau.size());
  for (std::size_t k = 0; k < tau.size(); ++k) times[k] = t0 + tau[k];
  auto rhs = [&](double t, const Vector& x, Vector& dx) { gen.apply(t, x, dx); };
  integrate_dopri5(rhs, t0, gen.gather(x0), times,
                   [&](std::size_t k, double, const Vector& x) {
                     out[k] = w.dot(x);
                     return true;
                   },
                   opt);
  return out;
}

std::vector<cplx> two_time_correlation(const Liouvillian& L, const DensityMatrix& rho_ss, int which,
                                       const std::vector<double>& t_grid, const OdeOptions& opt) {
  if (L.has_drive()) throw Error(ErrorKind::invalid_argument, "two_time_correlation requires a time-independent Liouvillian");
  if (!(rho_ss.space() == L.space())) throw Error(ErrorKind::space_mismatch, "state and Liouvillian spaces differ");
  const FockOperator a = destroy(L.space(), which);
  const Matrix x0 = a.data() * rho_ss.data();
  return propagate_trace(L, x0, a.adjoint(), 0.0, t_grid, opt);
}

// -------------------------------------------------------------- truncation

double tail_population(const DensityMatrix& rho) {
  const FockSpace& sp = rho.space();
  double worst = 0.0;
  for (int k = 0; k < sp.num_factors(); ++k) {
    const int nk = sp.factor(k);
    double tail = 0.0;
    for (int i = 0; i < sp.dim(); ++i) {
      const int occ = sp.unflatten(i)[static_cast<std::size_t>(k)];
      if (occ >= nk - 2) tail += rho.data()(i, i).real();
    }
    worst = std::max(worst, tail);
  }
  return worst;
}

ConvergeResult converge_truncation(const std::function<Liouvillian(int)>& builder, int N_start,
                                   const ConvergeOptions& opt) {
  if (N_start < 2) throw Error(ErrorKind::invalid_argument, "N_start must be >= 2");
  ConvergeResult result{0, {}};
  int N = N_start;
  while (N <= opt.cap) {
    const Liouvillian L = builder(N);
    ConvergeStep step{N, 0.0, 0.0, 0.0, 1.0};
    try {
      const DensityMatrix rho = steady_state(L);
      step.tail = tail_population(rho);
      const Spectrum s = correlation_spectrum(L, rho, 0, opt.spectrum);
      step.peak_frequency = s.peak_frequency;
      step.peak_value = s.peak_value;
      step.domega = s.resolution;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::insufficient_decay && e.kind() != ErrorKind::not_converged &&
          e.kind() != ErrorKind::degenerate_steady_state)
        throw;
      step.peak_value = std::nan("");
    }
    result.history.push_back(step);
    if (result.history.size() >= 2 && std::isfinite(step.peak_value)) {
      const ConvergeStep& prev = result.history[result.history.size() - 2];
      const bool peak_ok = std::isfinite(prev.peak_value) &&
                           std::abs(step.peak_frequency - prev.peak_frequency) < std::max(prev.domega, step.domega) &&
                           std::abs(step.peak_value - prev.peak_value) <
                               opt.height_rtol * std::max(std::abs(step.peak_value), 1e-300);
      if (peak_ok && step.tail < opt.tail_tol) {
        result.N = prev.tail < opt.tail_tol ? prev.N : step.N;
        return result;
      }
    }
    N = std::max(N + 1, static_cast<int>(std::ceil(N * opt.growth)));
  }
  throw Error(ErrorKind::truncation, "truncation did not converge below the cap N=" + std::to_string(opt.cap));
}

}  // namespace qsync
