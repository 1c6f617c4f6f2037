#include "qsync/models.hpp"

#include <cmath>
#include <string>

namespace qsync {

namespace {

constexpr cplx I1{0.0, 1.0};

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::invalid_argument, what);
}

bool finite(double x) { return std::isfinite(x); }

struct Pieces {
  FockOperator h;
  std::vector<JumpTerm> jumps;
};

// Static (drive-free) Hamiltonian and jumps of the averaged model on mode `a`.
Pieces approx_pieces(const FockOperator& a, double lambda, double beta, double r, bool second_order) {
  const FockOperator ad = a.adjoint();
  const FockOperator n = ad * a;
  const FockOperator n2 = ad.pow(2) * a.pow(2);
  const double r2 = r * r;
  const double l2 = second_order ? lambda * lambda : 0.0;
  FockOperator h = (1.0 - l2 * r2 * r2 / 8.0) * n + (3.0 * l2 * r2 / 8.0 + 0.75 * beta) * n2;
  if (l2 != 0.0) h += (-11.0 * l2 / 48.0) * (ad.pow(3) * a.pow(3));
  return {h, {{lambda * r2, ad}, {0.5 * lambda, a.pow(2)}}};
}

// Static Hamiltonian and jumps of the unaveraged model on mode `a`.
Pieces exact_pieces(const FockOperator& a, double lambda, double beta, double r) {
  const FockOperator ad = a.adjoint();
  const FockOperator a2 = a.pow(2), ad2 = ad.pow(2);
  const FockOperator a4 = a.pow(4), ad4 = ad.pow(4);
  const FockOperator ada3 = ad * a.pow(3), ad3a = ad.pow(3) * a;
  const double r2 = r * r;
  FockOperator h = ad * a;
  if (beta != 0.0) h += 0.75 * beta * (ad2 * a2) + 0.5 * beta * (ada3 + ad3a) + 0.125 * beta * (a4 + ad4);
  if (lambda != 0.0) {
    h += (I1 * (lambda * r2 / 4.0)) * (a2 - ad2);
    h += (-I1 * (lambda / 4.0)) * (ada3 - ad3a);
    h += (-I1 * (lambda / 8.0)) * (a4 - ad4);
  }
  return {h, {{lambda, ad * a - 0.5 * ad2}, {lambda * r2, ad}, {0.75 * lambda, a2}}};
}

std::optional<Liouvillian::Drive> drive_term(const FockOperator& a, double F, double omega_d) {
  if (F == 0.0) return std::nullopt;
  const FockOperator v = (-0.5 * F) * (a + a.adjoint());
  return Liouvillian::Drive{commutator_superop(v), omega_d};
}

void append(std::vector<JumpTerm>& dst, const std::vector<JumpTerm>& src) {
  dst.insert(dst.end(), src.begin(), src.end());
}

}  // namespace

void DvdpParams::validate() const {
  require(finite(lambda) && finite(beta) && finite(r) && finite(F) && finite(omega_d), "non-finite oscillator parameter");
  require(lambda >= 0.0, "lambda must be >= 0");
  require(r > 0.0, "r must be > 0");
  require(F >= 0.0, "F must be >= 0");
  require(omega_d > 0.0, "omega_d must be > 0");
}

DvdpParams DvdpParams::from_bar(double lambda_bar, double beta_bar, double r, double F_bar, double omega_d) {
  require(r > 0.0, "r must be > 0");
  return DvdpParams{lambda_bar / (r * r), beta_bar / (r * r), r, F_bar * r, omega_d};
}

DvdpParams DimensionalParams::to_dimensionless() const {
  require(omega0 > 0.0 && q > 0.0 && r > 0.0, "omega0, q and r must be > 0");
  const double q2 = q * q, r2 = r * r;
  return DvdpParams{mu * q2 / (omega0 * r2), zeta * q2 / (omega0 * omega0 * r2), r, f * r / (omega0 * omega0 * q),
                    Omega_d / omega0};
}

DimensionalParams DimensionalParams::from_dimensionless(const DvdpParams& p, double omega0, double q) {
  require(omega0 > 0.0 && q > 0.0 && p.r > 0.0, "omega0, q and r must be > 0");
  const double q2 = q * q, r2 = p.r * p.r;
  DimensionalParams d;
  d.mu = p.lambda * omega0 * r2 / q2;
  d.zeta = p.beta * omega0 * omega0 * r2 / q2;
  d.omega0 = omega0;
  d.q = q;
  d.f = p.F * omega0 * omega0 * q / p.r;
  d.Omega_d = p.omega_d * omega0;
  d.r = p.r;
  return d;
}

void CoupledParams::validate() const {
  require(finite(lambda) && finite(r) && finite(delta) && finite(eta) && finite(g) && finite(beta),
          "non-finite coupled parameter");
  require(lambda >= 0.0, "lambda must be >= 0");
  require(r > 0.0, "r must be > 0");
  require(eta >= 0.0, "eta must be >= 0");
  require(g >= 0.0, "g must be >= 0");
  require(!(eta > 0.0 && g > 0.0), "eta and g must not both be positive");
}

void DeepQuantumParams::validate() const {
  require(finite(kappa) && finite(gamma) && finite(delta) && finite(eta), "non-finite deep-quantum parameter");
  require(kappa > 0.0, "kappa must be > 0");
  require(gamma > 0.0, "gamma must be > 0");
  require(eta >= 0.0, "eta must be >= 0");
}

int min_truncation_approx(const DvdpParams& p) { return p.lambda != 0.0 ? 4 : 3; }

Liouvillian build_approx_dvdp(const DvdpParams& p, int N, ApproxTerms terms) {
  p.validate();
  const int nmin = min_truncation_approx(p);
  if (N < nmin)
    throw Error(ErrorKind::truncation, "approximate model needs N >= " + std::to_string(nmin) + ", got " + std::to_string(N));
  const FockSpace space(N);
  const FockOperator a = destroy(space);
  const Pieces pc = approx_pieces(a, p.lambda, p.beta, p.r, terms.second_order);
  return Liouvillian(space, lindblad(pc.h, pc.jumps), drive_term(a, p.F, p.omega_d));
}

Liouvillian build_exact_dvdp(const DvdpParams& p, int N) {
  p.validate();
  if (N < kMinTruncationExact)
    throw Error(ErrorKind::truncation, "exact model needs N >= 5, got " + std::to_string(N));
  const FockSpace space(N);
  const FockOperator a = destroy(space);
  const Pieces pc = exact_pieces(a, p.lambda, p.beta, p.r);
  return Liouvillian(space, lindblad(pc.h, pc.jumps), drive_term(a, p.F, p.omega_d));
}

Liouvillian build_coupled_dissipative(const CoupledParams& p, int N) {
  p.validate();
  require(p.g == 0.0, "dissipative coupling model requires g = 0");
  const int nmin = p.lambda != 0.0 ? 4 : 3;
  if (N < nmin) throw Error(ErrorKind::truncation, "coupled dissipative model needs N >= " + std::to_string(nmin));
  const FockSpace space({N, N});
  const FockOperator a1 = destroy(space, 0), a2 = destroy(space, 1);
  Pieces p1 = approx_pieces(a1, p.lambda, p.beta, p.r, true);
  const Pieces p2 = approx_pieces(a2, p.lambda, p.beta, p.r, true);
  FockOperator h = p1.h + p2.h + p.delta * (a2.adjoint() * a2);
  append(p1.jumps, p2.jumps);
  p1.jumps.push_back({p.eta, a1 - a2});
  return Liouvillian(space, lindblad(h, p1.jumps));
}

Liouvillian build_coupled_reactive(const CoupledParams& p, int N) {
  p.validate();
  require(p.eta == 0.0, "reactive coupling model requires eta = 0");
  if (N < kMinTruncationExact) throw Error(ErrorKind::truncation, "coupled reactive model needs N >= 5");
  const FockSpace space({N, N});
  const FockOperator a1 = destroy(space, 0), a2 = destroy(space, 1);
  Pieces p1 = exact_pieces(a1, p.lambda, p.beta, p.r);
  const Pieces p2 = exact_pieces(a2, p.lambda, p.beta, p.r);
  FockOperator h = p1.h + p2.h + p.delta * (a2.adjoint() * a2) + p.g * (a1 * a2.adjoint() + a1.adjoint() * a2);
  append(p1.jumps, p2.jumps);
  return Liouvillian(space, lindblad(h, p1.jumps));
}

Liouvillian build_deep_quantum_sl(const DeepQuantumParams& p, int N) {
  p.validate();
  if (N < 3) throw Error(ErrorKind::truncation, "deep-quantum model needs N >= 3");
  const FockSpace space({N, N});
  const FockOperator a1 = destroy(space, 0), a2 = destroy(space, 1);
  const FockOperator h = p.delta * (a1.adjoint() * a1);
  return Liouvillian(space, lindblad(h, {{p.kappa, a1.adjoint()},
                                         {p.kappa, a2.adjoint()},
                                         {p.gamma, a1.pow(2)},
                                         {p.gamma, a2.pow(2)},
                                         {p.eta, a1 - a2}}));
}

Liouvillian build_reactive_sl(double g, double kappa, double gamma, double delta, int N) {
  require(kappa > 0.0 && gamma > 0.0, "kappa and gamma must be > 0");
  require(g >= 0.0, "g must be >= 0");
  if (N < 3) throw Error(ErrorKind::truncation, "reactive SL model needs N >= 3");
  const FockSpace space({N, N});
  const FockOperator a1 = destroy(space, 0), a2 = destroy(space, 1);
  const FockOperator h = g * (a1.adjoint() * a2 + a2.adjoint() * a1) + delta * (a2.adjoint() * a2);
  return Liouvillian(space, lindblad(h, {{kappa, a1.adjoint()},
                                         {kappa, a2.adjoint()},
                                         {gamma, a1.pow(2)},
                                         {gamma, a2.pow(2)}}));
}

cplx mean_field_rhs_approx(cplx alpha, const DvdpParams& p, double t) {
  const double n = std::norm(alpha);
  const double r2 = p.r * p.r;
  return I1 * (0.5 * p.F * std::cos(p.omega_d * t)) - I1 * alpha - I1 * (1.5 * p.beta * n) * alpha +
         0.5 * p.lambda * (r2 - n) * alpha +
         I1 * (p.lambda * p.lambda / 8.0) * (r2 * r2 - 6.0 * r2 * n + 5.5 * n * n) * alpha;
}

cplx mean_field_rhs_exact(cplx alpha, const DvdpParams& p, double t) {
  const cplx ac = std::conj(alpha);
  const double n = std::norm(alpha);
  const double r2 = p.r * p.r;
  const cplx x = alpha + ac;
  return I1 * (0.5 * p.F * std::cos(p.omega_d * t)) - I1 * alpha - I1 * (0.5 * p.beta) * x * x * x -
         0.5 * p.lambda * (alpha * alpha * alpha + n * alpha - n * ac - ac * ac * ac - r2 * alpha + r2 * ac);
}

}  // namespace qsync
