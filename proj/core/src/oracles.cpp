#include "qsync/oracles.hpp"

#include <cmath>
#include <string>

namespace qsync {

namespace {

void require_eta(double eta_bar, double delta_bar) {
  if (!std::isfinite(eta_bar) || !std::isfinite(delta_bar) || eta_bar < 0.0)
    throw Error(ErrorKind::invalid_argument, "two-level oracle needs finite inputs and eta_bar >= 0");
}

}  // namespace

TwoLevelSteadyState two_level_steady_state(double d, double e) {
  require_eta(e, d);
  const double d2 = d * d;
  TwoLevelSteadyState s;
  s.nu = 8.0 * e * e * e + (e + 3.0) * (e + 3.0) * d2 + 51.0 * e * e + 108.0 * e + 81.0;
  s.rho11 = (6.0 * e * e * e + (e + 2.0) * (e + 2.0) * d2 + 34.0 * e * e + 60.0 * e + 36.0) / s.nu;
  // Linear (eta + 2) factor on Delta^2: the squared form breaks unit trace.
  s.rho22 = (e * e * e + (e + 2.0) * d2 + 8.0 * e * e + 21.0 * e + 18.0) / s.nu;
  s.rho33 = s.rho22;
  s.rho44 = (e * e + d2 + 6.0 * e + 9.0) / s.nu;
  s.rho23 = cplx(e * (e + 1.0) * (e + 3.0), e * (e + 1.0) * d) / s.nu;
  return s;
}

Matrix TwoLevelSteadyState::matrix() const {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = rho11;
  m(1, 1) = rho22;
  m(2, 2) = rho33;
  m(3, 3) = rho44;
  m(1, 2) = rho23;
  m(2, 1) = std::conj(rho23);
  return m;
}

DensityMatrix TwoLevelSteadyState::density() const { return DensityMatrix(FockSpace({2, 2}), matrix()); }

Liouvillian two_level_liouvillian(double d, double e) {
  require_eta(e, d);
  const FockSpace space({2, 2});
  const FockOperator s1 = destroy(space, 0), s2 = destroy(space, 1);
  return Liouvillian(space, lindblad(d * (s1.adjoint() * s1), {{1.0, s1.adjoint()},
                                                              {1.0, s2.adjoint()},
                                                              {2.0, s1},
                                                              {2.0, s2},
                                                              {e, s1 - s2}}));
}

double two_level_sigma(double d, double e) {
  require_eta(e, d);
  return 2.0 * e * (e + 1.0) / (8.0 * e * e + 27.0 * e + (e + 3.0) * d * d + 27.0);
}

double two_level_sigma_from_state(const TwoLevelSteadyState& s) {
  const double tr = s.rho11 + s.rho22 + s.rho33 + s.rho44;
  return 2.0 * s.rho23.real() / tr;
}

double two_level_ad_threshold(double e) {
  if (!std::isfinite(e)) throw Error(ErrorKind::invalid_argument, "non-finite eta_bar");
  return (27.0 - 15.0 * e * e - 4.0 * e * e * e) / ((e - 1.0) * (e + 3.0));
}

double two_level_ad_threshold_printed(double e) {
  if (!std::isfinite(e)) throw Error(ErrorKind::invalid_argument, "non-finite eta_bar");
  return (27.0 - 15.0 * e * e - 4.0 * e * e * e) / ((e - 1.0) * (e - 2.0));
}

bool two_level_is_ad(double d, double e) { return two_level_steady_state(d, e).reduced_ground() >= 0.75; }

double two_level_ad_boundary(double d, double lo, double hi, double tol) {
  auto f = [&](double e) { return two_level_steady_state(d, e).reduced_ground() - 0.75; };
  double flo = f(lo), fhi = f(hi);
  if (flo * fhi > 0.0) throw Error(ErrorKind::invalid_argument, "amplitude-death boundary not bracketed");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

WignerRadial two_level_wigner(double d, double e, const std::vector<double>& radii) {
  const TwoLevelSteadyState s = two_level_steady_state(d, e);
  const std::vector<double> pops{s.rho11 + s.rho22, s.rho33 + s.rho44};
  WignerRadial w;
  w.radii = radii;
  for (double r : radii) w.values.push_back(wigner_radial_fock(pops, r));
  return w;
}

DensityMatrix reactive_three_level_state(double g, double gamma) {
  if (!std::isfinite(g) || !std::isfinite(gamma) || !(gamma > 0.0))
    throw Error(ErrorKind::invalid_argument, "reactive oracle needs finite g and gamma > 0");
  const FockSpace space({3, 3});
  auto at = [&](int i, int j) { return static_cast<Eigen::Index>(space.flatten({i, j})); };
  const double g2 = g * g;
  Matrix m = Matrix::Zero(9, 9);
  m(at(0, 0), at(0, 0)) = 4.0 / 9.0 + 4.0 * (7.0 * g2 - 6.0) / (81.0 * gamma);
  for (auto [i, j] : {std::pair{0, 1}, std::pair{1, 0}}) m(at(i, j), at(i, j)) = 2.0 / 9.0 - 4.0 * (g2 + 3.0) / (81.0 * gamma);
  for (auto [i, j] : {std::pair{0, 2}, std::pair{2, 0}}) m(at(i, j), at(i, j)) = 2.0 / (9.0 * gamma);
  m(at(1, 1), at(1, 1)) = 1.0 / 9.0 - 2.0 * (10.0 * g2 + 3.0) / (81.0 * gamma);
  for (auto [i, j] : {std::pair{1, 2}, std::pair{2, 1}}) m(at(i, j), at(i, j)) = 1.0 / (9.0 * gamma);
  const cplx c(0.0, std::sqrt(2.0) * g / (9.0 * gamma));
  m(at(1, 1), at(2, 0)) = c;
  m(at(1, 1), at(0, 2)) = c;
  m(at(0, 2), at(1, 1)) = -c;
  m(at(2, 0), at(1, 1)) = -c;

  for (int k = 0; k < 9; ++k)
    if (m(k, k).real() < 0.0) {
      const auto occ = space.unflatten(k);
      throw Error(ErrorKind::out_of_validity, "population of |" + std::to_string(occ[0]) + std::to_string(occ[1]) +
                                                  "> is negative (" + std::to_string(m(k, k).real()) +
                                                  "); gamma too small for the expansion");
    }
  try {
    return DensityMatrix(space, std::move(m));
  } catch (const Error& e) {
    throw Error(ErrorKind::out_of_validity, std::string("first-order state is not a valid density matrix: ") + e.what());
  }
}

double reactive_sigma(double g, double gamma) { return pearson_sigma(reactive_three_level_state(g, gamma)); }

}  // namespace qsync
