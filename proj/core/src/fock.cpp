#include "qsync/fock.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>

namespace qsync {

namespace {

void require_same_space(const FockSpace& a, const FockSpace& b) {
  if (!(a == b)) throw Error(ErrorKind::space_mismatch, "operands live on different Fock spaces");
}

SparseMatrix ladder(int n) {
  SparseMatrix a(n, n);
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(static_cast<std::size_t>(n));
  for (int k = 1; k < n; ++k) trip.emplace_back(k - 1, k, std::sqrt(static_cast<double>(k)));
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

}  // namespace

FockSpace::FockSpace(int dim) : FockSpace(std::vector<int>{dim}) {}

FockSpace::FockSpace(std::vector<int> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw Error(ErrorKind::invalid_argument, "FockSpace needs at least one factor");
  long long d = 1;
  for (int f : factors_) {
    if (f < 2) throw Error(ErrorKind::invalid_argument, "each Fock factor must have dimension >= 2");
    d *= f;
    if (d > (1LL << 30)) throw Error(ErrorKind::invalid_argument, "Fock space dimension overflow");
  }
  dim_ = static_cast<int>(d);
}

std::vector<int> FockSpace::unflatten(int index) const {
  if (index < 0 || index >= dim_) throw Error(ErrorKind::invalid_argument, "basis index out of range");
  std::vector<int> occ(factors_.size());
  for (std::size_t k = factors_.size(); k-- > 0;) {
    occ[k] = index % factors_[k];
    index /= factors_[k];
  }
  return occ;
}

int FockSpace::flatten(const std::vector<int>& occupations) const {
  if (occupations.size() != factors_.size())
    throw Error(ErrorKind::invalid_argument, "occupation list length does not match factor count");
  int idx = 0;
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    if (occupations[k] < 0 || occupations[k] >= factors_[k])
      throw Error(ErrorKind::invalid_argument, "occupation number outside truncation");
    idx = idx * factors_[k] + occupations[k];
  }
  return idx;
}

FockOperator::FockOperator(FockSpace space, SparseMatrix data)
    : space_(std::move(space)), data_(std::move(data)) {
  if (data_.rows() != space_.dim() || data_.cols() != space_.dim())
    throw Error(ErrorKind::space_mismatch, "operator shape does not match its space");
  data_.makeCompressed();
}

FockOperator FockOperator::adjoint() const {
  return FockOperator(space_, SparseMatrix(data_.adjoint()));
}

FockOperator FockOperator::pow(int exponent) const {
  if (exponent < 0) throw Error(ErrorKind::invalid_argument, "negative operator power");
  SparseMatrix result = sparse_identity(space_.dim());
  for (int k = 0; k < exponent; ++k) result = SparseMatrix(result * data_);
  return FockOperator(space_, std::move(result));
}

FockOperator& FockOperator::operator+=(const FockOperator& rhs) {
  require_same_space(space_, rhs.space_);
  data_ = SparseMatrix(data_ + rhs.data_);
  return *this;
}

FockOperator& FockOperator::operator-=(const FockOperator& rhs) {
  require_same_space(space_, rhs.space_);
  data_ = SparseMatrix(data_ - rhs.data_);
  return *this;
}

FockOperator& FockOperator::operator*=(cplx scale) {
  data_ *= scale;
  return *this;
}

FockOperator operator*(const FockOperator& lhs, const FockOperator& rhs) {
  require_same_space(lhs.space_, rhs.space_);
  return FockOperator(lhs.space_, SparseMatrix(lhs.data_ * rhs.data_));
}

SparseMatrix kron(const SparseMatrix& lhs, const SparseMatrix& rhs) {
  const Eigen::Index rr = rhs.rows(), rc = rhs.cols();
  SparseMatrix out(lhs.rows() * rr, lhs.cols() * rc);
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(static_cast<std::size_t>(lhs.nonZeros() * rhs.nonZeros()));
  for (Eigen::Index j = 0; j < lhs.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(lhs, j); it; ++it)
      for (Eigen::Index l = 0; l < rhs.outerSize(); ++l)
        for (SparseMatrix::InnerIterator jt(rhs, l); jt; ++jt)
          trip.emplace_back(it.row() * rr + jt.row(), it.col() * rc + jt.col(), it.value() * jt.value());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

SparseMatrix sparse_identity(int dim) {
  SparseMatrix id(dim, dim);
  id.setIdentity();
  return id;
}

FockOperator embed(const FockSpace& space, int which, const SparseMatrix& local) {
  if (which < 0 || which >= space.num_factors())
    throw Error(ErrorKind::invalid_argument,
                "oscillator index " + std::to_string(which) + " out of range");
  if (local.rows() != space.factor(which) || local.cols() != space.factor(which))
    throw Error(ErrorKind::space_mismatch, "local operator shape does not match factor dimension");
  SparseMatrix out = which == 0 ? local : sparse_identity(space.factor(0));
  for (int k = 1; k < space.num_factors(); ++k)
    out = kron(out, k == which ? local : sparse_identity(space.factor(k)));
  return FockOperator(space, std::move(out));
}

FockOperator identity(const FockSpace& space) {
  return FockOperator(space, sparse_identity(space.dim()));
}

FockOperator destroy(const FockSpace& space, int which) {
  if (which < 0 || which >= space.num_factors())
    throw Error(ErrorKind::invalid_argument,
                "oscillator index " + std::to_string(which) + " out of range");
  return embed(space, which, ladder(space.factor(which)));
}

FockOperator create(const FockSpace& space, int which) { return destroy(space, which).adjoint(); }

FockOperator number(const FockSpace& space, int which) {
  FockOperator a = destroy(space, which);
  return a.adjoint() * a;
}

DensityMatrix::DensityMatrix(FockSpace space, Matrix data) : DensityMatrix(std::move(space), std::move(data), true) {}

DensityMatrix::DensityMatrix(FockSpace space, Matrix data, bool check)
    : space_(std::move(space)), data_(std::move(data)) {
  if (data_.rows() != space_.dim() || data_.cols() != space_.dim())
    throw Error(ErrorKind::space_mismatch, "density matrix shape does not match its space");
  if (check) validate();
}

DensityMatrix DensityMatrix::unchecked(FockSpace space, Matrix data) {
  return DensityMatrix(std::move(space), std::move(data), false);
}

cplx DensityMatrix::expect(const FockOperator& op) const {
  require_same_space(space_, op.space());
  // Tr[O rho] = sum_{ij} O_ij rho_ji
  cplx acc = 0.0;
  const SparseMatrix& o = op.data();
  for (Eigen::Index j = 0; j < o.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(o, j); it; ++it) acc += it.value() * data_(it.col(), it.row());
  return acc;
}

double DensityMatrix::hermiticity_error() const {
  return (data_ - data_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  Matrix h = 0.5 * (data_ + data_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void DensityMatrix::validate() const {
  const double herm = hermiticity_error();
  if (!(herm <= kHermitianTol))
    throw Error(ErrorKind::invalid_argument, "density matrix not Hermitian (max dev " + std::to_string(herm) + ")");
  const double tr_err = std::abs(trace() - 1.0);
  if (!(tr_err <= kTraceTol))
    throw Error(ErrorKind::invalid_argument, "density matrix trace differs from 1 by " + std::to_string(tr_err));
  const double lmin = min_eigenvalue();
  if (!(lmin >= -kPsdTol))
    throw Error(ErrorKind::invalid_argument, "density matrix has eigenvalue " + std::to_string(lmin));
}

DensityMatrix fock_state(const FockSpace& space, const std::vector<int>& occupations) {
  Matrix rho = Matrix::Zero(space.dim(), space.dim());
  const int k = space.flatten(occupations);
  rho(k, k) = 1.0;
  return DensityMatrix(space, std::move(rho));
}

DensityMatrix pure_state(const FockSpace& space, const Vector& ket) {
  if (ket.size() != space.dim()) throw Error(ErrorKind::space_mismatch, "ket length does not match space");
  const double nrm = ket.norm();
  if (nrm == 0.0) throw Error(ErrorKind::invalid_argument, "zero ket");
  Vector psi = ket / nrm;
  return DensityMatrix(space, psi * psi.adjoint());
}

DensityMatrix coherent_state(const FockSpace& space, cplx alpha) {
  if (space.num_factors() != 1)
    throw Error(ErrorKind::invalid_argument, "coherent_state expects a single-oscillator space");
  Vector psi(space.dim());
  // Recurrence c_n = c_{n-1} * alpha / sqrt(n) avoids factorial overflow.
  psi(0) = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n < space.dim(); ++n) psi(n) = psi(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  return pure_state(space, psi);
}

DensityMatrix maximally_mixed(const FockSpace& space) {
  return DensityMatrix(space, Matrix::Identity(space.dim(), space.dim()) / static_cast<double>(space.dim()));
}

DensityMatrix partial_trace(const DensityMatrix& rho, int keep) {
  const FockSpace& sp = rho.space();
  if (sp.num_factors() < 2)
    throw Error(ErrorKind::invalid_argument, "partial_trace needs a multi-factor space");
  if (keep < 0 || keep >= sp.num_factors())
    throw Error(ErrorKind::invalid_argument, "kept oscillator index out of range");
  const int dk = sp.factor(keep);
  int inner = 1;
  for (int k = keep + 1; k < sp.num_factors(); ++k) inner *= sp.factor(k);
  const int outer = sp.dim() / (dk * inner);
  Matrix red = Matrix::Zero(dk, dk);
  const Matrix& m = rho.data();
  for (int i = 0; i < dk; ++i)
    for (int j = 0; j < dk; ++j) {
      cplx acc = 0.0;
      for (int o = 0; o < outer; ++o)
        for (int n = 0; n < inner; ++n) acc += m((o * dk + i) * inner + n, (o * dk + j) * inner + n);
      red(i, j) = acc;
    }
  return DensityMatrix::unchecked(FockSpace(dk), std::move(red));
}

double trace_distance(const Matrix& lhs, const Matrix& rhs) {
  Matrix d = lhs - rhs;
  Matrix h = 0.5 * (d + d.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& lhs, const DensityMatrix& rhs) {
  require_same_space(lhs.space(), rhs.space());
  return trace_distance(lhs.data(), rhs.data());
}

}  // namespace qsync
