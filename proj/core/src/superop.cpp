#include "qsync/superop.hpp"

#include <cmath>

namespace qsync {

Vector vec(const Matrix& rho) {
  return Eigen::Map<const Vector>(rho.data(), rho.size());
}

Matrix unvec(const Vector& v, int dim) {
  if (v.size() != static_cast<Eigen::Index>(dim) * dim)
    throw Error(ErrorKind::space_mismatch, "vectorized state length is not dim^2");
  return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

SparseMatrix spre(const FockOperator& a) { return kron(sparse_identity(a.space().dim()), a.data()); }

SparseMatrix spost(const FockOperator& b) {
  return kron(SparseMatrix(b.data().transpose()), sparse_identity(b.space().dim()));
}

SparseMatrix commutator_superop(const FockOperator& h) {
  return SparseMatrix(cplx(0.0, -1.0) * (spre(h) - spost(h)));
}

SparseMatrix dissipator(const FockOperator& c) {
  const FockOperator cdc = c.adjoint() * c;
  SparseMatrix jump = kron(SparseMatrix(c.data().conjugate()), c.data());
  return SparseMatrix(jump - 0.5 * spre(cdc) - 0.5 * spost(cdc));
}

SparseMatrix lindblad(const FockOperator& h, const std::vector<JumpTerm>& jumps) {
  SparseMatrix out = commutator_superop(h);
  for (const auto& j : jumps) {
    if (j.rate == 0.0) continue;
    if (!(j.op.space() == h.space())) throw Error(ErrorKind::space_mismatch, "jump operator space mismatch");
    out += j.rate * dissipator(j.op);
  }
  out.prune(cplx(0.0), 0.0);
  return out;
}

Liouvillian::Liouvillian(FockSpace space, SparseMatrix static_part, std::optional<Drive> drive)
    : space_(std::move(space)), static_(std::move(static_part)), drive_(std::move(drive)) {
  const Eigen::Index d2 = static_cast<Eigen::Index>(space_.dim()) * space_.dim();
  if (static_.rows() != d2 || static_.cols() != d2)
    throw Error(ErrorKind::space_mismatch, "Liouvillian shape does not match dim^2");
  if (drive_ && (drive_->part.rows() != d2 || drive_->part.cols() != d2))
    throw Error(ErrorKind::space_mismatch, "drive superoperator shape does not match dim^2");
  static_.makeCompressed();
  if (drive_) drive_->part.makeCompressed();
}

const Liouvillian::Drive& Liouvillian::drive() const {
  if (!drive_) throw Error(ErrorKind::invalid_argument, "Liouvillian has no drive");
  return *drive_;
}

SparseMatrix Liouvillian::at(double t) const {
  if (!drive_) return static_;
  return SparseMatrix(static_ + std::cos(drive_->omega * t) * drive_->part);
}

void Liouvillian::apply(double t, const Vector& x, Vector& out) const {
  out.noalias() = static_ * x;
  if (drive_) out.noalias() += std::cos(drive_->omega * t) * (drive_->part * x);
}

Vector Liouvillian::apply(double t, const Vector& x) const {
  Vector out(x.size());
  apply(t, x, out);
  return out;
}

Matrix Liouvillian::apply(double t, const Matrix& rho) const { return unvec(apply(t, vec(rho)), dim()); }

double Liouvillian::norm() const { return static_.norm(); }

double trace_preservation_error(const SparseMatrix& superop, int dim) {
  Eigen::VectorXcd colsum = Eigen::VectorXcd::Zero(superop.cols());
  for (Eigen::Index j = 0; j < superop.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(superop, j); it; ++it) {
      const Eigen::Index r = it.row();
      if (r % dim == r / dim) colsum(j) += it.value();
    }
  return colsum.cwiseAbs().maxCoeff();
}

}  // namespace qsync
