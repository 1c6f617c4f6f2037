#pragma once

// Superoperators on column-stacked density matrices:
//   vec(rho)[i + j*d] = rho(i, j),   vec(A X B) = (B^T kron A) vec(X).

#include <optional>
#include <utility>
#include <vector>

#include "qsync/fock.hpp"

namespace qsync {

Vector vec(const Matrix& rho);
Matrix unvec(const Vector& v, int dim);
inline Eigen::Index vec_index(int row, int col, int dim) { return row + static_cast<Eigen::Index>(col) * dim; }

/// A . (left multiplication)
SparseMatrix spre(const FockOperator& a);
/// . B (right multiplication)
SparseMatrix spost(const FockOperator& b);
/// -i[H, .]
SparseMatrix commutator_superop(const FockOperator& h);
/// D[c] rho = c rho c^dag - {c^dag c, rho}/2
SparseMatrix dissipator(const FockOperator& c);

struct JumpTerm {
  double rate;
  FockOperator op;
};

/// -i[H, .] + sum_k rate_k D[c_k]
SparseMatrix lindblad(const FockOperator& h, const std::vector<JumpTerm>& jumps);

/// L(t) = static_part + cos(omega t) * drive_part.
class Liouvillian {
 public:
  struct Drive {
    SparseMatrix part;
    double omega;
  };

  Liouvillian(FockSpace space, SparseMatrix static_part, std::optional<Drive> drive = std::nullopt);

  const FockSpace& space() const noexcept { return space_; }
  int dim() const noexcept { return space_.dim(); }
  const SparseMatrix& static_part() const noexcept { return static_; }
  bool has_drive() const noexcept { return drive_.has_value(); }
  const Drive& drive() const;

  SparseMatrix at(double t) const;
  void apply(double t, const Vector& x, Vector& out) const;
  Vector apply(double t, const Vector& x) const;
  Matrix apply(double t, const Matrix& rho) const;

  Liouvillian without_drive() const { return Liouvillian(space_, static_); }
  /// Frobenius norm of the static part.
  double norm() const;

 private:
  FockSpace space_;
  SparseMatrix static_;
  std::optional<Drive> drive_;
};

/// max_j |sum_i L_{(i,i), j}|: the column sums of the trace functional.
double trace_preservation_error(const SparseMatrix& superop, int dim);

}  // namespace qsync
