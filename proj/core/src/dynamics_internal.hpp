#pragma once

// Liouvillian restricted to an invariant index set, stored row-major for
// fast matrix-vector products.

#include <vector>

#include "qsync/dynamics.hpp"

namespace qsync::detail {

using RowSparse = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

class ReducedGenerator {
 public:
  /// Restricts L to the subspace reachable from `seeds`; an empty seed list keeps everything.
  ReducedGenerator(const Liouvillian& L, const std::vector<Eigen::Index>& seeds);

  Eigen::Index size() const { return static_cast<Eigen::Index>(idx_.size()); }
  const std::vector<Eigen::Index>& indices() const { return idx_; }
  bool has_drive() const { return has_drive_; }
  double omega() const { return omega_; }

  void apply(double t, const Vector& x, Vector& out) const {
    out.noalias() = static_ * x;
    if (has_drive_) out.noalias() += std::cos(omega_ * t) * (drive_ * x);
  }
  /// Applies to a segment of a larger stacked vector.
  template <class In, class Out>
  void apply_block(double t, const In& x, Out&& out) const {
    out.noalias() = static_ * x;
    if (has_drive_) out.noalias() += std::cos(omega_ * t) * (drive_ * x);
  }

  Vector gather(const Matrix& x) const;
  Matrix scatter(const Vector& x) const;
  /// Weights w with Tr[obs X] = w . x for reduced x.
  Vector trace_weights(const FockOperator& obs) const;

 private:
  int dim_;
  std::vector<Eigen::Index> idx_;
  RowSparse static_;
  RowSparse drive_;
  bool has_drive_ = false;
  double omega_ = 0.0;
};

std::vector<Eigen::Index> nonzero_support(const Matrix& x);

}  // namespace qsync::detail
