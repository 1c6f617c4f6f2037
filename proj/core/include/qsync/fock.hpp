#pragma once

// Truncated Fock-space operator algebra.
//
// Tensor products use Kronecker ordering with factor 0 leftmost: the basis
// state |n_0 n_1 ... n_{k-1}> has flat index
//   n_0 * (d_1 * ... * d_{k-1}) + n_1 * (d_2 * ... * d_{k-1}) + ... + n_{k-1}.

#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "qsync/errors.hpp"

namespace qsync {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<cplx>;

class FockSpace {
 public:
  /// Single oscillator truncated to |0>..|dim-1>.
  explicit FockSpace(int dim);
  explicit FockSpace(std::vector<int> factors);

  int dim() const noexcept { return dim_; }
  int num_factors() const noexcept { return static_cast<int>(factors_.size()); }
  int factor(int k) const { return factors_.at(static_cast<std::size_t>(k)); }
  const std::vector<int>& factors() const noexcept { return factors_; }

  /// Per-factor occupation numbers of a flat basis index.
  std::vector<int> unflatten(int index) const;
  int flatten(const std::vector<int>& occupations) const;

  bool operator==(const FockSpace& other) const { return factors_ == other.factors_; }

 private:
  std::vector<int> factors_;
  int dim_ = 0;
};

class FockOperator {
 public:
  FockOperator(FockSpace space, SparseMatrix data);

  const FockSpace& space() const noexcept { return space_; }
  const SparseMatrix& data() const noexcept { return data_; }
  Matrix dense() const { return Matrix(data_); }
  cplx operator()(int row, int col) const { return data_.coeff(row, col); }

  FockOperator adjoint() const;
  FockOperator pow(int exponent) const;

  FockOperator& operator+=(const FockOperator& rhs);
  FockOperator& operator-=(const FockOperator& rhs);
  FockOperator& operator*=(cplx scale);

  friend FockOperator operator+(FockOperator lhs, const FockOperator& rhs) { return lhs += rhs; }
  friend FockOperator operator-(FockOperator lhs, const FockOperator& rhs) { return lhs -= rhs; }
  friend FockOperator operator*(const FockOperator& lhs, const FockOperator& rhs);
  friend FockOperator operator*(FockOperator op, cplx scale) { return op *= scale; }
  friend FockOperator operator*(cplx scale, FockOperator op) { return op *= scale; }
  friend FockOperator operator*(FockOperator op, double scale) { return op *= cplx(scale); }
  friend FockOperator operator*(double scale, FockOperator op) { return op *= cplx(scale); }
  friend FockOperator operator-(FockOperator op) { return op *= cplx(-1.0); }

 private:
  FockSpace space_;
  SparseMatrix data_;
};

SparseMatrix kron(const SparseMatrix& lhs, const SparseMatrix& rhs);
SparseMatrix sparse_identity(int dim);

/// Places a single-factor operator on factor `which`, identity elsewhere.
FockOperator embed(const FockSpace& space, int which, const SparseMatrix& local);

FockOperator identity(const FockSpace& space);
FockOperator destroy(const FockSpace& space, int which = 0);
FockOperator create(const FockSpace& space, int which = 0);
FockOperator number(const FockSpace& space, int which = 0);

/// Hermitian, unit-trace, positive semidefinite state. The checked
/// constructor enforces the invariants; `unchecked` is for intermediate
/// results that are validated later.
class DensityMatrix {
 public:
  static constexpr double kHermitianTol = 1e-10;
  static constexpr double kTraceTol = 1e-10;
  static constexpr double kPsdTol = 1e-8;

  DensityMatrix(FockSpace space, Matrix data);
  static DensityMatrix unchecked(FockSpace space, Matrix data);

  const FockSpace& space() const noexcept { return space_; }
  const Matrix& data() const noexcept { return data_; }

  cplx trace() const { return data_.trace(); }
  cplx expect(const FockOperator& op) const;
  double hermiticity_error() const;
  double min_eigenvalue() const;
  /// Throws Error(invalid_argument) if any invariant fails.
  void validate() const;

 private:
  DensityMatrix(FockSpace space, Matrix data, bool check);

  FockSpace space_;
  Matrix data_;
};

DensityMatrix fock_state(const FockSpace& space, const std::vector<int>& occupations);
DensityMatrix pure_state(const FockSpace& space, const Vector& ket);
/// Coherent state truncated to the space and renormalized. Single factor.
DensityMatrix coherent_state(const FockSpace& space, cplx alpha);
DensityMatrix maximally_mixed(const FockSpace& space);

DensityMatrix partial_trace(const DensityMatrix& rho, int keep);
double trace_distance(const DensityMatrix& lhs, const DensityMatrix& rhs);
double trace_distance(const Matrix& lhs, const Matrix& rhs);

}  // namespace qsync
