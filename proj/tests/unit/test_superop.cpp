#include <gtest/gtest.h>

#include <random>

#include "qsync/superop.hpp"

using namespace qsync;

namespace {

Matrix random_matrix(int d, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> n;
  Matrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = cplx(n(rng), n(rng));
  return m;
}

}  // namespace

TEST(Superop, VecIsColumnStacking) {
  Matrix m(2, 2);
  m << 1.0, 2.0, 3.0, 4.0;
  const Vector v = vec(m);
  EXPECT_EQ(v(1), cplx(3.0));
  EXPECT_EQ(v(2), cplx(2.0));
  EXPECT_EQ(vec_index(1, 0, 2), 1);
  EXPECT_TRUE(unvec(v, 2).isApprox(m));
}

TEST(Superop, PreAndPostMultiplication) {
  const FockSpace s(4);
  const FockOperator a = destroy(s), n = number(s);
  const Matrix x = random_matrix(4, 3);
  EXPECT_TRUE(unvec(spre(a) * vec(x), 4).isApprox(a.dense() * x, 1e-13));
  EXPECT_TRUE(unvec(spost(n) * vec(x), 4).isApprox(x * n.dense(), 1e-13));
}

TEST(Superop, DissipatorMatchesDefinition) {
  const FockSpace s(5);
  const FockOperator c = destroy(s).pow(2);
  const Matrix x = random_matrix(5, 9);
  const Matrix C = c.dense();
  const Matrix expected = C * x * C.adjoint() - 0.5 * (C.adjoint() * C * x + x * C.adjoint() * C);
  EXPECT_TRUE(unvec(dissipator(c) * vec(x), 5).isApprox(expected, 1e-12));
}

TEST(Superop, CommutatorMatchesDefinition) {
  const FockSpace s(4);
  const FockOperator h = number(s) + 0.3 * (destroy(s) + create(s));
  const Matrix x = random_matrix(4, 1);
  const Matrix expected = cplx(0.0, -1.0) * (h.dense() * x - x * h.dense());
  EXPECT_TRUE(unvec(commutator_superop(h) * vec(x), 4).isApprox(expected, 1e-12));
}

TEST(Superop, LindbladPreservesTrace) {
  const FockSpace s(6);
  const SparseMatrix L = lindblad(number(s), {{0.7, destroy(s)}, {0.2, create(s)}, {0.4, destroy(s).pow(2)}});
  EXPECT_LT(trace_preservation_error(L, 6), 1e-13);
}

TEST(Liouvillian, DrivePartIsCosineWeighted) {
  const FockSpace s(3);
  const SparseMatrix L0 = lindblad(number(s), {{1.0, destroy(s)}});
  const SparseMatrix L1 = commutator_superop(destroy(s) + create(s));
  const Liouvillian L(s, L0, Liouvillian::Drive{L1, 2.0});
  const Matrix x = random_matrix(3, 5);
  const double t = 0.37;
  const Matrix expected = unvec(L0 * vec(x) + std::cos(2.0 * t) * (L1 * vec(x)), 3);
  EXPECT_TRUE(L.apply(t, x).isApprox(expected, 1e-13));
  EXPECT_TRUE(L.has_drive());
  EXPECT_FALSE(L.without_drive().has_drive());
  EXPECT_THROW(L.without_drive().drive(), Error);
}

TEST(Liouvillian, ShapeMismatchThrows) {
  const FockSpace s(3);
  EXPECT_THROW(Liouvillian(s, sparse_identity(4)), Error);
}
