#include <gtest/gtest.h>

#include <random>

#include "harness/oracles.hpp"
#include "thirdopt/spectral.hpp"

using namespace thirdopt;

namespace {

Matrix diag(std::initializer_list<double> d) {
  Vector v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) v(i++) = x;
  return v.asDiagonal();
}

// P1 <= P2 as projectors: P2 P1 = P1.
bool contained(const Subspace& a, const Subspace& b) {
  return (b.projector() * a.projector() - a.projector()).cwiseAbs().maxCoeff() <= 1e-10;
}

}  // namespace

TEST(EigSym, Identity) {
  const EigenDecomp e = eig_sym(Matrix::Identity(3, 3));
  EXPECT_TRUE(e.values.isApprox(Vector::Ones(3)));
}

TEST(EigSym, DiagonalSortedDescending) {
  const EigenDecomp e = eig_sym(diag({1, 3, -2}));
  EXPECT_DOUBLE_EQ(e.values(0), 3);
  EXPECT_DOUBLE_EQ(e.values(1), 1);
  EXPECT_DOUBLE_EQ(e.values(2), -2);
  EXPECT_NEAR(std::abs(e.vectors(1, 0)), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(e.vectors(0, 1)), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(e.vectors(2, 2)), 1.0, 1e-14);
  EXPECT_DOUBLE_EQ(e.smallest(), -2);
  EXPECT_DOUBLE_EQ(e.spectral_norm(), 3);
}

TEST(EigSym, RandomReconstruction) {
  std::mt19937_64 rng(21);
  for (int n = 1; n <= 8; ++n) {
    const Matrix m = oracle::random_symmetric(n, rng);
    const EigenDecomp e = eig_sym(m);
    const Matrix back = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
    EXPECT_LT((back - m).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((e.vectors.transpose() * e.vectors - Matrix::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(EigSym, RejectsAsymmetric) {
  Matrix m(2, 2);
  m << 1, 2, 0, 1;
  EXPECT_THROW(eig_sym(m), InvalidArgument);
  EXPECT_THROW(eig_sym(Matrix::Zero(2, 3)), Error);
}

TEST(SubspaceAtMost, Examples) {
  const EigenDecomp e = eig_sym(diag({3, 1, -2}));
  const Subspace s = subspace_at_most(e, 1.0);
  ASSERT_EQ(s.dim(), 2);
  EXPECT_NEAR(s.projector()(0, 0), 0.0, 1e-14);
  EXPECT_NEAR(s.projector()(1, 1), 1.0, 1e-14);
  EXPECT_NEAR(s.projector()(2, 2), 1.0, 1e-14);

  EXPECT_TRUE(subspace_at_most(e, -2.5, 0.1).is_empty());
  EXPECT_EQ(subspace_at_most(e, 3.0).dim(), 3);
  EXPECT_EQ(subspace_at_most(e, 10.0).dim(), 3);
}

TEST(SubspaceAtMost, MonotoneAndProjectorsValid) {
  std::mt19937_64 rng(22);
  std::normal_distribution<double> normal(0.0, 2.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + trial % 6;
    const EigenDecomp e = eig_sym(oracle::random_symmetric(n, rng));
    double t1 = normal(rng), t2 = normal(rng);
    if (t1 > t2) std::swap(t1, t2);
    const Subspace a = subspace_at_most(e, t1), b = subspace_at_most(e, t2);
    EXPECT_TRUE(contained(a, b));
    for (const Subspace* s : {&a, &b}) {
      const Matrix p = s->projector();
      EXPECT_LT((p * p - p).cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_LT((p - p.transpose()).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(NullSpace, Examples) {
  const Subspace s = null_space(eig_sym(diag({0, 2})));
  ASSERT_EQ(s.dim(), 1);
  EXPECT_NEAR(std::abs(s.basis()(0, 0)), 1.0, 1e-14);
  EXPECT_TRUE(null_space(eig_sym(diag({1, 2}))).is_empty());
  EXPECT_EQ(null_space(eig_sym(Matrix::Zero(3, 3))).dim(), 3);
}

TEST(NullSpace, ToleranceIsRelativeToSpectralMagnitude) {
  // 1e-6 is "zero" next to 1e3 at relative tolerance 1e-8 * 1e3 = 1e-5.
  EXPECT_EQ(null_space(eig_sym(diag({1e3, 1e-6}))).dim(), 1);
  EXPECT_EQ(null_space(eig_sym(diag({1.0, 1e-6}))).dim(), 0);
}

TEST(Subspace, SpanOfDropsDependentColumns) {
  Matrix m(3, 3);
  m << 1, 2, 0, 0, 0, 0, 1, 2, 1;
  const Subspace s = Subspace::span_of(m);
  EXPECT_EQ(s.dim(), 2);
  EXPECT_EQ(s.ambient_dim(), 3);
  EXPECT_LT((s.basis().transpose() * s.basis() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);
}
