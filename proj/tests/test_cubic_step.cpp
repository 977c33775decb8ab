#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "harness/oracles.hpp"
#include "thirdopt/corpus.hpp"
#include "thirdopt/cubic_step.hpp"

using namespace thirdopt;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

Matrix mat2(double a, double b, double c) {
  Matrix m(2, 2);
  m << a, b, b, c;
  return m;
}

}  // namespace

TEST(CubicSubproblem, ZeroGradientPsd) {
  const CubicSolution s = solve_cubic_subproblem(Vector::Zero(2), mat2(1, 0, 3), 1.0);
  EXPECT_EQ(s.step, Vector::Zero(2));
  EXPECT_EQ(s.model_value, 0.0);
}

TEST(CubicSubproblem, OneDimensionalGoldenRatio) {
  // m(s) = s + s^2/2 + |s|^3/3, stationary at s = -t with t + t^2 = 1.
  const CubicSolution s = solve_cubic_subproblem(vec({1}), Matrix::Identity(1, 1), 2.0);
  EXPECT_NEAR(s.step(0), -(std::sqrt(5.0) - 1) / 2, 1e-14);
}

TEST(CubicSubproblem, MatchesGridOracle) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> unif_r(0.5, 3.0);
  for (int i = 0; i < 20; ++i) {
    const Vector g = oracle::random_gaussian(2, rng);
    const Matrix h = oracle::random_symmetric(2, rng);
    const double r = unif_r(rng);
    const CubicSolution sol = solve_cubic_subproblem(g, h, r);
    EXPECT_LE(sol.model_value, oracle::cubic_model_grid_min(g, h, r, 3.0, 401) + 1e-3);
    EXPECT_TRUE(certify_cubic(g, h, r, sol).holds());
  }
}

TEST(CubicSubproblem, HardCase) {
  // g orthogonal to the negative-curvature direction.
  const Vector g = vec({0, 1e-3});
  const Matrix h = mat2(-2, 0, 1);
  const double r = 1.0;
  const CubicSolution sol = solve_cubic_subproblem(g, h, r);
  EXPECT_TRUE(sol.hard_case);
  EXPECT_NEAR(sol.radius, 4.0, 1e-9);  // r_min = -2 lambda_min / R
  EXPECT_TRUE(certify_cubic(g, h, r, sol).holds());
  EXPECT_LE(sol.model_value, oracle::cubic_model_grid_min(g, h, r, 5.0, 801) + 1e-3);
}

TEST(CubicSubproblem, NearHardCaseCertificate) {
  const Matrix h = mat2(-1, 0, 2);
  for (double tiny : {1e-6, 1e-9, 1e-12, 1e-15}) {
    const Vector g = vec({tiny, 0.5});
    const CubicSolution sol = solve_cubic_subproblem(g, h, 0.7);
    EXPECT_TRUE(certify_cubic(g, h, 0.7, sol).holds()) << tiny;
  }
}

TEST(CubicSubproblem, CertificateOnRandomHigherDimensions) {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + i % 7;
    const Vector g = (i % 5 == 0 ? 1e-10 : 1.0) * oracle::random_gaussian(n, rng);
    const Matrix h = oracle::random_symmetric(n, rng);
    const double r = 0.1 + (i % 9);
    EXPECT_TRUE(certify_cubic(g, h, r, solve_cubic_subproblem(g, h, r)).holds()) << i;
  }
}

TEST(CubicSubproblem, TinyGradientWithTinyR) {
  // ||g|| << lambda_min with tiny R: the step is the Newton step, not zero.
  const Vector g = vec({1e-19, 1e-19});
  const CubicSolution sol = solve_cubic_subproblem(g, mat2(2, 0, 2), 1e-6);
  EXPECT_NEAR(sol.step(0), -0.5e-19, 1e-30);
}

TEST(CubicSubproblem, InvalidInputs) {
  EXPECT_THROW(solve_cubic_subproblem(Vector::Zero(2), Matrix::Zero(3, 3), 1), DimensionMismatch);
  EXPECT_THROW(solve_cubic_subproblem(Vector::Zero(2), Matrix::Zero(2, 2), 0), InvalidArgument);
  EXPECT_THROW(solve_cubic_subproblem(vec({NAN, 0}), Matrix::Zero(2, 2), 1), InvalidArgument);
}

TEST(CubicStep, QuadraticMovesTowardOrigin) {
  const Polynomial f = corpus::quadratic();
  const Vector x = vec({1, 1});
  const Vector z = cubic_reg_step(f, x, 100.0);
  EXPECT_LT(f.value(z), f.value(x));
  EXPECT_LT(z.norm(), x.norm());
  EXPECT_NEAR(z(0), z(1), 1e-15);
}

TEST(CubicStep, ConfinedSaddleOriginStalls) {
  EXPECT_EQ(cubic_reg_step(corpus::monkey_saddle_confined(), vec({0, 0}), 5.0), Vector::Zero(2));
}

TEST(CubicStep, FixedPointAtQuadraticMinimizer) {
  EXPECT_EQ(cubic_reg_step(corpus::quadratic(), vec({0, 0}), 1.0), Vector::Zero(2));
}

TEST(CubicStep, DecreaseAndStepVsMuOnCorpus) {
  std::mt19937_64 rng(43);
  for (const auto& name : corpus::names()) {
    const Polynomial p = corpus::by_name(name);
    const double r = smoothness_bounds(p, 5.0).R;
    for (int k = 0; k < 20; ++k) {
      const Vector x = oracle::random_in_ball(p.dim(), name == "quartic_1d" ? 0.01 : 1.0, rng);
      const Vector z = cubic_reg_step(p, x, r);
      if (z.norm() > 5.0) continue;
      const double s = (z - x).norm();
      EXPECT_LE(p.value(z), p.value(x) - r * s * s * s / 12 + 1e-9) << name;
      EXPECT_GE(s, mu(p, z, r).value - 1e-9) << name;
    }
  }
}

TEST(Mu, Examples) {
  const double r = 2.5;
  EXPECT_EQ(mu_from(Vector::Zero(2), Matrix::Identity(2, 2), r).value, 0.0);
  EXPECT_DOUBLE_EQ(mu_from(vec({r, 0}), Matrix::Identity(2, 2), r).value, 1.0);
  EXPECT_DOUBLE_EQ(mu_from(Vector::Zero(2), mat2(1, 0, -1.5 * r), r).value, 1.0);
  EXPECT_THROW(mu_from(Vector::Zero(2), Matrix::Zero(2, 2), 0.0), InvalidArgument);
}
