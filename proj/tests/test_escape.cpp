#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "harness/bench_suites.hpp"
#include "harness/oracles.hpp"
#include "thirdopt/thirdopt.hpp"

using namespace thirdopt;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

SymTensor3 monkey_tensor() { return corpus::monkey_saddle().evaluate(vec({0, 0}), 3).third; }

}  // namespace

TEST(CompetitiveSubspace, ZeroTensorIsEmpty) {
  const auto r = competitive_subspace(Matrix::Zero(3, 3), SymTensor3(3), 1.0, 1.0);
  EXPECT_TRUE(r.empty());
  EXPECT_EQ(r.c_q, 0.0);
}

TEST(CompetitiveSubspace, PositiveCurvatureBeatsSmallTensor) {
  SymTensor3 t(2);
  t.set_symmetric(0, 0, 0, 1e-3);
  const auto r = competitive_subspace(5.0 * Matrix::Identity(2, 2), t, 1.0, 1.0);
  EXPECT_TRUE(r.empty());
}

TEST(CompetitiveSubspace, DegenerateSaddleUsesWholeSpace) {
  const auto r = competitive_subspace(Matrix::Zero(2, 2), monkey_tensor(), 1.0, 16 * std::sqrt(2.0));
  ASSERT_FALSE(r.empty());
  EXPECT_EQ(r.subspace.dim(), 2);
  EXPECT_EQ(r.eig_index, 0);
  EXPECT_NEAR(r.c_q, 12.0, 1e-12);
}

TEST(CompetitiveSubspace, FirstQualifyingSuffixWins) {
  // x^2 y + y^2 at the origin: H = diag(0, 2), T has T_112 = 2.
  const DerivativeBundle b = corpus::xxy_plus_yy().evaluate(vec({0, 0}), 3);
  // L = 1, Q = 8 * 2^1.5: full-space threshold 12/(12 * 512) < 2, so the
  // full space fails; span{e1} qualifies with c_q = 0 and counts as empty.
  const double q = 8 * std::pow(2.0, 1.5);
  EXPECT_TRUE(competitive_subspace(b.hess, b.third, 1.0, q).empty());
  // Small L makes the full space qualify.
  const auto r = competitive_subspace(b.hess, b.third, 1e-4, q);
  ASSERT_FALSE(r.empty());
  EXPECT_EQ(r.subspace.dim(), 2);
  EXPECT_NEAR(r.c_q, std::sqrt(12.0), 1e-12);
}

TEST(CompetitiveSubspace, CqMatchesProjectedFrobenius) {
  std::mt19937_64 rng(51);
  for (int i = 0; i < 30; ++i) {
    const int n = 2 + i % 4;
    const SymTensor3 t = oracle::random_tensor(n, rng);
    const Matrix h = 0.05 * oracle::random_symmetric(n, rng);
    const auto r = competitive_subspace(h, t, 0.01, 1.0);
    if (r.empty()) continue;
    EXPECT_NEAR(r.c_q, projected_frobenius(t, r.subspace), 1e-10 * r.c_q);
    EXPECT_LE(r.top_eigenvalue, r.threshold);
  }
}

TEST(Sampler, RankOneTensorOnItsLine) {
  const Vector v = vec({0.6, 0.8, 0.0});
  const SymTensor3 t = SymTensor3::outer_cube(v);
  std::mt19937_64 rng(52);
  const SampledDirection d = approx_direction(t, Subspace::span_of(v), 8.0, rng);
  EXPECT_NEAR(std::abs(d.u.dot(v)), 1.0, 1e-12);
  EXPECT_NEAR(d.value, frobenius(t), 1e-12);
  EXPECT_EQ(d.draws, 1);
}

TEST(Sampler, MonkeySaddlePostcondition) {
  const SymTensor3 t = monkey_tensor();
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    std::mt19937_64 rng(seed);
    const SampledDirection d = approx_direction(t, Subspace::full(2), 8.0, rng);
    EXPECT_GE(contract3(t, d.u), 12.0 / (8.0 * std::pow(2.0, 1.5)));
    EXPECT_NEAR(d.u.norm(), 1.0, 1e-14);
  }
}

TEST(Sampler, ExhaustionAndInvalidInputs) {
  std::mt19937_64 rng(53);
  // B tiny demands T(u,u,u) > ||T||_F, impossible.
  EXPECT_THROW(approx_direction(monkey_tensor(), Subspace::full(2), 0.01, rng, 50), SamplerExhausted);
  EXPECT_THROW(approx_direction(monkey_tensor(), Subspace::empty(2), 8.0, rng), InvalidArgument);
  EXPECT_THROW(approx_direction(SymTensor3(2), Subspace::full(2), 8.0, rng), InvalidArgument);
}

TEST(ThirdOrderStep, ConfinedSaddleDecreases) {
  const Polynomial f = corpus::monkey_saddle_confined();
  const OptimizerConfig cfg = bench::confined_saddle_config(0, 10);
  const double q = cfg.Q(2);
  const DerivativeBundle b = f.evaluate(vec({0, 0}), 3);
  const auto csr = competitive_subspace(b.hess, b.third, cfg.L, q);
  ASSERT_FALSE(csr.empty());
  std::mt19937_64 rng(54);
  const SampledDirection d = approx_direction(b.third, csr.subspace, cfg.B, rng);
  const Vector x = third_order_step(vec({0, 0}), csr, d.u, cfg.L, q);
  EXPECT_NEAR(x.norm(), csr.c_q / (cfg.L * q), 1e-15);
  EXPECT_LT(f.value(x), 0.0);
  EXPECT_LE(f.value(x), -third_order_decrease(csr.c_q, cfg.L, q) + 1e-9);
}

TEST(Optimize, ConfinedSaddleEscapesAndStaysMonotone) {
  const Polynomial f = corpus::monkey_saddle_confined();
  const double delta = -bench::confined_saddle_grid_min();
  EXPECT_NEAR(delta, 27.0 / 256.0, 1e-5);
  for (std::uint64_t seed : {0u, 7u, 99u}) {
    const Trace tr = optimize(f, vec({0, 0}), bench::confined_saddle_config(seed, 200));
    EXPECT_TRUE(tr.converged);
    EXPECT_GE(tr.third_steps, 1);
    EXPECT_LE(tr.f_final, -delta);
    EXPECT_TRUE(tr.all_flags_hold());
    double prev = tr.f0;
    for (const auto& r : tr.records) {
      EXPECT_LE(r.f_z, prev + 1e-12);
      EXPECT_LE(r.f, r.f_z + 1e-12);
      prev = r.f;
    }
  }
}

TEST(Optimize, BaselineStallsAtDegenerateSaddle) {
  OptimizerConfig cfg = bench::confined_saddle_config(0, 100);
  cfg.third_order_steps = false;
  cfg.early_stop = false;
  const Trace tr = optimize(corpus::monkey_saddle_confined(), vec({0, 0}), cfg);
  ASSERT_EQ(tr.records.size(), 100u);
  for (const auto& r : tr.records) EXPECT_EQ(r.x.norm(), 0.0);
}

TEST(Optimize, QuarticOneDimensionalFindsGlobalMinimum) {
  const Trace tr = optimize(corpus::quartic_1d(), vec({0}), bench::quartic_1d_config(0, 1000));
  ASSERT_GE(tr.records.size(), 1u);
  EXPECT_EQ(tr.records[0].phase, Phase::Third);
  EXPECT_DOUBLE_EQ(tr.records[0].x(0), 3.125);  // c_q / (L Q) = 600 / (24 * 8)
  EXPECT_LT(tr.f_final, 0.0);
  EXPECT_NEAR(tr.x_final(0), bench::quartic_1d_root(), 1e-2);
  EXPECT_TRUE(tr.all_flags_hold());
}

TEST(Optimize, ThirdOrderFixedPoint) {
  const Trace tr = optimize(corpus::xxy_plus_yy(), vec({0, 0}), bench::xxy_config(0, 100));
  EXPECT_TRUE(tr.converged);
  EXPECT_EQ(tr.x_final, Vector::Zero(2));
  EXPECT_EQ(tr.third_steps, 0);
  EXPECT_EQ(tr.records.back().phase, Phase::Terminal);
}

TEST(Optimize, DeterministicGivenSeed) {
  const Polynomial f = corpus::quartic_plus_sixth(corpus::default_quartic());
  const OptimizerConfig cfg = bench::bounded_config(f, 2.0, 5, 100);
  const Trace a = optimize(f, vec({0.2, 0.1}), cfg);
  const Trace b = optimize(f, vec({0.2, 0.1}), cfg);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].x, b.records[i].x);
    EXPECT_EQ(a.records[i].f, b.records[i].f);
  }
}

TEST(Optimize, TerminalPointPassesCheckerAtRunTolerances) {
  for (const auto& run : bench::corpus_runs(3, 1000)) {
    const Trace tr = optimize(run.poly, run.x0, run.cfg);
    if (!tr.converged) continue;
    const Matrix h = run.poly.evaluate(tr.x_final, 2).hess;
    const ConditionReport rep =
        check_third_order(run.poly, tr.x_final, terminal_tolerances(run.cfg, run.poly.dim(), h));
    EXPECT_TRUE(rep.holds()) << run.name << " verdict " << to_string(rep.verdict);
  }
}

TEST(Optimize, LongRunsEndAtThirdOrderPoints) {
  // Empirical proxy for limit points: final iterates satisfy the conditions
  // at loose tolerances.
  ConditionTolerances loose;
  loose.grad = 1e-6;
  loose.eig = 1e-4;
  loose.third = 1e-2;
  loose.null_rel = 1e-4;
  for (const auto& run : bench::corpus_runs(1, 2000)) {
    if (run.name == "quartic_plus_sixth") continue;  // slow sublinear approach to a degenerate minimum
    const Trace tr = optimize(run.poly, run.x0, run.cfg);
    EXPECT_TRUE(tr.converged) << run.name;
    EXPECT_TRUE(check_third_order(run.poly, tr.x_final, loose).holds()) << run.name;
  }
}

TEST(Optimize, StrictThirdOrderSaddleBudget) {
  // The confined monkey saddle: some iterate has small gradient, nearly PSD
  // Hessian and small c_q simultaneously within the budget.
  const double c1 = 1e-3, c2 = 1e-2, c3 = 1.0;
  const OptimizerConfig cfg = bench::confined_saddle_config(0, 200);
  const Trace tr = optimize(corpus::monkey_saddle_confined(), vec({0, 0}), cfg);
  bool found = false;
  for (const auto& r : tr.records) found = found || (r.grad_norm < c1 && r.min_eig > -c2 && r.c_q < c3);
  EXPECT_TRUE(found);
}

TEST(Optimize, InvalidConfigAndInputs) {
  OptimizerConfig cfg;
  cfg.R = 0;
  EXPECT_THROW(optimize(corpus::quadratic(), vec({1, 1}), cfg), InvalidArgument);
  EXPECT_THROW(optimize(corpus::quadratic(), vec({1}), OptimizerConfig{}), DimensionMismatch);
  EXPECT_THROW(optimize(corpus::quadratic(), vec({NAN, 1}), OptimizerConfig{}), InvalidArgument);
}

TEST(Optimize, SamplerExhaustionPropagates) {
  OptimizerConfig cfg = bench::confined_saddle_config(0, 10);
  cfg.B = 1e-3;
  cfg.max_sampler_retries = 5;
  EXPECT_THROW(optimize(corpus::monkey_saddle_confined(), vec({0, 0}), cfg), SamplerExhausted);
}

TEST(RateCheck, QuadraticAndConfinedSaddle) {
  const Polynomial q = corpus::quadratic();
  const OptimizerConfig qc = bench::bounded_config(q, 2.0, 0, 100);
  EXPECT_TRUE(rate_check(optimize(q, vec({1, 1}), qc), 0.0, qc).holds());

  const OptimizerConfig cfg = bench::confined_saddle_config(0, 100);
  const Trace tr = optimize(corpus::monkey_saddle_confined(), vec({0, 0}), cfg);
  EXPECT_TRUE(rate_check(tr, bench::confined_saddle_grid_min(), cfg).holds());
}

TEST(RateCheck, SingleIterationBudget) {
  const Polynomial f = corpus::wine_bottle();
  const OptimizerConfig cfg = bench::bounded_config(f, 2.0, 0, 1);
  const Trace tr = optimize(f, vec({0.5, 0.2}), cfg);
  const RateReport rep = rate_check(tr, 0.0, cfg);
  ASSERT_TRUE(rep.holds());
  EXPECT_EQ(*rep.qualifying_iter, 0);
}
