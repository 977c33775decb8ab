#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>

#include "thirdopt/escape.hpp"
#include "thirdopt/polynomial.hpp"
#include "thirdopt/spectral.hpp"
#include "thirdopt/sym_tensor3.hpp"

namespace thirdopt {

enum class HessianClass { LocalMinType, LocalMaxType, StrictSaddle, Degenerate };

inline const char* to_string(HessianClass c) {
  switch (c) {
    case HessianClass::LocalMinType: return "LocalMinType";
    case HessianClass::LocalMaxType: return "LocalMaxType";
    case HessianClass::StrictSaddle: return "StrictSaddle";
    case HessianClass::Degenerate: return "Degenerate";
  }
  return "?";
}

/// Eigenvalue-sign classification; |lambda| <= tol counts as zero.
inline HessianClass classify_hessian(const Matrix& h, double tol = 1e-8) {
  const EigenDecomp e = eig_sym(h);
  int pos = 0, neg = 0, zero = 0;
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    const double v = e.values(i);
    if (v > tol) ++pos;
    else if (v < -tol) ++neg;
    else ++zero;
  }
  if (pos > 0 && neg > 0) return HessianClass::StrictSaddle;
  if (zero > 0) return HessianClass::Degenerate;
  return neg > 0 ? HessianClass::LocalMaxType : HessianClass::LocalMinType;
}

enum class Verdict { FirstOrderFail, SecondOrderFail, ThirdOrderFail, ThirdOrderNecessaryHolds };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::FirstOrderFail: return "FirstOrderFail";
    case Verdict::SecondOrderFail: return "SecondOrderFail";
    case Verdict::ThirdOrderFail: return "ThirdOrderFail";
    case Verdict::ThirdOrderNecessaryHolds: return "ThirdOrderNecessaryHolds";
  }
  return "?";
}

struct ConditionTolerances {
  double grad = 1e-8;      // ||grad f|| <= grad
  double eig = 1e-8;       // lambda_n >= -eig
  double null_rel = 1e-8;  // null space: |lambda| <= null_rel * max(1, ||H||)
  double third = 1e-8;     // ||Proj_null T||_F <= third
};

struct ConditionReport {
  double grad_norm = 0.0;
  double min_eig = 0.0;
  int null_dim = 0;
  double null_cutoff = 0.0;
  double third_residual = 0.0;
  Verdict verdict = Verdict::ThirdOrderNecessaryHolds;
  ConditionTolerances tolerances;
  Subspace null_space;

  bool holds() const { return verdict == Verdict::ThirdOrderNecessaryHolds; }
};

/// Tests, in order: vanishing gradient, PSD Hessian, and vanishing cubic form
/// on the Hessian's numerical null space (via the Frobenius norm of the
/// projected third-derivative tensor). The verdict is the first failure.
inline ConditionReport check_third_order_bundle(const DerivativeBundle& b,
                                                const ConditionTolerances& tol = {}) {
  if (b.order < 3) throw InvalidArgument("check_third_order: bundle must include third derivatives");
  ConditionReport rep;
  rep.tolerances = tol;
  rep.grad_norm = b.grad.norm();
  const EigenDecomp e = eig_sym(b.hess);
  rep.min_eig = e.smallest();
  rep.null_space = thirdopt::null_space(e, tol.null_rel);
  rep.null_dim = rep.null_space.dim();
  rep.null_cutoff = tol.null_rel * std::max(1.0, e.spectral_norm());
  rep.third_residual = projected_frobenius(b.third, rep.null_space);

  if (rep.grad_norm > tol.grad) {
    rep.verdict = Verdict::FirstOrderFail;
  } else if (rep.min_eig < -tol.eig) {
    rep.verdict = Verdict::SecondOrderFail;
  } else if (rep.third_residual > tol.third) {
    rep.verdict = Verdict::ThirdOrderFail;
  } else {
    rep.verdict = Verdict::ThirdOrderNecessaryHolds;
  }
  return rep;
}

template <Objective F>
ConditionReport check_third_order(const F& f, const Vector& x, const ConditionTolerances& tol = {}) {
  detail::require_dim(x.size(), f.dim(), "check_third_order");
  return check_third_order_bundle(f.evaluate(x, 3), tol);
}

/// Tolerances under which a point where optimize() stopped must pass the
/// checker. mu <= tol_mu bounds the gradient and the bottom eigenvalue; an
/// empty (or untriggered) competitive subspace bounds the projected tensor
/// on any eigen-suffix whose eigenvalues are at most the null cutoff.
inline ConditionTolerances terminal_tolerances(const OptimizerConfig& cfg, int n, const Matrix& hess) {
  constexpr double kSlack = 1 + 1e-9;
  ConditionTolerances t;
  t.grad = cfg.R * cfg.tol_mu * cfg.tol_mu * kSlack;
  t.eig = 1.5 * cfg.R * cfg.tol_mu * kSlack;
  const double q = cfg.Q(n);
  const double eta = t.null_rel * std::max(1.0, eig_sym(hess).spectral_norm());
  t.third = std::max({std::sqrt(12.0 * cfg.L * q * q * eta), cfg.c_q_min,
                      third_order_trigger(t.grad, cfg.L, q)}) *
            kSlack;
  return t;
}

/// Explicit descent certificate for a point that fails the conditions.
struct DescentWitness {
  int failing_order = 0;  // 1, 2 or 3
  Vector direction;       // unit
  double step = 0.0;      // distance moved along `direction`
  double c = 0.0;         // |lambda_n| (order 2) or T(u,u,u) along -direction (order 3)
  double predicted_decrease = 0.0;
  double evaluated_decrease = 0.0;  // f(x) - f(x + step * direction)
  bool verified = false;            // evaluated >= 0.99 * predicted
};

namespace detail {

/// Best unit u in S found for T(u,u,u): sampler start, extra Gaussian draws,
/// then shifted power iterations in the subspace's own coordinates.
template <typename Rng>
SampledDirection maximize_cubic_form(const SymTensor3& t, const Subspace& s, Rng& rng,
                                     int extra_samples) {
  SampledDirection best = approx_direction(t, s, 8.0, rng, 1000);
  const SymTensor3 core = t.multilinear(s.basis());
  const int k = core.dim();
  std::normal_distribution<double> normal(0.0, 1.0);

  auto consider = [&](Vector y) {
    double norm = y.norm();
    if (norm == 0.0) return;
    y /= norm;
    const double shift = 2.0 * frobenius(core);
    for (int it = 0; it < 500; ++it) {
      Vector next = contract2(core, y) + shift * y;
      norm = next.norm();
      if (norm == 0.0) break;
      next /= norm;
      const bool done = (next - y).norm() < 1e-15;
      y = next;
      if (done) break;
    }
    double v = contract3(core, y);
    if (v < 0) {
      y = -y;
      v = -v;
    }
    if (v > best.value) {
      best.u = s.basis() * y;
      best.value = v;
    }
  };

  consider(s.basis().transpose() * best.u);
  for (int i = 0; i < extra_samples; ++i) {
    Vector y(k);
    for (int j = 0; j < k; ++j) y(j) = normal(rng);
    consider(y);
  }
  return best;
}

}  // namespace detail

/// Follows the constructive proof that each failed condition yields descent:
///  order 1: move along -grad/||grad|| by eps ||grad|| with
///           eps = min{1/||grad||, 1/(2(2L'/3 + L/24))}; predicted eps ||grad||^2 / 2.
///  order 2: move along the bottom eigenvector (c = -lambda_n) by
///           eps = min{sqrt(3c/L), 3c/(4L')} / 2; predicted c eps^2 / 4.
///  order 3: move along -u, u a null-space direction with T(u,u,u) = c > 0,
///           by eps = c / L (< 2c/L); predicted c eps^3 / 12.
/// L bounds the Lipschitz constant of the third derivative along the move;
/// L' bounds the operator norms of the Hessian and third derivative at x and
/// defaults to max(||H||, ||T||_F). Returns nullopt when the conditions hold.
template <Objective F>
std::optional<DescentWitness> descent_witness(const F& f, const Vector& x, const ConditionReport& report,
                                              double l, std::optional<double> l_prime = std::nullopt,
                                              std::uint64_t seed = 0) {
  if (report.holds()) return std::nullopt;
  if (!(l > 0.0)) throw InvalidArgument("descent_witness: L must be positive");
  const DerivativeBundle b = f.evaluate(x, 3);
  const EigenDecomp e = eig_sym(b.hess);
  const double lp = l_prime.value_or(std::max(e.spectral_norm(), frobenius(b.third)));
  constexpr double kInf = std::numeric_limits<double>::infinity();
  auto ratio = [&](double num, double den) { return den > 0.0 ? num / den : kInf; };

  DescentWitness w;
  switch (report.verdict) {
    case Verdict::FirstOrderFail: {
      const double g = b.grad.norm();
      const double eps = std::min(1.0 / g, ratio(0.5, 2.0 * lp / 3.0 + l / 24.0));
      w.failing_order = 1;
      w.direction = -b.grad / g;
      w.step = eps * g;
      w.c = g;
      w.predicted_decrease = eps * g * g / 2.0;
      break;
    }
    case Verdict::SecondOrderFail: {
      const double c = -e.smallest();
      Vector u = e.vectors.col(e.dim() - 1);
      if (contract3(b.third, u) > 0.0) u = -u;
      double eps = 0.5 * std::min(std::sqrt(ratio(3.0 * c, l)), ratio(3.0 * c, 4.0 * lp));
      if (!std::isfinite(eps)) eps = 1.0;
      w.failing_order = 2;
      w.direction = u;
      w.step = eps;
      w.c = c;
      w.predicted_decrease = c * eps * eps / 4.0;
      break;
    }
    case Verdict::ThirdOrderFail: {
      std::mt19937_64 rng(seed);
      const SampledDirection d = detail::maximize_cubic_form(b.third, report.null_space, rng, 64);
      const double c = d.value;
      const double eps = c / l;
      w.failing_order = 3;
      w.direction = -d.u;
      w.step = eps;
      w.c = c;
      w.predicted_decrease = c * eps * eps * eps / 12.0;
      break;
    }
    case Verdict::ThirdOrderNecessaryHolds:
      return std::nullopt;
  }
  const Vector moved = x + w.step * w.direction;
  w.evaluated_decrease = b.value - f.evaluate(moved, 0).value;
  w.verified = w.evaluated_decrease >= 0.99 * w.predicted_decrease && w.evaluated_decrease > 0.0;
  return w;
}

}  // namespace thirdopt
