#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "thirdopt/cubic_step.hpp"
#include "thirdopt/polynomial.hpp"
#include "thirdopt/spectral.hpp"
#include "thirdopt/sym_tensor3.hpp"

namespace thirdopt {

struct OptimizerConfig {
  double R = 1.0;  // Hessian Lipschitz bound, also the cubic regularizer
  double L = 1.0;  // third-derivative Lipschitz bound (Frobenius)
  double B = 8.0;  // sampler constant, Q = B n^1.5
  int max_iters = 1000;
  std::uint64_t seed = 0;
  double tol_mu = 1e-6;
  double c_q_min = 1e-10;
  int max_sampler_retries = 200;
  /// Stop once mu <= tol_mu and no third-order step fired for this many
  /// consecutive iterations.
  int quiet_iters = 3;
  bool early_stop = true;
  /// false gives the plain cubic-regularization baseline.
  bool third_order_steps = true;
  /// Additive slack for the per-step decrease checks recorded in the trace.
  double ineq_tol = 1e-9;

  double Q(int n) const { return B * std::pow(static_cast<double>(n), 1.5); }

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!std::isfinite(v) || !(v > 0.0)) {
        throw InvalidArgument(std::string("OptimizerConfig: ") + name + " must be positive");
      }
    };
    positive(R, "R");
    positive(L, "L");
    positive(B, "B");
    positive(tol_mu, "tol_mu");
    positive(c_q_min, "c_q_min");
    if (max_iters <= 0) throw InvalidArgument("OptimizerConfig: max_iters must be positive");
    if (max_sampler_retries <= 0) {
      throw InvalidArgument("OptimizerConfig: max_sampler_retries must be positive");
    }
    if (quiet_iters <= 0) throw InvalidArgument("OptimizerConfig: quiet_iters must be positive");
  }
};

// ---------------------------------------------------------------------------
// Competitive subspace
// ---------------------------------------------------------------------------

struct CompetitiveSubspaceResult {
  Subspace subspace;
  double c_q = 0.0;        // ||Proj_S T||_F, 0 when empty
  double threshold = 0.0;  // c_q^2 / (12 L Q^2)
  /// 0-based index i of the chosen suffix span{v_i, ..., v_{n-1}} in
  /// descending eigen-order.
  std::optional<int> eig_index;
  double top_eigenvalue = 0.0;  // lambda_i of the chosen suffix

  bool empty() const { return subspace.is_empty(); }
};

/// Enumerates suffixes span{v_i, ..., v_n} of the descending eigenbasis of H
/// from largest to smallest and returns the first whose top eigenvalue is at
/// most ||Proj T||_F^2 / (12 L Q^2). A qualifying suffix whose projected norm
/// is at or below `c_q_min` is reported as empty.
inline CompetitiveSubspaceResult competitive_subspace(const Matrix& h, const SymTensor3& t,
                                                      double l, double q,
                                                      double c_q_min = 1e-10) {
  const int n = t.dim();
  detail::require_dim(h.rows(), n, "competitive_subspace H");
  if (!(l > 0.0) || !(q > 0.0)) throw InvalidArgument("competitive_subspace: L, Q must be positive");

  CompetitiveSubspaceResult out;
  out.subspace = Subspace::empty(n);
  if (n == 0) return out;

  const EigenDecomp e = eig_sym(h);
  // Core tensor in eigen-coordinates; the squared Frobenius norm of a suffix
  // projection is the sum of core entries with all indices in the suffix.
  const SymTensor3 core = t.multilinear(e.vectors);
  std::vector<double> shell(n, 0.0);
  const auto& entries = core.entries();
  std::size_t idx = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c, ++idx) {
        shell[std::min({a, b, c})] += entries[idx] * entries[idx];
      }
  std::vector<double> suffix(n + 1, 0.0);
  for (int i = n - 1; i >= 0; --i) suffix[i] = suffix[i + 1] + shell[i];

  for (int i = 0; i < n; ++i) {
    const double c = std::sqrt(suffix[i]);
    const double threshold = c * c / (12.0 * l * q * q);
    if (threshold >= e.values(i)) {
      if (c <= c_q_min) return out;
      out.subspace = Subspace(n, e.vectors.rightCols(n - i));
      out.c_q = c;
      out.threshold = threshold;
      out.eig_index = i;
      out.top_eigenvalue = e.values(i);
      return out;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Randomized direction sampler
// ---------------------------------------------------------------------------

struct SampledDirection {
  Vector u;            // unit vector in S with T(u,u,u) >= target
  double value = 0.0;  // T(u,u,u)
  double target = 0.0; // ||Proj_S T||_F / (B n^1.5)
  int draws = 0;
};

/// Draws Gaussian directions in S, normalizes them, and stops at the first
/// with |T(u,u,u)| >= ||Proj_S T||_F / (B n^1.5), n the ambient dimension.
/// The sign is flipped so T(u,u,u) > 0. Throws SamplerExhausted after
/// `max_draws` failures.
template <typename Rng>
SampledDirection approx_direction(const SymTensor3& t, const Subspace& s, double b, Rng& rng,
                                  int max_draws = 200) {
  detail::require_dim(s.ambient_dim(), t.dim(), "approx_direction");
  if (s.is_empty()) throw InvalidArgument("approx_direction: subspace is empty");
  const double proj_norm = projected_frobenius(t, s);
  if (!(proj_norm > 0.0)) throw InvalidArgument("approx_direction: projected tensor is zero");

  SampledDirection out;
  out.target = proj_norm / (b * std::pow(static_cast<double>(t.dim()), 1.5));
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector coeffs(s.dim());
  for (int draw = 1; draw <= max_draws; ++draw) {
    for (Eigen::Index i = 0; i < coeffs.size(); ++i) coeffs(i) = normal(rng);
    Vector u = s.basis() * coeffs;
    const double norm = u.norm();
    if (norm == 0.0) continue;
    u /= norm;
    const double value = contract3(t, u);
    if (std::abs(value) >= out.target) {
      out.u = value > 0.0 ? u : Vector(-u);
      out.value = std::abs(value);
      out.draws = draw;
      return out;
    }
  }
  throw SamplerExhausted("approx_direction: no direction met the bound after " +
                         std::to_string(max_draws) + " draws (B too small?)");
}

// ---------------------------------------------------------------------------
// Third-order step
// ---------------------------------------------------------------------------

/// x' = z - c_q / (L Q) u.
inline Vector third_order_step(const Vector& z, const CompetitiveSubspaceResult& csr,
                               const Vector& u, double l, double q) {
  if (csr.empty()) throw InvalidArgument("third_order_step: competitive subspace is empty");
  detail::require_dim(u.size(), z.size(), "third_order_step");
  return z - (csr.c_q / (l * q)) * u;
}

/// Guaranteed decrease of a triggered third-order step: c_q^4 / (24 L^3 Q^4).
inline double third_order_decrease(double c_q, double l, double q) {
  return std::pow(c_q, 4) / (24.0 * l * l * l * std::pow(q, 4));
}

/// A third-order step fires when c_q >= Q (24 eps1 L max(1, L))^(1/3), eps1
/// the gradient norm after the cubic step. For L <= 1 this is
/// Q (24 eps1 L)^(1/3); for L > 1 the extra factor of L keeps the gradient
/// term of the step below c_q eps^3 / (24 Q) so the decrease bound holds.
inline double third_order_trigger(double eps1, double l, double q) {
  return q * std::cbrt(24.0 * eps1 * l * std::max(1.0, l));
}

// ---------------------------------------------------------------------------
// Optimizer
// ---------------------------------------------------------------------------

enum class Phase { Cubic, Third, Terminal };

inline const char* to_string(Phase p) {
  switch (p) {
    case Phase::Cubic: return "cubic";
    case Phase::Third: return "third";
    case Phase::Terminal: return "terminal";
  }
  return "?";
}

inline Phase phase_from_string(const std::string& s) {
  if (s == "cubic") return Phase::Cubic;
  if (s == "third") return Phase::Third;
  if (s == "terminal") return Phase::Terminal;
  throw InvalidArgument("unknown phase: " + s);
}

/// Runtime checks of the per-step guarantees.
struct StepFlags {
  bool cubic_decrease = true;          // f(z) <= f(x) - R||z-x||^3/12
  bool step_vs_mu = true;              // ||z-x|| >= mu(z)
  std::optional<bool> third_decrease;  // f(x') <= f(z) - c_q^4/(24 L^3 Q^4), if triggered
  bool monotone = true;                // f(x') <= f(z) <= f(x)

  bool all() const {
    return cubic_decrease && step_vs_mu && third_decrease.value_or(true) && monotone;
  }
};

/// One outer iteration x -> z -> x'. `f` is f(x'), the point the next
/// iteration starts from.
struct IterationRecord {
  int iter = 0;
  Phase phase = Phase::Cubic;
  double f = 0.0;
  double grad_norm = 0.0;  // ||grad f(z)||
  double mu = 0.0;         // mu(z)
  double c_q = 0.0;
  int subspace_dim = 0;
  double step_norm = 0.0;  // ||x' - x||
  StepFlags flags;

  double f_prev = 0.0;  // f(x)
  double f_z = 0.0;     // f(z)
  double min_eig = 0.0; // lambda_n(hess f(z))
  double cubic_step_norm = 0.0;
  double third_step_norm = 0.0;
  int sampler_draws = 0;
  Vector x;  // x'
};

struct Trace {
  std::vector<IterationRecord> records;
  Vector x0;
  double f0 = 0.0;
  Vector x_final;
  double f_final = 0.0;
  bool converged = false;
  int iterations = 0;
  int third_steps = 0;

  bool all_flags_hold() const {
    for (const auto& r : records)
      if (!r.flags.all()) return false;
    return true;
  }
};

namespace detail {
inline double ineq_slack(double tol, double a, double b) {
  return tol + 64.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b));
}
}  // namespace detail

/// Alternates cubic-regularized steps with randomized third-order steps.
/// Each iteration: z = CubicReg(x); compute eps1 = ||grad f(z)|| and the
/// competitive subspace at z; if the trigger fires, sample u and set
/// x' = z - c_q/(LQ) u, otherwise x' = z. Inequality violations are
/// recorded in the flags, never thrown.
template <Objective F>
Trace optimize(const F& f, const Vector& x0, const OptimizerConfig& cfg) {
  cfg.validate();
  const int n = f.dim();
  detail::require_dim(x0.size(), n, "optimize x0");
  if (!x0.allFinite()) throw InvalidArgument("optimize: x0 has non-finite entries");

  const double q = cfg.Q(n);
  std::mt19937_64 rng(cfg.seed);

  Trace trace;
  trace.x0 = x0;
  Vector x = x0;
  DerivativeBundle bx = f.evaluate(x, 2);
  trace.f0 = bx.value;
  int quiet = 0;
  IterationRecord last;

  for (int i = 0; i < cfg.max_iters; ++i) {
    const CubicSolution sol = solve_cubic_subproblem(bx.grad, bx.hess, cfg.R);
    const Vector z = x + sol.step;
    const DerivativeBundle bz = f.evaluate(z, 3);
    const double eps1 = bz.grad.norm();
    const double min_eig = eig_sym(bz.hess).smallest();
    const double mu_z = std::max(std::sqrt(eps1 / cfg.R), std::max(0.0, -2.0 / (3.0 * cfg.R) * min_eig));
    const double s = sol.radius;

    IterationRecord rec;
    rec.iter = i;
    rec.f_prev = bx.value;
    rec.f_z = bz.value;
    rec.grad_norm = eps1;
    rec.mu = mu_z;
    rec.min_eig = min_eig;
    rec.cubic_step_norm = s;
    rec.flags.cubic_decrease =
        bz.value <= bx.value - cfg.R * s * s * s / 12.0 + detail::ineq_slack(cfg.ineq_tol, bx.value, bz.value);
    rec.flags.step_vs_mu = s >= mu_z - cfg.ineq_tol;

    CompetitiveSubspaceResult csr;
    csr.subspace = Subspace::empty(n);
    if (cfg.third_order_steps) csr = competitive_subspace(bz.hess, bz.third, cfg.L, q, cfg.c_q_min);
    rec.c_q = csr.c_q;
    rec.subspace_dim = csr.subspace.dim();

    const bool triggered = !csr.empty() && csr.c_q >= third_order_trigger(eps1, cfg.L, q);
    Vector x_next = z;
    DerivativeBundle b_next = bz;
    if (triggered) {
      const SampledDirection d = approx_direction(bz.third, csr.subspace, cfg.B, rng, cfg.max_sampler_retries);
      x_next = third_order_step(z, csr, d.u, cfg.L, q);
      b_next = f.evaluate(x_next, 2);
      rec.phase = Phase::Third;
      rec.sampler_draws = d.draws;
      rec.third_step_norm = (x_next - z).norm();
      const double predicted = third_order_decrease(csr.c_q, cfg.L, q);
      rec.flags.third_decrease =
          b_next.value <= bz.value - predicted + detail::ineq_slack(cfg.ineq_tol, bz.value, b_next.value);
      ++trace.third_steps;
    }
    rec.f = b_next.value;
    rec.step_norm = (x_next - x).norm();
    rec.x = x_next;
    rec.flags.monotone = bz.value <= bx.value + detail::ineq_slack(cfg.ineq_tol, bx.value, bz.value) &&
                         b_next.value <= bz.value + detail::ineq_slack(cfg.ineq_tol, bz.value, b_next.value);
    trace.records.push_back(rec);
    last = rec;

    quiet = (!triggered && mu_z <= cfg.tol_mu) ? quiet + 1 : 0;
    x = x_next;
    bx = std::move(b_next);
    trace.iterations = i + 1;

    if (cfg.early_stop && quiet >= cfg.quiet_iters) {
      trace.converged = true;
      IterationRecord term = last;
      term.iter = i + 1;
      term.phase = Phase::Terminal;
      term.f_prev = bx.value;
      term.f_z = bx.value;
      term.step_norm = 0.0;
      term.cubic_step_norm = 0.0;
      term.third_step_norm = 0.0;
      term.sampler_draws = 0;
      term.flags = StepFlags{};
      trace.records.push_back(term);
      break;
    }
  }

  trace.x_final = x;
  trace.f_final = bx.value;
  return trace;
}

// ---------------------------------------------------------------------------
// Convergence-rate envelope
// ---------------------------------------------------------------------------

/// Checks that some iteration i < t satisfies both
///   mu(z) <= (12 (f(x0) - f*) / (R t))^(1/3)
///   c_q(z) <= max{ Q (24 ||grad f(z)|| L)^(1/3), Q (24 L^3 (f(x0) - f*) / t)^(1/4) }.
struct RateReport {
  int t = 0;
  double gap = 0.0;
  double mu_bound = 0.0;
  double c_q_budget_bound = 0.0;  // the t-dependent branch
  std::optional<int> qualifying_iter;
  double qualifying_mu = 0.0;
  double qualifying_c_q = 0.0;
  double qualifying_c_q_bound = 0.0;  // max of both branches at that iterate

  bool holds() const { return qualifying_iter.has_value(); }
};

inline RateReport rate_check(const Trace& trace, double f_star, const OptimizerConfig& cfg) {
  RateReport rep;
  const int n = static_cast<int>(trace.x0.size());
  const double q = cfg.Q(n);
  rep.t = cfg.max_iters;
  rep.gap = std::max(0.0, trace.f0 - f_star);
  rep.mu_bound = std::cbrt(12.0 * rep.gap / (cfg.R * rep.t));
  rep.c_q_budget_bound = q * std::pow(24.0 * cfg.L * cfg.L * cfg.L * rep.gap / rep.t, 0.25);
  // Relative slack for roundoff in the bound expressions only.
  constexpr double kSlack = 1e-12;
  for (const auto& r : trace.records) {
    if (r.iter >= rep.t) break;
    const double c_q_bound =
        std::max(q * std::cbrt(24.0 * r.grad_norm * cfg.L), rep.c_q_budget_bound);
    if (r.mu <= rep.mu_bound * (1 + kSlack) && r.c_q <= c_q_bound * (1 + kSlack)) {
      rep.qualifying_iter = r.iter;
      rep.qualifying_mu = r.mu;
      rep.qualifying_c_q = r.c_q;
      rep.qualifying_c_q_bound = c_q_bound;
      break;
    }
  }
  return rep;
}

}  // namespace thirdopt
