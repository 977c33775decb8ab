#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "thirdopt/polynomial.hpp"
#include "thirdopt/spectral.hpp"
#include "thirdopt/types.hpp"

namespace thirdopt {

/// Global minimizer s of  m(s) = g^T s + 1/2 s^T H s + R/6 ||s||^3.
struct CubicSolution {
  Vector step;
  double model_value = 0.0;
  double radius = 0.0;
  bool hard_case = false;
};

inline double cubic_model(const Vector& g, const Matrix& h, double r, const Vector& s) {
  const double norm = s.norm();
  return g.dot(s) + 0.5 * s.dot(h * s) + r / 6.0 * norm * norm * norm;
}

/// Residuals of the global-optimality conditions for the cubic model:
///   g + H s + (R/2)||s|| s = 0   and   H + (R/2)||s|| I  PSD.
struct CubicCertificate {
  double stationarity = 0.0;   // ||g + Hs + (R/2)||s|| s||
  double curvature = 0.0;      // lambda_min(H) + (R/2)||s||
  double stationarity_tol = 0.0;
  double curvature_tol = 0.0;

  bool holds() const {
    return stationarity <= stationarity_tol && curvature >= -curvature_tol;
  }
};

inline CubicCertificate certify_cubic(const Vector& g, const Matrix& h, double r,
                                      const CubicSolution& sol) {
  CubicCertificate c;
  const double norm = sol.step.norm();
  c.stationarity = (g + h * sol.step + 0.5 * r * norm * sol.step).norm();
  const EigenDecomp e = eig_sym(h);
  c.curvature = e.smallest() + 0.5 * r * norm;
  c.stationarity_tol = 1e-8 * std::max(1.0, g.norm());
  c.curvature_tol = 1e-8 * std::max(1.0, e.spectral_norm());
  return c;
}

/// Solves the cubic subproblem in the eigenbasis of H. The secular equation
/// ||(H + (R r / 2) I)^{-1} g|| = r is solved by bisection on
/// r > max(0, -2 lambda_min / R); in the hard case (g has no component in the
/// bottom eigenspace and the equation undershoots) a bottom-eigenvector
/// component is added to reach the required radius.
inline CubicSolution solve_cubic_subproblem(const Vector& g, const Matrix& h, double r) {
  const auto n = g.size();
  detail::require_dim(h.rows(), n, "solve_cubic_subproblem H rows");
  detail::require_dim(h.cols(), n, "solve_cubic_subproblem H cols");
  if (!std::isfinite(r) || !(r > 0.0)) {
    throw InvalidArgument("solve_cubic_subproblem: R must be positive and finite");
  }
  if (!g.allFinite() || !h.allFinite()) {
    throw InvalidArgument("solve_cubic_subproblem: non-finite input");
  }

  CubicSolution out;
  out.step = Vector::Zero(n);
  if (n == 0) return out;

  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.transpose()));
  const Vector& lam = es.eigenvalues();  // ascending
  const Matrix& basis = es.eigenvectors();
  const Vector gt = basis.transpose() * g;

  const double lam_min = lam(0);
  const double hscale = std::max({1.0, std::abs(lam(0)), std::abs(lam(n - 1))});
  const double gnorm = g.norm();
  const double r_min = std::max(0.0, -2.0 * lam_min / r);

  // Bottom eigenspace: eigenvalues tied with lambda_min.
  const double tie_tol = 1e-12 * hscale;
  Eigen::Index bottom = 0;
  while (bottom < n && lam(bottom) - lam_min <= tie_tol) ++bottom;

  double bottom_g = 0.0;
  for (Eigen::Index i = 0; i < bottom; ++i) bottom_g += gt(i) * gt(i);
  bottom_g = std::sqrt(bottom_g);

  auto step_coords = [&](double radius) {
    Vector s(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double denom = lam(i) + 0.5 * r * radius;
      s(i) = denom > 0.0 ? -gt(i) / denom : 0.0;
    }
    return s;
  };

  auto finish = [&](const Vector& coords, bool hard) {
    out.step = basis * coords;
    out.radius = out.step.norm();
    out.model_value = cubic_model(g, h, r, out.step);
    out.hard_case = hard;
    return out;
  };

  if (gnorm == 0.0 && lam_min >= 0.0) return finish(Vector::Zero(n), false);

  const double g_tol = 1e-14 * std::max(1.0, gnorm);
  if (bottom_g <= g_tol && r_min > 0.0) {
    Vector s = step_coords(r_min);
    for (Eigen::Index i = 0; i < bottom; ++i) s(i) = 0.0;
    const double rest = s.norm();
    if (rest <= r_min) {
      s(0) = std::sqrt(std::max(0.0, r_min * r_min - rest * rest));
      return finish(s, true);
    }
  }

  // phi(radius) = ||s(radius)|| - radius is decreasing on (r_min, inf).
  // `hi` solves (R/2) hi^2 + lambda_min hi = ||g||, which forces phi(hi) <= 0.
  double lo = r_min;
  const double disc = std::sqrt(lam_min * lam_min + 2.0 * r * gnorm);
  // Rationalized when lambda_min > 0 to avoid cancellation for tiny ||g||.
  double hi = lam_min > 0.0 ? 2.0 * gnorm / (lam_min + disc) : (-lam_min + disc) / r;
  hi = std::max(hi, lo) * (1.0 + 1e-12) + std::numeric_limits<double>::min();
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double phi = step_coords(mid).norm() - mid;
    if (phi > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double radius = 0.5 * (lo + hi);
  Vector s = step_coords(radius);

  // Near the hard case phi is steep and bisection leaves ||s|| != radius.
  // Rescale the bottom block so the norm matches exactly.
  if (r_min > 0.0 && bottom_g > 0.0) {
    double rest = 0.0, bot = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) (i < bottom ? bot : rest) += s(i) * s(i);
    if (rest <= radius * radius && bot > 0.0) {
      const double kappa = std::sqrt((radius * radius - rest) / bot);
      for (Eigen::Index i = 0; i < bottom; ++i) s(i) *= kappa;
    }
  }
  return finish(s, false);
}

/// One cubic-regularized Newton step: z = x + argmin_s m_x(s).
template <Objective F>
Vector cubic_reg_step(const F& f, const Vector& x, double r) {
  const DerivativeBundle b = f.evaluate(x, 2);
  return x + solve_cubic_subproblem(b.grad, b.hess, r).step;
}

/// mu(z) = max{ sqrt(||grad f(z)|| / R), -2/(3R) lambda_n(hess f(z)) }.
struct MuValue {
  double value = 0.0;
  double grad_part = 0.0;
  double eig_part = 0.0;
};

inline MuValue mu_from(const Vector& grad, const Matrix& hess, double r) {
  if (!(r > 0.0)) throw InvalidArgument("mu: R must be positive");
  MuValue m;
  m.grad_part = std::sqrt(grad.norm() / r);
  m.eig_part = std::max(0.0, -2.0 / (3.0 * r) * eig_sym(hess).smallest());
  m.value = std::max(m.grad_part, m.eig_part);
  return m;
}

template <Objective F>
MuValue mu(const F& f, const Vector& z, double r) {
  const DerivativeBundle b = f.evaluate(z, 2);
  return mu_from(b.grad, b.hess, r);
}

}  // namespace thirdopt
