#pragma once

// Independent reference computations used to freeze expected values and to
// drive the bench suites. Nothing here calls the optimizer or the cubic
// solver; objective values are evaluated by plain loops.

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "thirdopt/polynomial.hpp"
#include "thirdopt/sym_tensor3.hpp"

namespace thirdopt::oracle {

struct GridMin2 {
  double value = std::numeric_limits<double>::infinity();
  double x = 0.0;
  double y = 0.0;
};

/// Minimum of f over an n x n grid on [lo, hi]^2 (endpoints included).
inline GridMin2 grid_min_2d(const std::function<double(double, double)>& f, double lo, double hi,
                            int n) {
  GridMin2 best;
  const double h = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) {
    const double x = lo + i * h;
    for (int j = 0; j < n; ++j) {
      const double y = lo + j * h;
      const double v = f(x, y);
      if (v < best.value) best = {v, x, y};
    }
  }
  return best;
}

inline double grid_min_1d(const std::function<double(double)>& f, double lo, double hi, int n) {
  double best = std::numeric_limits<double>::infinity();
  const double h = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) best = std::min(best, f(lo + i * h));
  return best;
}

/// Bisection root of f on [a, b]; f(a) and f(b) must differ in sign.
inline double bisect_root(const std::function<double(double)>& f, double a, double b) {
  double fa = f(a);
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const double fm = f(m);
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

/// Minimum of the 2-D cubic model over grid points of [-radius, radius]^2
/// that lie in the ball of that radius.
inline double cubic_model_grid_min(const Vector& g, const Matrix& h, double r, double radius,
                                   int n) {
  double best = std::numeric_limits<double>::infinity();
  const double step = 2.0 * radius / (n - 1);
  for (int i = 0; i < n; ++i) {
    const double x = -radius + i * step;
    for (int j = 0; j < n; ++j) {
      const double y = -radius + j * step;
      const double norm = std::sqrt(x * x + y * y);
      if (norm > radius) continue;
      const double v = g(0) * x + g(1) * y +
                       0.5 * (h(0, 0) * x * x + 2 * h(0, 1) * x * y + h(1, 1) * y * y) +
                       r / 6.0 * norm * norm * norm;
      best = std::min(best, v);
    }
  }
  return best;
}

/// Polynomial value in extended precision, monomial by monomial.
inline long double value_ld(const Polynomial& p, const Vector& x) {
  long double total = 0.0L;
  for (const Monomial& m : p.terms()) {
    long double v = m.coeff;
    for (int i = 0; i < p.dim(); ++i)
      for (int e = 0; e < m.exponents[i]; ++e) v *= static_cast<long double>(x(i));
    total += v;
  }
  return total;
}

/// f(y) - [f(x) + <g, d> + d^T H d / 2 + T(d,d,d) / 6], d = y - x, with the
/// values f(x), f(y) in extended precision and derivatives taken from `b`.
inline long double taylor3_remainder(const Polynomial& p, const DerivativeBundle& b, const Vector& x,
                                     const Vector& y) {
  const Vector d = y - x;
  long double lin = 0.0L, quad = 0.0L, cub = 0.0L;
  const int n = p.dim();
  for (int i = 0; i < n; ++i) {
    lin += static_cast<long double>(b.grad(i)) * d(i);
    for (int j = 0; j < n; ++j) {
      quad += static_cast<long double>(b.hess(i, j)) * d(i) * d(j);
      for (int k = 0; k < n; ++k)
        cub += static_cast<long double>(b.third(i, j, k)) * d(i) * d(j) * d(k);
    }
  }
  return value_ld(p, y) - value_ld(p, x) - lin - quad / 2.0L - cub / 6.0L;
}

/// Sum_{ijk} T_ijk u_i v_j w_k by direct triple loop over the dense array.
inline double triple_sum(const SymTensor3& t, const Vector& u, const Vector& v, const Vector& w) {
  double s = 0.0;
  for (int i = 0; i < t.dim(); ++i)
    for (int j = 0; j < t.dim(); ++j)
      for (int k = 0; k < t.dim(); ++k) s += t(i, j, k) * u(i) * v(j) * w(k);
  return s;
}

template <typename Rng>
SymTensor3 random_tensor(int n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> raw(static_cast<std::size_t>(n) * n * n);
  for (double& v : raw) v = normal(rng);
  return SymTensor3::symmetrized(n, std::move(raw));
}

template <typename Rng>
Matrix random_symmetric(int n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = normal(rng);
  return 0.5 * (m + m.transpose());
}

template <typename Rng>
Vector random_gaussian(int n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

/// Uniform point in the ball of given radius.
template <typename Rng>
Vector random_in_ball(int n, double radius, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vector v = random_gaussian(n, rng);
  v.normalize();
  return v * radius * std::pow(unif(rng), 1.0 / n);
}

}  // namespace thirdopt::oracle
