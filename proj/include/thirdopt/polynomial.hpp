#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "thirdopt/sym_tensor3.hpp"
#include "thirdopt/types.hpp"

namespace thirdopt {

/// Value and derivatives of an objective at one point. Orders above the
/// requested one are left zero.
struct DerivativeBundle {
  int order = 0;
  double value = 0.0;
  Vector grad;
  Matrix hess;
  SymTensor3 third;

  static DerivativeBundle zeros(int n, int order) {
    DerivativeBundle b;
    b.order = order;
    b.grad = Vector::Zero(n);
    b.hess = Matrix::Zero(n, n);
    b.third = SymTensor3(n);
    return b;
  }
};

/// Anything that can produce derivative bundles up to order 3.
template <typename F>
concept Objective = requires(const F& f, const Vector& x, int order) {
  { f.dim() } -> std::convertible_to<int>;
  { f.evaluate(x, order) } -> std::same_as<DerivativeBundle>;
};

/// Adapter for user-supplied derivative oracles. The callback receives the
/// point and the requested order and must fill at least that many orders.
class FunctionObjective {
 public:
  using Oracle = std::function<DerivativeBundle(const Vector&, int)>;

  FunctionObjective(int dim, Oracle oracle) : dim_(dim), oracle_(std::move(oracle)) {}

  int dim() const { return dim_; }

  DerivativeBundle evaluate(const Vector& x, int order) const {
    detail::require_dim(x.size(), dim_, "FunctionObjective::evaluate");
    DerivativeBundle b = oracle_(x, order);
    b.order = order;
    detail::require_dim(b.grad.size(), dim_, "oracle gradient");
    return b;
  }

 private:
  int dim_;
  Oracle oracle_;
};

struct Monomial {
  double coeff = 0.0;
  std::vector<int> exponents;

  int degree() const {
    int d = 0;
    for (int e : exponents) d += e;
    return d;
  }
};

namespace detail {

/// e (e-1) ... (e-d+1)
inline double falling_factorial(int e, int d) {
  double r = 1.0;
  for (int i = 0; i < d; ++i) r *= static_cast<double>(e - i);
  return r;
}

inline double factorial(int k) { return falling_factorial(k, k); }

}  // namespace detail

/// Multivariate polynomial with exact derivatives up to order three.
/// Terms are kept sorted by multi-index and every multi-index appears once.
class Polynomial {
 public:
  static constexpr int kDefaultMaxDegree = 6;

  Polynomial() = default;

  /// Throws on wrong exponent length, negative exponents, degree above
  /// `max_degree`, non-finite coefficients, or repeated multi-indices.
  Polynomial(int dim, std::vector<Monomial> terms, int max_degree = kDefaultMaxDegree)
      : dim_(dim), max_degree_(max_degree), terms_(std::move(terms)) {
    if (dim <= 0) throw InvalidArgument("Polynomial: dimension must be positive");
    for (const Monomial& t : terms_) {
      detail::require_dim(static_cast<long>(t.exponents.size()), dim, "Polynomial term exponents");
      if (!std::isfinite(t.coeff)) throw InvalidArgument("Polynomial: non-finite coefficient");
      for (int e : t.exponents) {
        if (e < 0) throw InvalidArgument("Polynomial: negative exponent");
      }
      if (t.degree() > max_degree) {
        throw InvalidArgument("Polynomial: term degree " + std::to_string(t.degree()) +
                              " exceeds maximum " + std::to_string(max_degree));
      }
    }
    std::sort(terms_.begin(), terms_.end(),
              [](const Monomial& a, const Monomial& b) { return a.exponents < b.exponents; });
    for (std::size_t i = 1; i < terms_.size(); ++i) {
      if (terms_[i].exponents == terms_[i - 1].exponents) {
        throw InvalidArgument("Polynomial: duplicate multi-index");
      }
    }
  }

  static Polynomial zero(int dim) { return Polynomial(dim, {}); }
  static Polynomial constant(int dim, double c) {
    return Polynomial(dim, {{c, std::vector<int>(dim, 0)}});
  }
  /// The coordinate function x_i.
  static Polynomial variable(int dim, int i) {
    std::vector<int> e(dim, 0);
    e.at(i) = 1;
    return Polynomial(dim, {{1.0, std::move(e)}});
  }
  /// (x_1^2 + ... + x_n^2)^k
  static Polynomial norm_squared_power(int dim, int k, int max_degree = kDefaultMaxDegree) {
    Polynomial sq = zero(dim);
    for (int i = 0; i < dim; ++i) sq = sq + variable(dim, i) * variable(dim, i);
    Polynomial out = constant(dim, 1.0);
    out.max_degree_ = max_degree;
    for (int i = 0; i < k; ++i) out = out * sq;
    return out;
  }

  int dim() const { return dim_; }
  int max_degree() const { return max_degree_; }
  const std::vector<Monomial>& terms() const { return terms_; }

  int degree() const {
    int d = 0;
    for (const Monomial& t : terms_) d = std::max(d, t.degree());
    return d;
  }

  bool is_homogeneous(int degree) const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [&](const Monomial& t) { return t.coeff == 0.0 || t.degree() == degree; });
  }

  double value(const Vector& x) const { return evaluate(x, 0).value; }

  /// Exact derivatives up to `order` (0..3).
  DerivativeBundle evaluate(const Vector& x, int order) const {
    detail::require_dim(x.size(), dim_, "Polynomial::evaluate");
    if (order < 0 || order > 3) throw InvalidArgument("Polynomial::evaluate: order must be 0..3");
    const int n = dim_;
    DerivativeBundle b = DerivativeBundle::zeros(n, order);

    const int maxd = std::max(1, degree());
    Matrix pw(n, maxd + 1);
    for (int v = 0; v < n; ++v) {
      pw(v, 0) = 1.0;
      for (int e = 1; e <= maxd; ++e) pw(v, e) = pw(v, e - 1) * x(v);
    }

    std::vector<double> third;
    if (order >= 3) third.assign(static_cast<std::size_t>(n) * n * n, 0.0);
    auto third_at = [&](int i, int j, int k) -> double& {
      return third[(static_cast<std::size_t>(i) * n + j) * n + k];
    };

    std::vector<int> support;
    for (const Monomial& t : terms_) {
      support.clear();
      for (int v = 0; v < n; ++v)
        if (t.exponents[v] > 0) support.push_back(v);

      // Partial derivative w.r.t. the variables a, b, c (-1 = unused).
      auto partial = [&](int a, int bb, int c) {
        double r = t.coeff;
        for (int v : support) {
          const int d = (v == a) + (v == bb) + (v == c);
          const int e = t.exponents[v];
          if (d > e) return 0.0;
          r *= detail::falling_factorial(e, d) * pw(v, e - d);
        }
        return r;
      };

      b.value += partial(-1, -1, -1);
      if (order < 1) continue;
      for (int a : support) b.grad(a) += partial(a, -1, -1);
      if (order < 2) continue;
      for (std::size_t ia = 0; ia < support.size(); ++ia)
        for (std::size_t ib = ia; ib < support.size(); ++ib)
          b.hess(support[ia], support[ib]) += partial(support[ia], support[ib], -1);
      if (order < 3) continue;
      for (std::size_t ia = 0; ia < support.size(); ++ia)
        for (std::size_t ib = ia; ib < support.size(); ++ib)
          for (std::size_t ic = ib; ic < support.size(); ++ic)
            third_at(support[ia], support[ib], support[ic]) +=
                partial(support[ia], support[ib], support[ic]);
    }

    if (order >= 2) {
      b.hess.triangularView<Eigen::StrictlyLower>() = b.hess.transpose();
    }
    if (order >= 3) {
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
          for (int k = j; k < n; ++k) b.third.set_symmetric(i, j, k, third_at(i, j, k));
    }
    return b;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    detail::require_dim(b.dim_, a.dim_, "Polynomial +");
    std::map<std::vector<int>, double> acc;
    for (const Monomial& t : a.terms_) acc[t.exponents] += t.coeff;
    for (const Monomial& t : b.terms_) acc[t.exponents] += t.coeff;
    return from_map(a.dim_, acc, std::max(a.max_degree_, b.max_degree_));
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    detail::require_dim(b.dim_, a.dim_, "Polynomial *");
    std::map<std::vector<int>, double> acc;
    for (const Monomial& s : a.terms_)
      for (const Monomial& t : b.terms_) {
        std::vector<int> e(a.dim_);
        for (int v = 0; v < a.dim_; ++v) e[v] = s.exponents[v] + t.exponents[v];
        acc[e] += s.coeff * t.coeff;
      }
    return from_map(a.dim_, acc, std::max(a.max_degree_, b.max_degree_));
  }

  friend Polynomial operator*(double s, const Polynomial& p) {
    std::vector<Monomial> terms = p.terms_;
    for (Monomial& t : terms) t.coeff *= s;
    return Polynomial(p.dim_, std::move(terms), p.max_degree_);
  }

  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-1.0) * b; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.dim_ != b.dim_ || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
      if (a.terms_[i].coeff != b.terms_[i].coeff ||
          a.terms_[i].exponents != b.terms_[i].exponents)
        return false;
    }
    return true;
  }

 private:
  static Polynomial from_map(int dim, const std::map<std::vector<int>, double>& acc,
                             int max_degree) {
    std::vector<Monomial> terms;
    for (const auto& [e, c] : acc) {
      if (c != 0.0) terms.push_back({c, e});
    }
    return Polynomial(dim, std::move(terms), max_degree);
  }

  int dim_ = 0;
  int max_degree_ = kDefaultMaxDegree;
  std::vector<Monomial> terms_;
};

static_assert(Objective<Polynomial>);
static_assert(Objective<FunctionObjective>);

/// Worst relative residual per derivative order between central differences
/// and the analytic bundle: max|fd - exact| / max(1, max|exact|).
struct FdResiduals {
  double grad = 0.0;
  double hess = 0.0;
  double third = 0.0;

  double max() const { return std::max({grad, hess, third}); }
};

/// Each order is differenced from the analytic order below it, so every
/// estimate carries O(h^2) truncation and O(eps/h) roundoff only.
template <Objective F>
FdResiduals fd_check(const F& f, const Vector& x, double h) {
  if (!(h > 0.0)) throw InvalidArgument("fd_check: step must be positive");
  const int n = f.dim();
  detail::require_dim(x.size(), n, "fd_check");
  const DerivativeBundle exact = f.evaluate(x, 3);

  Vector g_fd(n);
  Matrix h_fd(n, n);
  std::vector<double> t_fd(static_cast<std::size_t>(n) * n * n);
  for (int i = 0; i < n; ++i) {
    Vector xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    const DerivativeBundle bp = f.evaluate(xp, 2);
    const DerivativeBundle bm = f.evaluate(xm, 2);
    g_fd(i) = (bp.value - bm.value) / (2 * h);
    h_fd.col(i) = (bp.grad - bm.grad) / (2 * h);
    const Matrix slice = (bp.hess - bm.hess) / (2 * h);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) t_fd[(static_cast<std::size_t>(i) * n + j) * n + k] = slice(j, k);
  }

  auto rel = [](double err, double scale) { return err / std::max(1.0, scale); };
  FdResiduals r;
  r.grad = rel((g_fd - exact.grad).cwiseAbs().maxCoeff(), exact.grad.cwiseAbs().maxCoeff());
  r.hess = rel((h_fd - exact.hess).cwiseAbs().maxCoeff(), exact.hess.cwiseAbs().maxCoeff());
  double terr = 0.0, tscale = 0.0;
  const auto& te = exact.third.entries();
  for (std::size_t i = 0; i < te.size(); ++i) {
    terr = std::max(terr, std::abs(t_fd[i] - te[i]));
    tscale = std::max(tscale, std::abs(te[i]));
  }
  r.third = rel(terr, tscale);
  return r;
}

/// Upper bounds for the Hessian Lipschitz constant R (spectral norm) and the
/// third-derivative Lipschitz constant L (Frobenius) on the ball of radius
/// `valid_radius` centred at the origin.
struct SmoothnessConstants {
  double R = 0.0;
  double L = 0.0;
  double valid_radius = 0.0;
};

namespace detail {

/// Frobenius bound on the order-k derivative tensor over the ball: each
/// distinct entry d^alpha f is bounded by sum_terms |c| * ff(e, alpha) * r^(deg-k),
/// then weighted by the number of index orderings of alpha.
inline double derivative_frobenius_bound(const Polynomial& p, int k, double radius) {
  const int n = p.dim();
  std::map<std::vector<int>, double> entry_bound;
  std::vector<int> alpha(n, 0);

  for (const Monomial& t : p.terms()) {
    const int deg = t.degree();
    if (deg < k || t.coeff == 0.0) continue;
    const double scale = std::abs(t.coeff) * std::pow(radius, deg - k);
    // Enumerate alpha <= exponents with |alpha| = k.
    std::function<void(int, int)> rec = [&](int v, int left) {
      if (v == n) {
        if (left != 0) return;
        double c = scale;
        for (int i = 0; i < n; ++i) c *= falling_factorial(t.exponents[i], alpha[i]);
        entry_bound[alpha] += c;
        return;
      }
      for (int a = 0; a <= std::min(left, t.exponents[v]); ++a) {
        alpha[v] = a;
        rec(v + 1, left - a);
      }
      alpha[v] = 0;
    };
    rec(0, k);
  }

  double sq = 0.0;
  for (const auto& [a, bound] : entry_bound) {
    double orderings = factorial(k);
    for (int ai : a) orderings /= factorial(ai);
    sq += orderings * bound * bound;
  }
  return std::sqrt(sq);
}

}  // namespace detail

/// Term-wise bounds; both constants are floored at `min_constant` so they
/// stay usable as regularizers when the true constant is zero.
inline SmoothnessConstants smoothness_bounds(const Polynomial& p, double radius,
                                             double min_constant = 1e-6) {
  if (!(radius > 0.0)) throw InvalidArgument("smoothness_bounds: radius must be positive");
  SmoothnessConstants c;
  c.R = std::max(detail::derivative_frobenius_bound(p, 3, radius), min_constant);
  c.L = std::max(detail::derivative_frobenius_bound(p, 4, radius), min_constant);
  c.valid_radius = radius;
  return c;
}

}  // namespace thirdopt
