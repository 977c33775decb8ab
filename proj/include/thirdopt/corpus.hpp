#pragma once

#include <string>
#include <vector>

#include "thirdopt/polynomial.hpp"

namespace thirdopt::corpus {

namespace detail {
inline Polynomial poly2(std::vector<Monomial> terms, int max_degree = Polynomial::kDefaultMaxDegree) {
  return Polynomial(2, std::move(terms), max_degree);
}
}  // namespace detail

/// x^2 + y^2
inline Polynomial quadratic() { return detail::poly2({{1, {2, 0}}, {1, {0, 2}}}); }

/// -3x^2 y + y^3. Second-order stationary at the origin but not third-order.
inline Polynomial monkey_saddle() { return detail::poly2({{-3, {2, 1}}, {1, {0, 3}}}); }

/// Monkey saddle plus (x^2 + y^2)^2 so sublevel sets are bounded.
inline Polynomial monkey_saddle_confined() {
  return monkey_saddle() + Polynomial::norm_squared_power(2, 2);
}

/// x^2 y + y^2. Third-order local minimum at the origin, not fourth-order.
inline Polynomial xxy_plus_yy() { return detail::poly2({{1, {2, 1}}, {1, {0, 2}}}); }

/// x^2 - 100 x^3 + x^4 in one variable.
inline Polynomial quartic_1d() {
  return Polynomial(1, {{1, {2}}, {-100, {3}}, {1, {4}}});
}

/// ((x^2 + y^2) - 1)^2: a ring of degenerate minima.
inline Polynomial wine_bottle() {
  const Polynomial s = Polynomial::norm_squared_power(2, 1);
  const Polynomial shifted = s - Polynomial::constant(2, 1.0);
  return shifted * shifted;
}

/// (x^2 + y^2) ((x^2 + y^2) - 1)^2
inline Polynomial inverted_wine_bottle() {
  return Polynomial::norm_squared_power(2, 1) * wine_bottle();
}

/// g(x) = f(x) + ||x||^6 for a homogeneous quartic f.
inline Polynomial quartic_plus_sixth(const Polynomial& quartic) {
  if (!quartic.is_homogeneous(4)) {
    throw InvalidArgument("quartic_plus_sixth: input must be a homogeneous quartic");
  }
  return quartic + Polynomial::norm_squared_power(quartic.dim(), 3);
}

/// Default quartic (x^4 + y^4 - 3x^2 y^2) / 2: Frobenius norm of its
/// coefficient tensor is below 1 and it is negative along x = y.
inline Polynomial default_quartic() {
  return detail::poly2({{0.5, {4, 0}}, {0.5, {0, 4}}, {-1.5, {2, 2}}});
}

inline std::vector<std::string> names() {
  return {"quadratic",  "monkey_saddle",        "monkey_saddle_confined",
          "xxy_plus_yy", "quartic_1d",          "wine_bottle",
          "inverted_wine_bottle", "quartic_plus_sixth"};
}

/// Looks up a corpus member by name; "quartic_plus_sixth" uses default_quartic().
inline Polynomial by_name(const std::string& name) {
  if (name == "quadratic") return quadratic();
  if (name == "monkey_saddle") return monkey_saddle();
  if (name == "monkey_saddle_confined") return monkey_saddle_confined();
  if (name == "xxy_plus_yy") return xxy_plus_yy();
  if (name == "quartic_1d") return quartic_1d();
  if (name == "wine_bottle") return wine_bottle();
  if (name == "inverted_wine_bottle") return inverted_wine_bottle();
  if (name == "quartic_plus_sixth") return quartic_plus_sixth(default_quartic());
  throw InvalidArgument("unknown corpus problem: " + name);
}

}  // namespace thirdopt::corpus
