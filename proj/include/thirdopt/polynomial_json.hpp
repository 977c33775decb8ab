#pragma once

#include <fstream>
#include <set>
#include <string>

#include <json.hpp>

#include "thirdopt/polynomial.hpp"

namespace thirdopt {

/// {"dim": n, "terms": [{"coeff": c, "exponents": [e1, ..., en]}, ...]}
/// Duplicate multi-indices are rejected rather than merged.
inline Polynomial polynomial_from_json(const nlohmann::json& j,
                                       int max_degree = Polynomial::kDefaultMaxDegree) {
  try {
    const int dim = j.at("dim").get<int>();
    std::vector<Monomial> terms;
    std::set<std::vector<int>> seen;
    for (const auto& t : j.at("terms")) {
      Monomial m;
      m.coeff = t.at("coeff").get<double>();
      m.exponents = t.at("exponents").get<std::vector<int>>();
      if (!seen.insert(m.exponents).second) {
        throw InvalidArgument("polynomial JSON: duplicate multi-index");
      }
      terms.push_back(std::move(m));
    }
    return Polynomial(dim, std::move(terms), max_degree);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("polynomial JSON: ") + e.what());
  }
}

inline nlohmann::json polynomial_to_json(const Polynomial& p) {
  nlohmann::ordered_json terms = nlohmann::ordered_json::array();
  for (const Monomial& m : p.terms()) {
    nlohmann::ordered_json t;
    t["coeff"] = m.coeff;
    t["exponents"] = m.exponents;
    terms.push_back(std::move(t));
  }
  nlohmann::ordered_json out;
  out["dim"] = p.dim();
  out["terms"] = std::move(terms);
  return nlohmann::json(out);
}

inline Polynomial load_polynomial(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open polynomial file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("unparseable polynomial file " + path + ": " + e.what());
  }
  return polynomial_from_json(j);
}

}  // namespace thirdopt
