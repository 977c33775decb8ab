#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace thirdopt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Thrown when the randomized direction sampler runs out of draws. Usually
/// means the sampler constant B is too small for the tensor at hand.
class SamplerExhausted : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require_dim(long got, long want, const char* what) {
  if (got != want) {
    throw DimensionMismatch(std::string(what) + ": expected dimension " +
                            std::to_string(want) + ", got " +
                            std::to_string(got));
  }
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

inline bool is_finite(double v) { return std::isfinite(v); }

}  // namespace detail
}  // namespace thirdopt
