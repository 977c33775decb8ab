#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "thirdopt/types.hpp"

namespace thirdopt {

/// Eigendecomposition M = sum_i lambda_i v_i v_i^T with eigenvalues sorted
/// non-increasing. Column i of `vectors` pairs with `values[i]`.
struct EigenDecomp {
  Vector values;
  Matrix vectors;

  int dim() const { return static_cast<int>(values.size()); }
  double largest() const { return values.size() ? values(0) : 0.0; }
  double smallest() const {
    return values.size() ? values(values.size() - 1) : 0.0;
  }
  /// max(|lambda_1|, |lambda_n|), the spectral norm of M.
  double spectral_norm() const {
    return std::max(std::abs(largest()), std::abs(smallest()));
  }
};

/// Orthonormal basis of a subspace of R^n. The basis may have zero columns.
class Subspace {
 public:
  Subspace() = default;

  /// Columns of `basis` must already be orthonormal.
  Subspace(int ambient_dim, Matrix basis)
      : ambient_(ambient_dim), basis_(std::move(basis)) {
    if (basis_.cols() == 0) basis_.resize(ambient_dim, 0);
    detail::require_dim(basis_.rows(), ambient_dim, "Subspace basis rows");
  }

  static Subspace empty(int ambient_dim) {
    return Subspace(ambient_dim, Matrix(ambient_dim, 0));
  }
  static Subspace full(int ambient_dim) {
    return Subspace(ambient_dim, Matrix::Identity(ambient_dim, ambient_dim));
  }

  /// Orthonormalizes the columns of `spanning` (rank-revealing QR).
  static Subspace span_of(const Matrix& spanning, double tol = 1e-12) {
    const int n = static_cast<int>(spanning.rows());
    if (spanning.cols() == 0) return empty(n);
    Eigen::ColPivHouseholderQR<Matrix> qr(spanning);
    qr.setThreshold(tol);
    const auto rank = qr.rank();
    Matrix q = qr.householderQ() * Matrix::Identity(n, rank);
    return Subspace(n, std::move(q));
  }

  int ambient_dim() const { return ambient_; }
  int dim() const { return static_cast<int>(basis_.cols()); }
  bool is_empty() const { return basis_.cols() == 0; }
  const Matrix& basis() const { return basis_; }

  Matrix projector() const { return basis_ * basis_.transpose(); }

  Vector project(const Vector& v) const {
    detail::require_dim(v.size(), ambient_, "Subspace::project");
    return basis_ * (basis_.transpose() * v);
  }

 private:
  int ambient_ = 0;
  Matrix basis_;
};

inline void require_symmetric(const Matrix& m, double rel_tol, const char* what) {
  if (m.rows() != m.cols()) {
    throw DimensionMismatch(std::string(what) + ": matrix is not square");
  }
  if (!m.allFinite()) {
    throw InvalidArgument(std::string(what) + ": non-finite entries");
  }
  const double scale = std::max(1.0, m.norm());
  if ((m - m.transpose()).norm() > rel_tol * scale) {
    throw InvalidArgument(std::string(what) + ": matrix is not symmetric");
  }
}

/// Symmetric eigendecomposition in descending eigenvalue order.
/// Throws InvalidArgument when M is not symmetric to 1e-8 relative.
inline EigenDecomp eig_sym(const Matrix& m) {
  require_symmetric(m, 1e-8, "eig_sym");
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error("eig_sym: eigensolver did not converge");
  }
  // Eigen sorts ascending; reverse both.
  EigenDecomp out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

/// S_tau(M): span of eigenvectors whose eigenvalue is at most tau (+ tol).
/// Since eigenvalues are descending this is always a suffix v_i, ..., v_n.
inline Subspace subspace_at_most(const EigenDecomp& e, double tau, double tol = 0.0) {
  const int n = e.dim();
  int first = n;
  while (first > 0 && e.values(first - 1) <= tau + tol) --first;
  return Subspace(n, e.vectors.rightCols(n - first));
}

/// Numerical null space: eigenvectors with |lambda| <= tol * max(1, |lambda_1|, |lambda_n|).
inline Subspace null_space(const EigenDecomp& e, double tol = 1e-8) {
  const int n = e.dim();
  const double cutoff = tol * std::max(1.0, e.spectral_norm());
  std::vector<int> keep;
  for (int i = 0; i < n; ++i) {
    if (std::abs(e.values(i)) <= cutoff) keep.push_back(i);
  }
  Matrix basis(n, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    basis.col(static_cast<Eigen::Index>(c)) = e.vectors.col(keep[c]);
  }
  return Subspace(n, std::move(basis));
}

}  // namespace thirdopt
