#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "thirdopt/spectral.hpp"
#include "thirdopt/types.hpp"

namespace thirdopt {

/// Dense symmetric order-3 tensor, entries invariant under all index
/// permutations. Storage is the full n^3 array (row-major in i, j, k).
class SymTensor3 {
 public:
  SymTensor3() = default;

  /// Zero tensor of dimension n.
  explicit SymTensor3(int n)
      : n_(n), entries_(static_cast<std::size_t>(n) * n * n, 0.0) {}

  /// Builds from a dense n^3 array, averaging over the six index permutations.
  static SymTensor3 symmetrized(int n, std::vector<double> raw) {
    detail::require_dim(static_cast<long>(raw.size()),
                        static_cast<long>(n) * n * n, "SymTensor3 entries");
    SymTensor3 t(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          auto at = [&](int a, int b, int c) {
            return raw[(static_cast<std::size_t>(a) * n + b) * n + c];
          };
          t.entries_[t.index(i, j, k)] =
              (at(i, j, k) + at(i, k, j) + at(j, i, k) + at(j, k, i) +
               at(k, i, j) + at(k, j, i)) /
              6.0;
        }
    return t;
  }

  /// v (x) v (x) v.
  static SymTensor3 outer_cube(const Vector& v) {
    const int n = static_cast<int>(v.size());
    SymTensor3 t(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) t.entries_[t.index(i, j, k)] = v(i) * v(j) * v(k);
    return t;
  }

  int dim() const { return n_; }

  double operator()(int i, int j, int k) const { return entries_[index(i, j, k)]; }

  /// Writes `value` to (i, j, k) and all its permutations.
  void set_symmetric(int i, int j, int k, double value) {
    entries_[index(i, j, k)] = value;
    entries_[index(i, k, j)] = value;
    entries_[index(j, i, k)] = value;
    entries_[index(j, k, i)] = value;
    entries_[index(k, i, j)] = value;
    entries_[index(k, j, i)] = value;
  }

  const std::vector<double>& entries() const { return entries_; }

  /// Slice T(e_i, ., .).
  Matrix slice(int i) const {
    Matrix m(n_, n_);
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k) m(j, k) = entries_[index(i, j, k)];
    return m;
  }

  /// Max deviation from full permutation symmetry.
  double asymmetry() const {
    double worst = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k) {
          const double v = entries_[index(i, j, k)];
          for (double w : {entries_[index(i, k, j)], entries_[index(j, i, k)],
                           entries_[index(j, k, i)], entries_[index(k, i, j)],
                           entries_[index(k, j, i)]}) {
            worst = std::max(worst, std::abs(v - w));
          }
        }
    return worst;
  }

  SymTensor3& operator+=(const SymTensor3& o) {
    detail::require_dim(o.n_, n_, "SymTensor3 +=");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += o.entries_[i];
    return *this;
  }
  SymTensor3& operator*=(double s) {
    for (double& e : entries_) e *= s;
    return *this;
  }
  friend SymTensor3 operator+(SymTensor3 a, const SymTensor3& b) { return a += b; }
  friend SymTensor3 operator*(double s, SymTensor3 a) { return a *= s; }

  /// T(A, A, A) for an n x m matrix A; result has dimension m. Mode products
  /// one axis at a time, O(n^3 m).
  SymTensor3 multilinear(const Matrix& a) const {
    detail::require_dim(a.rows(), n_, "SymTensor3::multilinear");
    const int m = static_cast<int>(a.cols());
    const auto nn = static_cast<std::size_t>(n_);
    const auto mm = static_cast<std::size_t>(m);
    // stage1[p][j][k] = sum_i T_ijk A_ip
    std::vector<double> s1(mm * nn * nn, 0.0);
    for (int p = 0; p < m; ++p)
      for (int i = 0; i < n_; ++i) {
        const double w = a(i, p);
        if (w == 0.0) continue;
        for (std::size_t jk = 0; jk < nn * nn; ++jk)
          s1[p * nn * nn + jk] += w * entries_[i * nn * nn + jk];
      }
    // stage2[p][q][k] = sum_j stage1[p][j][k] A_jq
    std::vector<double> s2(mm * mm * nn, 0.0);
    for (std::size_t p = 0; p < mm; ++p)
      for (int q = 0; q < m; ++q)
        for (int j = 0; j < n_; ++j) {
          const double w = a(j, q);
          if (w == 0.0) continue;
          for (int k = 0; k < n_; ++k)
            s2[(p * mm + q) * nn + k] += w * s1[(p * nn + j) * nn + k];
        }
    std::vector<double> out(mm * mm * mm, 0.0);
    for (std::size_t pq = 0; pq < mm * mm; ++pq)
      for (int r = 0; r < m; ++r) {
        double acc = 0.0;
        for (int k = 0; k < n_; ++k) acc += s2[pq * nn + k] * a(k, r);
        out[pq * mm + r] = acc;
      }
    // Roundoff can break exact symmetry; average it back.
    return symmetrized(m, std::move(out));
  }

 private:
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
  }

  int n_ = 0;
  std::vector<double> entries_;
};

/// T(u, v, w) = sum_{ijk} T_ijk u_i v_j w_k.
inline double contract3(const SymTensor3& t, const Vector& u, const Vector& v,
                        const Vector& w) {
  const int n = t.dim();
  detail::require_dim(u.size(), n, "contract3 u");
  detail::require_dim(v.size(), n, "contract3 v");
  detail::require_dim(w.size(), n, "contract3 w");
  const auto& e = t.entries();
  double total = 0.0;
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i) {
    double si = 0.0;
    for (int j = 0; j < n; ++j) {
      double sj = 0.0;
      for (int k = 0; k < n; ++k) sj += e[idx++] * w(k);
      si += sj * v(j);
    }
    total += si * u(i);
  }
  return total;
}

inline double contract3(const SymTensor3& t, const Vector& u) {
  return contract3(t, u, u, u);
}

/// T(u, I, I), an n x n symmetric matrix.
inline Matrix contract1(const SymTensor3& t, const Vector& u) {
  const int n = t.dim();
  detail::require_dim(u.size(), n, "contract1");
  Matrix m = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (u(i) == 0.0) continue;
    m += u(i) * t.slice(i);
  }
  return 0.5 * (m + m.transpose());
}

/// T(u, u, I), an n-vector.
inline Vector contract2(const SymTensor3& t, const Vector& u) {
  return contract1(t, u) * u;
}

inline double frobenius(const SymTensor3& t) {
  double s = 0.0;
  for (double e : t.entries()) s += e * e;
  return std::sqrt(s);
}

/// Proj_S T = T(P, P, P) with P the orthogonal projector onto S.
inline SymTensor3 project(const SymTensor3& t, const Subspace& s) {
  detail::require_dim(s.ambient_dim(), t.dim(), "project");
  if (s.is_empty()) return SymTensor3(t.dim());
  return t.multilinear(s.projector());
}

/// ||Proj_S T||_F, computed in the subspace's own coordinates:
/// ||T(P,P,P)||_F == ||T(B,B,B)||_F for an orthonormal basis B.
inline double projected_frobenius(const SymTensor3& t, const Subspace& s) {
  detail::require_dim(s.ambient_dim(), t.dim(), "projected_frobenius");
  if (s.is_empty()) return 0.0;
  return frobenius(t.multilinear(s.basis()));
}

}  // namespace thirdopt
