#pragma once

#include <utility>
#include <vector>

#include "sympfactor/core.hpp"
#include "sympfactor/scalar.hpp"

namespace sympfactor {

/// Canonical bijection between packed indices {0..n(n+1)/2-1} and upper
/// triangle pairs (i,j), i<=j, in row-major order:
/// (0,0),(0,1),...,(0,n-1),(1,1),...,(n-1,n-1).
class PackedIndex {
 public:
  explicit PackedIndex(int n) : n_(n) {
    if (n <= 0) throw IndexError("PackedIndex: dimension must be positive");
    pairs_.reserve(triangle_size(n));
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) pairs_.emplace_back(i, j);
  }

  int n() const { return n_; }
  int size() const { return static_cast<int>(pairs_.size()); }

  std::pair<int, int> pair(int idx) const {
    if (idx < 0 || idx >= size()) throw IndexError("PackedIndex: index out of range");
    return pairs_[idx];
  }

  int index(int i, int j) const {
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= n_) throw IndexError("PackedIndex: pair out of range");
    // row i starts after rows 0..i-1 of lengths n, n-1, ...
    return i * n_ - i * (i - 1) / 2 + (j - i);
  }

 private:
  int n_;
  std::vector<std::pair<int, int>> pairs_;
};

/// An n x n complex symmetric matrix.  Symmetry is enforced at construction,
/// never tolerance-checked afterwards.
template <class Scalar>
class SymmetricParam {
 public:
  SymmetricParam() : n_(0) {}
  explicit SymmetricParam(int n) : n_(n), m_(Mat<Scalar>::Zero(n, n)) {}

  static SymmetricParam from_matrix(const Mat<Scalar>& m) {
    if (m.rows() != m.cols()) throw IndexError("SymmetricParam: matrix not square");
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = i + 1; j < m.cols(); ++j)
        if (!(m(i, j) == m(j, i)))
          throw DomainError("SymmetricParam: matrix not symmetric");
    SymmetricParam s(static_cast<int>(m.rows()));
    s.m_ = m;
    return s;
  }

  static SymmetricParam from_packed(int n, const Vec<Scalar>& packed) {
    if (packed.size() != triangle_size(n))
      throw IndexError("SymmetricParam: packed length mismatch");
    SymmetricParam s(n);
    PackedIndex idx(n);
    for (int c = 0; c < idx.size(); ++c) {
      auto [i, j] = idx.pair(c);
      s.m_(i, j) = packed(c);
      s.m_(j, i) = packed(c);
    }
    return s;
  }

  int n() const { return n_; }
  const Mat<Scalar>& matrix() const { return m_; }
  const Scalar& operator()(int i, int j) const { return m_(i, j); }

  /// Sets entry (i,j) and its mirror.
  void set(int i, int j, const Scalar& v) {
    m_(i, j) = v;
    m_(j, i) = v;
  }

  SymmetricParam operator-() const {
    SymmetricParam r(n_);
    r.m_ = -m_;
    return r;
  }
  SymmetricParam operator+(const SymmetricParam& o) const {
    SymmetricParam r(n_);
    r.m_ = m_ + o.m_;
    return r;
  }
  bool operator==(const SymmetricParam& o) const { return n_ == o.n_ && m_ == o.m_; }
  bool is_zero(double tol = 0) const { return mat_is_zero(m_, tol); }

 private:
  int n_;
  Mat<Scalar> m_;
};

template <class Scalar>
Vec<Scalar> pack(const SymmetricParam<Scalar>& z) {
  PackedIndex idx(z.n());
  Vec<Scalar> out(idx.size());
  for (int c = 0; c < idx.size(); ++c) {
    auto [i, j] = idx.pair(c);
    out(c) = z(i, j);
  }
  return out;
}

template <class Scalar>
SymmetricParam<Scalar> unpack(int n, const Vec<Scalar>& packed) {
  return SymmetricParam<Scalar>::from_packed(n, packed);
}

/// Basis matrix of the packed coordinates: a single 1 at (i,i) on the
/// diagonal, and 1 at both (i,j) and (j,i) off the diagonal.
template <class Scalar>
SymmetricParam<Scalar> elementary_symmetric(int i, int j, int n) {
  if (i < 0 || j < 0 || i > j || j >= n)
    throw IndexError("elementary_symmetric: indices out of range");
  SymmetricParam<Scalar> e(n);
  e.set(i, j, Scalar(1));
  return e;
}

/// Matrix of the linear map packed(Z) -> Z*v, of shape n x n(n+1)/2; its
/// column for the pair (i,j) is the basis matrix applied to v.  Surjective
/// exactly when v != 0 (and identically zero when v == 0).
template <class Scalar>
Mat<Scalar> action_matrix(const Vec<Scalar>& v) {
  const int n = static_cast<int>(v.size());
  PackedIndex idx(n);
  Mat<Scalar> f = Mat<Scalar>::Zero(n, idx.size());
  for (int c = 0; c < idx.size(); ++c) {
    auto [i, j] = idx.pair(c);
    if (i == j) {
      f(i, c) = v(i);
    } else {
      f(i, c) += v(j);
      f(j, c) += v(i);
    }
  }
  return f;
}

/// Solves Z*a = v for a symmetric Z, given a != 0.  The underdetermined
/// packed system action_matrix(a)*z = v is reduced by Gaussian elimination
/// with column pivoting on |entry| (ties to the lowest column index); free
/// packed coordinates are set to zero.  Deterministic by construction.
template <class Scalar>
SymmetricParam<Scalar> solve_symmetric(const Vec<Scalar>& a, const Vec<Scalar>& v,
                                       double tol_zero = 1e-12) {
  const int n = static_cast<int>(a.size());
  if (v.size() != n) throw IndexError("solve_symmetric: size mismatch");
  if (vec_is_zero(a, tol_zero))
    throw ZeroVectorError("solve_symmetric: coefficient vector is zero");

  Mat<Scalar> m = action_matrix(a);
  Vec<Scalar> rhs = v;
  const int cols = static_cast<int>(m.cols());

  std::vector<int> pivot_col(n, -1);
  std::vector<bool> used(cols, false);
  for (int r = 0; r < n; ++r) {
    int best = -1;
    for (int c = 0; c < cols; ++c) {
      if (used[c]) continue;
      if (flavor<Scalar>::is_zero(m(r, c), tol_zero)) continue;
      if (best < 0 || flavor<Scalar>::mag(m(r, c)) > flavor<Scalar>::mag(m(r, best))) best = c;
    }
    if (best < 0) {
      // Row must already be consistent; a != 0 makes the system full-rank,
      // so this only happens for rows eliminated to numerical zero.
      if (!flavor<Scalar>::is_zero(rhs(r), tol_zero))
        throw ZeroVectorError("solve_symmetric: inconsistent row");
      continue;
    }
    used[best] = true;
    pivot_col[r] = best;
    for (int rr = 0; rr < n; ++rr) {
      if (rr == r || flavor<Scalar>::is_zero(m(rr, best), 0.0)) continue;
      Scalar factor = m(rr, best) / m(r, best);
      m.row(rr) -= factor * m.row(r);
      m(rr, best) = Scalar(0);
      rhs(rr) -= factor * rhs(r);
    }
  }

  Vec<Scalar> z = Vec<Scalar>::Zero(cols);
  for (int r = 0; r < n; ++r)
    if (pivot_col[r] >= 0) z(pivot_col[r]) = rhs(r) / m(r, pivot_col[r]);
  return unpack<Scalar>(n, z);
}

}  // namespace sympfactor
