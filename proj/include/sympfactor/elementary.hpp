#pragma once

#include <sstream>
#include <vector>

#include "sympfactor/core.hpp"
#include "sympfactor/symmetric.hpp"

namespace sympfactor {

enum class Side { Upper, Lower };

inline Side flip(Side s) { return s == Side::Upper ? Side::Lower : Side::Upper; }

/// One elementary symplectic factor: [[I,Z],[0,I]] (upper) or [[I,0],[Z,I]]
/// (lower) with Z symmetric.  Inverse is the same side with -Z.
template <class Scalar>
struct ElementaryFactor {
  Side side;
  SymmetricParam<Scalar> Z;

  ElementaryFactor inverse() const { return {side, -Z}; }
};

/// Ordered product of elementary factors; the leftmost factor applies first
/// in the matrix product as written.
template <class Scalar>
struct FactorWord {
  int n = 0;
  std::vector<ElementaryFactor<Scalar>> factors;

  int size() const { return static_cast<int>(factors.size()); }
  void push(Side side, SymmetricParam<Scalar> z) { factors.push_back({side, std::move(z)}); }
};

template <class Scalar>
Mat<Scalar> standard_j(int n) {
  Mat<Scalar> j = Mat<Scalar>::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    j(i, n + i) = Scalar(1);
    j(n + i, i) = Scalar(-1);
  }
  return j;
}

template <class Scalar>
Mat<Scalar> materialize(const ElementaryFactor<Scalar>& f) {
  const int n = f.Z.n();
  Mat<Scalar> m = Mat<Scalar>::Identity(2 * n, 2 * n);
  if (f.side == Side::Upper)
    m.block(0, n, n, n) = f.Z.matrix();
  else
    m.block(n, 0, n, n) = f.Z.matrix();
  return m;
}

template <class Scalar>
Mat<Scalar> materialize(Side side, const SymmetricParam<Scalar>& z) {
  return materialize(ElementaryFactor<Scalar>{side, z});
}

/// Left-to-right product of the materialized factors.
template <class Scalar>
Mat<Scalar> reconstruct(const FactorWord<Scalar>& w) {
  Mat<Scalar> m = Mat<Scalar>::Identity(2 * w.n, 2 * w.n);
  for (const auto& f : w.factors) m = m * materialize(f);
  return m;
}

/// Merges adjacent same-side factors (parameters add) and drops zero factors.
/// The product is unchanged exactly.
template <class Scalar>
FactorWord<Scalar> compact(const FactorWord<Scalar>& w, double tol_zero = 0.0) {
  FactorWord<Scalar> out;
  out.n = w.n;
  // Eager merging keeps `out` free of adjacent same-side factors, so a
  // cancellation can never expose a new same-side pair behind it.
  for (const auto& f : w.factors) {
    if (f.Z.is_zero(tol_zero)) continue;
    if (!out.factors.empty() && out.factors.back().side == f.side) {
      SymmetricParam<Scalar> sum = out.factors.back().Z + f.Z;
      out.factors.pop_back();
      if (!sum.is_zero(tol_zero)) out.push(f.side, std::move(sum));
    } else {
      out.factors.push_back(f);
    }
  }
  return out;
}

/// Generator with parameter a at positions (i,j) and (j,i) of the upper
/// block (a single a at (i,i) when i == j).
template <class Scalar>
ElementaryFactor<Scalar> gen_upper(int i, int j, const Scalar& a, int n) {
  if (i < 0 || j < 0 || i > j || j >= n) throw IndexError("gen_upper: indices out of range");
  SymmetricParam<Scalar> z(n);
  z.set(i, j, a);
  return {Side::Upper, std::move(z)};
}

template <class Scalar>
ElementaryFactor<Scalar> gen_lower(int i, int j, const Scalar& a, int n) {
  if (i < 0 || j < 0 || i > j || j >= n) throw IndexError("gen_lower: indices out of range");
  SymmetricParam<Scalar> z(n);
  z.set(i, j, a);
  return {Side::Lower, std::move(z)};
}

/// Diagonal-type generator: B = C = 0, A = I except A(i,j) = a (off the
/// diagonal) or A(i,i) = a (on it), D = inverse transpose of A in closed
/// form.  Requires a != 0 when i == j.
template <class Scalar>
Mat<Scalar> k_generator(int i, int j, const Scalar& a, int n, double tol_zero = 0.0) {
  if (i < 0 || j < 0 || i >= n || j >= n) throw IndexError("k_generator: indices out of range");
  Mat<Scalar> m = Mat<Scalar>::Identity(2 * n, 2 * n);
  if (i == j) {
    if (flavor<Scalar>::is_zero(a, tol_zero))
      throw NonUnitError("k_generator: diagonal parameter must be invertible");
    m(i, i) = a;
    m(n + i, n + i) = flavor<Scalar>::reciprocal(a);
  } else {
    m(i, j) = a;
    m(n + j, n + i) = -a;
  }
  return m;
}

/// Word of four elementary factors whose product is k_generator(i,i,a,n).
template <class Scalar>
FactorWord<Scalar> whitehead_diagonal(int i, const Scalar& a, int n, double tol_zero = 0.0) {
  if (flavor<Scalar>::is_zero(a, tol_zero))
    throw NonUnitError("whitehead_diagonal: parameter must be invertible");
  const Scalar inv = flavor<Scalar>::reciprocal(a);
  FactorWord<Scalar> w;
  w.n = n;
  w.factors = {
      gen_upper(i, i, a - Scalar(1), n),
      gen_lower(i, i, Scalar(1), n),
      gen_upper(i, i, inv - Scalar(1), n),
      gen_lower(i, i, -a, n),
  };
  return w;
}

/// Word of five elementary factors whose product is k_generator(i,j,a,n),
/// i != j.
template <class Scalar>
FactorWord<Scalar> whitehead_offdiag(int i, int j, const Scalar& a, int n) {
  if (i == j) throw IndexError("whitehead_offdiag: requires i != j");
  FactorWord<Scalar> w;
  w.n = n;
  w.factors = {
      gen_lower(j, j, -a, n),
      gen_upper(std::min(i, j), std::max(i, j), Scalar(1), n),
      gen_lower(j, j, a, n),
      gen_upper(i, i, a, n),
      gen_upper(std::min(i, j), std::max(i, j), Scalar(-1), n),
  };
  return w;
}

/// A validated member of the symplectic group, with residual bookkeeping.
template <class Scalar>
struct SymplecticMatrix {
  int n = 0;
  Mat<Scalar> m;
  double residual = 0.0;  // max-norm of M^T J M - J, scaled checks in validate

  Mat<Scalar> block_a() const { return m.block(0, 0, n, n); }
  Mat<Scalar> block_b() const { return m.block(0, n, n, n); }
  Mat<Scalar> block_c() const { return m.block(n, 0, n, n); }
  Mat<Scalar> block_d() const { return m.block(n, n, n, n); }
};

/// Closed-form inverse [[D^T,-B^T],[-C^T,A^T]] of a symplectic matrix; a
/// blockwise rearrangement, so it is exact in both flavors.
template <class Scalar>
Mat<Scalar> symplectic_inverse(const Mat<Scalar>& m) {
  const int n = static_cast<int>(m.rows()) / 2;
  Mat<Scalar> inv(2 * n, 2 * n);
  inv.block(0, 0, n, n) = m.block(n, n, n, n).transpose();
  inv.block(0, n, n, n) = -m.block(0, n, n, n).transpose();
  inv.block(n, 0, n, n) = -m.block(n, 0, n, n).transpose();
  inv.block(n, n, n, n) = m.block(0, 0, n, n).transpose();
  return inv;
}

template <class Scalar>
struct SymplecticResiduals {
  double form;        // || M^T J M - J ||_max
  double block_ac;    // || A^T C - C^T A ||_max
  double block_bd;    // || B^T D - D^T B ||_max
  double block_unit;  // || A^T D - C^T B - I ||_max
  double scale;       // || M ||_max
};

template <class Scalar>
SymplecticResiduals<Scalar> symplectic_residuals(const Mat<Scalar>& m) {
  const int n = static_cast<int>(m.rows()) / 2;
  Mat<Scalar> j = standard_j<Scalar>(n);
  Mat<Scalar> form = m.transpose() * j * m - j;
  Mat<Scalar> a = m.block(0, 0, n, n), b = m.block(0, n, n, n);
  Mat<Scalar> c = m.block(n, 0, n, n), d = m.block(n, n, n, n);
  Mat<Scalar> ac = a.transpose() * c - c.transpose() * a;
  Mat<Scalar> bd = b.transpose() * d - d.transpose() * b;
  Mat<Scalar> unit = a.transpose() * d - c.transpose() * b - Mat<Scalar>::Identity(n, n);
  SymplecticResiduals<Scalar> r;
  r.form = max_norm(to_complex(form));
  r.block_ac = max_norm(to_complex(ac));
  r.block_bd = max_norm(to_complex(bd));
  r.block_unit = max_norm(to_complex(unit));
  r.scale = max_norm(to_complex(m));
  return r;
}

/// Validates M^T J M = J (and the equivalent block conditions).  The
/// tolerance scales with ||M||_max^2; the exact flavor requires residual 0.
template <class Scalar>
SymplecticMatrix<Scalar> validate_symplectic(const Mat<Scalar>& m, double tol_symp = 1e-10) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0)
    throw NotSymplecticError("validate: matrix must be square of even dimension");
  auto r = symplectic_residuals(m);
  double scale = std::max(1.0, r.scale * r.scale);
  double bound = flavor<Scalar>::exact ? 0.0 : tol_symp * scale;
  if (r.form > bound || r.block_ac > bound || r.block_bd > bound || r.block_unit > bound) {
    std::ostringstream os;
    os << "validate: not symplectic (form residual " << r.form << ", A^TC-C^TA " << r.block_ac
       << ", B^TD-D^TB " << r.block_bd << ", A^TD-C^TB-I " << r.block_unit << ")";
    throw NotSymplecticError(os.str());
  }
  return {static_cast<int>(m.rows()) / 2, m, r.form};
}

}  // namespace sympfactor
