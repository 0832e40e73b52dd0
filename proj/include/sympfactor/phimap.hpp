#pragma once

#include <vector>

#include <Eigen/SVD>

#include "sympfactor/core.hpp"
#include "sympfactor/elementary.hpp"
#include "sympfactor/symmetric.hpp"

namespace sympfactor {

// Parity convention used throughout this header: step k (1-based) applies an
// UPPER factor when k is odd and a LOWER factor when k is even, and the
// product acts on the last unit vector,
//     phi_K(Z_1..Z_K) = M_K(Z_K) * ... * M_1(Z_1) * e_{2n}.
// Words in `elementary.hpp` use the opposite parity (first factor lower);
// `last_row_of_word` is the transposition bridge between the two.

inline Side step_side(int k) { return k % 2 == 1 ? Side::Upper : Side::Lower; }

/// A tuple of K symmetric parameters, the argument of phi_K.
template <class Scalar>
struct PhiPoint {
  int n = 0;
  int K = 0;
  std::vector<SymmetricParam<Scalar>> zs;

  static PhiPoint zero(int n, int K) {
    PhiPoint p{n, K, {}};
    p.zs.assign(K, SymmetricParam<Scalar>(n));
    return p;
  }
};

/// A nonzero target (a,b) in C^{2n}.
template <class Scalar>
struct TargetVector {
  Vec<Scalar> a, b;

  int n() const { return static_cast<int>(a.size()); }
  Vec<Scalar> stacked() const {
    Vec<Scalar> y(2 * n());
    y.head(n()) = a;
    y.tail(n()) = b;
    return y;
  }
  static TargetVector from_stacked(const Vec<Scalar>& y) {
    const int n = static_cast<int>(y.size()) / 2;
    return {y.head(n), y.tail(n)};
  }
};

/// Applies one elementary step in place: upper adds Z*(bottom) to the top
/// block, lower adds Z*(top) to the bottom block.
template <class Scalar>
void apply_step(Side side, const SymmetricParam<Scalar>& z, Vec<Scalar>& v) {
  const int n = z.n();
  if (side == Side::Upper)
    v.head(n) += z.matrix() * v.tail(n);
  else
    v.tail(n) += z.matrix() * v.head(n);
}

template <class Scalar>
Vec<Scalar> phi(const PhiPoint<Scalar>& p) {
  Vec<Scalar> v = Vec<Scalar>::Zero(2 * p.n);
  v(2 * p.n - 1) = Scalar(1);
  for (int k = 1; k <= p.K; ++k) apply_step(step_side(k), p.zs[k - 1], v);
  return v;
}

/// Last row of the product of a word, via transposition: transposing flips
/// each factor's side and reverses the order, so the last row equals
/// (flip(M_1) * ... applied to e_{2n}) transposed.  Returned as a column.
template <class Scalar>
Vec<Scalar> last_row_of_word(const FactorWord<Scalar>& w) {
  Vec<Scalar> v = Vec<Scalar>::Zero(2 * w.n);
  v(2 * w.n - 1) = Scalar(1);
  for (const auto& f : w.factors) apply_step(flip(f.side), f.Z, v);
  return v;
}

/// Jacobian block contributed by step K at the point (u,v) = phi_{K-1}:
/// [F(v); 0] for odd K, [0; F(u)] for even K.  Fixed by every later factor
/// of the same parity.
template <class Scalar>
Mat<Scalar> step_jacobian_block(int K, const Vec<Scalar>& uv) {
  const int n = static_cast<int>(uv.size()) / 2;
  Mat<Scalar> out = Mat<Scalar>::Zero(2 * n, triangle_size(n));
  if (K % 2 == 1)
    out.topRows(n) = action_matrix<Scalar>(uv.tail(n));
  else
    out.bottomRows(n) = action_matrix<Scalar>(uv.head(n));
  return out;
}

/// Jacobian of phi_K with respect to the K*n(n+1)/2 packed coordinates, in
/// block order Z_1..Z_K, built by the recursion
/// J_K = [ M_K(Z_K) * J_{K-1} | step block at phi_{K-1} ].
template <class Scalar>
Mat<Scalar> phi_jacobian(const PhiPoint<Scalar>& p) {
  const int n = p.n;
  const int t = triangle_size(n);
  Mat<Scalar> jac(2 * n, p.K * t);
  Vec<Scalar> v = Vec<Scalar>::Zero(2 * n);
  v(2 * n - 1) = Scalar(1);
  for (int k = 1; k <= p.K; ++k) {
    // multiply the accumulated columns by M_k(Z_k)
    const Mat<Scalar>& z = p.zs[k - 1].matrix();
    if (k % 2 == 1)
      jac.block(0, 0, n, (k - 1) * t) += z * jac.block(n, 0, n, (k - 1) * t);
    else
      jac.block(n, 0, n, (k - 1) * t) += z * jac.block(0, 0, n, (k - 1) * t);
    jac.block(0, (k - 1) * t, 2 * n, t) = step_jacobian_block(k, v);
    apply_step(step_side(k), p.zs[k - 1], v);
  }
  return jac;
}

inline int numeric_rank(const CMat& m, double tol_rank = 1e-12) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<CMat> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  double cutoff = sv(0) * static_cast<double>(std::max(m.rows(), m.cols())) * tol_rank;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++r;
  return r;
}

struct ClassificationReport {
  bool in_wk = false;       // some early odd-slot Z has Z e_n != 0
  bool in_sk = false;       // phi_K fails to be a submersion here
  int jacobian_rank = 0;    // numeric rank of the phi Jacobian
  int wk_matrix_rank = 0;   // rank of (Z_2|Z_4|...); meaningful when !in_wk
  double tolerance = 0.0;
};

/// Membership in the guaranteed-submersive region and in the singular set.
/// The closed form (rank of the augmented matrix of even-slot parameters) is
/// cross-checked against the numeric Jacobian rank; disagreement throws.
inline ClassificationReport classify(const PhiPoint<cdouble>& p, const Tolerances& tol = {}) {
  if (p.K < 2) throw IndexError("classify: requires K >= 2");
  const int n = p.n;
  ClassificationReport r;
  r.tolerance = tol.rank;

  const int odd_slots = (p.K - 1 + 1) / 2;  // ceil((K-1)/2)
  for (int i = 1; i <= odd_slots && !r.in_wk; ++i) {
    Vec<cdouble> last_col = p.zs[2 * i - 2].matrix().col(n - 1);
    if (!vec_is_zero(last_col, tol.zero)) r.in_wk = true;
  }

  const int even_slots = (p.K - 1) / 2;  // floor((K-1)/2)
  CMat wk(n, even_slots * n);
  for (int i = 1; i <= even_slots; ++i)
    wk.block(0, (i - 1) * n, n, n) = p.zs[2 * i - 1].matrix();
  r.wk_matrix_rank = numeric_rank(wk, tol.rank);

  r.in_sk = !r.in_wk && r.wk_matrix_rank < n;
  r.jacobian_rank = numeric_rank(phi_jacobian(p), tol.rank);

  const bool jac_deficient = r.jacobian_rank < 2 * n;
  if (r.in_sk != jac_deficient)
    throw ToleranceError("classify: closed-form singularity test disagrees with Jacobian rank");
  return r;
}

/// pi_K: selects the first block for even K, the second for odd K.
template <class Scalar>
Vec<Scalar> parity_projection(int K, const TargetVector<Scalar>& y) {
  return K % 2 == 0 ? y.a : y.b;
}

enum class Stratum { Generic, NonGeneric };

template <class Scalar>
Stratum stratum_of(int K, const TargetVector<Scalar>& y, double tol_zero = 1e-12) {
  if (vec_is_zero(y.a, tol_zero) && vec_is_zero(y.b, tol_zero))
    throw ZeroTargetError("stratum_of: target is zero");
  return vec_is_zero(parity_projection(K, y), tol_zero) ? Stratum::NonGeneric : Stratum::Generic;
}

/// Deterministic K=3 section of phi over C^{2n} \ {0}.  Z_3 is chosen so
/// that v := a - Z_3 b is nonzero and commensurate with the target: when the
/// a-block dominates in max-norm, Z_3 = 0 and v = a; otherwise Z_3 solves
/// a - Z_3 b = s*(1,..,1) where s is the largest entry of b.  Then
/// Z_1 e_n = v and (I + Z_2 Z_1) e_n = b.  Keeping v on the scale of the
/// target bounds every parameter by a small multiple of ||y||, which the
/// factorizer depends on; a fixed all-ones v blows the parameters (and the
/// downstream reconstruction error) up by ||a|| / ||b||.  The result always
/// satisfies Z_1 e_n = v != 0.
template <class Scalar>
PhiPoint<Scalar> lift_triple(const TargetVector<Scalar>& y, double tol_zero = 1e-12) {
  const int n = y.n();
  if (vec_is_zero(y.a, tol_zero) && vec_is_zero(y.b, tol_zero))
    throw ZeroTargetError("lift_triple: target is zero");

  using F = flavor<Scalar>;
  auto inf_mag = [&](const Vec<Scalar>& v) {
    typename F::Magnitude m = F::mag(v(0));
    for (int i = 1; i < n; ++i) m = std::max(m, F::mag(v(i)));
    return m;
  };

  SymmetricParam<Scalar> z3(n);
  Vec<Scalar> v;
  if (vec_is_zero(y.b, tol_zero) || !(inf_mag(y.a) < inf_mag(y.b))) {
    v = y.a;  // a dominates (or b vanishes): Z_3 = 0 works and stays small
  } else {
    int arg = 0;
    for (int i = 1; i < n; ++i)
      if (F::mag(y.b(i)) > F::mag(y.b(arg))) arg = i;
    Vec<Scalar> target = Vec<Scalar>::Constant(n, y.b(arg));
    z3 = solve_symmetric<Scalar>(y.b, y.a - target, tol_zero);
    v = y.a - z3.matrix() * y.b;
  }

  Vec<Scalar> en = Vec<Scalar>::Zero(n);
  en(n - 1) = Scalar(1);
  SymmetricParam<Scalar> z1 = solve_symmetric<Scalar>(en, v, tol_zero);
  SymmetricParam<Scalar> z2 = solve_symmetric<Scalar>(v, y.b - en, tol_zero);

  PhiPoint<Scalar> p{n, 3, {std::move(z1), std::move(z2), std::move(z3)}};
  return p;
}

/// Zero-pads the K=3 section to any K >= 3; padding with zero parameters
/// leaves the product unchanged.
template <class Scalar>
PhiPoint<Scalar> lift(const TargetVector<Scalar>& y, int K, double tol_zero = 1e-12) {
  if (K < 3) throw IndexError("lift: requires K >= 3");
  PhiPoint<Scalar> p = lift_triple(y, tol_zero);
  p.K = K;
  p.zs.resize(K, SymmetricParam<Scalar>(p.n));
  return p;
}

}  // namespace sympfactor
