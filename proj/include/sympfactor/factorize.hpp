#pragma once

#include <utility>

#include "sympfactor/core.hpp"
#include "sympfactor/ddouble.hpp"
#include "sympfactor/elementary.hpp"
#include "sympfactor/phimap.hpp"

namespace sympfactor {

/// Worst-case factor count of the induction: 4 for the 2x2 base case, plus
/// one block correction, 5 per diagonal-type generator expansion, and the
/// 3-factor lifted section per peeled level.
inline int factor_bound(int n) {
  if (n < 1) throw IndexError("factor_bound: n must be positive");
  int t = 4;
  for (int m = 2; m <= n; ++m) t += 5 * m - 1;
  return t;
}

template <class Scalar>
struct FactorizationResult {
  FactorWord<Scalar> word;
  double residual = 0.0;           // max-norm reconstruction error
  double relative_residual = 0.0;  // residual / max(1, ||M||)
  int factor_count = 0;
  int bound = 0;
};

/// Intermediate data of one induction step, exposed for debugging and tests.
template <class Scalar>
struct PeelReport {
  PhiPoint<Scalar> lift_point;  // the 3 lifted parameters for the last row
  Mat<Scalar> residual_matrix;  // Psi_3(G) * M^{-1}, last row e_{2n}
  Mat<Scalar> f_tilde;          // extracted Sp_{2n-2} member
  Vec<Scalar> b2, d2;
  Scalar b4;
  SymmetricParam<Scalar> correction;  // parameter of the upper correction factor
  double last_row_residual = 0.0;
  double forced_entry_residual = 0.0;
};

/// Word form of the 3-step section whose product has the prescribed last
/// row: sides follow the word parity (first factor lower).
template <class Scalar>
FactorWord<Scalar> section_word(const PhiPoint<Scalar>& g) {
  FactorWord<Scalar> w;
  w.n = g.n;
  w.push(Side::Lower, g.zs[0]);
  w.push(Side::Upper, g.zs[1]);
  w.push(Side::Lower, g.zs[2]);
  return w;
}

/// Base case: a 2x2 determinant-one matrix as at most 4 unipotent factors.
/// If the lower-left entry is a usable pivot, M = U(u) L(c) U(v); otherwise
/// premultiply by L(1) (which makes the pivot a+c nonzero) and emit L(-1)
/// followed by the 3-factor word of L(1)*M.  `strict` applies the
/// determinant gate at the caller's tolerance; the internal cascade passes
/// false because deep levels inherit the input's own imperfection, which
/// the final reconstruction check judges instead.
template <class Scalar>
FactorWord<Scalar> factor_2x2(const Mat<Scalar>& m, const Tolerances& tol = {},
                              bool strict = true) {
  if (m.rows() != 2 || m.cols() != 2) throw IndexError("factor_2x2: matrix must be 2x2");
  Scalar det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  double scale = std::max(1.0, max_norm(to_complex<Scalar>(m)));
  double det_gate = strict ? tol.factor * scale : 1e-2 * scale;
  if (flavor<Scalar>::exact
          ? !(det == Scalar(1))
          : std::abs(flavor<Scalar>::to_complex(det) - cdouble(1.0)) > det_gate)
    throw NotUnimodularError("factor_2x2: determinant is not 1");

  FactorWord<Scalar> w;
  w.n = 1;
  if (m == Mat<Scalar>::Identity(2, 2)) return w;

  const double tol_pivot = tol.factor * scale;
  auto three_factor = [&](const Mat<Scalar>& mm) {
    Scalar c = mm(1, 0);
    Scalar u = (mm(0, 0) - Scalar(1)) / c;
    Scalar v = (mm(1, 1) - Scalar(1)) / c;
    SymmetricParam<Scalar> zu(1), zc(1), zv(1);
    zu.set(0, 0, u);
    zc.set(0, 0, c);
    zv.set(0, 0, v);
    w.push(Side::Upper, zu);
    w.push(Side::Lower, zc);
    w.push(Side::Upper, zv);
  };

  if (!flavor<Scalar>::is_zero(m(1, 0), tol_pivot)) {
    three_factor(m);
  } else {
    SymmetricParam<Scalar> minus_one(1);
    minus_one.set(0, 0, Scalar(-1));
    w.push(Side::Lower, minus_one);
    Mat<Scalar> shifted = m;
    shifted.row(1) += m.row(0);  // L(1) * M
    three_factor(shifted);
  }
  return w;
}

/// Embeds a word over Sp_{2n-2} into Sp_{2n}: each parameter gains a zero
/// last row and column, commuting exactly with reconstruction.
template <class Scalar>
FactorWord<Scalar> embed(const FactorWord<Scalar>& w) {
  FactorWord<Scalar> out;
  out.n = w.n + 1;
  out.factors.reserve(w.factors.size());
  for (const auto& f : w.factors) {
    Mat<Scalar> z = Mat<Scalar>::Zero(out.n, out.n);
    z.topLeftCorner(w.n, w.n) = f.Z.matrix();
    out.push(f.side, SymmetricParam<Scalar>::from_matrix(z));
  }
  return out;
}

/// Standard inclusion of Sp_{2n-2} into Sp_{2n} on materialized matrices.
template <class Scalar>
Mat<Scalar> embed_matrix(const Mat<Scalar>& m) {
  const int nm = static_cast<int>(m.rows()) / 2;
  const int n = nm + 1;
  Mat<Scalar> out = Mat<Scalar>::Identity(2 * n, 2 * n);
  out.block(0, 0, nm, nm) = m.block(0, 0, nm, nm);
  out.block(0, n, nm, nm) = m.block(0, nm, nm, nm);
  out.block(n, 0, nm, nm) = m.block(nm, 0, nm, nm);
  out.block(n, n, nm, nm) = m.block(nm, nm, nm, nm);
  return out;
}

namespace detail {

/// Damped least-squares choice of a free packed direction: approximately
/// minimizes || F(u) s + r ||_2 over s in the kernel of F(w), with Tikhonov
/// damping so that poorly-leveraged directions are left alone.  Any kernel
/// element keeps the section's last-row constraint intact, so this only
/// affects conditioning, never correctness.
inline CVec shrink_direction(const CVec& w, const CVec& u, const CVec& r, double tol_rank) {
  const int n = static_cast<int>(w.size());
  const int t = triangle_size(n);
  CMat fw = action_matrix<cdouble>(w);
  Eigen::JacobiSVD<CMat> svd(fw, Eigen::ComputeFullV);
  int rank = 0;
  const auto& sv = svd.singularValues();
  double cutoff = sv.size() && sv(0) > 0 ? sv(0) * t * tol_rank : 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  if (rank >= t) return CVec::Zero(t);
  CMat kernel = svd.matrixV().rightCols(t - rank);
  CMat a = action_matrix<cdouble>(u) * kernel;
  const int k = static_cast<int>(a.cols());
  double scale_a = max_norm(a);
  if (scale_a == 0.0) return CVec::Zero(t);
  double lambda = 1e-3 * scale_a;
  CMat stacked = CMat::Zero(n + k, k);
  stacked.topRows(n) = a;
  stacked.bottomRows(k) = lambda * CMat::Identity(k, k);
  CVec rhs = CVec::Zero(n + k);
  rhs.head(n) = -r;
  CVec xi = stacked.colPivHouseholderQr().solve(rhs);
  return kernel * xi;
}

/// Re-uses the freedom in the lifted section (each solve pins only one
/// matrix-vector product) to pull the last column of the residual matrix
/// toward e_{2n}.  Greedy, one pass.  Directions are found in plain double
/// precision, clamped, and then projected back onto the exact constraint
/// kernel in the working scalar, so the section's last row is untouched up
/// to working precision.
template <class Scalar>
void shrink_section(PhiPoint<Scalar>& g, const Mat<Scalar>& m, const Tolerances& tol,
                    bool joint_pass) {
  const int n = g.n;
  CMat md = to_complex<Scalar>(m);
  CVec c = CMat(symplectic_inverse(md)).col(2 * n - 1);
  CVec en = CVec::Zero(n);
  en(n - 1) = 1.0;
  Vec<Scalar> en_s = Vec<Scalar>::Zero(n);
  en_s(n - 1) = Scalar(1);
  Vec<Scalar> b_s = m.row(2 * n - 1).tail(n).transpose();
  Vec<Scalar> v_s = g.zs[0].matrix() * en_s;  // Z_1 e_n, pinned by the lift

  auto apply = [&](int slot, const Vec<Scalar>& w_s, const CVec& u, const CVec& r) {
    CVec s = shrink_direction(to_complex(w_s), u, r, tol.rank);
    double size = 0;
    for (int i = 0; i < s.size(); ++i) size = std::max(size, std::abs(s(i)));
    if (size == 0.0) return;
    // deltas enter section products multiplicatively, so they stay on the
    // scale of the existing parameter plus the leverage-adjusted residual
    double leverage = max_norm(r) / std::max(1.0, max_norm(u));
    double cap = 8.0 * (1.0 + max_norm(to_complex<Scalar>(g.zs[slot].matrix())) + leverage);
    if (size > cap) s *= cap / size;

    auto delta_d = unpack<cdouble>(n, s);
    Mat<Scalar> delta(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) delta(i, j) = flavor<Scalar>::from_complex(delta_d(i, j));
    if (!vec_is_zero(w_s, tol.zero)) {
      Vec<Scalar> violation = delta * w_s;
      delta -= solve_symmetric<Scalar>(w_s, violation, tol.zero).matrix();
    }
    g.zs[slot] = SymmetricParam<Scalar>::from_matrix(Mat<Scalar>(g.zs[slot].matrix() + delta));
  };

  // stage for Z_3: bottom block of L(Z_3) c toward e_n
  CVec ca = c.head(n), cb = c.tail(n);
  CVec r3 = cb + to_complex<Scalar>(g.zs[2].matrix()) * ca - en;
  apply(2, b_s, ca, r3);
  CVec w_b = cb + to_complex<Scalar>(g.zs[2].matrix()) * ca;

  // stage for Z_2: top block of U(Z_2) (ca, w_b) toward 0
  CVec r2 = ca + to_complex<Scalar>(g.zs[1].matrix()) * w_b;
  apply(1, v_s, w_b, r2);
  CVec w_a = ca + to_complex<Scalar>(g.zs[1].matrix()) * w_b;

  // stage for Z_1: bottom block of L(Z_1) (w_a, w_b) toward e_n
  CVec r1 = w_b + to_complex<Scalar>(g.zs[0].matrix()) * w_a - en;
  apply(0, en_s, w_a, r1);

  // Joint pass: pull the whole residual matrix toward the identity.  The
  // sizes of later levels' parameters track ||section * M^{-1}||, so this
  // keeps the emitted word's factors (and with them the double
  // reconstruction floor) small.  Helps some inputs and hurts others, hence
  // selectable per cascade.
  if (!joint_pass) return;
  const int t = triangle_size(n);
  PackedIndex idx(n);
  auto kernel_basis = [&](const Vec<Scalar>& w_s) {
    CMat fw = action_matrix<cdouble>(to_complex(w_s));
    Eigen::JacobiSVD<CMat> svd(fw, Eigen::ComputeFullV);
    int rank = 0;
    const auto& sv = svd.singularValues();
    double cutoff = sv.size() && sv(0) > 0 ? sv(0) * t * tol.rank : 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) > cutoff) ++rank;
    return CMat(svd.matrixV().rightCols(t - rank));
  };
  const Vec<Scalar>* constraint[3] = {&en_s, &v_s, &b_s};

  for (int pass = 0; pass < 2; ++pass) {
    CMat l1 = CMat::Identity(2 * n, 2 * n), u2 = l1, l3 = l1;
    l1.block(n, 0, n, n) = to_complex<Scalar>(g.zs[0].matrix());
    u2.block(0, n, n, n) = to_complex<Scalar>(g.zs[1].matrix());
    l3.block(n, 0, n, n) = to_complex<Scalar>(g.zs[2].matrix());
    CMat minv = symplectic_inverse(md);
    CMat pre2 = l1 * u2;
    CMat suf2 = l3 * minv;
    CMat pre3 = pre2 * l3;
    CMat n0 = l1 * (u2 * suf2);
    CMat target = n0 - CMat::Identity(2 * n, 2 * n);
    if (max_norm(target) <= 1.0) break;

    CMat kb[3] = {kernel_basis(en_s), kernel_basis(v_s), kernel_basis(b_s)};
    const int dims[3] = {static_cast<int>(kb[0].cols()), static_cast<int>(kb[1].cols()),
                         static_cast<int>(kb[2].cols())};
    const int total = dims[0] + dims[1] + dims[2];
    if (total == 0) break;

    CMat full(4 * n * n, 3 * t);
    for (int c = 0; c < t; ++c) {
      auto [i, j] = idx.pair(c);
      CMat col1 = CMat::Zero(2 * n, 2 * n);
      col1.row(n + i) = n0.row(j);
      if (i != j) col1.row(n + j) = n0.row(i);
      full.col(c) = Eigen::Map<const CVec>(col1.data(), 4 * n * n);

      CMat col2 = pre2.col(i) * suf2.row(n + j);
      if (i != j) col2 += pre2.col(j) * suf2.row(n + i);
      full.col(t + c) = Eigen::Map<const CVec>(col2.data(), 4 * n * n);

      CMat col3 = pre3.col(n + i) * minv.row(j);
      if (i != j) col3 += pre3.col(n + j) * minv.row(i);
      full.col(2 * t + c) = Eigen::Map<const CVec>(col3.data(), 4 * n * n);
    }
    CMat a(4 * n * n, total);
    a.leftCols(dims[0]) = full.leftCols(t) * kb[0];
    a.middleCols(dims[0], dims[1]) = full.middleCols(t, t) * kb[1];
    a.rightCols(dims[2]) = full.rightCols(t) * kb[2];

    double scale_a = max_norm(a);
    if (scale_a == 0.0) break;
    double lambda = 1e-3 * scale_a;
    CMat stacked = CMat::Zero(4 * n * n + total, total);
    stacked.topRows(4 * n * n) = a;
    stacked.bottomRows(total) = lambda * CMat::Identity(total, total);
    CVec rhs = CVec::Zero(4 * n * n + total);
    rhs.head(4 * n * n) = -Eigen::Map<const CVec>(target.data(), 4 * n * n);
    CVec xi = stacked.colPivHouseholderQr().solve(rhs);

    int offset = 0;
    for (int slot = 0; slot < 3; ++slot) {
      if (dims[slot] == 0) continue;
      CVec s = kb[slot] * xi.segment(offset, dims[slot]);
      offset += dims[slot];
      double size = 0;
      for (int i = 0; i < s.size(); ++i) size = std::max(size, std::abs(s(i)));
      if (size == 0.0) continue;
      double cap = 8.0 * (1.0 + max_norm(to_complex<Scalar>(g.zs[slot].matrix())));
      if (size > cap) s *= cap / size;
      auto delta_d = unpack<cdouble>(n, s);
      Mat<Scalar> delta(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) delta(i, j) = flavor<Scalar>::from_complex(delta_d(i, j));
      if (!vec_is_zero(*constraint[slot], tol.zero)) {
        Vec<Scalar> violation = delta * (*constraint[slot]);
        delta -= solve_symmetric<Scalar>(*constraint[slot], violation, tol.zero).matrix();
      }
      g.zs[slot] =
          SymmetricParam<Scalar>::from_matrix(Mat<Scalar>(g.zs[slot].matrix() + delta));
    }
  }
}

}  // namespace detail

/// One induction step: lift the last row, cancel it, and extract the
/// Sp_{2n-2} residue together with the correction data.
template <class Scalar>
PeelReport<Scalar> peel(const Mat<Scalar>& m, const Tolerances& tol = {},
                        bool joint_shrink = false) {
  const int n = static_cast<int>(m.rows()) / 2;
  if (n < 2) throw IndexError("peel: requires n >= 2");

  Vec<Scalar> last_row = m.row(2 * n - 1).transpose();
  PeelReport<Scalar> rep;
  rep.lift_point = lift_triple(TargetVector<Scalar>::from_stacked(last_row), tol.zero);
  if constexpr (!flavor<Scalar>::exact)
    detail::shrink_section(rep.lift_point, m, tol, joint_shrink);

  Mat<Scalar> section = reconstruct(section_word(rep.lift_point));
  double scale = std::max(1.0, max_norm(to_complex<Scalar>(m)));
  rep.last_row_residual =
      max_norm(to_complex<Scalar>(Vec<Scalar>(section.row(2 * n - 1).transpose() - last_row)));
  if (rep.last_row_residual > (flavor<Scalar>::exact ? 0.0 : tol.factor * scale))
    throw LiftFailedError("peel: lifted section does not reproduce the last row");

  Mat<Scalar> nres = section * symplectic_inverse(m);
  rep.residual_matrix = nres;

  // last row must be e_{2n}; entries forced by symplecticity must vanish
  double forced = 0.0;
  RowVec<Scalar> bottom = nres.row(2 * n - 1);
  bottom(2 * n - 1) -= Scalar(1);
  forced = std::max(forced, max_norm(to_complex<Scalar>(Vec<Scalar>(bottom.transpose()))));
  for (int i = 0; i < n - 1; ++i) {
    forced = std::max(forced, std::abs(flavor<Scalar>::to_complex(nres(i, n - 1))));          // a_2
    forced = std::max(forced, std::abs(flavor<Scalar>::to_complex(nres(n + i, n - 1))));      // c_2
  }
  forced = std::max(forced,
                    std::abs(flavor<Scalar>::to_complex(nres(n - 1, n - 1)) - cdouble(1.0)));  // a_4
  rep.forced_entry_residual = forced;
  if (forced > (flavor<Scalar>::exact ? 0.0 : tol.factor * scale * scale))
    throw BlockAssertError("peel: forced entries of the residual matrix do not vanish");

  Mat<Scalar> ft(2 * (n - 1), 2 * (n - 1));
  ft.block(0, 0, n - 1, n - 1) = nres.block(0, 0, n - 1, n - 1);          // A_1
  ft.block(0, n - 1, n - 1, n - 1) = nres.block(0, n, n - 1, n - 1);      // B_1
  ft.block(n - 1, 0, n - 1, n - 1) = nres.block(n, 0, n - 1, n - 1);      // C_1
  ft.block(n - 1, n - 1, n - 1, n - 1) = nres.block(n, n, n - 1, n - 1);  // D_1
  rep.f_tilde = ft;

  rep.b2 = nres.block(0, 2 * n - 1, n - 1, 1);
  rep.b4 = nres(n - 1, 2 * n - 1);
  rep.d2 = nres.block(n, 2 * n - 1, n - 1, 1);

  Scalar corner = -rep.b4;
  for (int i = 0; i < n - 1; ++i) corner -= rep.d2(i) * rep.b2(i);
  Mat<Scalar> corr = Mat<Scalar>::Zero(n, n);
  corr.block(0, n - 1, n - 1, 1) = -rep.b2;
  corr.block(n - 1, 0, 1, n - 1) = -rep.b2.transpose();
  corr(n - 1, n - 1) = corner;
  rep.correction = SymmetricParam<Scalar>::from_matrix(corr);
  return rep;
}

namespace detail {

template <class Scalar>
FactorWord<Scalar> reversed_word(const FactorWord<Scalar>& w) {
  FactorWord<Scalar> out;
  out.n = w.n;
  out.factors.reserve(w.factors.size());
  for (auto it = w.factors.rbegin(); it != w.factors.rend(); ++it)
    out.factors.push_back(it->inverse());
  return out;
}

template <class Scalar>
FactorWord<Scalar> factorize_impl(const Mat<Scalar>& m, const Tolerances& tol,
                                  bool joint_shrink = false);

/// m = psi(f_tilde^{-1}) * U(correction) * prod_j K_{n,j}(d2_j) * section,
/// where the diagonal-type generators commute with one another.  peel has
/// already asserted the structural residuals; the extracted Sp_{2n-2}
/// member inherits the input's own symplectic imperfection, so it is not
/// re-gated here.
template <class Scalar>
FactorWord<Scalar> assemble_level(const PeelReport<Scalar>& rep, const Tolerances& tol,
                                  bool joint_shrink) {
  const int n = rep.lift_point.n;
  FactorWord<Scalar> inner =
      factorize_impl(symplectic_inverse(rep.f_tilde), tol, joint_shrink);
  FactorWord<Scalar> w = embed(inner);
  if (!rep.correction.is_zero(0.0)) w.push(Side::Upper, rep.correction);
  for (int j = 0; j < n - 1; ++j) {
    if (flavor<Scalar>::is_zero(rep.d2(j), 0.0)) continue;
    FactorWord<Scalar> kw = whitehead_offdiag(n - 1, j, rep.d2(j), n);
    for (auto& f : kw.factors) w.factors.push_back(std::move(f));
  }
  FactorWord<Scalar> sec = section_word(rep.lift_point);
  for (auto& f : sec.factors) w.factors.push_back(std::move(f));
  return w;
}

template <class Scalar>
FactorWord<Scalar> factorize_impl(const Mat<Scalar>& m, const Tolerances& tol,
                                  bool joint_shrink) {
  const int n = static_cast<int>(m.rows()) / 2;
  FactorWord<Scalar> w;
  w.n = n;
  if (m == Mat<Scalar>::Identity(2 * n, 2 * n)) return w;
  if (n == 1) return factor_2x2(m, tol, /*strict=*/false);

  if constexpr (flavor<Scalar>::exact) {
    return assemble_level(peel(m, tol), tol, joint_shrink);
  } else {
    // peel whichever of M, M^{-1} yields the tamer residual matrix; a word
    // for the inverse reverses and negates into a word for M, exactly and
    // with the same factor count
    Mat<Scalar> inv = symplectic_inverse(m);
    PeelReport<Scalar> rep_fwd = peel(m, tol, joint_shrink);
    PeelReport<Scalar> rep_rev = peel(inv, tol, joint_shrink);
    double norm_fwd = max_norm(to_complex<Scalar>(rep_fwd.residual_matrix));
    double norm_rev = max_norm(to_complex<Scalar>(rep_rev.residual_matrix));
    if (norm_rev < norm_fwd)
      return reversed_word(assemble_level(rep_rev, tol, joint_shrink));
    return assemble_level(rep_fwd, tol, joint_shrink);
  }
}

/// Gauss-Newton polish of a word against its target, in plain double
/// arithmetic: minimizes the double reconstruction residual over all packed
/// parameters at once.  The word is overparameterized for the group, so the
/// minimum-norm step leaves the factors close to where the cascade put
/// them; counts and sides never change.
inline void polish_word(FactorWord<cdouble>& w, const CMat& target) {
  const int n = w.n;
  const int two_n = 2 * n;
  const int t = triangle_size(n);
  const int m = w.size();
  if (m == 0) return;
  PackedIndex idx(n);
  const double scale = std::max(1.0, max_norm(target));

  auto apply_step = [&](const FactorWord<cdouble>& base, const CVec& delta, double step) {
    FactorWord<cdouble> out = base;
    for (int k = 0; k < m; ++k) {
      SymmetricParam<cdouble> z = out.factors[k].Z;
      for (int c = 0; c < t; ++c) {
        auto [i, j] = idx.pair(c);
        z.set(i, j, z(i, j) + step * delta(k * t + c));
      }
      out.factors[k].Z = z;
    }
    return out;
  };
  auto rel_residual = [&](const FactorWord<cdouble>& word) {
    return max_norm(CMat(reconstruct(word) - target)) / scale;
  };

  double best = rel_residual(w);
  for (int pass = 0; pass < 12 && best > 1e-13; ++pass) {
    std::vector<CMat> prefix(m + 1), suffix(m + 1);
    prefix[0] = CMat::Identity(two_n, two_n);
    for (int k = 0; k < m; ++k) prefix[k + 1] = prefix[k] * materialize(w.factors[k]);
    suffix[m] = CMat::Identity(two_n, two_n);
    for (int k = m; k-- > 0;) suffix[k] = materialize(w.factors[k]) * suffix[k + 1];
    CMat residual = prefix[m] - target;

    CMat jac(two_n * two_n, m * t);
    for (int k = 0; k < m; ++k) {
      const bool upper = w.factors[k].side == Side::Upper;
      const CMat& pre = prefix[k];
      const CMat& suf = suffix[k + 1];
      for (int c = 0; c < t; ++c) {
        auto [i, j] = idx.pair(c);
        CMat col;
        if (upper) {
          col = pre.col(i) * suf.row(n + j);
          if (i != j) col += pre.col(j) * suf.row(n + i);
        } else {
          col = pre.col(n + i) * suf.row(j);
          if (i != j) col += pre.col(n + j) * suf.row(i);
        }
        jac.col(k * t + c) = Eigen::Map<const CVec>(col.data(), two_n * two_n);
      }
    }
    Eigen::CompleteOrthogonalDecomposition<CMat> cod(jac);
    CVec delta = cod.solve(CVec(-Eigen::Map<const CVec>(residual.data(), two_n * two_n)));

    // backtracking: accept the first step fraction that improves
    bool improved = false;
    for (double step = 1.0; step >= 1.0 / 64.0; step *= 0.5) {
      FactorWord<cdouble> trial = apply_step(w, delta, step);
      double rel = rel_residual(trial);
      if (std::isfinite(rel) && rel < best) {
        best = rel;
        w = std::move(trial);
        improved = true;
        break;
      }
    }
    if (!improved) return;
  }
}

}  // namespace detail

template <class Scalar>
FactorizationResult<Scalar> factorize(const Mat<Scalar>& m, const Tolerances& tol = {},
                                      bool do_compact = false) {
  SymplecticMatrix<Scalar> validated = validate_symplectic(m, tol.symplectic);
  FactorizationResult<Scalar> res;
  res.bound = factor_bound(validated.n);
  res.word = detail::factorize_impl(m, tol);
  if (do_compact) res.word = compact(res.word);
  res.factor_count = res.word.size();
  if (res.factor_count > res.bound)
    throw ToleranceError("factorize: factor count exceeds the uniform bound");
  res.residual = max_norm(to_complex<Scalar>(Mat<Scalar>(reconstruct(res.word) - m)));
  double scale = std::max(1.0, max_norm(to_complex<Scalar>(m)));
  res.relative_residual = res.residual / scale;
  if (res.relative_residual > (flavor<Scalar>::exact ? 0.0 : tol.factor))
    throw ToleranceError("factorize: reconstruction residual exceeds tolerance");
  return res;
}

/// Float entry point.  The induction runs on compensated double-double
/// scalars and the word is rounded to plain doubles at the end; the rounded
/// word's double-arithmetic reconstruction is what the tolerance judges.
/// A few deterministic cascade variants (section-shrink aggressiveness, the
/// orientation of the top-level peel) are tried lazily and the first word
/// below the quality target wins.
inline FactorizationResult<cdouble> factorize(const CMat& m, const Tolerances& tol = {},
                                              bool do_compact = false) {
  SymplecticMatrix<cdouble> validated = validate_symplectic(m, tol.symplectic);
  const double scale = std::max(1.0, max_norm(m));
  const double good_enough = std::min(tol.factor * 1e-2, 1e-10);

  auto attempt = [&](bool joint, bool reverse_top) {
    CMat input = reverse_top ? CMat(symplectic_inverse(m)) : m;
    FactorWord<cddouble> wide =
        detail::factorize_impl<cddouble>(from_complex_matrix<cddouble>(input), tol, joint);
    FactorWord<cdouble> word;
    word.n = wide.n;
    for (const auto& f : wide.factors) {
      Mat<cdouble> z(wide.n, wide.n);
      for (int i = 0; i < wide.n; ++i)
        for (int j = 0; j < wide.n; ++j) z(i, j) = f.Z(i, j).value();
      word.push(f.side, SymmetricParam<cdouble>::from_matrix(z));
    }
    if (reverse_top) word = detail::reversed_word(word);
    if (max_norm(CMat(reconstruct(word) - m)) > 1e-12 * scale) detail::polish_word(word, m);
    return word;
  };

  FactorWord<cdouble> best;
  double best_rel = -1.0;
  const std::pair<bool, bool> variants[] = {
      {false, false}, {true, false}, {false, true}, {true, true}};
  for (auto [joint, rev] : variants) {
    FactorWord<cdouble> word;
    try {
      word = attempt(joint, rev);
    } catch (const Error&) {
      continue;  // a failed variant is fine as long as one succeeds
    }
    double rel = max_norm(CMat(reconstruct(word) - m)) / scale;
    if (best_rel < 0.0 || rel < best_rel) {
      best_rel = rel;
      best = std::move(word);
    }
    if (best_rel <= good_enough) break;
  }
  if (best_rel < 0.0)
    throw ToleranceError("factorize: every cascade variant failed");

  FactorizationResult<cdouble> res;
  res.bound = factor_bound(validated.n);
  res.word = std::move(best);
  if (do_compact) res.word = compact(res.word);
  res.factor_count = res.word.size();
  if (res.factor_count > res.bound)
    throw ToleranceError("factorize: factor count exceeds the uniform bound");
  res.residual = max_norm(CMat(reconstruct(res.word) - m));
  res.relative_residual = res.residual / scale;
  if (res.relative_residual > tol.factor)
    throw ToleranceError("factorize: reconstruction residual exceeds tolerance");
  return res;
}

}  // namespace sympfactor
