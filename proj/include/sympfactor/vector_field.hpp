#pragma once

#include <map>
#include <vector>

#include "sympfactor/poly.hpp"

namespace sympfactor {

using PolyVec = std::vector<Polynomial>;

/// Polynomial vector field: finitely many nonzero components, keyed by the
/// variable they differentiate along.
struct PolyVectorField {
  std::map<std::uint32_t, Polynomial> components;

  void add(std::uint32_t var, const Polynomial& p) {
    if (p.is_zero()) return;
    auto [it, fresh] = components.emplace(var, p);
    if (!fresh) {
      it->second += p;
      if (it->second.is_zero()) components.erase(it);
    }
  }

  /// Lie derivative along the field.
  Polynomial apply(const Polynomial& f) const {
    Polynomial out;
    for (auto& [var, comp] : components) out += comp * f.derivative(var);
    return out;
  }

  bool annihilates(const PolyVec& polys) const {
    for (const auto& p : polys)
      if (!apply(p).is_zero()) return false;
    return true;
  }
};

/// Symbolic product of the symmetric matrix of level-k coordinate variables
/// with a vector of polynomials.
inline PolyVec symmetric_times(VarPool& pool, int k, int n, const PolyVec& v) {
  PolyVec out(n);
  for (int i = 0; i < n; ++i) {
    Polynomial acc;
    for (int j = 0; j < n; ++j) acc += Polynomial::variable(pool.z(k, i, j)) * v[j];
    out[i] = acc;
  }
  return out;
}

/// The block of the alternating product updated at step K, as polynomials:
/// step 0 is the constant e_n, step 1 the last column of Z_1, and each later
/// step adds Z_K times the previous block to the one before it.  Returns all
/// blocks 0..K (index by step).
inline std::vector<PolyVec> phi_blocks(VarPool& pool, int n, int K) {
  std::vector<PolyVec> blocks(K + 1);
  PolyVec base(n);
  base[n - 1] = Polynomial::constant(GaussianRational(1));
  blocks[0] = base;
  if (K >= 1) {
    PolyVec first(n);
    for (int i = 0; i < n; ++i) first[i] = Polynomial::variable(pool.z(1, i, n - 1));
    blocks[1] = first;
  }
  for (int k = 2; k <= K; ++k) {
    PolyVec cur = symmetric_times(pool, k, n, blocks[k - 1]);
    for (int i = 0; i < n; ++i) cur[i] += blocks[k - 2][i];
    blocks[k] = cur;
  }
  return blocks;
}

/// Active block at step K only.
inline PolyVec phi_block(VarPool& pool, int n, int K) { return phi_blocks(pool, n, K)[K]; }

/// All 2n components of the step-K product map: the block updated at step K
/// sits in the first half for odd K, the second for even K; the other half
/// is the step-(K-1) block.
inline PolyVec phi_components(VarPool& pool, int n, int K) {
  auto blocks = phi_blocks(pool, n, K);
  PolyVec out(2 * n);
  const PolyVec& previous = blocks[K >= 1 ? K - 1 : 0];
  const PolyVec& current = blocks[K];
  for (int i = 0; i < n; ++i) {
    if (K % 2 == 1) {
      out[i] = current[i];
      out[n + i] = previous[i];
    } else {
      out[i] = previous[i];
      out[n + i] = current[i];
    }
  }
  return out;
}

/// Determinant of a square matrix of polynomials by cofactor expansion
/// along the first row; fine at tuple sizes.
inline Polynomial poly_det(const std::vector<PolyVec>& rows) {
  const int n = static_cast<int>(rows.size());
  if (n == 0) return Polynomial::constant(GaussianRational(1));
  if (n == 1) return rows[0][0];
  Polynomial acc;
  for (int c = 0; c < n; ++c) {
    if (rows[0][c].is_zero()) continue;
    std::vector<PolyVec> minor(n - 1, PolyVec(n - 1));
    for (int r = 1; r < n; ++r) {
      int cc = 0;
      for (int col = 0; col < n; ++col) {
        if (col == c) continue;
        minor[r - 1][cc++] = rows[r][col];
      }
    }
    Polynomial term = rows[0][c] * poly_det(minor);
    if (c % 2 == 1) term = -term;
    acc += term;
  }
  return acc;
}

/// Jacobian-minor determinant field: for a tuple x of n+1 variables and an
/// n-component polynomial map P, the component along x_r is (-1)^r times
/// the determinant of the Jacobian minor omitting column r.  Annihilates
/// every P_i by the repeated-row argument.
inline PolyVectorField jacobian_minor_field(const std::vector<std::uint32_t>& x,
                                            const PolyVec& p) {
  const int m = static_cast<int>(x.size());
  if (m != static_cast<int>(p.size()) + 1)
    throw IndexError("jacobian_minor_field: tuple size must be one more than map size");
  const int n = m - 1;
  std::vector<PolyVec> jac(n, PolyVec(m));
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < m; ++r) jac[i][r] = p[i].derivative(x[r]);

  PolyVectorField field;
  for (int r = 0; r < m; ++r) {
    std::vector<PolyVec> minor(n, PolyVec(n));
    for (int i = 0; i < n; ++i) {
      int cc = 0;
      for (int col = 0; col < m; ++col) {
        if (col == r) continue;
        minor[i][cc++] = jac[i][col];
      }
    }
    Polynomial comp = poly_det(minor);
    if (r % 2 == 1) comp = -comp;
    field.add(x[r], comp);
  }
  return field;
}

/// Lift of a minor field from levels < K to a field preserving all 2n
/// components of the step-K map: the level-K corrections cancel what the
/// base field does to the earlier block.
inline PolyVectorField lifted_minor_field(VarPool& pool, int n, int K,
                                          const std::vector<std::uint32_t>& x, int jstar) {
  for (auto v : x) {
    auto [k, i, j] = pool.coordinate(v);
    if (k < 0 || k > K - 1)
      throw IndexError("lifted_minor_field: tuple must sit below the top level");
  }
  auto blocks = phi_blocks(pool, n, K - 1);
  const PolyVec& top = blocks[K - 1];     // multiplies the corrections
  const PolyVec& lower = blocks[K - 2];   // feeds the transported derivative
  PolyVectorField base = jacobian_minor_field(x, top);

  PolyVec u(n);
  for (int i = 0; i < n; ++i) u[i] = base.apply(lower[i]);

  Polynomial pj = top[jstar];
  Polynomial pj2 = pj * pj;

  PolyVectorField out;
  for (auto& [var, comp] : base.components) out.add(var, pj2 * comp);
  Polynomial diag_coeff;
  for (int i = 0; i < n; ++i) {
    if (i == jstar) {
      diag_coeff -= pj * u[i];
    } else {
      out.add(pool.z(K, jstar, i), -(pj * u[i]));
      diag_coeff += top[i] * u[i];
    }
  }
  out.add(pool.z(K, jstar, jstar), diag_coeff);
  return out;
}

/// Coordinate-direction lift: preserves all 2n components of the step-K map
/// while moving z_{K,ij}; complete because every component is constant in
/// the variables the field moves.
inline PolyVectorField lifted_coordinate_field(VarPool& pool, int n, int K, int i, int j,
                                               int jstar) {
  if (i == jstar || j == jstar)
    throw IndexError("lifted_coordinate_field: moved pair must avoid the pivot index");
  if (i > j) std::swap(i, j);
  auto blocks = phi_blocks(pool, n, K - 1);
  const PolyVec& top = blocks[K - 1];
  Polynomial pj = top[jstar];
  GaussianRational half(Rational(BigInt(1), BigInt(1 + (i == j ? 1 : 0))));

  PolyVectorField out;
  out.add(pool.z(K, i, j), pj * pj);
  out.add(pool.z(K, jstar, jstar), half * (GaussianRational(2) * (top[i] * top[j])));
  out.add(pool.z(K, jstar, j), -(half * (top[i] * pj)));
  out.add(pool.z(K, jstar, i), -(half * (top[j] * pj)));
  return out;
}

}  // namespace sympfactor
