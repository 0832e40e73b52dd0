#pragma once

#include <vector>

#include "sympfactor/phimap.hpp"
#include "sympfactor/vector_field.hpp"

namespace sympfactor {

/// Values of all coordinate variables of a pool at a numeric point, indexed
/// by variable id.  Parameter variables default to zero.
inline std::vector<cdouble> coordinate_values(const VarPool& pool,
                                              const PhiPoint<cdouble>& p) {
  std::vector<cdouble> values(pool.size(), cdouble(0));
  for (int id = 0; id < pool.size(); ++id) {
    if (!pool.is_coordinate(id)) continue;
    auto [k, i, j] = pool.coordinate(id);
    if (k >= 1 && k <= p.K) values[id] = p.zs[k - 1].matrix()(i, j);
  }
  return values;
}

/// Field value at a point, embedded into the full K*n(n+1)/2 coordinate
/// space in (level, packed) order.
inline CVec field_value(const VarPool& pool, const PolyVectorField& field,
                        const PhiPoint<cdouble>& p, const std::vector<cdouble>& values) {
  PackedIndex idx(p.n);
  CVec out = CVec::Zero(p.K * idx.size());
  for (auto& [var, comp] : field.components) {
    auto [k, i, j] = pool.coordinate(var);
    if (k < 1 || k > p.K) throw IndexError("field_value: component outside the point's levels");
    out((k - 1) * idx.size() + idx.index(i, j)) = comp.eval_complex(values);
  }
  return out;
}

struct SpanReport {
  int kernel_dim = 0;
  int spanned_dim = 0;
  bool dominated = false;
  double worst_tangency = 0.0;  // max residual of J*value over field values
};

/// Evaluates a collection of fiber-preserving fields at a submersive point
/// and checks that their span fills the fiber tangent space (the kernel of
/// the Jacobian).  Values are sanity-checked to actually lie in the kernel.
inline SpanReport span_report(const VarPool& pool, const PhiPoint<cdouble>& p,
                              const std::vector<PolyVectorField>& fields,
                              const Tolerances& tol = {}) {
  ClassificationReport cls = classify(p, tol);
  if (cls.in_sk) throw SingularPointError("span_report: point is singular");

  const int total = p.K * triangle_size(p.n);
  CMat jac = phi_jacobian(p);
  SpanReport rep;
  rep.kernel_dim = total - numeric_rank(jac, tol.rank);

  std::vector<cdouble> values = coordinate_values(pool, p);
  CMat stacked(total, static_cast<int>(fields.size()));
  double jac_scale = std::max(1.0, max_norm(jac));
  for (size_t f = 0; f < fields.size(); ++f) {
    CVec v = field_value(pool, fields[f], p, values);
    stacked.col(static_cast<int>(f)) = v;
    double vn = std::max(1.0, max_norm(v));
    rep.worst_tangency = std::max(rep.worst_tangency, max_norm(CVec(jac * v)) / (vn * jac_scale));
  }
  rep.spanned_dim = fields.empty() ? 0 : numeric_rank(stacked, tol.rank);
  rep.dominated = rep.spanned_dim == rep.kernel_dim;
  return rep;
}

/// Explicit spanning collections built only from the listed families:
/// the direct coordinate fields and coordinate lifts for two steps; lifts of
/// the bottom-row tuples for three; lifts of the diagonal tuples one level
/// down for four.  The pivot index is chosen at the point so denominators
/// stay away from zero.
inline std::vector<PolyVectorField> builtin_collection(VarPool& pool, int n, int K,
                                                       const PhiPoint<cdouble>& p,
                                                       double tol_zero = 1e-12) {
  if (K < 2 || K > 4) throw IndexError("builtin_collection: K must be 2, 3 or 4");
  std::vector<PolyVectorField> fields;

  auto pivot_for = [&](int level) {
    // index of the largest component of the active block at `level`
    auto blocks = phi_blocks(pool, n, level);
    std::vector<cdouble> values = coordinate_values(pool, p);
    int best = 0;
    double best_mag = -1.0;
    for (int j = 0; j < n; ++j) {
      double mag = std::abs(blocks[level][j].eval_complex(values));
      if (mag > best_mag) {
        best_mag = mag;
        best = j;
      }
    }
    if (best_mag <= tol_zero)
      throw SingularPointError("builtin_collection: active block vanishes at the point");
    return best;
  };

  // two steps: free level-1 coordinates away from the last column, plus the
  // coordinate lifts into level 2
  {
    int jstar = pivot_for(1);
    auto blocks = phi_blocks(pool, n, 1);
    Polynomial pj2 = blocks[1][jstar] * blocks[1][jstar];
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n - 1; ++j) {
        PolyVectorField f;
        f.add(pool.z(1, i, j), pj2);
        fields.push_back(std::move(f));
      }
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        if (i != jstar && j != jstar)
          fields.push_back(lifted_coordinate_field(pool, n, 2, i, j, jstar));
  }

  if (K >= 3) {
    int jstar = pivot_for(2);
    for (int m = 0; m < n; ++m) {
      std::vector<std::uint32_t> x;
      x.push_back(pool.z(1, n - 1, m));
      for (int i = 0; i < n; ++i) x.push_back(pool.z(2, i, i));
      fields.push_back(lifted_minor_field(pool, n, 3, x, jstar));
    }
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        if (i != jstar && j != jstar)
          fields.push_back(lifted_coordinate_field(pool, n, 3, i, j, jstar));
  }

  if (K >= 4) {
    int jstar = pivot_for(3);
    for (int m = 0; m < n; ++m) {
      std::vector<std::uint32_t> x;
      x.push_back(pool.z(2, m, m));
      for (int i = 0; i < n; ++i) x.push_back(pool.z(3, i, i));
      fields.push_back(lifted_minor_field(pool, n, 4, x, jstar));
    }
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        if (i != jstar && j != jstar)
          fields.push_back(lifted_coordinate_field(pool, n, 4, i, j, jstar));
  }
  return fields;
}

/// Exact closed forms for the new-direction matrix u_ij = V_i(previous
/// block component j): diagonal with the product of the level-1 last-column
/// entries for three steps, and diagonal with the one-lower block times the
/// product of the current block for more steps.
inline bool new_direction_matrix_check(int n, int K) {
  if (K < 3) throw IndexError("new_direction_matrix_check: requires K >= 3");
  VarPool pool;
  auto blocks = phi_blocks(pool, n, K - 1);

  for (int m = 0; m < n; ++m) {
    std::vector<std::uint32_t> x;
    if (K == 3) {
      x.push_back(pool.z(1, n - 1, m));
      for (int i = 0; i < n; ++i) x.push_back(pool.z(2, i, i));
    } else {
      x.push_back(pool.z(K - 2, m, m));
      for (int i = 0; i < n; ++i) x.push_back(pool.z(K - 1, i, i));
    }
    PolyVectorField field = jacobian_minor_field(x, blocks[K - 1]);
    for (int j = 0; j < n; ++j) {
      Polynomial u = field.apply(blocks[K - 2][j]);
      Polynomial expect;
      if (j == m) {
        expect = Polynomial::constant(GaussianRational(1));
        if (K == 3) {
          for (int l = 0; l < n; ++l) expect *= Polynomial::variable(pool.z(1, l, n - 1));
        } else {
          expect = blocks[K - 3][m];
          for (int l = 0; l < n; ++l) expect *= blocks[K - 2][l];
        }
      }
      if (!(u - expect).is_zero()) return false;
    }
  }
  return true;
}

struct ComplementaryBases {
  std::vector<int> a_columns;  // complementary indices
  std::vector<int> b_columns;  // pivot indices of the upper-right block
  cdouble determinant = 0.0;
  double hadamard_ratio = 0.0;  // |det| / product of column norms
};

/// Dopico-Johnson complementary bases: pivot columns of B joined with the
/// complementary columns of A always form a regular matrix when [[A,B],[C,D]]
/// is symplectic.  Regularity is asserted via the scale-free Hadamard ratio.
inline ComplementaryBases complementary_basis(const CMat& m, const Tolerances& tol = {}) {
  SymplecticMatrix<cdouble> validated = validate_symplectic(m, tol.symplectic);
  const int n = validated.n;
  CMat b = validated.block_b();
  int k = numeric_rank(b, tol.rank);

  Eigen::ColPivHouseholderQR<CMat> qr(b);
  ComplementaryBases out;
  std::vector<bool> chosen(n, false);
  for (int i = 0; i < k; ++i) {
    int col = static_cast<int>(qr.colsPermutation().indices()(i));
    out.b_columns.push_back(col);
    chosen[col] = true;
  }
  std::sort(out.b_columns.begin(), out.b_columns.end());
  for (int i = 0; i < n; ++i)
    if (!chosen[i]) out.a_columns.push_back(i);

  CMat x(n, n);
  int c = 0;
  CMat a = validated.block_a();
  for (int i : out.a_columns) x.col(c++) = a.col(i);
  for (int j : out.b_columns) x.col(c++) = b.col(j);

  cdouble det = x.determinant();
  double denom = 1.0;
  for (int i = 0; i < n; ++i) denom *= std::max(x.col(i).norm(), 1e-300);
  out.determinant = det;
  out.hadamard_ratio = std::abs(det) / denom;
  if (!(out.hadamard_ratio > 1e-10))
    throw RegularityError("complementary_basis: assembled matrix is numerically singular");
  return out;
}

}  // namespace sympfactor
