#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "sympfactor/complete.hpp"
#include "sympfactor/vector_field.hpp"

namespace sympfactor {

/// One candidate tuple together with the generic ambient map used to certify
/// it: a left factor of free parameters applied to a short alternating
/// product acting on a free (or pinned) right vector.
struct TupleInstance {
  std::string label;
  std::vector<std::uint32_t> x;
  PolyVec ambient;  // n components
};

namespace ambient {

inline std::vector<PolyVec> param_matrix(VarPool& pool, const std::string& prefix, int n) {
  std::vector<PolyVec> m(n, PolyVec(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m[i][j] = Polynomial::variable(
          pool.param(prefix + std::to_string(i + 1) + std::to_string(j + 1)));
  return m;
}

inline PolyVec param_vector(VarPool& pool, const std::string& prefix, int n) {
  PolyVec v(n);
  for (int i = 0; i < n; ++i)
    v[i] = Polynomial::variable(pool.param(prefix + std::to_string(i + 1)));
  return v;
}

inline PolyVec free_stacked(VarPool& pool, int n) {
  PolyVec v = param_vector(pool, "c", n);
  PolyVec w = param_vector(pool, "d", n);
  v.insert(v.end(), w.begin(), w.end());
  return v;
}

inline void apply_upper(VarPool& pool, int level, int n, PolyVec& vec) {
  PolyVec bottom(vec.begin() + n, vec.end());
  PolyVec add = symmetric_times(pool, level, n, bottom);
  for (int i = 0; i < n; ++i) vec[i] += add[i];
}

inline void apply_lower(VarPool& pool, int level, int n, PolyVec& vec) {
  PolyVec top(vec.begin(), vec.begin() + n);
  PolyVec add = symmetric_times(pool, level, n, top);
  for (int i = 0; i < n; ++i) vec[n + i] += add[i];
}

inline void apply_param_matrix(const std::vector<PolyVec>& u, const std::vector<PolyVec>& v,
                               const std::vector<PolyVec>& w, const std::vector<PolyVec>& xm,
                               int n, PolyVec& vec) {
  PolyVec out(2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      out[i] += u[i][j] * vec[j] + v[i][j] * vec[n + j];
      out[n + i] += w[i][j] * vec[j] + xm[i][j] * vec[n + j];
    }
  vec = std::move(out);
}

/// P_i = sum_l A_il top_l + B_il bottom_l.
inline PolyVec left_collapse(VarPool& pool, int n, const PolyVec& vec) {
  auto a = param_matrix(pool, "A", n);
  auto b = param_matrix(pool, "B", n);
  PolyVec p(n);
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l) p[i] += a[i][l] * vec[l] + b[i][l] * vec[n + l];
  return p;
}

}  // namespace ambient

// Builders: indices are 0-based here; level arguments are 1-based as in the
// coordinate variables.  Each builder registers its own parameter pool.

inline TupleInstance make_type1(int n, int k, int m) {
  VarPool pool;
  TupleInstance t;
  t.label = "type1 k=" + std::to_string(k) + " m=" + std::to_string(m + 1);
  t.x.push_back(pool.z(k - 1, m, m));
  for (int i = 0; i < n; ++i) t.x.push_back(pool.z(k, i, i));
  PolyVec vec = ambient::free_stacked(pool, n);
  ambient::apply_lower(pool, k - 1, n, vec);
  ambient::apply_upper(pool, k, n, vec);
  t.ambient = ambient::left_collapse(pool, n, vec);
  return t;
}

inline TupleInstance make_type2(int n, int k, int m, int l) {
  VarPool pool;
  TupleInstance t;
  t.label = "type2 k=" + std::to_string(k) + " m=" + std::to_string(m + 1) +
            " l=" + std::to_string(l + 1);
  t.x.push_back(pool.z(k - 1, m, m));
  for (int i = 0; i < n; ++i) t.x.push_back(pool.z(k, l, i));
  PolyVec vec = ambient::free_stacked(pool, n);
  ambient::apply_lower(pool, k - 1, n, vec);
  ambient::apply_upper(pool, k, n, vec);
  t.ambient = ambient::left_collapse(pool, n, vec);
  return t;
}

inline TupleInstance make_type3(int n, int k, const std::vector<std::pair<int, int>>& pairs) {
  VarPool pool;
  TupleInstance t;
  t.label = "type3 k=" + std::to_string(k);
  for (auto [i, j] : pairs) t.x.push_back(pool.z(k, i, j));
  PolyVec vec = ambient::free_stacked(pool, n);
  ambient::apply_upper(pool, k, n, vec);
  t.ambient = ambient::left_collapse(pool, n, vec);
  return t;
}

inline TupleInstance make_type4(int n, int istar) {
  VarPool pool;
  TupleInstance t;
  t.label = "type4 i*=" + std::to_string(istar + 1);
  t.x.push_back(pool.z(1, n - 1, istar));
  for (int i = 0; i < n; ++i) t.x.push_back(pool.z(2, i, i));
  PolyVec vec(2 * n);
  vec[2 * n - 1] = Polynomial::constant(GaussianRational(1));
  ambient::apply_upper(pool, 1, n, vec);
  ambient::apply_lower(pool, 2, n, vec);
  t.ambient = ambient::left_collapse(pool, n, vec);
  return t;
}

inline TupleInstance make_type5(int n, int k, int l, int jstar,
                                const std::vector<std::pair<int, int>>& pairs,
                                bool middle_lower) {
  VarPool pool;
  TupleInstance t;
  t.label = "type5 k=" + std::to_string(k) + " l=" + std::to_string(l) +
            " j*=" + std::to_string(jstar + 1) + (middle_lower ? " lower" : " upper");
  for (auto [i, j] : pairs) t.x.push_back(pool.z(k, i, j));
  t.x.push_back(pool.z(l, jstar, jstar));
  PolyVec vec = ambient::free_stacked(pool, n);
  ambient::apply_upper(pool, k, n, vec);
  ambient::apply_param_matrix(ambient::param_matrix(pool, "U", n),
                              ambient::param_matrix(pool, "V", n),
                              ambient::param_matrix(pool, "W", n),
                              ambient::param_matrix(pool, "X", n), n, vec);
  if (middle_lower)
    ambient::apply_lower(pool, l, n, vec);
  else
    ambient::apply_upper(pool, l, n, vec);
  t.ambient = ambient::left_collapse(pool, n, vec);
  return t;
}

inline TupleInstance make_type6(int n, int k, const std::vector<int>& iset,
                                const std::vector<int>& jset, int istar, int jstar,
                                int jprime) {
  VarPool pool;
  TupleInstance t;
  t.label = "type6 k=" + std::to_string(k);
  for (int j : jset) t.x.push_back(pool.z(k - 1, jstar, j));
  for (int i : iset) t.x.push_back(pool.z(k, istar, i));
  t.x.push_back(pool.z(k, istar, jprime));
  PolyVec vec = ambient::free_stacked(pool, n);
  ambient::apply_lower(pool, k - 1, n, vec);
  ambient::apply_upper(pool, k, n, vec);
  t.ambient = ambient::left_collapse(pool, n, vec);
  return t;
}

inline TupleInstance make_type7(int n, int k, const std::vector<int>& iset,
                                const std::vector<int>& jset, int istar, int jstar,
                                int jprime) {
  VarPool pool;
  TupleInstance t;
  t.label = "type7 k=" + std::to_string(k) + " r=" + std::to_string(iset.size());
  for (int j : jset) t.x.push_back(pool.z(k, jstar, j));
  for (int i : iset) t.x.push_back(pool.z(k + 1, istar, i));
  t.x.push_back(pool.z(k + 2, jprime, jprime));
  PolyVec vec = ambient::free_stacked(pool, n);
  ambient::apply_upper(pool, k, n, vec);
  ambient::apply_lower(pool, k + 1, n, vec);
  ambient::apply_upper(pool, k + 2, n, vec);
  t.ambient = ambient::left_collapse(pool, n, vec);
  return t;
}

inline TupleInstance make_type8(int n, int i, int j) {
  VarPool pool;
  TupleInstance t;
  t.label = "type8 i=" + std::to_string(i + 1) + " j=" + std::to_string(j + 1);
  t.x.push_back(pool.z(1, i, n - 1));
  for (int r = 0; r < n; ++r) t.x.push_back(pool.z(2, j, r));
  PolyVec vec(2 * n);
  vec[2 * n - 1] = Polynomial::constant(GaussianRational(1));
  ambient::apply_upper(pool, 1, n, vec);
  ambient::apply_lower(pool, 2, n, vec);
  t.ambient = ambient::left_collapse(pool, n, vec);
  return t;
}

/// The known incomplete example: x = (z_{1,n1},...,z_{1,nn}, z_{2,n1}) on
/// the concrete quadratic block.
inline TupleInstance make_incomplete_example(int n) {
  VarPool pool;
  TupleInstance t;
  t.label = "incomplete example";
  for (int i = 0; i < n; ++i) t.x.push_back(pool.z(1, n - 1, i));
  t.x.push_back(pool.z(2, n - 1, 0));
  t.ambient = phi_block(pool, n, 2);
  return t;
}

inline std::vector<std::vector<int>> subsets_of_size(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

inline std::vector<std::pair<int, int>> all_pairs(int n) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) out.emplace_back(i, j);
  return out;
}

struct TypeTableReport {
  struct Entry {
    std::string label;
    bool covered = false;
    std::string failure;
  };
  std::vector<Entry> entries;
  int checked = 0;
  int failures = 0;

  void record(const TupleInstance& t) {
    auto outcome = affine_flow_certificate(t.x, t.ambient, /*assemble=*/false);
    ++checked;
    Entry e;
    e.label = t.label;
    e.covered = outcome.covered();
    if (!e.covered) {
      ++failures;
      e.failure = outcome.failure ? outcome.failure->reason : "not covered";
    }
    entries.push_back(std::move(e));
  }
  bool all_covered() const { return failures == 0; }
};

/// Runs the sufficient criterion over every known-complete tuple shape at
/// all matrix-index choices (levels swept over the minimal choice and the
/// top of the range, which exercises both parities).
inline TypeTableReport verify_type_table(int n, int K) {
  if (n < 2) throw IndexError("verify_type_table: requires n >= 2");
  TypeTableReport report;
  const auto pairs = all_pairs(n);
  const int t = static_cast<int>(pairs.size());

  auto levels_from = [&](int lo) {
    std::vector<int> ks;
    if (lo <= K) ks.push_back(lo);
    if (K > lo) ks.push_back(K);
    return ks;
  };

  for (int k : levels_from(2))
    for (int m = 0; m < n; ++m) report.record(make_type1(n, k, m));

  for (int k : levels_from(2))
    for (int m = 0; m < n; ++m)
      for (int l = 0; l < n; ++l)
        if (l != m) report.record(make_type2(n, k, m, l));

  for (int k : levels_from(1))
    for (const auto& subset : subsets_of_size(t, n + 1)) {
      std::vector<std::pair<int, int>> chosen;
      for (int idx : subset) chosen.push_back(pairs[idx]);
      report.record(make_type3(n, k, chosen));
    }

  if (K >= 2)
    for (int istar = 0; istar < n; ++istar) report.record(make_type4(n, istar));

  if (K >= 2)
    for (const auto& subset : subsets_of_size(t, n)) {
      std::vector<std::pair<int, int>> chosen;
      for (int idx : subset) chosen.push_back(pairs[idx]);
      for (int jstar = 0; jstar < n; ++jstar)
        for (bool lower : {true, false}) {
          report.record(make_type5(n, 1, 2, jstar, chosen, lower));
          if (K > 2) report.record(make_type5(n, 1, K, jstar, chosen, lower));
        }
    }

  for (int k : levels_from(2))
    for (int r = 1; r < n; ++r)
      for (const auto& iset : subsets_of_size(n, r)) {
        std::vector<int> jset;
        for (int v = 0; v < n; ++v)
          if (std::find(iset.begin(), iset.end(), v) == iset.end()) jset.push_back(v);
        for (int istar : iset)
          for (int jstar : jset)
            for (int jprime : jset)
              report.record(make_type6(n, k, iset, jset, istar, jstar, jprime));
      }

  if (K >= 3) {
    std::vector<int> sevens = {1};
    if (K - 2 > 1) sevens.push_back(K - 2);
    for (int k : sevens)
      for (int r = 0; r < n; ++r)
        for (const auto& iset : subsets_of_size(n, r)) {
          std::vector<int> jset;
          for (int v = 0; v < n; ++v)
            if (std::find(iset.begin(), iset.end(), v) == iset.end()) jset.push_back(v);
          std::vector<int> istars = iset.empty() ? std::vector<int>{-1} : iset;
          for (int istar : istars)
            for (int jstar : jset)
              for (int jprime : jset)
                report.record(
                    make_type7(n, k, iset, jset, std::max(istar, 0), jstar, jprime));
        }
  }

  if (K >= 2)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) report.record(make_type8(n, i, j));

  return report;
}

}  // namespace sympfactor
