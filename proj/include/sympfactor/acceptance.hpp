#pragma once

#include <chrono>
#include <cstdio>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sympfactor/factorize.hpp"
#include "sympfactor/random.hpp"
#include "sympfactor/span.hpp"
#include "sympfactor/typetable.hpp"

namespace sympfactor {

struct AcceptanceResult {
  int passed = 0;
  int failed = 0;
  bool ok() const { return failed == 0; }
};

namespace acceptance {

struct Context {
  std::uint64_t seed;
  Tolerances tol;
  std::ostream& out;
};

using Criterion = std::function<std::string(Context&)>;  // returns failure detail, empty = pass

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

// 1. Whitehead identities: expansions equal the diagonal-type generators,
//    exactly over the rationals and to 1e-12 in floats.
inline std::string whitehead_identities(Context& ctx) {
  Rng rng(ctx.seed + 1);
  for (int iter = 0; iter < 200; ++iter) {
    int n = 1 + static_cast<int>(rng.below(3));
    int i = static_cast<int>(rng.below(n));
    GaussianRational a = rng.nonzero_gaussian_rational();
    if (!(reconstruct(whitehead_diagonal(i, a, n)) == k_generator(i, i, a, n)))
      return "diagonal expansion mismatch (exact)";
    if (n >= 2) {
      int j = static_cast<int>(rng.below(n));
      if (j == i) j = (j + 1) % n;
      GaussianRational b = rng.gaussian_rational();
      if (!(reconstruct(whitehead_offdiag(i, j, b, n)) == k_generator(i, j, b, n)))
        return "off-diagonal expansion mismatch (exact)";
    }
  }
  double worst = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    int n = 1 + static_cast<int>(rng.below(3));
    int i = static_cast<int>(rng.below(n));
    cdouble a = rng.complex_in_disk();
    if (std::abs(a) < 1e-3) a += cdouble(1.0, 0.0);
    worst = std::max(worst, max_norm(CMat(reconstruct(whitehead_diagonal(i, a, n)) -
                                          k_generator(i, i, a, n))));
    if (n >= 2) {
      int j = (i + 1) % n;
      cdouble b = rng.complex_in_disk();
      worst = std::max(worst, max_norm(CMat(reconstruct(whitehead_offdiag(i, j, b, n)) -
                                            k_generator(i, j, b, n))));
    }
  }
  if (worst > 1e-12) return "float expansion residual " + fmt(worst);
  return {};
}

// 2./3. Factorization round-trip and the uniform factor bound over the same
//       corpus of random words.
inline std::string factorization_roundtrip(Context& ctx, bool check_bound,
                                           std::string& detail) {
  Rng rng(ctx.seed + 2);
  double worst = 0.0;
  int worst_count = 0;
  std::string counts;
  for (int n = 1; n <= 4; ++n) {
    int max_count = 0;
    for (int iter = 0; iter < 1000; ++iter) {
      int len = 1 + static_cast<int>(rng.below(20));
      CMat m = reconstruct(random_word<cdouble>(rng, n, len));
      FactorizationResult<cdouble> res;
      try {
        res = factorize(m, ctx.tol);
      } catch (const Error& e) {
        return std::string("factorize failed at n=") + std::to_string(n) + ": " + e.what();
      }
      worst = std::max(worst, res.relative_residual);
      max_count = std::max(max_count, res.factor_count);
      if (check_bound && res.factor_count > factor_bound(n))
        return "factor count " + std::to_string(res.factor_count) + " exceeds bound at n=" +
               std::to_string(n);
    }
    worst_count = std::max(worst_count, max_count);
    counts += " T(" + std::to_string(n) + ")<=" + std::to_string(max_count) + "/" +
              std::to_string(factor_bound(n));
  }
  detail = (check_bound ? "empirical max" + counts : "worst relative residual " + fmt(worst));
  if (!check_bound && worst > 1e-8) return "worst relative residual " + fmt(worst);
  return {};
}

// 4. Closed-form singularity classification agrees with the numeric
//    Jacobian rank on random and crafted rank-deficient points.
inline std::string classification_agreement(Context& ctx) {
  Rng rng(ctx.seed + 4);
  for (int n = 1; n <= 3; ++n)
    for (int K = 2; K <= 6; ++K)
      for (int iter = 0; iter < 1000; ++iter) {
        PhiPoint<cdouble> p{n, K, {}};
        bool crafted = iter % 2 == 1;
        if (!crafted) {
          for (int k = 0; k < K; ++k) p.zs.push_back(random_symmetric<cdouble>(rng, n));
        } else {
          // outside the open region: every odd slot annihilates e_n; even
          // slots span a prescribed deficient (or full) subspace
          int rank = static_cast<int>(rng.below(n + 1));
          std::vector<CVec> span;
          for (int r = 0; r < rank; ++r) span.push_back(random_vector<cdouble>(rng, n));
          for (int k = 1; k <= K; ++k) {
            if (k % 2 == 1) {
              SymmetricParam<cdouble> z(n);
              for (int i = 0; i + 1 < n; ++i)
                for (int j = i; j + 1 < n; ++j) z.set(i, j, rng.complex_in_disk());
              p.zs.push_back(std::move(z));
            } else {
              SymmetricParam<cdouble> z(n);
              for (const auto& v : span) {
                cdouble coeff = rng.complex_in_disk();
                for (int i = 0; i < n; ++i)
                  for (int j = i; j < n; ++j) z.set(i, j, z(i, j) + coeff * v(i) * v(j));
              }
              p.zs.push_back(std::move(z));
            }
          }
        }
        try {
          classify(p, ctx.tol);  // throws on closed-form/Jacobian disagreement
        } catch (const Error& e) {
          return std::string("disagreement at n=") + std::to_string(n) + " K=" +
                 std::to_string(K) + ": " + e.what();
        }
      }
  return {};
}

// 5. Lifting: the padded section hits every nonzero target and lands in the
//    open submersive region.
inline std::string lifting(Context& ctx) {
  Rng rng(ctx.seed + 5);
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n)
    for (int K = 3; K <= 5; ++K)
      for (int iter = 0; iter < 500; ++iter) {
        TargetVector<cdouble> y{random_vector<cdouble>(rng, n), random_vector<cdouble>(rng, n)};
        if (vec_is_zero(y.stacked(), ctx.tol.zero)) y.a(0) = 1.0;
        auto p = lift(y, K, ctx.tol.zero);
        worst = std::max(worst, max_norm(CVec(phi(p) - y.stacked())));
        auto rep = classify(p, ctx.tol);
        if (!rep.in_wk)
          return "lifted point left the open region at n=" + std::to_string(n) + " K=" +
                 std::to_string(K);
      }
  if (worst > 1e-10) return "worst lift residual " + fmt(worst);
  return {};
}

// 6. Exact fiber preservation: minor fields kill their defining block;
//    lifted fields kill all components of the step map.  Zero polynomials,
//    no tolerance.
inline std::string fiber_preservation(Context& ctx) {
  for (int n = 2; n <= 3; ++n) {
    struct Rep {
      std::vector<std::tuple<int, int, int>> vars;  // (level, i, j)
      int K;
    };
    std::vector<Rep> reps;
    // tuple shapes of the eight types at minimal levels on the actual map
    {
      Rep r;  // diagonal pair shape
      r.vars.push_back({1, 0, 0});
      for (int i = 0; i < n; ++i) r.vars.push_back({2, i, i});
      r.K = 2;
      reps.push_back(r);
    }
    {
      Rep r;  // row shape
      r.vars.push_back({1, 0, 0});
      for (int i = 0; i < n; ++i) r.vars.push_back({2, 1, i});
      r.K = 2;
      reps.push_back(r);
    }
    {
      Rep r;  // single-level shape
      auto pairs = all_pairs(n);
      for (int c = 0; c <= n; ++c) r.vars.push_back({1, pairs[c].first, pairs[c].second});
      r.K = 1;
      reps.push_back(r);
    }
    {
      Rep r;  // bottom-row then diagonal
      r.vars.push_back({1, n - 1, 0});
      for (int i = 0; i < n; ++i) r.vars.push_back({2, i, i});
      r.K = 2;
      reps.push_back(r);
    }
    {
      Rep r;  // level pair with a distant diagonal
      auto pairs = all_pairs(n);
      for (int c = 0; c < n; ++c) r.vars.push_back({1, pairs[c].first, pairs[c].second});
      r.vars.push_back({3, 0, 0});
      r.K = 3;
      reps.push_back(r);
    }
    {
      Rep r;  // partition shape within two adjacent levels
      r.vars.push_back({1, 1, 1});
      for (int i = 0; i < n - 1; ++i) r.vars.push_back({2, 0, i});
      r.vars.push_back({2, 0, 1});
      r.K = 2;
      reps.push_back(r);
    }
    {
      Rep r;  // three-level partition shape
      for (int j = 0; j < n - 1; ++j) r.vars.push_back({1, 0, j});
      r.vars.push_back({2, n - 1, n - 1});
      r.vars.push_back({3, 1, 1});
      r.K = 3;
      reps.push_back(r);
    }
    {
      Rep r;  // last-column then row
      r.vars.push_back({1, 0, n - 1});
      for (int i = 0; i < n; ++i) r.vars.push_back({2, 1, i});
      r.K = 2;
      reps.push_back(r);
    }

    for (const auto& rep : reps) {
      VarPool pool;
      std::vector<std::uint32_t> x;
      std::set<std::uint32_t> seen;
      for (auto [k, i, j] : rep.vars) {
        auto id = pool.z(k, i, j);
        if (!seen.insert(id).second) continue;
        x.push_back(id);
      }
      if (static_cast<int>(x.size()) != n + 1) continue;  // collapsed at this n
      PolyVec block = phi_block(pool, n, rep.K);
      PolyVectorField v = jacobian_minor_field(x, block);
      for (const auto& comp : block)
        if (!v.apply(comp).is_zero()) return "minor field fails on its defining block";
    }

    // lifted fields on all components
    for (int K = 3; K <= (n == 2 ? 5 : 4); ++K) {
      VarPool pool;
      PolyVec full = phi_components(pool, n, K);
      std::vector<std::uint32_t> x;
      x.push_back(pool.z(K - 2, 0, 0));
      for (int i = 0; i < n; ++i) x.push_back(pool.z(K - 1, i, i));
      for (int jstar = 0; jstar < n; ++jstar) {
        PolyVectorField f = lifted_minor_field(pool, n, K, x, jstar);
        for (const auto& comp : full)
          if (!f.apply(comp).is_zero())
            return "lifted minor field fails at n=" + std::to_string(n) + " K=" +
                   std::to_string(K);
      }
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
          for (int jstar = 0; jstar < n; ++jstar) {
            if (i == jstar || j == jstar) continue;
            PolyVectorField g = lifted_coordinate_field(pool, n, K, i, j, jstar);
            for (const auto& comp : full)
              if (!g.apply(comp).is_zero())
                return "coordinate lift fails at n=" + std::to_string(n) + " K=" +
                       std::to_string(K);
          }
    }
    (void)ctx;
  }
  return {};
}

// 7. Completeness criterion: the whole type table is covered, and the
//    quadratic example is flagged with its witness.
inline std::string completeness_criterion(Context& ctx) {
  (void)ctx;
  for (int n = 2; n <= 3; ++n)
    for (int K = 2; K <= 5; ++K) {
      auto report = verify_type_table(n, K);
      if (!report.all_covered()) {
        for (const auto& e : report.entries)
          if (!e.covered) return "table entry failed: " + e.label + " (" + e.failure + ")";
      }
    }
  for (int n = 2; n <= 3; ++n) {
    auto inst = make_incomplete_example(n);
    auto outcome = affine_flow_certificate(inst.x, inst.ambient);
    if (outcome.covered()) return "quadratic example was not flagged";
    auto witness = quadratic_self_witness(inst.x, inst.ambient);
    if (!witness || witness->degree != 2 || witness->variable != inst.x.back())
      return "quadratic witness missing or wrong";
  }
  return {};
}

// 8. Flow invariance of criterion-certified fields with random numeric
//    parameters, plus the flow semigroup law.
inline std::string flow_invariance(Context& ctx) {
  Rng rng(ctx.seed + 8);
  const cdouble grid[8] = {{10, 0}, {-10, 0}, {0, 10},  {0, -10},
                           {6, 6},  {-5, 7},  {7, -5},  {-4, -9}};
  int certified = 0;
  for (int n = 2; n <= 3; ++n)
    for (int K = 2; K <= (n == 2 ? 5 : 4); ++K) {
      VarPool pool;
      PolyVec block = phi_block(pool, n, K);
      auto pairs = all_pairs(n);
      auto subsets = subsets_of_size(static_cast<int>(pairs.size()), n + 1);
      for (size_t s = 0; s < subsets.size(); s += (n == 3 ? 2 : 1)) {
        std::vector<std::uint32_t> x;
        for (int idx : subsets[s]) x.push_back(pool.z(K, pairs[idx].first, pairs[idx].second));
        auto outcome = affine_flow_certificate(x, block);
        if (!outcome.covered()) return "top-level tuple unexpectedly not covered";

        PhiPoint<cdouble> p{n, K, {}};
        for (int k = 0; k < K; ++k) p.zs.push_back(random_symmetric<cdouble>(rng, n));
        std::vector<cdouble> values = coordinate_values(pool, p);
        AffineFlowSystem sys = instantiate_affine(*outcome.certificate, values);
        CVec start(static_cast<int>(x.size()));
        for (size_t r = 0; r < x.size(); ++r) start(static_cast<int>(r)) = values[x[r]];
        CVec reference = phi(p);
        double scale = std::max(1.0, max_norm(reference));
        for (cdouble t : grid) {
          CVec moved_coords = flow(sys, start, t);
          PhiPoint<cdouble> moved = p;
          for (size_t r = 0; r < sys.vars.size(); ++r) {
            auto [k, i, j] = pool.coordinate(sys.vars[r]);
            moved.zs[k - 1].set(i, j, moved_coords(static_cast<int>(r)));
          }
          if (max_norm(CVec(phi(moved) - reference)) > 1e-8 * scale)
            return "flow left the fiber at n=" + std::to_string(n) + " K=" + std::to_string(K);
        }
        // semigroup property
        cdouble ts = 2.0 * rng.complex_in_disk(), tt = 2.0 * rng.complex_in_disk();
        CVec two_step = flow(sys, flow(sys, start, tt), ts);
        CVec one_step = flow(sys, start, ts + tt);
        if (max_norm(CVec(two_step - one_step)) > 1e-9)
          return "flow semigroup violated";
        ++certified;
      }
      // coordinate lifts as translation systems, over every admissible pivot
      for (int jstar = 0; jstar < n; ++jstar)
        for (int i = 0; i < n; ++i)
          for (int j = i; j < n; ++j) {
            if (i == jstar || j == jstar) continue;
            VarPool gp;
            PolyVectorField g = lifted_coordinate_field(gp, n, K, i, j, jstar);
            PhiPoint<cdouble> p{n, K, {}};
            for (int k = 0; k < K; ++k) p.zs.push_back(random_symmetric<cdouble>(rng, n));
            std::vector<cdouble> values = coordinate_values(gp, p);
            AffineFlowSystem sys = field_affine_system(g, values);
            CVec start(static_cast<int>(sys.vars.size()));
            for (size_t r = 0; r < sys.vars.size(); ++r)
              start(static_cast<int>(r)) = values[sys.vars[r]];
            CVec reference = phi(p);
            double scale = std::max(1.0, max_norm(reference));
            for (cdouble t : grid) {
              CVec moved_coords = flow(sys, start, t);
              PhiPoint<cdouble> moved = p;
              for (size_t r = 0; r < sys.vars.size(); ++r) {
                auto [k, i2, j2] = gp.coordinate(sys.vars[r]);
                moved.zs[k - 1].set(i2, j2, moved_coords(static_cast<int>(r)));
              }
              if (max_norm(CVec(phi(moved) - reference)) > 1e-8 * scale)
                return "coordinate-lift flow left the fiber";
            }
            ++certified;
          }
    }
  if (certified < 50)
    return "only " + std::to_string(certified) + " certified fields exercised";
  return {};
}

// 9. Span/domination at generic points using only the listed explicit
//    collections, with the stated nonvanishing hypotheses.
inline std::string span_domination(Context& ctx) {
  Rng rng(ctx.seed + 9);
  for (auto [n, K] : {std::pair{1, 3}, std::pair{2, 2}, std::pair{2, 3}, std::pair{2, 4}}) {
    int done = 0;
    int attempts = 0;
    while (done < 100 && attempts < 5000) {
      ++attempts;
      PhiPoint<cdouble> p{n, K, {}};
      for (int k = 0; k < K; ++k) p.zs.push_back(random_symmetric<cdouble>(rng, n));
      // nonvanishing hypotheses of the spanning lemma
      VarPool pool;
      auto blocks = phi_blocks(pool, n, std::max(K - 1, 2));
      std::vector<cdouble> values = coordinate_values(pool, p);
      auto block_min = [&](int level) {
        double worst = 1e300;
        for (int j = 0; j < n; ++j)
          worst = std::min(worst, std::abs(blocks[level][j].eval_complex(values)));
        return worst;
      };
      bool hypothesis;
      if (K == 2)
        hypothesis = block_min(1) > 1e-2;
      else if (K == 3)
        hypothesis = block_min(1) > 1e-2;  // product of last-column entries nonzero
      else
        hypothesis = block_min(K - 2) > 1e-2 && block_min(K - 3) > 1e-2;
      if (!hypothesis) continue;

      VarPool span_pool;
      auto fields = builtin_collection(span_pool, n, K, p, ctx.tol.zero);
      auto rep = span_report(span_pool, p, fields, ctx.tol);
      if (rep.kernel_dim != K * triangle_size(n) - 2 * n)
        return "kernel dimension off at n=" + std::to_string(n) + " K=" + std::to_string(K);
      if (!rep.dominated)
        return "collection failed to dominate at n=" + std::to_string(n) + " K=" +
               std::to_string(K);
      ++done;
    }
    if (done < 100) return "could not find enough hypothesis-satisfying points";
  }
  return {};
}

// 10. Complementary bases on random symplectic matrices, and the
//     principal-minor consequence for upper factors of every rank.
inline std::string complementary_bases(Context& ctx) {
  Rng rng(ctx.seed + 10);
  for (int iter = 0; iter < 1000; ++iter) {
    int n = 1 + static_cast<int>(rng.below(4));
    CMat m = reconstruct(random_word<cdouble>(rng, n, 1 + static_cast<int>(rng.below(16))));
    try {
      complementary_basis(m, ctx.tol);
    } catch (const Error& e) {
      return std::string("regularity failed: ") + e.what();
    }
  }
  for (int n = 2; n <= 4; ++n)
    for (int k = 0; k <= n; ++k) {
      int done = 0;
      int attempts = 0;
      while (done < 200 && attempts < 2000) {
        ++attempts;
        Mat<cdouble> z = Mat<cdouble>::Zero(n, n);
        for (int r = 0; r < k; ++r) {
          CVec v = random_vector<cdouble>(rng, n);
          z += v * v.transpose();
        }
        if (numeric_rank(CMat(z), ctx.tol.rank) != k) continue;
        auto out = complementary_basis(materialize(Side::Upper,
                                                   SymmetricParam<cdouble>::from_matrix(z)),
                                       ctx.tol);
        if (static_cast<int>(out.b_columns.size()) != k)
          return "pivot count disagrees with the rank";
        if (k > 0) {
          CMat minor(k, k);
          for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b) minor(a, b) = z(out.b_columns[a], out.b_columns[b]);
          double lhs = std::abs(minor.determinant());
          double rhs = std::abs(out.determinant);
          if (std::abs(lhs - rhs) > 1e-8 * std::max(1.0, rhs))
            return "principal minor does not match the assembled determinant";
        }
        ++done;
      }
      if (done < 200) return "could not sample enough fixed-rank parameters";
    }
  return {};
}

// 11. Diagonal closed forms of the new-direction matrices, exactly.
inline std::string u_matrix_forms(Context& ctx) {
  (void)ctx;
  for (auto [n, K] : {std::pair{1, 3}, std::pair{2, 3}, std::pair{2, 5}, std::pair{3, 5}})
    if (!new_direction_matrix_check(n, K))
      return "closed form failed at n=" + std::to_string(n) + " K=" + std::to_string(K);
  return {};
}

}  // namespace acceptance

/// Runs the full acceptance suite, printing one line per criterion.
inline AcceptanceResult run_acceptance(std::uint64_t seed, const Tolerances& tol,
                                       std::ostream& out) {
  acceptance::Context ctx{seed, tol, out};
  AcceptanceResult result;

  struct Item {
    const char* name;
    std::function<std::string(acceptance::Context&)> run;
  };
  std::string bound_detail, roundtrip_detail;
  std::vector<Item> items = {
      {"whitehead identities", acceptance::whitehead_identities},
      {"factorization round-trip",
       [&](acceptance::Context& c) {
         return acceptance::factorization_roundtrip(c, false, roundtrip_detail);
       }},
      {"uniform factor bound",
       [&](acceptance::Context& c) {
         return acceptance::factorization_roundtrip(c, true, bound_detail);
       }},
      {"singularity classification agreement", acceptance::classification_agreement},
      {"lifting", acceptance::lifting},
      {"exact fiber preservation", acceptance::fiber_preservation},
      {"completeness criterion", acceptance::completeness_criterion},
      {"flow invariance", acceptance::flow_invariance},
      {"span and domination", acceptance::span_domination},
      {"complementary bases", acceptance::complementary_bases},
      {"u-matrix closed forms", acceptance::u_matrix_forms},
  };

  for (size_t i = 0; i < items.size(); ++i) {
    auto start = std::chrono::steady_clock::now();
    std::string failure;
    try {
      failure = items[i].run(ctx);
    } catch (const std::exception& e) {
      failure = std::string("exception: ") + e.what();
    }
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string extra;
    if (i == 1 && failure.empty()) extra = " (" + roundtrip_detail + ")";
    if (i == 2 && failure.empty()) extra = " (" + bound_detail + ")";
    char line[512];
    std::snprintf(line, sizeof(line), "%s %2zu %s [%.1fs]%s%s\n",
                  failure.empty() ? "PASS" : "FAIL", i + 1, items[i].name, elapsed,
                  extra.c_str(), failure.empty() ? "" : (" -- " + failure).c_str());
    ctx.out << line;
    ctx.out.flush();
    if (failure.empty())
      ++result.passed;
    else
      ++result.failed;
  }
  return result;
}

}  // namespace sympfactor
