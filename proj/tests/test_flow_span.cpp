#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sympfactor/random.hpp"
#include "sympfactor/span.hpp"
#include "sympfactor/typetable.hpp"

using namespace sympfactor;
using GQ = GaussianRational;

namespace {

PhiPoint<cdouble> random_cd_point(Rng& rng, int n, int K) {
  PhiPoint<cdouble> p{n, K, {}};
  for (int k = 0; k < K; ++k) p.zs.push_back(random_symmetric<cdouble>(rng, n));
  return p;
}

void write_back(const AffineFlowSystem& sys, const VarPool& pool, const CVec& state,
                PhiPoint<cdouble>& p) {
  for (size_t r = 0; r < sys.vars.size(); ++r) {
    auto [k, i, j] = pool.coordinate(sys.vars[r]);
    p.zs[k - 1].set(i, j, state(static_cast<int>(r)));
  }
}

}  // namespace

TEST_CASE("flow: closed-form linear case and pure translations") {
  VarPool pool;
  auto z1 = pool.z(1, 0, 0);
  auto z2 = pool.z(2, 0, 0);
  auto outcome = affine_flow_certificate({z1, z2}, phi_block(pool, 1, 2));
  REQUIRE(outcome.covered());
  std::vector<cdouble> values(pool.size(), 0.0);
  AffineFlowSystem sys = instantiate_affine(*outcome.certificate, values);

  CVec start(2);
  start << cdouble(1), cdouble(1);
  CVec at = flow(sys, start, std::log(2.0));
  CHECK(std::abs(at(0) - cdouble(2.0)) <= 1e-12);
  CHECK(std::abs(at(1) - cdouble(0.5)) <= 1e-12);

  AffineFlowSystem trans;
  trans.vars = {z1, z2};
  trans.matrix = CMat::Zero(2, 2);
  trans.offset = CVec(2);
  trans.offset << cdouble(2, 1), cdouble(-1, 0);
  CVec moved = flow(trans, start, 1.0);
  CHECK(std::abs(moved(0) - (start(0) + trans.offset(0))) <= 1e-14);
  CHECK(std::abs(moved(1) - (start(1) + trans.offset(1))) <= 1e-14);
}

TEST_CASE("flow semigroup property on random affine systems") {
  Rng rng(801);
  for (int iter = 0; iter < 30; ++iter) {
    int m = 2 + static_cast<int>(rng.below(3));
    AffineFlowSystem sys;
    sys.vars.resize(m);
    sys.matrix = CMat(m, m);
    sys.offset = CVec(m);
    for (int i = 0; i < m; ++i) {
      sys.offset(i) = rng.complex_in_disk();
      for (int j = 0; j < m; ++j) sys.matrix(i, j) = 0.6 * rng.complex_in_disk();
    }
    CVec p0(m);
    for (int i = 0; i < m; ++i) p0(i) = rng.complex_in_disk();
    cdouble s = 2.0 * rng.complex_in_disk(), t = 2.0 * rng.complex_in_disk();
    CVec a = flow(sys, flow(sys, p0, t), s);
    CVec b = flow(sys, p0, s + t);
    CHECK(max_norm(CVec(a - b)) <= 1e-9);
  }
}

TEST_CASE("certified top-level fields flow inside the fiber") {
  Rng rng(802);
  int checked = 0;
  for (int n = 2; n <= 3; ++n)
    for (int K = 2; K <= 4; ++K) {
      VarPool pool;
      PolyVec block = phi_block(pool, n, K);
      auto pairs = all_pairs(n);
      // top-level tuples with vanishing second partials: any n+1 coordinate
      // directions at the top level
      for (const auto& subset : subsets_of_size(static_cast<int>(pairs.size()), n + 1)) {
        std::vector<std::uint32_t> x;
        for (int idx : subset) x.push_back(pool.z(K, pairs[idx].first, pairs[idx].second));
        auto outcome = affine_flow_certificate(x, block);
        REQUIRE(outcome.covered());

        auto p = random_cd_point(rng, n, K);
        std::vector<cdouble> values = coordinate_values(pool, p);
        AffineFlowSystem sys = instantiate_affine(*outcome.certificate, values);
        CVec start(static_cast<int>(x.size()));
        for (size_t r = 0; r < x.size(); ++r) start(static_cast<int>(r)) = values[x[r]];

        CVec reference = phi(p);
        for (cdouble t : {cdouble(3, 0), cdouble(0, 5), cdouble(-7, 2), cdouble(2, -9)}) {
          PhiPoint<cdouble> moved = p;
          write_back(sys, pool, flow(sys, start, t), moved);
          CHECK(max_norm(CVec(phi(moved) - reference)) <= 1e-8 * std::max(1.0, max_norm(reference)));
        }
        ++checked;
        if (checked % 3 != 0) break;  // sample a subset per (n,K)
      }
    }
  CHECK(checked >= 6);
}

TEST_CASE("coordinate lifts flow inside the fiber via translation systems") {
  Rng rng(803);
  for (auto [n, K] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 3}}) {
    VarPool pool;
    PolyVectorField g = lifted_coordinate_field(pool, n, K, 1, 1, 0);
    auto p = random_cd_point(rng, n, K);
    std::vector<cdouble> values = coordinate_values(pool, p);
    AffineFlowSystem sys = field_affine_system(g, values);
    CHECK(max_norm(sys.matrix) == 0.0);  // pure translation

    CVec start(static_cast<int>(sys.vars.size()));
    for (size_t r = 0; r < sys.vars.size(); ++r) start(static_cast<int>(r)) = values[sys.vars[r]];
    CVec reference = phi(p);
    for (cdouble t : {cdouble(10, 0), cdouble(0, -10), cdouble(6, 6)}) {
      PhiPoint<cdouble> moved = p;
      write_back(sys, pool, flow(sys, start, t), moved);
      CHECK(max_norm(CVec(phi(moved) - reference)) <= 1e-8 * std::max(1.0, max_norm(reference)));
    }
  }
}

TEST_CASE("span: explicit collections dominate at well-positioned points") {
  Rng rng(804);
  SUBCASE("one variable, three steps, the worked point") {
    VarPool pool;
    PhiPoint<cdouble> p{1, 3, {}};
    SymmetricParam<cdouble> z1(1), z2(1), z3(1);
    z1.set(0, 0, 1.0);
    p.zs = {z1, z2, z3};
    auto fields = builtin_collection(pool, 1, 3, p);
    auto rep = span_report(pool, p, fields);
    CHECK(rep.kernel_dim == 1);
    CHECK(rep.dominated);
    CHECK(rep.worst_tangency <= 1e-9);
  }
  SUBCASE("empty collection dominates only trivial kernels") {
    VarPool pool;
    PhiPoint<cdouble> p{1, 2, {}};
    SymmetricParam<cdouble> z1(1), z2(1);
    z1.set(0, 0, 1.0);
    z2.set(0, 0, 0.5);
    p.zs = {z1, z2};
    auto rep = span_report(pool, p, {});
    CHECK(rep.spanned_dim == 0);
    CHECK(rep.dominated == (rep.kernel_dim == 0));
  }
  SUBCASE("random points for the listed pairs") {
    for (auto [n, K] : {std::pair{1, 3}, std::pair{2, 2}, std::pair{2, 3}, std::pair{2, 4}}) {
      int wins = 0;
      for (int trial = 0; trial < 10; ++trial) {
        auto p = random_cd_point(rng, n, K);
        VarPool pool;
        auto fields = builtin_collection(pool, n, K, p);
        auto rep = span_report(pool, p, fields);
        CHECK(rep.kernel_dim == K * triangle_size(n) - 2 * n);
        CHECK(rep.worst_tangency <= 1e-8);
        if (rep.dominated) ++wins;
      }
      CHECK(wins == 10);
    }
  }
  SUBCASE("singular points are rejected") {
    VarPool pool;
    PhiPoint<cdouble> p = PhiPoint<cdouble>::zero(1, 2);
    CHECK_THROWS_AS(span_report(pool, p, {}), SingularPointError);
  }
}

TEST_CASE("new-direction matrix closed forms hold exactly") {
  CHECK(new_direction_matrix_check(1, 3));
  CHECK(new_direction_matrix_check(2, 3));
  CHECK(new_direction_matrix_check(2, 4));
  CHECK(new_direction_matrix_check(2, 5));
}

TEST_CASE("complementary bases") {
  Rng rng(805);
  SUBCASE("zero upper-right block: the left block alone must be regular") {
    CMat m = CMat::Identity(6, 6);
    auto out = complementary_basis(m);
    CHECK(out.b_columns.empty());
    CHECK(out.a_columns.size() == 3);
    CHECK(std::abs(out.determinant - cdouble(1.0)) <= 1e-12);
  }
  SUBCASE("principal minors of upper factors") {
    for (int n = 2; n <= 4; ++n)
      for (int k = 0; k <= n; ++k)
        for (int trial = 0; trial < 20; ++trial) {
          // random symmetric of rank k as a sum of k rank-one squares
          Mat<cdouble> z = Mat<cdouble>::Zero(n, n);
          for (int r = 0; r < k; ++r) {
            CVec v = random_vector<cdouble>(rng, n);
            z += v * v.transpose();
          }
          auto zs = SymmetricParam<cdouble>::from_matrix(z);
          CMat m = materialize(Side::Upper, zs);
          if (numeric_rank(CMat(z), 1e-12) != k) continue;
          auto out = complementary_basis(m);
          CHECK(static_cast<int>(out.b_columns.size()) == k);
          // the complementary principal minor of Z is regular and matches
          if (k > 0) {
            CMat minor(k, k);
            for (int a = 0; a < k; ++a)
              for (int b = 0; b < k; ++b)
                minor(a, b) = z(out.b_columns[a], out.b_columns[b]);
            CHECK(std::abs(std::abs(minor.determinant()) - std::abs(out.determinant)) <=
                  1e-8 * std::max(1.0, std::abs(out.determinant)));
          }
        }
  }
  SUBCASE("random symplectic words always assemble a regular matrix") {
    for (int trial = 0; trial < 60; ++trial) {
      int n = 1 + static_cast<int>(rng.below(4));
      CMat m = reconstruct(random_word<cdouble>(rng, n, 1 + static_cast<int>(rng.below(12))));
      CHECK_NOTHROW(complementary_basis(m));
    }
  }
}
