#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sympfactor/random.hpp"
#include "sympfactor/symmetric.hpp"

using namespace sympfactor;
using GQ = GaussianRational;

TEST_CASE("packed index bijection round-trips in canonical order") {
  for (int n = 1; n <= 6; ++n) {
    PackedIndex idx(n);
    CHECK(idx.size() == n * (n + 1) / 2);
    int expect = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        CHECK(idx.index(i, j) == expect);
        CHECK(idx.index(j, i) == expect);  // symmetric lookup
        auto [pi, pj] = idx.pair(expect);
        CHECK(pi == i);
        CHECK(pj == j);
        ++expect;
      }
  }
  CHECK_THROWS_AS(PackedIndex(3).pair(6), IndexError);
}

TEST_CASE("pack follows canonical order") {
  // n=1: identity case
  Mat<GQ> z1(1, 1);
  z1(0, 0) = GQ(3);
  CHECK(pack(SymmetricParam<GQ>::from_matrix(z1))(0) == GQ(3));

  // n=2: [[1,2],[2,5]] packs to (1,2,5)
  Mat<GQ> z2(2, 2);
  z2 << GQ(1), GQ(2), GQ(2), GQ(5);
  Vec<GQ> p = pack(SymmetricParam<GQ>::from_matrix(z2));
  CHECK(p(0) == GQ(1));
  CHECK(p(1) == GQ(2));
  CHECK(p(2) == GQ(5));

  // zero case
  CHECK(pack(SymmetricParam<GQ>(2)) == Vec<GQ>::Zero(3));

  // round-trip and linearity
  Rng rng(201);
  for (int n = 1; n <= 4; ++n)
    for (int iter = 0; iter < 20; ++iter) {
      auto a = random_symmetric<GQ>(rng, n);
      auto b = random_symmetric<GQ>(rng, n);
      CHECK(unpack<GQ>(n, pack(a)) == a);
      CHECK(Vec<GQ>(pack(a + b)) == Vec<GQ>(pack(a) + pack(b)));
    }
}

TEST_CASE("basis matrices: single 1 on the diagonal, paired 1s off it") {
  auto e11 = elementary_symmetric<GQ>(0, 0, 2);
  CHECK(e11(0, 0) == GQ(1));
  CHECK(e11(1, 1) == GQ(0));
  CHECK(e11(0, 1) == GQ(0));

  auto e12 = elementary_symmetric<GQ>(0, 1, 2);
  CHECK(e12(0, 1) == GQ(1));
  CHECK(e12(1, 0) == GQ(1));
  CHECK(e12(0, 0) == GQ(0));

  auto e22 = elementary_symmetric<GQ>(1, 1, 2);
  CHECK(e22(1, 1) == GQ(1));

  CHECK_THROWS_AS((elementary_symmetric<GQ>(1, 0, 2)), IndexError);
  CHECK_THROWS_AS((elementary_symmetric<GQ>(0, 2, 2)), IndexError);
}

TEST_CASE("action matrix columns and the commuting identity") {
  // n=1, v=(5) -> [5]
  Vec<GQ> v1(1);
  v1 << GQ(5);
  CHECK(action_matrix(v1)(0, 0) == GQ(5));

  // n=2, v=(0,1): columns for (1,1),(1,2),(2,2) are (0,0),(1,0),(0,1)
  Vec<GQ> v2(2);
  v2 << GQ(0), GQ(1);
  Mat<GQ> f = action_matrix(v2);
  CHECK(f(0, 0) == GQ(0));
  CHECK(f(1, 0) == GQ(0));
  CHECK(f(0, 1) == GQ(1));
  CHECK(f(1, 1) == GQ(0));
  CHECK(f(0, 2) == GQ(0));
  CHECK(f(1, 2) == GQ(1));

  // v = 0 -> zero matrix
  CHECK(mat_is_zero(Mat<GQ>(action_matrix(Vec<GQ>(Vec<GQ>::Zero(3)))), 0.0));

  // F(v) * pack(Z) == Z * v, exact, for random rational data
  Rng rng(202);
  for (int n = 1; n <= 4; ++n)
    for (int iter = 0; iter < 30; ++iter) {
      auto z = random_symmetric<GQ>(rng, n);
      auto v = random_vector<GQ>(rng, n);
      Vec<GQ> lhs = action_matrix(v) * pack(z);
      Vec<GQ> rhs = z.matrix() * v;
      CHECK(lhs == rhs);
    }
}

TEST_CASE("action matrix has full rank exactly when v != 0") {
  Rng rng(203);
  for (int n = 1; n <= 4; ++n)
    for (int iter = 0; iter < 20; ++iter) {
      Vec<cdouble> v = random_nonzero_vector<cdouble>(rng, n);
      CMat f = action_matrix<cdouble>(v);
      Eigen::JacobiSVD<CMat> svd(f);
      CHECK(svd.singularValues()(n - 1) > 1e-8);
    }
}

TEST_CASE("symmetric solve: examples and residual property") {
  // n=1: a=2, v=6 -> Z=[3]
  Vec<GQ> a1(1), v1(1);
  a1 << GQ(2);
  v1 << GQ(6);
  CHECK(solve_symmetric(a1, v1)(0, 0) == GQ(3));

  // n=2, a=e_2, v=(1,0): verify by residual
  Vec<GQ> a2(2), v2(2);
  a2 << GQ(0), GQ(1);
  v2 << GQ(1), GQ(0);
  auto z2 = solve_symmetric(a2, v2);
  CHECK(Vec<GQ>(z2.matrix() * a2) == v2);

  // n=2, complex isotropic a=(1,i): a^T a = 0 but elimination succeeds
  Vec<GQ> a3(2), v3(2);
  a3 << GQ(1), GQ::i();
  v3 << GQ(1), GQ(1);
  auto z3 = solve_symmetric(a3, v3);
  CHECK(Vec<GQ>(z3.matrix() * a3) == v3);

  // zero vector rejected
  CHECK_THROWS_AS(solve_symmetric(Vec<GQ>(Vec<GQ>::Zero(2)), v2), ZeroVectorError);

  // exact right-inverse property at random rational data
  Rng rng(204);
  for (int n = 1; n <= 4; ++n)
    for (int iter = 0; iter < 30; ++iter) {
      Vec<GQ> a(n), v(n);
      for (int i = 0; i < n; ++i) {
        a(i) = rng.gaussian_rational();
        v(i) = rng.gaussian_rational();
      }
      bool zero = true;
      for (int i = 0; i < n; ++i) zero = zero && a(i).is_zero();
      if (zero) a(0) = GQ(1);
      auto z = solve_symmetric(a, v);
      CHECK(Vec<GQ>(z.matrix() * a) == v);
    }

  // float flavor: residual within tolerance
  for (int n = 1; n <= 5; ++n)
    for (int iter = 0; iter < 30; ++iter) {
      Vec<cdouble> a = random_nonzero_vector<cdouble>(rng, n);
      Vec<cdouble> v = random_vector<cdouble>(rng, n);
      auto z = solve_symmetric<cdouble>(a, v);
      CHECK(max_norm(CVec(z.matrix() * a - v)) <= 1e-10);
    }
}

TEST_CASE("symmetry is enforced at construction") {
  Mat<GQ> bad(2, 2);
  bad << GQ(1), GQ(2), GQ(3), GQ(4);
  CHECK_THROWS_AS(SymmetricParam<GQ>::from_matrix(bad), DomainError);
}
