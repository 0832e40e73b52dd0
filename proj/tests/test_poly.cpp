#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sympfactor/poly.hpp"
#include "sympfactor/random.hpp"
#include "sympfactor/vector_field.hpp"

using namespace sympfactor;
using GQ = GaussianRational;

namespace {

Polynomial random_poly(Rng& rng, const std::vector<std::uint32_t>& vars, int max_terms = 6,
                       int max_deg = 3) {
  Polynomial p;
  int terms = 1 + static_cast<int>(rng.below(max_terms));
  for (int t = 0; t < terms; ++t) {
    Monomial m;
    for (auto v : vars)
      if (rng.below(2)) {
        int e = 1 + static_cast<int>(rng.below(max_deg));
        m = m.times(Monomial::var(v, e));
      }
    p.add_term(m, rng.gaussian_rational(5, 3));
  }
  return p;
}

}  // namespace

TEST_CASE("ring axioms hold exactly on random polynomials") {
  Rng rng(601);
  VarPool pool;
  std::vector<std::uint32_t> vars = {pool.param("x"), pool.param("y"), pool.param("z")};
  for (int iter = 0; iter < 60; ++iter) {
    Polynomial a = random_poly(rng, vars), b = random_poly(rng, vars),
               c = random_poly(rng, vars);
    CHECK((a + b) * c == a * c + b * c);
    CHECK(a * b == b * a);
    CHECK((a * b) * c == a * (b * c));
    CHECK((a + b) + c == a + (b + c));
    CHECK((a - a).is_zero());
  }
}

TEST_CASE("derivative satisfies the product rule") {
  Rng rng(602);
  VarPool pool;
  std::vector<std::uint32_t> vars = {pool.param("x"), pool.param("y")};
  for (int iter = 0; iter < 40; ++iter) {
    Polynomial f = random_poly(rng, vars), g = random_poly(rng, vars);
    for (auto v : vars)
      CHECK((f * g).derivative(v) == f.derivative(v) * g + f * g.derivative(v));
  }
}

TEST_CASE("exact division recovers factors and rejects non-divisors") {
  Rng rng(603);
  VarPool pool;
  std::vector<std::uint32_t> vars = {pool.param("x"), pool.param("y")};
  for (int iter = 0; iter < 40; ++iter) {
    Polynomial f = random_poly(rng, vars), g = random_poly(rng, vars);
    if (g.is_zero()) continue;
    auto q = Polynomial::divide_exact(f * g, g);
    REQUIRE(q.has_value());
    CHECK(*q == f);
  }
  // x*y + 1 is not divisible by x
  Polynomial x = Polynomial::variable(vars[0]);
  Polynomial y = Polynomial::variable(vars[1]);
  CHECK(!Polynomial::divide_exact(x * y + Polynomial::constant(GQ(1)), x).has_value());
}

TEST_CASE("evaluation is a ring homomorphism") {
  Rng rng(604);
  VarPool pool;
  std::vector<std::uint32_t> vars = {pool.param("x"), pool.param("y"), pool.param("z")};
  for (int iter = 0; iter < 30; ++iter) {
    Polynomial f = random_poly(rng, vars), g = random_poly(rng, vars);
    std::vector<GQ> at(pool.size());
    for (auto v : vars) at[v] = rng.gaussian_rational(4, 3);
    CHECK(f.eval_exact(at) * g.eval_exact(at) == (f * g).eval_exact(at));
    CHECK(f.eval_exact(at) + g.eval_exact(at) == (f + g).eval_exact(at));
  }
}

TEST_CASE("degrees and substitution behave") {
  VarPool pool;
  auto x = pool.param("x");
  auto y = pool.param("y");
  Polynomial p = Polynomial::variable(x) * Polynomial::variable(x) * Polynomial::variable(y) +
                 Polynomial::variable(y);
  CHECK(p.degree_in(x) == 2);
  CHECK(p.degree_in(y) == 1);
  CHECK(p.total_degree() == 3);
  CHECK(p.degree_in_set({x, y}) == 3);
  Polynomial sub = p.substitute({{x, GQ(2)}});
  // 4y + y = 5y
  CHECK(sub == GQ(5) * Polynomial::variable(y));
}

TEST_CASE("active block polynomials: base cases") {
  VarPool pool;
  // one variable: step 1 block is the single coordinate
  PolyVec p1 = phi_block(pool, 1, 1);
  CHECK(p1[0] == Polynomial::variable(pool.z(1, 0, 0)));
  // step 2 block is 1 + z2*z1
  PolyVec p2 = phi_block(pool, 1, 2);
  Polynomial expect = Polynomial::constant(GQ(1)) +
                      Polynomial::variable(pool.z(2, 0, 0)) *
                          Polynomial::variable(pool.z(1, 0, 0));
  CHECK(p2[0] == expect);
}

TEST_CASE("symbolic and numeric step maps agree at random rational points") {
  Rng rng(605);
  for (int n = 1; n <= 3; ++n)
    for (int K = 1; K <= 5; ++K) {
      VarPool pool;
      PolyVec full = phi_components(pool, n, K);
      for (int trial = 0; trial < 5; ++trial) {
        auto p = random_phi_point<GQ>(rng, n, K);
        std::vector<GQ> values(pool.size());
        for (int id = 0; id < pool.size(); ++id) {
          if (!pool.is_coordinate(id)) continue;
          auto [k, i, j] = pool.coordinate(id);
          values[id] = p.zs[k - 1](i, j);
        }
        Vec<GQ> direct = phi(p);
        for (int c = 0; c < 2 * n; ++c) CHECK(full[c].eval_exact(values) == direct(c));
      }
    }
}

TEST_CASE("polynomial determinant matches scalar determinant under evaluation") {
  Rng rng(606);
  VarPool pool;
  std::vector<std::uint32_t> vars;
  for (int i = 0; i < 9; ++i) vars.push_back(pool.param("p" + std::to_string(i)));
  for (int iter = 0; iter < 10; ++iter) {
    std::vector<PolyVec> rows(3, PolyVec(3));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) rows[i][j] = random_poly(rng, {vars[3 * i + j]}, 2, 2);
    Polynomial det = poly_det(rows);
    std::vector<GQ> at(pool.size());
    for (auto v : vars) at[v] = rng.gaussian_rational(3, 2);
    Mat<GQ> m(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = rows[i][j].eval_exact(at);
    GQ direct = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    CHECK(det.eval_exact(at) == direct);
  }
}
