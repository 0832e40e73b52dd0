#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sympfactor/factorize.hpp"
#include "sympfactor/random.hpp"

using namespace sympfactor;
using GQ = GaussianRational;

TEST_CASE("factor bound recurrence") {
  CHECK(factor_bound(1) == 4);
  CHECK(factor_bound(2) == 13);
  CHECK(factor_bound(3) == 27);
  CHECK(factor_bound(4) == 46);
  CHECK_THROWS_AS(factor_bound(0), IndexError);
}

TEST_CASE("2x2 base case") {
  SUBCASE("pivot branch, worked example") {
    Mat<GQ> m(2, 2);
    m << GQ(2), GQ(3), GQ(1), GQ(2);
    auto w = factor_2x2(m);
    REQUIRE(w.size() == 3);
    CHECK(w.factors[0].side == Side::Upper);
    CHECK(w.factors[0].Z(0, 0) == GQ(1));
    CHECK(w.factors[1].side == Side::Lower);
    CHECK(w.factors[1].Z(0, 0) == GQ(1));
    CHECK(w.factors[2].Z(0, 0) == GQ(1));
    CHECK(reconstruct(w) == m);
  }
  SUBCASE("identity gives the empty word") {
    CHECK(factor_2x2(Mat<GQ>(Mat<GQ>::Identity(2, 2))).size() == 0);
  }
  SUBCASE("zero pivot branch: diag(2, 1/2)") {
    Mat<GQ> m = Mat<GQ>::Zero(2, 2);
    m(0, 0) = GQ(2);
    m(1, 1) = GQ(Rational(BigInt(1), BigInt(2)));
    auto w = factor_2x2(m);
    REQUIRE(w.size() == 4);
    CHECK(reconstruct(w) == m);

    CMat mf = CMat::Zero(2, 2);
    mf(0, 0) = 2.0;
    mf(1, 1) = 0.5;
    auto wf = factor_2x2(mf);
    CHECK(max_norm(CMat(reconstruct(wf) - mf)) <= 1e-12);
  }
  SUBCASE("non-unimodular input rejected") {
    Mat<GQ> m = Mat<GQ>::Identity(2, 2);
    m(0, 0) = GQ(2);
    CHECK_THROWS_AS(factor_2x2(m), NotUnimodularError);
  }
}

TEST_CASE("word embedding commutes with reconstruction, exactly") {
  Rng rng(501);
  FactorWord<GQ> empty;
  empty.n = 1;
  CHECK(embed(empty).size() == 0);

  // single upper factor gains a zero row and column
  FactorWord<GQ> w;
  w.n = 1;
  SymmetricParam<GQ> z(1);
  z.set(0, 0, rng.gaussian_rational());
  w.push(Side::Upper, z);
  auto e = embed(w);
  CHECK(e.n == 2);
  CHECK(e.factors[0].Z(0, 0) == z(0, 0));
  CHECK(e.factors[0].Z(0, 1) == GQ(0));
  CHECK(e.factors[0].Z(1, 1) == GQ(0));

  for (int iter = 0; iter < 30; ++iter) {
    int n = 1 + static_cast<int>(rng.below(3));
    auto wr = random_word<GQ>(rng, n, 1 + static_cast<int>(rng.below(8)));
    CHECK(reconstruct(embed(wr)) == embed_matrix(reconstruct(wr)));
  }
}

TEST_CASE("peel: residual matrix structure on worked and random inputs") {
  Rng rng(502);
  SUBCASE("identity input") {
    Mat<GQ> m = Mat<GQ>::Identity(8, 8);
    auto rep = peel(m);
    CHECK(rep.last_row_residual == 0.0);
    CHECK(rep.forced_entry_residual == 0.0);
    validate_symplectic(rep.f_tilde);
  }
  SUBCASE("single upper factor, n=2") {
    auto e11 = elementary_symmetric<cdouble>(0, 0, 2);
    CMat m = materialize(Side::Upper, e11);
    auto rep = peel(m, Tolerances{});
    CHECK(rep.forced_entry_residual <= 1e-10);
    CHECK_NOTHROW(validate_symplectic(rep.f_tilde, 1e-10));
    // reassembly: residual * psi(f_tilde^{-1}) * U(correction) equals the
    // commuting diagonal-generator product
    CMat lhs = rep.residual_matrix *
               embed_matrix(symplectic_inverse(rep.f_tilde)) *
               materialize(Side::Upper, rep.correction);
    CMat rhs = CMat::Identity(4, 4);
    for (int j = 0; j < 1; ++j) rhs = rhs * k_generator(1, j, -rep.d2(j), 2);
    CHECK(max_norm(CMat(lhs - rhs)) <= 1e-10);
  }
  SUBCASE("random word products satisfy all peel invariants") {
    for (int iter = 0; iter < 40; ++iter) {
      int n = 2 + static_cast<int>(rng.below(3));
      auto w = random_word<cdouble>(rng, n, 10);
      CMat m = reconstruct(w);
      auto rep = peel(m, Tolerances{});
      double scale = std::max(1.0, max_norm(m));
      CHECK(rep.last_row_residual <= 1e-9 * scale);
      CHECK(rep.forced_entry_residual <= 1e-9 * scale * scale);
      CHECK_NOTHROW(validate_symplectic(rep.f_tilde, 1e-8));
      CMat lhs = rep.residual_matrix *
                 embed_matrix(symplectic_inverse(rep.f_tilde)) *
                 materialize(Side::Upper, rep.correction);
      CMat rhs = CMat::Identity(2 * n, 2 * n);
      for (int j = 0; j < n - 1; ++j) rhs = rhs * k_generator(n - 1, j, -rep.d2(j), n);
      CHECK(max_norm(CMat(lhs - rhs)) <= 1e-8 * scale * scale);
    }
  }
}

TEST_CASE("factorize: identity, base case, and round-trips") {
  SUBCASE("identity in every dimension") {
    for (int n = 1; n <= 4; ++n) {
      auto res = factorize(CMat(CMat::Identity(2 * n, 2 * n)));
      CHECK(compact(res.word).size() == 0);
      CHECK(res.residual == 0.0);
    }
  }
  SUBCASE("exact rational round-trip has residual exactly zero") {
    Rng rng(503);
    for (int iter = 0; iter < 10; ++iter) {
      int n = 1 + static_cast<int>(rng.below(2));
      auto w = random_word<GQ>(rng, n, 6);
      Mat<GQ> m = reconstruct(w);
      auto res = factorize(m);
      CHECK(res.residual == 0.0);
      CHECK(res.factor_count <= res.bound);
    }
  }
  SUBCASE("float round-trip across dimensions") {
    Rng rng(504);
    for (int n = 1; n <= 4; ++n)
      for (int iter = 0; iter < 25; ++iter) {
        auto w = random_word<cdouble>(rng, n, 1 + static_cast<int>(rng.below(20)));
        CMat m = reconstruct(w);
        auto res = factorize(m);
        CHECK(res.relative_residual <= 1e-8);
        CHECK(res.factor_count <= factor_bound(n));
        // compacted words reconstruct equally well
        auto res2 = factorize(m, Tolerances{}, true);
        CHECK(res2.relative_residual <= 1e-8);
        CHECK(res2.factor_count <= res.bound);
      }
  }
  SUBCASE("group closure at desk scale: products and inverses") {
    Rng rng(505);
    for (int iter = 0; iter < 10; ++iter) {
      int n = 2 + static_cast<int>(rng.below(2));
      CMat a = reconstruct(random_word<cdouble>(rng, n, 8));
      CMat b = reconstruct(random_word<cdouble>(rng, n, 8));
      CHECK(factorize(CMat(a * b)).relative_residual <= 1e-8);
      CHECK(factorize(symplectic_inverse(a)).relative_residual <= 1e-8);
    }
  }
  SUBCASE("non-symplectic input rejected") {
    CMat bad = CMat::Identity(4, 4);
    bad(0, 0) = 2.0;
    CHECK_THROWS_AS(factorize(bad), NotSymplecticError);
  }
}
