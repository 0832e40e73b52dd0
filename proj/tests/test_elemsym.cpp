#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sympfactor/elementary.hpp"
#include "sympfactor/random.hpp"

using namespace sympfactor;
using GQ = GaussianRational;

namespace {

Mat<GQ> gq_identity(int d) { return Mat<GQ>::Identity(d, d); }

}  // namespace

TEST_CASE("materialize block form and determinant-1 structure") {
  SymmetricParam<GQ> z(1);
  z.set(0, 0, GQ(7));
  Mat<GQ> up = materialize(Side::Upper, z);
  CHECK(up(0, 0) == GQ(1));
  CHECK(up(0, 1) == GQ(7));
  CHECK(up(1, 0) == GQ(0));
  CHECK(up(1, 1) == GQ(1));

  Mat<GQ> lo = materialize(Side::Lower, z);
  CHECK(lo(1, 0) == GQ(7));
  CHECK(lo(0, 1) == GQ(0));

  // n=2 upper with the off-diagonal basis matrix: paired 1 entries
  auto e12 = elementary_symmetric<GQ>(0, 1, 2);
  Mat<GQ> m = materialize(Side::Upper, e12);
  CHECK(m(0, 3) == GQ(1));
  CHECK(m(1, 2) == GQ(1));
  CHECK(m(0, 2) == GQ(0));
  CHECK(m(1, 3) == GQ(0));
}

TEST_CASE("factor inverse is the sign-flipped factor, exactly") {
  Rng rng(301);
  for (int n = 1; n <= 4; ++n)
    for (int iter = 0; iter < 20; ++iter) {
      ElementaryFactor<GQ> f{rng.below(2) ? Side::Upper : Side::Lower,
                             random_symmetric<GQ>(rng, n)};
      Mat<GQ> prod = materialize(f) * materialize(f.inverse());
      CHECK(prod == gq_identity(2 * n));
    }
}

TEST_CASE("reconstruct: worked 2x2 example") {
  FactorWord<GQ> w;
  w.n = 1;
  SymmetricParam<GQ> one(1);
  one.set(0, 0, GQ(1));
  w.push(Side::Upper, one);
  w.push(Side::Lower, one);
  w.push(Side::Upper, one);
  Mat<GQ> m = reconstruct(w);
  CHECK(m(0, 0) == GQ(2));
  CHECK(m(0, 1) == GQ(3));
  CHECK(m(1, 0) == GQ(1));
  CHECK(m(1, 1) == GQ(2));

  FactorWord<GQ> empty;
  empty.n = 2;
  CHECK(reconstruct(empty) == gq_identity(4));
}

TEST_CASE("compact merges, cancels, and preserves the product exactly") {
  Rng rng(302);
  SUBCASE("adjacent same-side factors merge additively") {
    FactorWord<GQ> w;
    w.n = 2;
    auto a = random_symmetric<GQ>(rng, 2);
    auto b = random_symmetric<GQ>(rng, 2);
    w.push(Side::Upper, a);
    w.push(Side::Upper, b);
    auto c = compact(w);
    REQUIRE(c.size() == 1);
    CHECK(c.factors[0].Z == a + b);
  }
  SUBCASE("exact cancellation yields the empty word") {
    FactorWord<GQ> w;
    w.n = 2;
    auto a = random_symmetric<GQ>(rng, 2);
    w.push(Side::Upper, a);
    w.push(Side::Upper, -a);
    CHECK(compact(w).size() == 0);
  }
  SUBCASE("no adjacent pair: unchanged") {
    FactorWord<GQ> w;
    w.n = 1;
    SymmetricParam<GQ> s(1);
    s.set(0, 0, GQ(2));
    w.push(Side::Upper, s);
    w.push(Side::Lower, s);
    w.push(Side::Upper, s);
    CHECK(compact(w).size() == 3);
  }
  SUBCASE("product invariant under compaction, random words") {
    for (int iter = 0; iter < 40; ++iter) {
      int n = 1 + static_cast<int>(rng.below(3));
      FactorWord<GQ> w;
      w.n = n;
      int len = static_cast<int>(rng.below(8));
      for (int i = 0; i < len; ++i) {
        Side s = rng.below(2) ? Side::Upper : Side::Lower;
        // bias toward zero parameters to exercise drops
        auto z = rng.below(3) == 0 ? SymmetricParam<GQ>(n) : random_symmetric<GQ>(rng, n);
        w.push(s, z);
      }
      auto c = compact(w);
      CHECK(reconstruct(c) == reconstruct(w));
      for (int i = 0; i + 1 < c.size(); ++i)
        CHECK(c.factors[i].side != c.factors[i + 1].side);
    }
  }
}

TEST_CASE("diagonal-type generators: closed form and inverse pairs") {
  // n=1: K(2) = diag(2, 1/2)
  Mat<GQ> k = k_generator(0, 0, GQ(2), 1);
  CHECK(k(0, 0) == GQ(2));
  CHECK(k(1, 1) == GQ(Rational(BigInt(1), BigInt(2))));

  // n=2, off-diagonal: A = [[1,a],[0,1]], D = [[1,0],[-a,1]]
  GQ a = GQ(Rational(3), Rational(2));
  Mat<GQ> k12 = k_generator(0, 1, a, 2);
  CHECK(k12(0, 1) == a);
  CHECK(k12(3, 2) == -a);
  CHECK(k12(0, 2) == GQ(0));

  Mat<GQ> inv = k_generator(0, 1, -a, 2);
  CHECK(Mat<GQ>(k12 * inv) == gq_identity(4));

  CHECK_THROWS_AS(k_generator(1, 1, GQ(0), 2), NonUnitError);

  Rng rng(303);
  for (int iter = 0; iter < 30; ++iter) {
    int n = 1 + static_cast<int>(rng.below(3));
    int i = static_cast<int>(rng.below(n)), j = static_cast<int>(rng.below(n));
    GQ p = rng.nonzero_gaussian_rational();
    Mat<GQ> kk = k_generator(i, j, p, n);
    validate_symplectic(kk);
    GQ pinv = (i == j) ? GQ(1) / p : -p;
    CHECK(Mat<GQ>(kk * k_generator(i, j, pinv, n)) == gq_identity(2 * n));
  }
}

TEST_CASE("whitehead expansion of diagonal generators: exact oracle") {
  // direct product oracle, worked case: n=1, a=2 -> diag(2, 1/2)
  auto w = whitehead_diagonal(0, GQ(2), 1);
  REQUIRE(w.size() == 4);
  Mat<GQ> m = reconstruct(w);
  CHECK(m == k_generator(0, 0, GQ(2), 1));

  // a=1 gives the identity
  CHECK(reconstruct(whitehead_diagonal(0, GQ(1), 2)) == gq_identity(4));

  // imaginary-unit parameter
  CHECK(reconstruct(whitehead_diagonal(1, GQ::i(), 2)) == k_generator(1, 1, GQ::i(), 2));

  CHECK_THROWS_AS(whitehead_diagonal(0, GQ(0), 1), NonUnitError);

  Rng rng(304);
  for (int iter = 0; iter < 60; ++iter) {
    int n = 1 + static_cast<int>(rng.below(3));
    int i = static_cast<int>(rng.below(n));
    GQ a = rng.nonzero_gaussian_rational();
    CHECK(reconstruct(whitehead_diagonal(i, a, n)) == k_generator(i, i, a, n));
  }
}

TEST_CASE("whitehead expansion of off-diagonal generators: exact oracle") {
  // a=0 gives the identity
  CHECK(reconstruct(whitehead_offdiag(1, 0, GQ(0), 2)) == gq_identity(4));
  // worked cases from the oracle
  CHECK(reconstruct(whitehead_offdiag(1, 0, GQ(1), 2)) == k_generator(1, 0, GQ(1), 2));
  CHECK(reconstruct(whitehead_offdiag(2, 1, GQ(-2), 3)) == k_generator(2, 1, GQ(-2), 3));
  CHECK_THROWS_AS(whitehead_offdiag(1, 1, GQ(1), 2), IndexError);

  Rng rng(305);
  for (int iter = 0; iter < 60; ++iter) {
    int n = 2 + static_cast<int>(rng.below(2));
    int i = static_cast<int>(rng.below(n));
    int j = static_cast<int>(rng.below(n));
    if (i == j) j = (j + 1) % n;
    GQ a = rng.gaussian_rational();
    auto w = whitehead_offdiag(i, j, a, n);
    REQUIRE(w.size() == 5);
    CHECK(reconstruct(w) == k_generator(i, j, a, n));
  }
}

TEST_CASE("validate: accepts symplectic matrices, rejects the rest") {
  CHECK_NOTHROW(validate_symplectic(CMat(CMat::Identity(4, 4))));

  CMat k11 = CMat::Identity(4, 4);
  k11(0, 0) = 2.0;
  k11(2, 2) = 0.5;
  CHECK_NOTHROW(validate_symplectic(k11));

  CMat bad = CMat::Identity(4, 4);
  bad(0, 0) = 2.0;  // diag(2,1,1,1) violates the block conditions
  CHECK_THROWS_AS(validate_symplectic(bad), NotSymplecticError);

  CHECK_THROWS_AS(validate_symplectic(CMat(CMat::Identity(3, 3))), NotSymplecticError);

  // every reconstructed random word validates at scaled tolerance, with
  // parameter entries up to magnitude 10
  Rng rng(306);
  for (int iter = 0; iter < 50; ++iter) {
    int n = 1 + static_cast<int>(rng.below(4));
    int len = 1 + static_cast<int>(rng.below(50));
    auto w = random_word<cdouble>(rng, n, len);
    double boost = 1.0 + 9.0 * (static_cast<double>(rng.below(1000)) / 1000.0);
    for (auto& f : w.factors)
      f.Z = SymmetricParam<cdouble>::from_matrix(Mat<cdouble>(boost * f.Z.matrix()));
    CMat m = reconstruct(w);
    CHECK_NOTHROW(validate_symplectic(m, 1e-10));
  }
}

TEST_CASE("symplectic inverse closed form") {
  Rng rng(307);
  for (int iter = 0; iter < 30; ++iter) {
    int n = 1 + static_cast<int>(rng.below(3));
    auto w = random_word<GQ>(rng, n, 6);
    Mat<GQ> m = reconstruct(w);
    CHECK(Mat<GQ>(m * symplectic_inverse(m)) == gq_identity(2 * n));
  }
}
