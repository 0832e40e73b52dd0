#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sympfactor/bigint.hpp"
#include "sympfactor/random.hpp"
#include "sympfactor/rational.hpp"

using namespace sympfactor;

TEST_CASE("BigInt agrees with built-in integers on small values") {
  Rng rng(101);
  for (int iter = 0; iter < 5000; ++iter) {
    long long a = rng.range(-1000000, 1000000);
    long long b = rng.range(-1000000, 1000000);
    CHECK((BigInt(a) + BigInt(b)).to_int64() == a + b);
    CHECK((BigInt(a) - BigInt(b)).to_int64() == a - b);
    CHECK((BigInt(a) * BigInt(b)).to_int64() == a * b);
    if (b != 0) {
      CHECK((BigInt(a) / BigInt(b)).to_int64() == a / b);
      CHECK((BigInt(a) % BigInt(b)).to_int64() == a % b);
    }
    CHECK((BigInt(a) < BigInt(b)) == (a < b));
    CHECK((BigInt(a) == BigInt(b)) == (a == b));
  }
}

TEST_CASE("BigInt multi-limb multiplication and division round-trip") {
  Rng rng(102);
  for (int iter = 0; iter < 2000; ++iter) {
    BigInt a = 1, b = 1;
    int la = 1 + static_cast<int>(rng.below(4)), lb = 1 + static_cast<int>(rng.below(4));
    for (int i = 0; i < la; ++i) a = a * BigInt(rng.range(1, 1LL << 40));
    for (int i = 0; i < lb; ++i) b = b * BigInt(rng.range(1, 1LL << 40));
    if (rng.below(2)) a = -a;
    if (rng.below(2)) b = -b;
    BigInt q, r;
    BigInt::divmod(a, b, q, r);
    CHECK(q * b + r == a);
    CHECK(r.abs() < b.abs());
    // truncation: q and r carry a's sign pattern
    if (!r.is_zero()) CHECK(r.is_negative() == a.is_negative());
  }
}

TEST_CASE("BigInt decimal round-trip") {
  Rng rng(103);
  for (int iter = 0; iter < 500; ++iter) {
    BigInt a = 1;
    for (int i = 0; i < 5; ++i) a = a * BigInt(rng.range(1, 1LL << 50));
    if (rng.below(2)) a = -a;
    CHECK(BigInt::from_string(a.to_string()) == a);
  }
  CHECK(BigInt(0).to_string() == "0");
  CHECK(BigInt::from_string("-0").is_zero());
}

TEST_CASE("BigInt int64 boundary values") {
  long long lo = std::numeric_limits<long long>::min();
  long long hi = std::numeric_limits<long long>::max();
  CHECK(BigInt(lo).to_int64() == lo);
  CHECK(BigInt(hi).to_int64() == hi);
  CHECK(BigInt(lo).fits_int64());
  CHECK(!(BigInt(hi) + BigInt(1)).fits_int64());
  CHECK((BigInt(lo) + BigInt(0)).to_string() == std::to_string(lo));
}

TEST_CASE("Rational field axioms on random samples") {
  Rng rng(104);
  for (int iter = 0; iter < 2000; ++iter) {
    Rational a = rng.rational(50, 20), b = rng.rational(50, 20), c = rng.rational(50, 20);
    CHECK((a + b) * c == a * c + b * c);
    CHECK(a + b == b + a);
    CHECK((a + b) + c == a + (b + c));
    if (!b.is_zero()) CHECK(a / b * b == a);
  }
  CHECK(Rational(BigInt(4), BigInt(-6)) == Rational(BigInt(-2), BigInt(3)));
  CHECK(Rational(BigInt(0), BigInt(-7)).den() == BigInt(1));
}

TEST_CASE("GaussianRational division is exact, including isotropic-like values") {
  Rng rng(105);
  for (int iter = 0; iter < 1000; ++iter) {
    GaussianRational a = rng.gaussian_rational(20, 9);
    GaussianRational b = rng.nonzero_gaussian_rational(20, 9);
    CHECK(a / b * b == a);
  }
  GaussianRational i = GaussianRational::i();
  CHECK(i * i == GaussianRational(-1));
  CHECK(GaussianRational(1) / i == -i);
}

TEST_CASE("Eigen products over the exact scalar") {
  Rng rng(106);
  Mat<GaussianRational> a(2, 2), b(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      a(i, j) = rng.gaussian_rational();
      b(i, j) = rng.gaussian_rational();
    }
  Mat<GaussianRational> ab = a * b;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(ab(i, j) == a(i, 0) * b(0, j) + a(i, 1) * b(1, j));
  CHECK(Mat<GaussianRational>(a * Mat<GaussianRational>::Identity(2, 2)) == a);
}
