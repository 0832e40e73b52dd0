#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sympfactor/json_io.hpp"
#include "sympfactor/random.hpp"

using namespace sympfactor;
using GQ = GaussianRational;

TEST_CASE("exact word serialization round-trips bit for bit") {
  Rng rng(901);
  for (int iter = 0; iter < 25; ++iter) {
    int n = 1 + static_cast<int>(rng.below(3));
    auto w = random_word<GQ>(rng, n, static_cast<int>(rng.below(8)));
    json j = to_json(w);
    std::string text = j.dump();
    auto back = word_from_json<GQ>(json::parse(text));
    REQUIRE(back.size() == w.size());
    CHECK(back.n == w.n);
    for (int i = 0; i < w.size(); ++i) {
      CHECK(back.factors[i].side == w.factors[i].side);
      CHECK(back.factors[i].Z == w.factors[i].Z);
    }
    // serialized form is stable under a second round-trip
    CHECK(to_json(back).dump() == text);
  }
}

TEST_CASE("huge numerators serialize as strings and survive") {
  BigInt big = BigInt::from_string("123456789012345678901234567890");
  Rational r(big, BigInt(7));
  json j = to_json(r);
  CHECK(j["num"].is_string());
  CHECK(rational_from_json(j) == r);
}

TEST_CASE("float matrices and complex scalars") {
  Rng rng(902);
  CMat m(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m(i, j) = rng.complex_in_disk();
  json j = to_json(m);
  CMat back = matrix_from_json<cdouble>(j);
  CHECK(max_norm(CMat(back - m)) == 0.0);

  CHECK(complex_from_json(json::parse("[1.5, -2.0]")) == cdouble(1.5, -2.0));
  CHECK(complex_from_json(json(3.0)) == cdouble(3.0, 0.0));
  CHECK_THROWS_AS(complex_from_json(json::parse("[1,2,3]")), DomainError);
}

TEST_CASE("symmetric parameters: full and packed forms, symmetry enforced") {
  json full = json::parse("[[1, 2], [2, 5]]");
  auto z = symmetric_from_json<cdouble>(full);
  CHECK(z(0, 1) == cdouble(2.0));

  json packed = json::parse(R"({"packed": true, "values": [1, 2, 5]})");
  auto zp = symmetric_from_json<cdouble>(packed);
  CHECK(zp.matrix() == z.matrix());

  json bad = json::parse("[[1, 2], [3, 5]]");
  CHECK_THROWS_AS(symmetric_from_json<cdouble>(bad), DomainError);
}

TEST_CASE("points and targets") {
  Rng rng(903);
  auto p = random_phi_point<GQ>(rng, 2, 3);
  auto back = point_from_json<GQ>(to_json(p));
  CHECK(back.n == p.n);
  CHECK(back.K == p.K);
  for (int k = 0; k < p.K; ++k) CHECK(back.zs[k] == p.zs[k]);

  TargetVector<cdouble> y{random_vector<cdouble>(rng, 3), random_vector<cdouble>(rng, 3)};
  auto ty = target_from_json<cdouble>(to_json(y));
  CHECK(max_norm(CVec(ty.a - y.a)) == 0.0);
  CHECK(max_norm(CVec(ty.b - y.b)) == 0.0);

  CHECK_THROWS_AS(target_from_json<cdouble>(json::parse(R"({"a":[1],"b":[1,2]})")),
                  DomainError);
}
