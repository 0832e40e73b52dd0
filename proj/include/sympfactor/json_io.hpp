#pragma once

#include <string>

#include <json.hpp>

#include "sympfactor/elementary.hpp"
#include "sympfactor/phimap.hpp"
#include "sympfactor/rational.hpp"

namespace sympfactor {

// JSON conventions:
//  - complex scalars are two-element arrays [re, im]
//  - exact scalars use {"num":..,"den":..} objects per real/imaginary part,
//    with values as JSON integers when they fit and decimal strings beyond
//  - symmetric matrices are full n x n arrays (symmetry validated on load)
//    or packed arrays tagged with "packed": true
//  - words are {"n":..,"factors":[{"side":"upper"|"lower","Z":..},..]}

using json = nlohmann::ordered_json;

inline json to_json(const cdouble& z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const BigInt& v) {
  if (v.fits_int64()) return json(v.to_int64());
  return json(v.to_string());
}

inline BigInt bigint_from_json(const json& j) {
  if (j.is_number_integer()) return BigInt(j.get<long long>());
  if (j.is_string()) return BigInt::from_string(j.get<std::string>());
  throw DomainError("json: expected an integer or integer string");
}

inline json to_json(const Rational& r) {
  return json{{"num", to_json(r.num())}, {"den", to_json(r.den())}};
}

inline Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) return Rational(BigInt(j.get<long long>()), BigInt(1));
  if (!j.is_object() || !j.contains("num") || !j.contains("den"))
    throw DomainError("json: rational must be an integer or {num, den}");
  return Rational(bigint_from_json(j["num"]), bigint_from_json(j["den"]));
}

inline json to_json(const GaussianRational& z) {
  return json::array({to_json(z.real()), to_json(z.imag())});
}

inline cdouble complex_from_json(const json& j) {
  if (j.is_number()) return cdouble(j.get<double>(), 0.0);
  if (!j.is_array() || j.size() != 2)
    throw DomainError("json: complex scalar must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline GaussianRational exact_from_json(const json& j) {
  if (j.is_number_integer()) return GaussianRational(Rational(j.get<long long>()));
  if (!j.is_array() || j.size() != 2)
    throw DomainError("json: exact scalar must be [re, im]");
  return {rational_from_json(j[0]), rational_from_json(j[1])};
}

template <class Scalar>
struct json_scalar;

template <>
struct json_scalar<cdouble> {
  static json to(const cdouble& v) { return to_json(v); }
  static cdouble from(const json& j) { return complex_from_json(j); }
};
template <>
struct json_scalar<GaussianRational> {
  static json to(const GaussianRational& v) { return to_json(v); }
  static GaussianRational from(const json& j) { return exact_from_json(j); }
};

template <class Scalar>
json to_json(const Mat<Scalar>& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(json_scalar<Scalar>::to(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <class Scalar>
Mat<Scalar> matrix_from_json(const json& j) {
  const json& rows = j.is_object() && j.contains("M") ? j["M"] : j;
  if (!rows.is_array() || rows.empty() || !rows[0].is_array())
    throw DomainError("json: matrix must be an array of rows");
  Mat<Scalar> m(rows.size(), rows[0].size());
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) throw DomainError("json: ragged matrix");
    for (size_t c = 0; c < rows[i].size(); ++c)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
          json_scalar<Scalar>::from(rows[i][c]);
  }
  return m;
}

template <class Scalar>
Vec<Scalar> vector_from_json(const json& j) {
  if (!j.is_array()) throw DomainError("json: vector must be an array");
  Vec<Scalar> v(j.size());
  for (size_t i = 0; i < j.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = json_scalar<Scalar>::from(j[i]);
  return v;
}

template <class Scalar>
json to_json(const Vec<Scalar>& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(json_scalar<Scalar>::to(v(i)));
  return out;
}

template <class Scalar>
json to_json(const SymmetricParam<Scalar>& z) {
  return to_json(z.matrix());
}

template <class Scalar>
SymmetricParam<Scalar> symmetric_from_json(const json& j, int n_hint = -1) {
  if (j.is_object() && j.value("packed", false)) {
    Vec<Scalar> packed = vector_from_json<Scalar>(j.at("values"));
    int n = n_hint;
    if (n < 0) {
      n = 1;
      while (triangle_size(n) < packed.size()) ++n;
    }
    if (triangle_size(n) != packed.size())
      throw DomainError("json: packed length is not a triangle number of the dimension");
    return SymmetricParam<Scalar>::from_packed(n, packed);
  }
  return SymmetricParam<Scalar>::from_matrix(matrix_from_json<Scalar>(j));
}

template <class Scalar>
json to_json(const FactorWord<Scalar>& w) {
  json factors = json::array();
  for (const auto& f : w.factors)
    factors.push_back(json{{"side", f.side == Side::Upper ? "upper" : "lower"},
                           {"Z", to_json(f.Z)}});
  return json{{"n", w.n}, {"factors", std::move(factors)}};
}

template <class Scalar>
FactorWord<Scalar> word_from_json(const json& j) {
  FactorWord<Scalar> w;
  w.n = j.at("n").get<int>();
  for (const auto& f : j.at("factors")) {
    std::string side = f.at("side").get<std::string>();
    if (side != "upper" && side != "lower")
      throw DomainError("json: factor side must be 'upper' or 'lower'");
    auto z = symmetric_from_json<Scalar>(f.at("Z"), w.n);
    if (z.n() != w.n) throw DomainError("json: factor dimension mismatch");
    w.push(side == "upper" ? Side::Upper : Side::Lower, std::move(z));
  }
  return w;
}

template <class Scalar>
json to_json(const PhiPoint<Scalar>& p) {
  json zs = json::array();
  for (const auto& z : p.zs) zs.push_back(to_json(z));
  return json{{"n", p.n}, {"K", p.K}, {"Zs", std::move(zs)}};
}

template <class Scalar>
PhiPoint<Scalar> point_from_json(const json& j) {
  PhiPoint<Scalar> p;
  p.n = j.at("n").get<int>();
  p.K = j.at("K").get<int>();
  for (const auto& z : j.at("Zs")) {
    auto s = symmetric_from_json<Scalar>(z, p.n);
    if (s.n() != p.n) throw DomainError("json: point entry dimension mismatch");
    p.zs.push_back(std::move(s));
  }
  if (static_cast<int>(p.zs.size()) != p.K)
    throw DomainError("json: point must carry K symmetric entries");
  return p;
}

template <class Scalar>
json to_json(const TargetVector<Scalar>& y) {
  return json{{"a", to_json(y.a)}, {"b", to_json(y.b)}};
}

template <class Scalar>
TargetVector<Scalar> target_from_json(const json& j) {
  TargetVector<Scalar> y{vector_from_json<Scalar>(j.at("a")),
                         vector_from_json<Scalar>(j.at("b"))};
  if (y.a.size() != y.b.size()) throw DomainError("json: target blocks differ in length");
  return y;
}

}  // namespace sympfactor
