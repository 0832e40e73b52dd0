#pragma once

#include <cmath>
#include <complex>

#include <Eigen/Core>

#include "sympfactor/core.hpp"
#include "sympfactor/scalar.hpp"

namespace sympfactor {

/// Double-double real number (~31 significant digits).  Used internally by
/// the float-flavor factorizer: the word it emits is rounded to plain
/// doubles, so accumulated products must carry headroom beyond double
/// precision.
struct ddouble {
  double hi = 0.0, lo = 0.0;

  ddouble() = default;
  ddouble(double h) : hi(h) {}  // NOLINT
  ddouble(double h, double l) : hi(h), lo(l) {}

  static ddouble two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
  }
  static ddouble quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
  }
  static ddouble two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
  }

  friend ddouble operator+(const ddouble& a, const ddouble& b) {
    ddouble s = two_sum(a.hi, b.hi);
    ddouble t = two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return quick_two_sum(s.hi, s.lo);
  }
  friend ddouble operator-(const ddouble& a) { return {-a.hi, -a.lo}; }
  friend ddouble operator-(const ddouble& a, const ddouble& b) { return a + (-b); }
  friend ddouble operator*(const ddouble& a, const ddouble& b) {
    ddouble p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
  }
  friend ddouble operator/(const ddouble& a, const ddouble& b) {
    double q1 = a.hi / b.hi;
    ddouble r = a - b * ddouble(q1);
    double q2 = r.hi / b.hi;
    r = r - b * ddouble(q2);
    double q3 = r.hi / b.hi;
    ddouble q = quick_two_sum(q1, q2);
    return q + ddouble(q3);
  }
  ddouble& operator+=(const ddouble& o) { return *this = *this + o; }
  ddouble& operator-=(const ddouble& o) { return *this = *this - o; }
  ddouble& operator*=(const ddouble& o) { return *this = *this * o; }

  double value() const { return hi + lo; }
};

/// Complex double-double scalar.
struct cddouble {
  ddouble re, im;

  cddouble() = default;
  cddouble(int v) : re(static_cast<double>(v)) {}  // NOLINT
  cddouble(double v) : re(v) {}                    // NOLINT
  cddouble(ddouble r, ddouble i) : re(r), im(i) {}
  explicit cddouble(const cdouble& z) : re(z.real()), im(z.imag()) {}

  friend cddouble operator+(const cddouble& a, const cddouble& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend cddouble operator-(const cddouble& a, const cddouble& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend cddouble operator-(const cddouble& a) { return {-a.re, -a.im}; }
  friend cddouble operator*(const cddouble& a, const cddouble& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend cddouble operator/(const cddouble& a, const cddouble& b) {
    ddouble n = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
  }
  cddouble& operator+=(const cddouble& o) { return *this = *this + o; }
  cddouble& operator-=(const cddouble& o) { return *this = *this - o; }
  cddouble& operator*=(const cddouble& o) { return *this = *this * o; }
  friend bool operator==(const cddouble& a, const cddouble& b) {
    return a.re.hi == b.re.hi && a.re.lo == b.re.lo && a.im.hi == b.im.hi &&
           a.im.lo == b.im.lo;
  }

  cdouble value() const { return {re.value(), im.value()}; }
};

template <>
struct flavor<cddouble> {
  static constexpr bool exact = false;
  using Magnitude = double;
  static Magnitude mag(const cddouble& z) { return std::abs(z.re.hi) + std::abs(z.im.hi); }
  static bool is_zero(const cddouble& z, double tol) { return mag(z) <= tol; }
  static cdouble to_complex(const cddouble& z) { return z.value(); }
  static cddouble from_complex(const cdouble& z) { return cddouble(z); }
  static cddouble reciprocal(const cddouble& z) { return cddouble(1) / z; }
};

}  // namespace sympfactor

namespace Eigen {
template <>
struct NumTraits<sympfactor::cddouble> {
  using Self = sympfactor::cddouble;
  using Real = Self;
  using NonInteger = Self;
  using Literal = double;
  using Nested = Self;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 4,
    AddCost = 8,
    MulCost = 16,
  };
  static Self epsilon() { return Self(1e-30); }
  static Self dummy_precision() { return Self(1e-25); }
  static int digits10() { return 31; }
};
}  // namespace Eigen

namespace sympfactor {

template <class Scalar>
Mat<Scalar> from_complex_matrix(const CMat& m);

template <>
inline Mat<cddouble> from_complex_matrix<cddouble>(const CMat& m) {
  Mat<cddouble> out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = cddouble(m(i, j));
  return out;
}

}  // namespace sympfactor
