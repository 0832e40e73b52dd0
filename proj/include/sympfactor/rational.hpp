#pragma once

#include <cmath>
#include <complex>
#include <ostream>
#include <string>

#include <Eigen/Core>

#include "sympfactor/bigint.hpp"

namespace sympfactor {

/// Exact rational number, always kept reduced with positive denominator.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(long long v) : num_(v), den_(1) {}  // NOLINT
  Rational(int v) : num_(v), den_(1) {}        // NOLINT
  Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
    normalize();
  }

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_negative() const { return num_.is_negative(); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw std::domain_error("Rational: division by zero");
    return Rational(a.num_ * b.den_, a.den_ * b.num_);
  }
  friend Rational operator-(const Rational& a) { return Rational(-a.num_, a.den_); }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.num_ * b.den_ < b.num_ * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  Rational abs() const { return is_negative() ? -*this : *this; }
  double to_double() const { return num_.to_double() / den_.to_double(); }

  /// Exact conversion: every finite double is a dyadic rational.
  static Rational from_double(double x) {
    if (x == 0.0) return Rational(0);
    int exp = 0;
    double mant = std::frexp(x, &exp);  // x = mant * 2^exp, |mant| in [0.5, 1)
    long long m = static_cast<long long>(std::ldexp(mant, 53));
    exp -= 53;
    BigInt num(m), den(1);
    BigInt two(2);
    for (; exp > 0; --exp) num = num * two;
    for (; exp < 0; ++exp) den = den * two;
    return Rational(std::move(num), std::move(den));
  }
  std::string to_string() const {
    return den_.is_one() ? num_.to_string() : num_.to_string() + "/" + den_.to_string();
  }
  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.to_string();
  }

 private:
  BigInt num_, den_;
  void normalize() {
    if (den_.is_zero()) throw std::domain_error("Rational: zero denominator");
    if (num_.is_zero()) {
      den_ = 1;
      return;
    }
    if (den_.is_negative()) {
      num_ = -num_;
      den_ = -den_;
    }
    BigInt g = BigInt::gcd(num_, den_);
    if (!g.is_one()) {
      num_ = num_ / g;
      den_ = den_ / g;
    }
  }
};

/// Gaussian rational: exact complex number with rational real and imaginary
/// parts.  This is the coefficient field of the symbolic layer and the scalar
/// of the exact matrix flavor.
class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(long long v) : re_(v) {}  // NOLINT
  GaussianRational(int v) : re_(v) {}        // NOLINT
  GaussianRational(Rational re) : re_(std::move(re)) {}  // NOLINT
  GaussianRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

  static GaussianRational i() { return GaussianRational(Rational(0), Rational(1)); }
  static GaussianRational from_complex(const std::complex<double>& z) {
    return {Rational::from_double(z.real()), Rational::from_double(z.imag())};
  }

  const Rational& real() const { return re_; }
  const Rational& imag() const { return im_; }
  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
  bool is_real() const { return im_.is_zero(); }

  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re_ + b.re_, a.im_ + b.im_};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re_ - b.re_, a.im_ - b.im_};
  }
  friend GaussianRational operator-(const GaussianRational& a) { return {-a.re_, -a.im_}; }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
  }
  friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
    Rational n = b.re_ * b.re_ + b.im_ * b.im_;
    if (n.is_zero()) throw std::domain_error("GaussianRational: division by zero");
    return {(a.re_ * b.re_ + a.im_ * b.im_) / n, (a.im_ * b.re_ - a.re_ * b.im_) / n};
  }
  GaussianRational& operator+=(const GaussianRational& o) { return *this = *this + o; }
  GaussianRational& operator-=(const GaussianRational& o) { return *this = *this - o; }
  GaussianRational& operator*=(const GaussianRational& o) { return *this = *this * o; }
  GaussianRational& operator/=(const GaussianRational& o) { return *this = *this / o; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) {
    return !(a == b);
  }

  GaussianRational conj() const { return {re_, -im_}; }
  /// |re| + |im|: an exact pivoting magnitude, comparable without square roots.
  Rational mag1() const { return re_.abs() + im_.abs(); }
  std::complex<double> to_complex() const { return {re_.to_double(), im_.to_double()}; }
  std::string to_string() const {
    if (im_.is_zero()) return re_.to_string();
    return "(" + re_.to_string() + (im_.is_negative() ? "" : "+") + im_.to_string() + "i)";
  }
  friend std::ostream& operator<<(std::ostream& os, const GaussianRational& z) {
    return os << z.to_string();
  }

 private:
  Rational re_, im_;
};

}  // namespace sympfactor

// Eigen scalar registration: products, sums and transposes of GaussianRational
// matrices go through the generic coefficient path.
namespace Eigen {
template <>
struct NumTraits<sympfactor::GaussianRational> {
  using Self = sympfactor::GaussianRational;
  using Real = Self;
  using NonInteger = Self;
  using Literal = long long;
  using Nested = Self;
  enum {
    IsComplex = 0,  // treated as an opaque commutative field; no adjoints used
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 16,
    AddCost = 64,
    MulCost = 128,
  };
  static Self epsilon() { return Self(0); }
  static Self dummy_precision() { return Self(0); }
  static int digits10() { return 0; }
};
}  // namespace Eigen
