#pragma once

#include <complex>

#include "sympfactor/core.hpp"
#include "sympfactor/rational.hpp"

namespace sympfactor {

/// Flavor traits for the two scalar types.  `exact` selects between exact
/// comparisons and tolerance comparisons; `mag` is the pivoting magnitude
/// (|re|+|im|, exactly comparable in the rational flavor).
template <class Scalar>
struct flavor;

template <>
struct flavor<cdouble> {
  static constexpr bool exact = false;
  using Magnitude = double;
  static Magnitude mag(const cdouble& z) { return std::abs(z.real()) + std::abs(z.imag()); }
  static bool is_zero(const cdouble& z, double tol) { return mag(z) <= tol; }
  static cdouble to_complex(const cdouble& z) { return z; }
  static cdouble from_complex(const cdouble& z) { return z; }
  static cdouble reciprocal(const cdouble& z) { return cdouble(1.0) / z; }
};

template <>
struct flavor<GaussianRational> {
  static constexpr bool exact = true;
  using Magnitude = Rational;
  static Magnitude mag(const GaussianRational& z) { return z.mag1(); }
  static bool is_zero(const GaussianRational& z, double /*tol*/) { return z.is_zero(); }
  static cdouble to_complex(const GaussianRational& z) { return z.to_complex(); }
  static GaussianRational from_complex(const cdouble& z) {
    return GaussianRational::from_complex(z);
  }
  static GaussianRational reciprocal(const GaussianRational& z) {
    return GaussianRational(1) / z;
  }
};

template <class Scalar>
CMat to_complex(const Mat<Scalar>& m) {
  CMat out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = flavor<Scalar>::to_complex(m(i, j));
  return out;
}

template <class Scalar>
CVec to_complex(const Vec<Scalar>& v) {
  CVec out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = flavor<Scalar>::to_complex(v(i));
  return out;
}

/// Max-norm of a matrix or vector expression.
template <class Derived>
double max_norm(const Eigen::MatrixBase<Derived>& m) {
  double r = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) r = std::max(r, std::abs(m(i, j)));
  return r;
}

template <class Scalar>
bool vec_is_zero(const Vec<Scalar>& v, double tol) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!flavor<Scalar>::is_zero(v(i), tol)) return false;
  return true;
}

template <class Scalar>
bool mat_is_zero(const Mat<Scalar>& m, double tol) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (!flavor<Scalar>::is_zero(m(i, j), tol)) return false;
  return true;
}

}  // namespace sympfactor
