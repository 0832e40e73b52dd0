#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace sympfactor {

template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using RowVec = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

using cdouble = std::complex<double>;
using CMat = Mat<cdouble>;
using CVec = Vec<cdouble>;

/// Tolerances used by the floating-point flavor.  The exact flavor ignores
/// them entirely; zero means zero there.
struct Tolerances {
  double symplectic = 1e-10;  // validation residual, scaled by the matrix norm
  double factor = 1e-8;       // factorization reconstruction residual (relative)
  double rank = 1e-12;        // relative singular-value cutoff for numeric rank
  double solve = 1e-10;       // residual of symmetric linear solves
  double zero = 1e-12;        // max-norm threshold below which a vector counts as zero
};

// Error taxonomy.  domain_error -> CLI exit 2, tolerance_error -> exit 3.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};
struct DomainError : Error {
  using Error::Error;
};
struct ToleranceError : Error {
  using Error::Error;
};

struct IndexError : DomainError {
  using DomainError::DomainError;
};
struct ZeroVectorError : DomainError {
  using DomainError::DomainError;
};
struct NonUnitError : DomainError {
  using DomainError::DomainError;
};
struct NotSymplecticError : DomainError {
  using DomainError::DomainError;
};
struct NotUnimodularError : DomainError {
  using DomainError::DomainError;
};
struct ZeroTargetError : DomainError {
  using DomainError::DomainError;
};
struct SingularPointError : DomainError {
  using DomainError::DomainError;
};
struct LiftFailedError : ToleranceError {
  using ToleranceError::ToleranceError;
};
struct BlockAssertError : ToleranceError {
  using ToleranceError::ToleranceError;
};
struct RegularityError : ToleranceError {
  using ToleranceError::ToleranceError;
};

inline int triangle_size(int n) { return n * (n + 1) / 2; }

}  // namespace sympfactor
