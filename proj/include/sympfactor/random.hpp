#pragma once

#include <cstdint>

#include "sympfactor/core.hpp"
#include "sympfactor/elementary.hpp"
#include "sympfactor/phimap.hpp"
#include "sympfactor/rational.hpp"
#include "sympfactor/symmetric.hpp"

namespace sympfactor {

/// Deterministic generator used by tests and the randomized CLI commands.
/// Draws are derived from raw engine output, so identical seeds reproduce
/// identical streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  std::uint64_t next() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// uniform in [0, bound)
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }

  /// uniform integer in [lo, hi]
  long long range(long long lo, long long hi) {
    return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  /// uniform double in [-1, 1]
  double signed_unit() {
    return static_cast<double>(next() >> 11) / static_cast<double>(1ULL << 53) * 2.0 - 1.0;
  }

  cdouble complex_in_disk() {
    for (;;) {
      double re = signed_unit(), im = signed_unit();
      if (re * re + im * im <= 1.0) return {re, im};
    }
  }

  Rational rational(long long max_num = 9, long long max_den = 4) {
    return Rational(BigInt(range(-max_num, max_num)), BigInt(range(1, max_den)));
  }

  GaussianRational gaussian_rational(long long max_num = 9, long long max_den = 4) {
    return GaussianRational(rational(max_num, max_den), rational(max_num, max_den));
  }

  GaussianRational nonzero_gaussian_rational(long long max_num = 9, long long max_den = 4) {
    for (;;) {
      GaussianRational z = gaussian_rational(max_num, max_den);
      if (!z.is_zero()) return z;
    }
  }

 private:
  std::uint64_t state_;
};

template <class Scalar>
Scalar random_scalar(Rng& rng);

template <>
inline cdouble random_scalar<cdouble>(Rng& rng) {
  return rng.complex_in_disk();
}
template <>
inline GaussianRational random_scalar<GaussianRational>(Rng& rng) {
  return rng.gaussian_rational();
}

template <class Scalar>
SymmetricParam<Scalar> random_symmetric(Rng& rng, int n) {
  SymmetricParam<Scalar> z(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) z.set(i, j, random_scalar<Scalar>(rng));
  return z;
}

template <class Scalar>
Vec<Scalar> random_vector(Rng& rng, int n) {
  Vec<Scalar> v(n);
  for (int i = 0; i < n; ++i) v(i) = random_scalar<Scalar>(rng);
  return v;
}

template <class Scalar>
Vec<Scalar> random_nonzero_vector(Rng& rng, int n, double tol_zero = 1e-12) {
  for (;;) {
    Vec<Scalar> v = random_vector<Scalar>(rng, n);
    if (!vec_is_zero(v, tol_zero)) return v;
  }
}

template <class Scalar>
FactorWord<Scalar> random_word(Rng& rng, int n, int length) {
  FactorWord<Scalar> w;
  w.n = n;
  Side side = rng.below(2) ? Side::Upper : Side::Lower;
  for (int i = 0; i < length; ++i) {
    w.push(side, random_symmetric<Scalar>(rng, n));
    side = flip(side);
  }
  return w;
}

template <class Scalar>
PhiPoint<Scalar> random_phi_point(Rng& rng, int n, int K) {
  PhiPoint<Scalar> p{n, K, {}};
  p.zs.reserve(K);
  for (int k = 0; k < K; ++k) p.zs.push_back(random_symmetric<Scalar>(rng, n));
  return p;
}

}  // namespace sympfactor
