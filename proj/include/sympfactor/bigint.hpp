#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace sympfactor {

/// Arbitrary-precision signed integer.  Magnitude is a little-endian vector
/// of 32-bit limbs; the empty vector is zero.  Only the operations the exact
/// rational scalar needs are provided.
class BigInt {
 public:
  BigInt() = default;
  BigInt(long long v) {  // NOLINT: implicit by design, mirrors int literals
    if (v < 0) {
      negative_ = true;
      unsigned long long m = ~static_cast<unsigned long long>(v) + 1ULL;
      push_magnitude(m);
    } else {
      push_magnitude(static_cast<unsigned long long>(v));
    }
  }
  BigInt(int v) : BigInt(static_cast<long long>(v)) {}  // NOLINT

  static BigInt from_string(const std::string& s) {
    BigInt r;
    size_t i = 0;
    bool neg = false;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
      neg = s[i] == '-';
      ++i;
    }
    if (i >= s.size()) throw std::invalid_argument("BigInt: empty numeral");
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("BigInt: bad digit");
      r = r * BigInt(10) + BigInt(s[i] - '0');
    }
    r.negative_ = neg && !r.is_zero();
    return r;
  }

  bool is_zero() const { return limbs_.empty(); }
  bool is_negative() const { return negative_; }
  bool is_one() const { return !negative_ && limbs_.size() == 1 && limbs_[0] == 1; }

  bool fits_int64() const {
    if (limbs_.size() > 2) return false;
    unsigned long long m = magnitude_u64();
    return negative_ ? m <= 0x8000000000000000ULL : m < 0x8000000000000000ULL;
  }
  long long to_int64() const {
    unsigned long long m = magnitude_u64();
    return negative_ ? -static_cast<long long>(m - 1) - 1 : static_cast<long long>(m);
  }

  friend BigInt operator-(const BigInt& a) {
    BigInt r = a;
    if (!r.is_zero()) r.negative_ = !r.negative_;
    return r;
  }

  friend BigInt operator+(const BigInt& a, const BigInt& b) {
    if (a.limbs_.size() <= 1 && b.limbs_.size() <= 1) {
      long long va = a.small_value(), vb = b.small_value();
      return BigInt(va + vb);  // magnitudes < 2^32, no overflow possible
    }
    if (a.negative_ == b.negative_) {
      BigInt r;
      r.limbs_ = add_mag(a.limbs_, b.limbs_);
      r.negative_ = a.negative_ && !r.limbs_.empty();
      return r;
    }
    int c = cmp_mag(a.limbs_, b.limbs_);
    if (c == 0) return BigInt();
    BigInt r;
    if (c > 0) {
      r.limbs_ = sub_mag(a.limbs_, b.limbs_);
      r.negative_ = a.negative_;
    } else {
      r.limbs_ = sub_mag(b.limbs_, a.limbs_);
      r.negative_ = b.negative_;
    }
    return r;
  }
  friend BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

  friend BigInt operator*(const BigInt& a, const BigInt& b) {
    if (a.is_zero() || b.is_zero()) return BigInt();
    if (a.limbs_.size() <= 1 && b.limbs_.size() <= 1) {
      unsigned long long m =
          static_cast<unsigned long long>(a.limbs_[0]) * b.limbs_[0];
      BigInt r;
      r.push_magnitude(m);
      r.negative_ = a.negative_ != b.negative_;
      return r;
    }
    BigInt r;
    r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
    for (size_t i = 0; i < a.limbs_.size(); ++i) {
      std::uint64_t carry = 0;
      for (size_t j = 0; j < b.limbs_.size(); ++j) {
        std::uint64_t cur = static_cast<std::uint64_t>(a.limbs_[i]) * b.limbs_[j] +
                            r.limbs_[i + j] + carry;
        r.limbs_[i + j] = static_cast<std::uint32_t>(cur);
        carry = cur >> 32;
      }
      r.limbs_[i + b.limbs_.size()] += static_cast<std::uint32_t>(carry);
    }
    r.trim();
    r.negative_ = a.negative_ != b.negative_;
    return r;
  }

  /// Truncated division (quotient rounds toward zero, like C++ integers).
  static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
    if (b.is_zero()) throw std::domain_error("BigInt: division by zero");
    std::vector<std::uint32_t> qm, rm;
    divmod_mag(a.limbs_, b.limbs_, qm, rm);
    q.limbs_ = std::move(qm);
    r.limbs_ = std::move(rm);
    q.trim();
    r.trim();
    q.negative_ = (a.negative_ != b.negative_) && !q.limbs_.empty();
    r.negative_ = a.negative_ && !r.limbs_.empty();
  }
  friend BigInt operator/(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    divmod(a, b, q, r);
    return q;
  }
  friend BigInt operator%(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    divmod(a, b, q, r);
    return r;
  }

  friend bool operator==(const BigInt& a, const BigInt& b) {
    return a.negative_ == b.negative_ && a.limbs_ == b.limbs_;
  }
  friend bool operator!=(const BigInt& a, const BigInt& b) { return !(a == b); }
  friend bool operator<(const BigInt& a, const BigInt& b) {
    if (a.negative_ != b.negative_) return a.negative_;
    int c = cmp_mag(a.limbs_, b.limbs_);
    return a.negative_ ? c > 0 : c < 0;
  }
  friend bool operator>(const BigInt& a, const BigInt& b) { return b < a; }
  friend bool operator<=(const BigInt& a, const BigInt& b) { return !(b < a); }
  friend bool operator>=(const BigInt& a, const BigInt& b) { return !(a < b); }

  BigInt abs() const {
    BigInt r = *this;
    r.negative_ = false;
    return r;
  }

  static BigInt gcd(BigInt a, BigInt b) {
    a.negative_ = false;
    b.negative_ = false;
    while (!b.is_zero()) {
      if (a.limbs_.size() <= 2 && b.limbs_.size() <= 2) {
        unsigned long long x = a.magnitude_u64(), y = b.magnitude_u64();
        while (y != 0) {
          unsigned long long t = x % y;
          x = y;
          y = t;
        }
        BigInt r;
        r.push_magnitude(x);
        return r;
      }
      BigInt q, r;
      divmod(a, b, q, r);
      a = std::move(b);
      b = std::move(r);
    }
    return a;
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::vector<std::uint32_t> chunks;  // base 10^9, little-endian
    std::vector<std::uint32_t> cur = limbs_;
    while (!cur.empty()) {
      std::uint64_t rem = 0;
      for (size_t i = cur.size(); i-- > 0;) {
        std::uint64_t v = (rem << 32) | cur[i];
        cur[i] = static_cast<std::uint32_t>(v / 1000000000ULL);
        rem = v % 1000000000ULL;
      }
      while (!cur.empty() && cur.back() == 0) cur.pop_back();
      chunks.push_back(static_cast<std::uint32_t>(rem));
    }
    std::string s = negative_ ? "-" : "";
    s += std::to_string(chunks.back());
    for (size_t i = chunks.size() - 1; i-- > 0;) {
      std::string part = std::to_string(chunks[i]);
      s += std::string(9 - part.size(), '0') + part;
    }
    return s;
  }

  double to_double() const {
    double m = 0.0;
    for (size_t i = limbs_.size(); i-- > 0;) m = m * 4294967296.0 + limbs_[i];
    return negative_ ? -m : m;
  }

 private:
  std::vector<std::uint32_t> limbs_;
  bool negative_ = false;

  void push_magnitude(unsigned long long m) {
    while (m != 0) {
      limbs_.push_back(static_cast<std::uint32_t>(m));
      m >>= 32;
    }
  }
  /// value when at most one limb (|v| < 2^32)
  long long small_value() const {
    long long v = limbs_.empty() ? 0 : static_cast<long long>(limbs_[0]);
    return negative_ ? -v : v;
  }
  unsigned long long magnitude_u64() const {
    unsigned long long m = 0;
    if (limbs_.size() > 1) m = static_cast<unsigned long long>(limbs_[1]) << 32;
    if (!limbs_.empty()) m |= limbs_[0];
    return m;
  }
  void trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
    if (limbs_.empty()) negative_ = false;
  }

  static int cmp_mag(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (size_t i = a.size(); i-- > 0;)
      if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    return 0;
  }
  static std::vector<std::uint32_t> add_mag(const std::vector<std::uint32_t>& a,
                                            const std::vector<std::uint32_t>& b) {
    const auto& big = a.size() >= b.size() ? a : b;
    const auto& small = a.size() >= b.size() ? b : a;
    std::vector<std::uint32_t> r = big;
    std::uint64_t carry = 0;
    for (size_t i = 0; i < r.size(); ++i) {
      std::uint64_t cur = static_cast<std::uint64_t>(r[i]) + carry +
                          (i < small.size() ? small[i] : 0);
      r[i] = static_cast<std::uint32_t>(cur);
      carry = cur >> 32;
      if (carry == 0 && i >= small.size()) break;
    }
    if (carry) r.push_back(static_cast<std::uint32_t>(carry));
    return r;
  }
  // requires |a| >= |b|
  static std::vector<std::uint32_t> sub_mag(const std::vector<std::uint32_t>& a,
                                            const std::vector<std::uint32_t>& b) {
    std::vector<std::uint32_t> r = a;
    std::int64_t borrow = 0;
    for (size_t i = 0; i < r.size(); ++i) {
      std::int64_t cur = static_cast<std::int64_t>(r[i]) - borrow -
                         (i < b.size() ? b[i] : 0);
      borrow = cur < 0;
      if (cur < 0) cur += (1LL << 32);
      r[i] = static_cast<std::uint32_t>(cur);
      if (borrow == 0 && i >= b.size()) break;
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
  }

  // Knuth algorithm D on 32-bit limbs.
  static void divmod_mag(std::vector<std::uint32_t> a, std::vector<std::uint32_t> b,
                         std::vector<std::uint32_t>& q, std::vector<std::uint32_t>& r) {
    while (!a.empty() && a.back() == 0) a.pop_back();
    while (!b.empty() && b.back() == 0) b.pop_back();
    if (cmp_mag(a, b) < 0) {
      q.clear();
      r = std::move(a);
      return;
    }
    if (b.size() == 1) {
      std::uint64_t d = b[0], rem = 0;
      q.assign(a.size(), 0);
      for (size_t i = a.size(); i-- > 0;) {
        std::uint64_t v = (rem << 32) | a[i];
        q[i] = static_cast<std::uint32_t>(v / d);
        rem = v % d;
      }
      r.clear();
      if (rem) r.push_back(static_cast<std::uint32_t>(rem));
      return;
    }
    // Normalize so the divisor's top limb has its high bit set.
    int shift = 0;
    for (std::uint32_t top = b.back(); !(top & 0x80000000u); top <<= 1) ++shift;
    auto shl = [&](const std::vector<std::uint32_t>& v) {
      std::vector<std::uint32_t> out(v.size() + 1, 0);
      for (size_t i = 0; i < v.size(); ++i) {
        out[i] |= shift ? (v[i] << shift) : v[i];
        if (shift) out[i + 1] = static_cast<std::uint32_t>(
            (static_cast<std::uint64_t>(v[i]) << shift) >> 32);
      }
      while (!out.empty() && out.back() == 0) out.pop_back();
      return out;
    };
    std::vector<std::uint32_t> u = shl(a), v = shl(b);
    size_t n = v.size(), m = u.size() - n;
    u.resize(u.size() + 1, 0);
    q.assign(m + 1, 0);
    for (size_t j = m + 1; j-- > 0;) {
      std::uint64_t num = (static_cast<std::uint64_t>(u[j + n]) << 32) | u[j + n - 1];
      std::uint64_t qhat = num / v[n - 1];
      std::uint64_t rhat = num % v[n - 1];
      while (qhat >= (1ULL << 32) ||
             qhat * v[n - 2] > ((rhat << 32) | u[j + n - 2])) {
        --qhat;
        rhat += v[n - 1];
        if (rhat >= (1ULL << 32)) break;
      }
      // multiply-subtract
      std::int64_t borrow = 0;
      std::uint64_t carry = 0;
      for (size_t i = 0; i < n; ++i) {
        std::uint64_t p = qhat * v[i] + carry;
        carry = p >> 32;
        std::int64_t t = static_cast<std::int64_t>(u[i + j]) -
                         static_cast<std::int64_t>(p & 0xFFFFFFFFULL) - borrow;
        borrow = t < 0;
        if (t < 0) t += (1LL << 32);
        u[i + j] = static_cast<std::uint32_t>(t);
      }
      std::int64_t t = static_cast<std::int64_t>(u[j + n]) -
                       static_cast<std::int64_t>(carry) - borrow;
      if (t < 0) {  // qhat was one too large
        --qhat;
        std::uint64_t c = 0;
        for (size_t i = 0; i < n; ++i) {
          std::uint64_t s = static_cast<std::uint64_t>(u[i + j]) + v[i] + c;
          u[i + j] = static_cast<std::uint32_t>(s);
          c = s >> 32;
        }
        t += static_cast<std::int64_t>(c);
      }
      u[j + n] = static_cast<std::uint32_t>(t);
      q[j] = static_cast<std::uint32_t>(qhat);
    }
    while (!q.empty() && q.back() == 0) q.pop_back();
    u.resize(n);
    if (shift) {  // denormalize remainder
      for (size_t i = 0; i + 1 < u.size(); ++i)
        u[i] = (u[i] >> shift) | (u[i + 1] << (32 - shift));
      if (!u.empty()) u.back() >>= shift;
    }
    while (!u.empty() && u.back() == 0) u.pop_back();
    r = std::move(u);
  }
};

}  // namespace sympfactor
