#pragma once

#include "christoffel/core.hpp"

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <vector>

namespace christoffel {

// Sign-magnitude arbitrary-precision integer, base 2^32 limbs (little endian).
class BigInt {
 public:
  BigInt() = default;
  BigInt(long long v) {  // NOLINT(google-explicit-constructor)
    if (v == 0) return;
    sign_ = v < 0 ? -1 : 1;
    unsigned long long m = v < 0 ? -(unsigned long long)v : (unsigned long long)v;
    while (m) {
      mag_.push_back(std::uint32_t(m & 0xffffffffULL));
      m >>= 32;
    }
  }
  static BigInt from_u64(std::uint64_t m) {
    BigInt r;
    if (m) {
      r.sign_ = 1;
      while (m) {
        r.mag_.push_back(std::uint32_t(m & 0xffffffffULL));
        m >>= 32;
      }
    }
    return r;
  }

  bool is_zero() const { return sign_ == 0; }
  int sign() const { return sign_; }
  BigInt neg() const { BigInt r = *this; r.sign_ = -r.sign_; return r; }
  BigInt abs() const { BigInt r = *this; if (r.sign_) r.sign_ = 1; return r; }

  friend BigInt operator+(const BigInt& a, const BigInt& b) {
    if (a.sign_ == 0) return b;
    if (b.sign_ == 0) return a;
    BigInt r;
    if (a.sign_ == b.sign_) {
      r.mag_ = add_mag(a.mag_, b.mag_);
      r.sign_ = a.sign_;
    } else {
      int c = cmp_mag(a.mag_, b.mag_);
      if (c == 0) return BigInt();
      if (c > 0) { r.mag_ = sub_mag(a.mag_, b.mag_); r.sign_ = a.sign_; }
      else { r.mag_ = sub_mag(b.mag_, a.mag_); r.sign_ = b.sign_; }
    }
    return r;
  }
  friend BigInt operator-(const BigInt& a, const BigInt& b) { return a + b.neg(); }
  friend BigInt operator*(const BigInt& a, const BigInt& b) {
    if (a.sign_ == 0 || b.sign_ == 0) return BigInt();
    BigInt r;
    r.sign_ = a.sign_ * b.sign_;
    r.mag_.assign(a.mag_.size() + b.mag_.size(), 0);
    for (std::size_t i = 0; i < a.mag_.size(); ++i) {
      std::uint64_t carry = 0;
      for (std::size_t j = 0; j < b.mag_.size(); ++j) {
        std::uint64_t cur = std::uint64_t(a.mag_[i]) * b.mag_[j] + r.mag_[i + j] + carry;
        r.mag_[i + j] = std::uint32_t(cur & 0xffffffffULL);
        carry = cur >> 32;
      }
      std::size_t k = i + b.mag_.size();
      while (carry) {
        std::uint64_t cur = std::uint64_t(r.mag_[k]) + carry;
        r.mag_[k] = std::uint32_t(cur & 0xffffffffULL);
        carry = cur >> 32;
        ++k;
      }
    }
    r.trim();
    return r;
  }

  // truncated division: a = q*b + r, |r| < |b|, sign(r) = sign(a)
  static void divrem(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
    if (b.sign_ == 0) raise(errc::numerical_failure, "BigInt division by zero");
    if (a.sign_ == 0) { q = BigInt(); r = BigInt(); return; }
    int c = cmp_mag(a.mag_, b.mag_);
    if (c < 0) { q = BigInt(); r = a; return; }
    q.mag_.clear(); r.mag_.clear();
    divrem_mag(a.mag_, b.mag_, q.mag_, r.mag_);
    q.sign_ = q.mag_.empty() ? 0 : a.sign_ * b.sign_;
    r.sign_ = r.mag_.empty() ? 0 : a.sign_;
  }
  friend BigInt operator/(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    divrem(a, b, q, r);
    return q;
  }
  friend BigInt operator%(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    divrem(a, b, q, r);
    return r;
  }

  friend bool operator==(const BigInt& a, const BigInt& b) {
    return a.sign_ == b.sign_ && a.mag_ == b.mag_;
  }
  // three-way on value
  static int cmp(const BigInt& a, const BigInt& b) {
    if (a.sign_ != b.sign_) return a.sign_ < b.sign_ ? -1 : 1;
    int c = cmp_mag(a.mag_, b.mag_);
    return a.sign_ >= 0 ? c : -c;
  }

  static BigInt gcd(BigInt a, BigInt b) {
    a.sign_ = a.mag_.empty() ? 0 : 1;
    b.sign_ = b.mag_.empty() ? 0 : 1;
    while (!b.is_zero()) {
      BigInt q, r;
      divrem(a, b, q, r);
      a = b;
      b = r;
    }
    return a;
  }

  BigInt shl(unsigned bits) const {
    if (sign_ == 0) return BigInt();
    BigInt r = *this;
    unsigned words = bits / 32, rem = bits % 32;
    if (rem) {
      std::uint32_t carry = 0;
      for (auto& limb : r.mag_) {
        std::uint64_t cur = (std::uint64_t(limb) << rem) | carry;
        limb = std::uint32_t(cur & 0xffffffffULL);
        carry = std::uint32_t(cur >> 32);
      }
      if (carry) r.mag_.push_back(carry);
    }
    r.mag_.insert(r.mag_.begin(), words, 0);
    return r;
  }

  long double to_long_double() const {
    if (sign_ == 0) return 0.0L;
    long double v = 0.0L;
    const int top = int(mag_.size()) - 1;
    const int lowest = std::max(0, top - 3);
    for (int i = top; i >= lowest; --i) v = v * 4294967296.0L + mag_[i];
    v = std::ldexp(v, 32 * lowest);
    return sign_ < 0 ? -v : v;
  }
  double to_double() const { return double(to_long_double()); }

 private:
  int sign_ = 0;
  std::vector<std::uint32_t> mag_;

  void trim() {
    while (!mag_.empty() && mag_.back() == 0) mag_.pop_back();
    if (mag_.empty()) sign_ = 0;
  }
  static int cmp_mag(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (std::size_t i = a.size(); i-- > 0;)
      if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    return 0;
  }
  static std::vector<std::uint32_t> add_mag(const std::vector<std::uint32_t>& a,
                                            const std::vector<std::uint32_t>& b) {
    const auto& big = a.size() >= b.size() ? a : b;
    const auto& small = a.size() >= b.size() ? b : a;
    std::vector<std::uint32_t> r = big;
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      std::uint64_t cur = std::uint64_t(r[i]) + (i < small.size() ? small[i] : 0) + carry;
      r[i] = std::uint32_t(cur & 0xffffffffULL);
      carry = cur >> 32;
      if (carry == 0 && i >= small.size()) break;
    }
    if (carry) r.push_back(std::uint32_t(carry));
    return r;
  }
  // requires |a| >= |b|
  static std::vector<std::uint32_t> sub_mag(const std::vector<std::uint32_t>& a,
                                            const std::vector<std::uint32_t>& b) {
    std::vector<std::uint32_t> r = a;
    std::int64_t borrow = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      std::int64_t cur = std::int64_t(r[i]) - (i < b.size() ? b[i] : 0) - borrow;
      borrow = cur < 0 ? 1 : 0;
      if (cur < 0) cur += (std::int64_t(1) << 32);
      r[i] = std::uint32_t(cur);
      if (borrow == 0 && i >= b.size()) break;
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
  }
  // Knuth algorithm D on magnitudes; requires |u| >= |v| > 0.
  static void divrem_mag(std::vector<std::uint32_t> u, std::vector<std::uint32_t> v,
                         std::vector<std::uint32_t>& q, std::vector<std::uint32_t>& r) {
    if (v.size() == 1) {
      const std::uint64_t d = v[0];
      q.assign(u.size(), 0);
      std::uint64_t rem = 0;
      for (std::size_t i = u.size(); i-- > 0;) {
        std::uint64_t cur = (rem << 32) | u[i];
        q[i] = std::uint32_t(cur / d);
        rem = cur % d;
      }
      while (!q.empty() && q.back() == 0) q.pop_back();
      r.clear();
      if (rem) r.push_back(std::uint32_t(rem));
      return;
    }
    const unsigned shift = std::countl_zero(v.back());
    auto shl_vec = [](const std::vector<std::uint32_t>& x, unsigned s) {
      std::vector<std::uint32_t> out = x;
      if (s) {
        std::uint32_t carry = 0;
        for (auto& limb : out) {
          std::uint64_t cur = (std::uint64_t(limb) << s) | carry;
          limb = std::uint32_t(cur & 0xffffffffULL);
          carry = std::uint32_t(cur >> 32);
        }
        if (carry) out.push_back(carry);
      }
      return out;
    };
    std::vector<std::uint32_t> un = shl_vec(u, shift);
    std::vector<std::uint32_t> vn = shl_vec(v, shift);
    const std::size_t n = vn.size(), m = un.size() - n + 1;
    un.resize(un.size() + 1, 0);
    q.assign(m, 0);
    for (std::size_t j = m; j-- > 0;) {
      std::uint64_t num = (std::uint64_t(un[j + n]) << 32) | un[j + n - 1];
      std::uint64_t qhat = num / vn[n - 1];
      std::uint64_t rhat = num % vn[n - 1];
      while (qhat > 0xffffffffULL ||
             qhat * vn[n - 2] > ((rhat << 32) | un[j + n - 2])) {
        --qhat;
        rhat += vn[n - 1];
        if (rhat > 0xffffffffULL) break;
      }
      // multiply-subtract
      std::int64_t borrow = 0;
      std::uint64_t carry = 0;
      for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t p = qhat * vn[i] + carry;
        carry = p >> 32;
        std::int64_t t = std::int64_t(un[i + j]) - std::int64_t(p & 0xffffffffULL) - borrow;
        borrow = t < 0 ? 1 : 0;
        if (t < 0) t += (std::int64_t(1) << 32);
        un[i + j] = std::uint32_t(t);
      }
      std::int64_t t = std::int64_t(un[j + n]) - std::int64_t(carry) - borrow;
      if (t < 0) {
        // add back
        t += (std::int64_t(1) << 32);
        --qhat;
        std::uint64_t c2 = 0;
        for (std::size_t i = 0; i < n; ++i) {
          std::uint64_t cur = std::uint64_t(un[i + j]) + vn[i] + c2;
          un[i + j] = std::uint32_t(cur & 0xffffffffULL);
          c2 = cur >> 32;
        }
        t += std::int64_t(c2);
        t &= 0xffffffffLL;
      }
      un[j + n] = std::uint32_t(t);
      q[j] = std::uint32_t(qhat);
    }
    while (!q.empty() && q.back() == 0) q.pop_back();
    // denormalize remainder
    r.assign(un.begin(), un.begin() + n);
    if (shift) {
      std::uint32_t carry = 0;
      for (std::size_t i = r.size(); i-- > 0;) {
        std::uint32_t cur = r[i];
        r[i] = (cur >> shift) | carry;
        carry = std::uint32_t((std::uint64_t(cur) << (32 - shift)) & 0xffffffffULL);
      }
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
  }
};

// Exact rational with canonical form: den > 0, gcd(num, den) = 1.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(long long v) : num_(v), den_(1) {}  // NOLINT(google-explicit-constructor)
  Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }

  // exact: every finite double is a dyadic rational
  static Rational from_double(double x) {
    if (x == 0.0) return Rational();
    if (!std::isfinite(x)) raise(errc::parameter_out_of_range, "Rational::from_double: non-finite");
    int e = 0;
    double m = std::frexp(x, &e);               // x = m * 2^e, |m| in [0.5,1)
    long long mi = (long long)std::ldexp(m, 53);  // integer
    e -= 53;
    BigInt n(mi);
    if (e >= 0) return Rational(n.shl(unsigned(e)), BigInt(1));
    return Rational(std::move(n), BigInt(1).shl(unsigned(-e)));
  }

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

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
    if (b.is_zero()) raise(errc::numerical_failure, "Rational division by zero");
    return Rational(a.num_ * b.den_, a.den_ * b.num_);
  }
  Rational& operator+=(const Rational& o) { *this = *this + o; return *this; }
  Rational& operator*=(const Rational& o) { *this = *this * o; return *this; }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  static int cmp(const Rational& a, const Rational& b) {
    return BigInt::cmp(a.num_ * b.den_, b.num_ * a.den_);
  }

  Rational pow(int e) const {
    if (e < 0) raise(errc::parameter_out_of_range, "Rational::pow: negative exponent");
    Rational r(1), base = *this;
    while (e) {
      if (e & 1) r *= base;
      base *= base;
      e >>= 1;
    }
    return r;
  }

  double to_double() const { return double(num_.to_long_double() / den_.to_long_double()); }
  long double to_long_double() const { return num_.to_long_double() / den_.to_long_double(); }

 private:
  BigInt num_, den_;

  void normalize() {
    if (den_.is_zero()) raise(errc::numerical_failure, "Rational: zero denominator");
    if (num_.is_zero()) { den_ = BigInt(1); return; }
    if (den_.sign() < 0) { num_ = num_.neg(); den_ = den_.neg(); }
    BigInt g = BigInt::gcd(num_.abs(), den_);
    if (!(g == BigInt(1))) {
      num_ = num_ / g;
      den_ = den_ / g;
    }
  }
};

}  // namespace christoffel
