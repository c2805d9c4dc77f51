#pragma once

// Certified real numbers as closed intervals with exact rational endpoints.
// Every operation returns an interval guaranteed to contain the true value;
// comparisons are three-valued, and callers that need a decision convert an
// undecided comparison into a hard error carrying both intervals.

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>

#include <gmp.h>

#include "adfam/rational.hpp"

namespace adfam {

class undecided_error : public std::runtime_error {
 public:
  undecided_error(const std::string& what, std::string lhs, std::string rhs)
      : std::runtime_error(what + " (lhs " + lhs + ", rhs " + rhs + ")"),
        lhs_interval(std::move(lhs)),
        rhs_interval(std::move(rhs)) {}
  std::string lhs_interval;
  std::string rhs_interval;
};

class CertifiedReal {
 public:
  CertifiedReal() : lo_(0), hi_(0) {}
  CertifiedReal(Rational exact) : lo_(exact), hi_(std::move(exact)) {}  // NOLINT
  CertifiedReal(Rational lo, Rational hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (lo_ > hi_) throw arithmetic_error("interval endpoints out of order");
  }

  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }
  Rational width() const { return hi_ - lo_; }
  Rational mid() const { return (lo_ + hi_) / 2; }
  bool is_exact() const { return lo_ == hi_; }
  bool contains(const Rational& x) const { return lo_ <= x && x <= hi_; }

  // Square root enclosure of a non-negative rational, certified to width
  // <= 2^-precision_bits; exact (degenerate) for perfect squares.
  static CertifiedReal sqrt_of(const Rational& x, int precision_bits) {
    if (x.sign() < 0) throw arithmetic_error("sqrt of a negative value");
    if (x.is_zero()) return CertifiedReal(Rational(0));
    if (precision_bits < 1 || precision_bits > 4096)
      throw arithmetic_error("sqrt precision out of range");
    mpq_t q;
    x.to_mpq(q);
    const unsigned long k = static_cast<unsigned long>(precision_bits);
    mpz_t z, s;
    mpz_init(z);
    mpz_init(s);
    // x = N/D;  floor(sqrt(N*D*4^k)) = s  gives  s/(D*2^k) <= sqrt(x) <= (s+1)/(D*2^k).
    mpz_mul(z, mpq_numref(q), mpq_denref(q));
    mpz_mul_2exp(z, z, 2 * k);
    mpz_sqrt(s, z);
    mpq_t lo_q;
    mpq_init(lo_q);
    mpz_set(mpq_numref(lo_q), s);
    mpz_mul_2exp(mpq_denref(lo_q), mpq_denref(q), k);
    mpq_canonicalize(lo_q);
    Rational lo = Rational::from_mpq(lo_q);
    mpz_t s2;
    mpz_init(s2);
    mpz_mul(s2, s, s);
    const bool perfect = mpz_cmp(s2, z) == 0;
    Rational hi = perfect ? lo : [&] {
      mpq_t hi_q;
      mpq_init(hi_q);
      mpz_add_ui(s, s, 1);
      mpz_set(mpq_numref(hi_q), s);
      mpz_mul_2exp(mpq_denref(hi_q), mpq_denref(q), k);
      mpq_canonicalize(hi_q);
      Rational h = Rational::from_mpq(hi_q);
      mpq_clear(hi_q);
      return h;
    }();
    mpz_clears(z, s, s2, nullptr);
    mpq_clear(lo_q);
    mpq_clear(q);
    return CertifiedReal(std::move(lo), std::move(hi));
  }

  // Monotone interval extension of sqrt; the lower endpoint is clamped at 0.
  static CertifiedReal sqrt_of(const CertifiedReal& x, int precision_bits) {
    Rational lo_in = x.lo_.sign() < 0 ? Rational(0) : x.lo_;
    if (x.hi_.sign() < 0) throw arithmetic_error("sqrt of a negative interval");
    return CertifiedReal(sqrt_of(lo_in, precision_bits).lo(),
                         sqrt_of(x.hi_, precision_bits).hi());
  }

  friend CertifiedReal operator+(const CertifiedReal& a, const CertifiedReal& b) {
    return CertifiedReal(a.lo_ + b.lo_, a.hi_ + b.hi_);
  }
  friend CertifiedReal operator-(const CertifiedReal& a, const CertifiedReal& b) {
    return CertifiedReal(a.lo_ - b.hi_, a.hi_ - b.lo_);
  }
  friend CertifiedReal operator*(const CertifiedReal& a, const CertifiedReal& b) {
    Rational p1 = a.lo_ * b.lo_, p2 = a.lo_ * b.hi_, p3 = a.hi_ * b.lo_, p4 = a.hi_ * b.hi_;
    Rational lo = std::min({p1, p2, p3, p4});
    Rational hi = std::max({p1, p2, p3, p4});
    return CertifiedReal(std::move(lo), std::move(hi));
  }
  CertifiedReal operator-() const { return CertifiedReal(-hi_, -lo_); }
  friend CertifiedReal operator/(const CertifiedReal& a, const Rational& s) {
    if (s.sign() == 0) throw arithmetic_error("interval division by zero");
    if (s.sign() > 0) return CertifiedReal(a.lo_ / s, a.hi_ / s);
    return CertifiedReal(a.hi_ / s, a.lo_ / s);
  }

  // Full-interval reciprocal-scaled division: a / b where 0 is certifiedly
  // outside b.
  friend CertifiedReal operator/(const CertifiedReal& a, const CertifiedReal& b) {
    if (b.lo_.sign() <= 0 && b.hi_.sign() >= 0)
      throw arithmetic_error("interval division by an interval containing zero");
    Rational p1 = a.lo_ / b.lo_, p2 = a.lo_ / b.hi_, p3 = a.hi_ / b.lo_, p4 = a.hi_ / b.hi_;
    Rational lo = std::min({p1, p2, p3, p4});
    Rational hi = std::max({p1, p2, p3, p4});
    return CertifiedReal(std::move(lo), std::move(hi));
  }

  static CertifiedReal max_of(const CertifiedReal& a, const CertifiedReal& b) {
    return CertifiedReal(std::max(a.lo_, b.lo_), std::max(a.hi_, b.hi_));
  }
  CertifiedReal abs() const {
    if (lo_.sign() >= 0) return *this;
    if (hi_.sign() <= 0) return -*this;
    return CertifiedReal(Rational(0), std::max(-lo_, hi_));
  }

  // Three-valued decisions. nullopt means the intervals overlap and the
  // comparison cannot be certified at this precision.
  std::optional<bool> decide_lt(const CertifiedReal& o) const {
    if (hi_ < o.lo_) return true;
    if (lo_ >= o.hi_) return false;
    return std::nullopt;
  }
  std::optional<bool> decide_le(const CertifiedReal& o) const {
    if (hi_ <= o.lo_) return true;
    if (lo_ > o.hi_) return false;
    return std::nullopt;
  }
  std::optional<bool> decide_eq(const Rational& x) const {
    if (is_exact()) return lo_ == x;
    if (!contains(x)) return false;
    return std::nullopt;
  }

  bool must_lt(const CertifiedReal& o, const std::string& what) const {
    auto d = decide_lt(o);
    if (!d) throw undecided_error(what, to_string(), o.to_string());
    return *d;
  }
  bool must_le(const CertifiedReal& o, const std::string& what) const {
    auto d = decide_le(o);
    if (!d) throw undecided_error(what, to_string(), o.to_string());
    return *d;
  }
  bool must_eq(const Rational& x, const std::string& what) const {
    auto d = decide_eq(x);
    if (!d) throw undecided_error(what, to_string(), "[" + x.to_string() + "]");
    return *d;
  }

  std::string to_string() const {
    if (is_exact()) return "[" + lo_.to_string() + "]";
    return "[" + lo_.to_string() + ", " + hi_.to_string() + "]";
  }
  // Decimal rendering with directed rounding so the printed interval still
  // encloses the value.
  std::string to_decimal(int digits) const {
    return "[" + lo_.to_decimal(digits, Rational::Round::Floor) + ", " +
           hi_.to_decimal(digits, Rational::Round::Ceil) + "]";
  }

 private:
  Rational lo_, hi_;
};

}  // namespace adfam
