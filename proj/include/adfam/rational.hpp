#pragma once

// Exact rational arithmetic. Values live on a 64-bit fast path and promote to
// GMP only when a reduced numerator or denominator no longer fits; callers
// never observe the representation, only exact values.

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>

#include <gmp.h>

namespace adfam {

class arithmetic_error : public std::runtime_error {
 public:
  explicit arithmetic_error(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

using i128 = __int128;
using u128 = unsigned __int128;

inline u128 u128_abs(i128 v) { return v < 0 ? -static_cast<u128>(v) : static_cast<u128>(v); }

inline u128 gcd_u128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline bool fits_i64(i128 v) {
  return v >= static_cast<i128>(INT64_MIN) && v <= static_cast<i128>(INT64_MAX);
}

inline void mpz_set_i128(mpz_t z, i128 v) {
  const bool neg = v < 0;
  u128 u = neg ? -static_cast<u128>(v) : static_cast<u128>(v);
  uint64_t limbs[2] = {static_cast<uint64_t>(u), static_cast<uint64_t>(u >> 64)};
  mpz_import(z, 2, -1, sizeof(uint64_t), 0, 0, limbs);
  if (neg) mpz_neg(z, z);
}

}  // namespace detail

class Rational {
 public:
  Rational() = default;
  Rational(int64_t n) : num_(n) {}  // NOLINT: implicit by design
  Rational(int64_t n, int64_t d) {
    if (d == 0) throw arithmetic_error("rational with zero denominator");
    assign128(static_cast<detail::i128>(n), static_cast<detail::i128>(d));
  }
  ~Rational() { clear_big(); }

  Rational(const Rational& o) : num_(o.num_), den_(o.den_) {
    if (o.big_) big_ = new_big_copy(o.big_);
  }
  Rational(Rational&& o) noexcept : num_(o.num_), den_(o.den_), big_(o.big_) { o.big_ = nullptr; }
  Rational& operator=(const Rational& o) {
    if (this != &o) {
      clear_big();
      num_ = o.num_;
      den_ = o.den_;
      big_ = o.big_ ? new_big_copy(o.big_) : nullptr;
    }
    return *this;
  }
  Rational& operator=(Rational&& o) noexcept {
    if (this != &o) {
      clear_big();
      num_ = o.num_;
      den_ = o.den_;
      big_ = o.big_;
      o.big_ = nullptr;
    }
    return *this;
  }

  // Exact value from a decimal string, "n", "n/d", or "n.ddd".
  static Rational from_string(const std::string& s);

  static Rational from_mpq(const mpq_t q) {
    Rational r;
    r.make_big();
    mpq_set(r.big_, q);
    r.demote_if_possible();
    return r;
  }

  static Rational pow2(int k) {
    if (k >= 0) {
      if (k < 63) return Rational(int64_t(1) << k, 1);
      Rational r;
      r.make_big();
      mpq_set_ui(r.big_, 1, 1);
      mpz_mul_2exp(mpq_numref(r.big_), mpq_numref(r.big_), static_cast<unsigned long>(k));
      r.demote_if_possible();
      return r;
    }
    if (-k < 63) return Rational(1, int64_t(1) << -k);
    Rational r;
    r.make_big();
    mpq_set_ui(r.big_, 1, 1);
    mpz_mul_2exp(mpq_denref(r.big_), mpq_denref(r.big_), static_cast<unsigned long>(-k));
    r.demote_if_possible();
    return r;
  }

  bool is_small() const { return big_ == nullptr; }
  bool is_zero() const { return big_ ? mpq_sgn(big_) == 0 : num_ == 0; }
  int sign() const { return big_ ? mpq_sgn(big_) : (num_ > 0) - (num_ < 0); }

  // Small-path accessors; callers must check is_small() first.
  int64_t num64() const { return num_; }
  int64_t den64() const { return den_; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (a.is_small() && b.is_small()) {
      detail::i128 n = static_cast<detail::i128>(a.num_) * b.den_ +
                       static_cast<detail::i128>(b.num_) * a.den_;
      detail::i128 d = static_cast<detail::i128>(a.den_) * b.den_;
      Rational r;
      r.assign128(n, d);
      return r;
    }
    return big_op(a, b, mpq_add);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    if (a.is_small() && b.is_small()) {
      detail::i128 n = static_cast<detail::i128>(a.num_) * b.den_ -
                       static_cast<detail::i128>(b.num_) * a.den_;
      detail::i128 d = static_cast<detail::i128>(a.den_) * b.den_;
      Rational r;
      r.assign128(n, d);
      return r;
    }
    return big_op(a, b, mpq_sub);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    if (a.is_small() && b.is_small()) {
      detail::i128 n = static_cast<detail::i128>(a.num_) * b.num_;
      detail::i128 d = static_cast<detail::i128>(a.den_) * b.den_;
      Rational r;
      r.assign128(n, d);
      return r;
    }
    return big_op(a, b, mpq_mul);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw arithmetic_error("rational division by zero");
    if (a.is_small() && b.is_small()) {
      detail::i128 n = static_cast<detail::i128>(a.num_) * b.den_;
      detail::i128 d = static_cast<detail::i128>(a.den_) * b.num_;
      Rational r;
      r.assign128(n, d);
      return r;
    }
    return big_op(a, b, mpq_div);
  }
  Rational operator-() const {
    Rational r(*this);
    if (r.big_) {
      mpq_neg(r.big_, r.big_);
    } else {
      r.num_ = -r.num_;  // INT64_MIN never occurs: reduced values exclude it by assign128
    }
    return r;
  }
  Rational& operator+=(const Rational& b) { return *this = *this + b; }
  Rational& operator-=(const Rational& b) { return *this = *this - b; }
  Rational& operator*=(const Rational& b) { return *this = *this * b; }
  Rational& operator/=(const Rational& b) { return *this = *this / b; }

  Rational abs() const { return sign() < 0 ? -*this : *this; }
  Rational square() const { return *this * *this; }

  // Three-way exact comparison.
  friend int cmp(const Rational& a, const Rational& b) {
    if (a.is_small() && b.is_small()) {
      detail::i128 l = static_cast<detail::i128>(a.num_) * b.den_;
      detail::i128 r = static_cast<detail::i128>(b.num_) * a.den_;
      return (l > r) - (l < r);
    }
    mpq_t ta, tb;
    a.to_mpq(ta);
    b.to_mpq(tb);
    int c = mpq_cmp(ta, tb);
    mpq_clear(ta);
    mpq_clear(tb);
    return (c > 0) - (c < 0);
  }
  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a, b) == 0; }
  friend bool operator!=(const Rational& a, const Rational& b) { return cmp(a, b) != 0; }
  friend bool operator<(const Rational& a, const Rational& b) { return cmp(a, b) < 0; }
  friend bool operator<=(const Rational& a, const Rational& b) { return cmp(a, b) <= 0; }
  friend bool operator>(const Rational& a, const Rational& b) { return cmp(a, b) > 0; }
  friend bool operator>=(const Rational& a, const Rational& b) { return cmp(a, b) >= 0; }

  // Canonical "n" or "n/d" rendering; exact.
  std::string to_string() const {
    if (is_small()) {
      std::string s = std::to_string(num_);
      if (den_ != 1) s += "/" + std::to_string(den_);
      return s;
    }
    char* raw = mpq_get_str(nullptr, 10, big_);
    std::string s(raw);
    std::free(raw);
    return s;
  }

  std::string num_string() const {
    if (is_small()) return std::to_string(num_);
    char* raw = mpz_get_str(nullptr, 10, mpq_numref(big_));
    std::string s(raw);
    std::free(raw);
    return s;
  }
  std::string den_string() const {
    if (is_small()) return std::to_string(den_);
    char* raw = mpz_get_str(nullptr, 10, mpq_denref(big_));
    std::string s(raw);
    std::free(raw);
    return s;
  }

  // Fixed-point decimal rendering with the requested digits. Rounding is
  // exact: Nearest breaks ties toward +infinity, Floor/Ceil are directed
  // (used to print interval endpoints that stay valid enclosures).
  enum class Round { Nearest, Floor, Ceil };
  std::string to_decimal(int digits, Round mode = Round::Nearest) const {
    if (digits < 0) throw arithmetic_error("negative digit count");
    mpq_t q;
    to_mpq(q);
    mpz_t scaled, quot, rem;
    mpz_init(scaled);
    mpz_init(quot);
    mpz_init(rem);
    mpz_ui_pow_ui(scaled, 10, static_cast<unsigned long>(digits));
    mpz_mul(scaled, scaled, mpq_numref(q));
    mpz_fdiv_qr(quot, rem, scaled, mpq_denref(q));  // floor division, 0 <= rem < den
    if (mode == Round::Ceil) {
      if (mpz_sgn(rem) != 0) mpz_add_ui(quot, quot, 1);
    } else if (mode == Round::Nearest) {
      mpz_mul_2exp(rem, rem, 1);
      if (mpz_cmp(rem, mpq_denref(q)) >= 0) mpz_add_ui(quot, quot, 1);
    }
    const bool neg = mpz_sgn(quot) < 0;
    mpz_abs(quot, quot);
    char* raw = mpz_get_str(nullptr, 10, quot);
    std::string s(raw);
    std::free(raw);
    mpz_clears(scaled, quot, rem, nullptr);
    mpq_clear(q);
    while (static_cast<int>(s.size()) <= digits) s.insert(s.begin(), '0');
    if (digits > 0) s.insert(s.size() - static_cast<size_t>(digits), ".");
    if (neg) s.insert(s.begin(), '-');
    return s;
  }

  double to_double() const {  // diagnostics only, never drives a decision
    if (is_small()) return static_cast<double>(num_) / static_cast<double>(den_);
    return mpq_get_d(big_);
  }

  // Exposes the value as an initialized mpq_t the caller must mpq_clear.
  void to_mpq(mpq_t out) const {
    mpq_init(out);
    if (is_small()) {
      detail::mpz_set_i128(mpq_numref(out), num_);
      detail::mpz_set_i128(mpq_denref(out), den_);
    } else {
      mpq_set(out, big_);
    }
  }

  size_t hash() const {
    if (is_small()) {
      size_t h = std::hash<int64_t>()(num_);
      h ^= std::hash<int64_t>()(den_) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      return h;
    }
    return std::hash<std::string>()(to_string());
  }

 private:
  using BigPtr = __mpq_struct*;

  int64_t num_ = 0;
  int64_t den_ = 1;
  BigPtr big_ = nullptr;

  static BigPtr new_big_copy(BigPtr src) {
    BigPtr q = new __mpq_struct[1];
    mpq_init(q);
    mpq_set(q, src);
    return q;
  }
  void make_big() {
    if (!big_) {
      big_ = new __mpq_struct[1];
      mpq_init(big_);
    }
  }
  void clear_big() {
    if (big_) {
      mpq_clear(big_);
      delete[] big_;
      big_ = nullptr;
    }
  }

  void assign128(detail::i128 n, detail::i128 d) {
    if (d == 0) throw arithmetic_error("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    detail::u128 g = detail::gcd_u128(detail::u128_abs(n), static_cast<detail::u128>(d));
    if (g > 1) {
      n = (n < 0) ? -static_cast<detail::i128>(detail::u128_abs(n) / g)
                  : static_cast<detail::i128>(static_cast<detail::u128>(n) / g);
      d = static_cast<detail::i128>(static_cast<detail::u128>(d) / g);
    }
    // Keep INT64_MIN off the fast path so negation stays trivially safe.
    if (detail::fits_i64(n) && n != static_cast<detail::i128>(INT64_MIN) && detail::fits_i64(d)) {
      clear_big();
      num_ = static_cast<int64_t>(n);
      den_ = static_cast<int64_t>(d);
    } else {
      make_big();
      detail::mpz_set_i128(mpq_numref(big_), n);
      detail::mpz_set_i128(mpq_denref(big_), d);
      mpq_canonicalize(big_);
    }
  }

  static Rational big_op(const Rational& a, const Rational& b,
                         void (*op)(mpq_t, const mpq_t, const mpq_t)) {
    mpq_t ta, tb;
    a.to_mpq(ta);
    b.to_mpq(tb);
    Rational r;
    r.make_big();
    op(r.big_, ta, tb);
    mpq_clear(ta);
    mpq_clear(tb);
    r.demote_if_possible();
    return r;
  }

  void demote_if_possible() {
    if (!big_) return;
    if (mpz_fits_slong_p(mpq_numref(big_)) && mpz_fits_slong_p(mpq_denref(big_))) {
      long n = mpz_get_si(mpq_numref(big_));
      long d = mpz_get_si(mpq_denref(big_));
      if (n != static_cast<long>(INT64_MIN)) {
        clear_big();
        num_ = n;
        den_ = d;
      }
    }
  }
};

inline Rational Rational::from_string(const std::string& s) {
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    std::string ns = s.substr(0, slash), ds = s.substr(slash + 1);
    mpq_t q;
    mpq_init(q);
    if (mpq_set_str(q, (ns + "/" + ds).c_str(), 10) != 0) {
      mpq_clear(q);
      throw arithmetic_error("unparsable rational: " + s);
    }
    mpq_canonicalize(q);
    Rational r;
    r.make_big();
    mpq_set(r.big_, q);
    mpq_clear(q);
    r.demote_if_possible();
    return r;
  }
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string head = s.substr(0, dot), frac = s.substr(dot + 1);
    if (frac.empty() || frac.find_first_not_of("0123456789") != std::string::npos)
      throw arithmetic_error("unparsable decimal: " + s);
    Rational whole = from_string(head.empty() || head == "-" ? head + "0" : head);
    Rational num = from_string(frac);
    Rational scale = 1;
    for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
    Rational f = num / scale;
    return whole.sign() < 0 || head == "-0" ? whole - f : whole + f;
  }
  mpz_t z;
  mpz_init(z);
  if (mpz_set_str(z, s.c_str(), 10) != 0) {
    mpz_clear(z);
    throw arithmetic_error("unparsable integer: " + s);
  }
  Rational r;
  r.make_big();
  mpq_set_z(r.big_, z);
  mpz_clear(z);
  r.demote_if_possible();
  return r;
}

}  // namespace adfam
