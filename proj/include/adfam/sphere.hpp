#pragma once

// Finite-scale vectors with exact rational coordinates below a horizon and a
// symbolic continuation along listed generators beyond it. Provides the
// supremum norm, the geometrically weighted quadratic part, the combined
// renorming sup + quadratic, and distances — exact rationals wherever no
// square root is involved, certified enclosures everywhere else. The
// quadratic contribution of a symbolic tail is never computed pointwise; it
// is enclosed by [0, s^2 * 2^-H] where s bounds the tail values, which is
// tight because distinct generators eventually separate.

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "adfam/condition.hpp"
#include "adfam/family.hpp"
#include "adfam/finset.hpp"
#include "adfam/interval.hpp"
#include "adfam/rational.hpp"

namespace adfam {

class sphere_error : public std::runtime_error {
 public:
  explicit sphere_error(const std::string& what) : std::runtime_error(what) {}
};

// One symbolic tail term: beyond the horizon the vector keeps the value
// `coeff` along generator `member`.
struct TailTerm {
  int member = 0;
  Rational coeff;
  friend bool operator==(const TailTerm& s, const TailTerm& t) {
    return s.member == t.member && s.coeff == t.coeff;
  }
  friend bool operator!=(const TailTerm& s, const TailTerm& t) { return !(s == t); }
};

class SphereVector {
 public:
  SphereVector(int horizon, std::vector<Rational> coords, std::vector<TailTerm> tail = {})
      : horizon_(horizon), coords_(std::move(coords)), tail_(std::move(tail)) {
    if (horizon_ < 0) throw sphere_error("horizon must be non-negative");
    if (static_cast<int>(coords_.size()) != horizon_)
      throw sphere_error("coordinate count " + std::to_string(coords_.size()) +
                         " differs from the horizon " + std::to_string(horizon_));
    std::stable_sort(tail_.begin(), tail_.end(),
                     [](const TailTerm& s, const TailTerm& t) { return s.member < t.member; });
    tail_.erase(std::remove_if(tail_.begin(), tail_.end(),
                               [](const TailTerm& t) { return t.coeff.is_zero(); }),
                tail_.end());
    for (size_t i = 0; i < tail_.size(); ++i) {
      if (tail_[i].member < 0) throw sphere_error("tail references a negative generator index");
      if (i > 0 && tail_[i].member == tail_[i - 1].member)
        throw sphere_error("tail lists generator " + std::to_string(tail_[i].member) + " twice");
    }
  }

  static SphereVector zero(int horizon) {
    return SphereVector(horizon, std::vector<Rational>(static_cast<size_t>(horizon)));
  }

  int horizon() const { return horizon_; }
  const std::vector<Rational>& coords() const { return coords_; }
  const Rational& coord(int n) const { return coords_.at(static_cast<size_t>(n)); }
  const std::vector<TailTerm>& tail() const { return tail_; }
  bool tail_is_zero() const { return tail_.empty(); }

  friend bool operator==(const SphereVector& u, const SphereVector& v) {
    return u.horizon_ == v.horizon_ && u.coords_ == v.coords_ && u.tail_ == v.tail_;
  }
  friend bool operator!=(const SphereVector& u, const SphereVector& v) { return !(u == v); }

 private:
  int horizon_;
  std::vector<Rational> coords_;
  std::vector<TailTerm> tail_;
};

inline void require_same_horizon(const SphereVector& u, const SphereVector& v) {
  if (u.horizon() != v.horizon())
    throw sphere_error("vectors live below different horizons (" +
                       std::to_string(u.horizon()) + " vs " + std::to_string(v.horizon()) + ")");
}

// The signed indicator of a condition: +1 on the first side, -1 on the
// second, continuing with the same signs along the labeled generators.
inline SphereVector f_of(const Condition& p) {
  const Family& fam = p.family();
  std::vector<Rational> c(static_cast<size_t>(fam.horizon()));
  for (int n : p.A().elements()) c[static_cast<size_t>(n)] = Rational(1);
  for (int n : p.B().elements()) c[static_cast<size_t>(n)] = Rational(-1);
  std::vector<TailTerm> tail;
  for (int i : p.a().elements()) tail.push_back({i, Rational(1)});
  for (int j : p.b().elements()) tail.push_back({j, Rational(-1)});
  return SphereVector(fam.horizon(), std::move(c), std::move(tail));
}

inline SphereVector operator-(const SphereVector& u, const SphereVector& v) {
  require_same_horizon(u, v);
  std::vector<Rational> c(u.coords());
  for (int n = 0; n < v.horizon(); ++n) {
    const Rational& y = v.coord(n);
    if (!y.is_zero()) c[static_cast<size_t>(n)] -= y;
  }
  std::map<int, Rational> merged;
  for (const TailTerm& t : u.tail()) merged[t.member] += t.coeff;
  for (const TailTerm& t : v.tail()) merged[t.member] -= t.coeff;
  std::vector<TailTerm> tail;
  for (auto& [member, coeff] : merged)
    if (!coeff.is_zero()) tail.push_back({member, std::move(coeff)});
  return SphereVector(u.horizon(), std::move(c), std::move(tail));
}

inline SphereVector scale(const SphereVector& v, const Rational& s) {
  std::vector<Rational> c;
  c.reserve(v.coords().size());
  for (const Rational& x : v.coords()) c.push_back(x * s);
  std::vector<TailTerm> tail;
  for (const TailTerm& t : v.tail()) tail.push_back({t.member, t.coeff * s});
  return SphereVector(v.horizon(), std::move(c), std::move(tail));
}

// Exact supremum norm. Tail terms contribute their full magnitude: each
// listed generator keeps infinitely many positions beyond the horizon.
inline Rational sup_norm(const SphereVector& v) {
  Rational best(0);
  for (const Rational& x : v.coords()) best = std::max(best, x.abs());
  for (const TailTerm& t : v.tail()) best = std::max(best, t.coeff.abs());
  return best;
}

inline Rational dist_inf(const SphereVector& u, const SphereVector& v) {
  return sup_norm(u - v);
}

// Enclosure of sum_n v(n)^2 / 2^(n+1): the part below the horizon is an exact
// rational; the tail lies in [0, s^2 * 2^-H] with s the largest tail value,
// since positions beyond the horizon carry at most one generator each.
inline CertifiedReal weighted_l2_squared(const SphereVector& v) {
  Rational s(0);
  for (int n = 0; n < v.horizon(); ++n) {
    const Rational& x = v.coord(n);
    if (!x.is_zero()) s += x.square() * Rational::pow2(-(n + 1));
  }
  Rational tail_sup(0);
  for (const TailTerm& t : v.tail()) tail_sup = std::max(tail_sup, t.coeff.abs());
  if (tail_sup.is_zero()) return CertifiedReal(std::move(s));
  Rational slack = tail_sup.square() * Rational::pow2(-v.horizon());
  Rational hi = s + slack;
  return CertifiedReal(std::move(s), std::move(hi));
}

// Certified weighted quadratic part, enclosure width at most
// 2^-precision_bits plus the square root of the tail slack.
inline CertifiedReal weighted_l2(const SphereVector& v, int precision_bits) {
  return CertifiedReal::sqrt_of(weighted_l2_squared(v), precision_bits + 2);
}

// The renorming: supremum norm plus weighted quadratic part.
inline CertifiedReal norm_inf2(const SphereVector& v, int precision_bits) {
  return CertifiedReal(sup_norm(v)) + weighted_l2(v, precision_bits);
}

inline CertifiedReal dist_inf2(const SphereVector& u, const SphereVector& v,
                               int precision_bits) {
  return norm_inf2(u - v, precision_bits);
}

namespace detail {

inline CertifiedReal interval_square(const CertifiedReal& nonneg) {
  return CertifiedReal(nonneg.lo().square(), nonneg.hi().square());
}

}  // namespace detail

// Certified distance of the two renorm-normalized vectors,
// ‖u/‖u‖ - v/‖v‖‖ in the sup + quadratic norm, without materializing the
// (irrational) normalized vectors: every coordinate of the difference is an
// interval x/α - y/β, the sup part is the interval maximum, and the
// quadratic part sums interval squares plus the usual tail slack.
inline CertifiedReal normalized_dist_inf2(const SphereVector& u, const SphereVector& v,
                                          int precision_bits) {
  require_same_horizon(u, v);
  if (sup_norm(u).is_zero() || sup_norm(v).is_zero())
    throw sphere_error("cannot normalize the zero vector");
  const CertifiedReal alpha = norm_inf2(u, precision_bits);
  const CertifiedReal beta = norm_inf2(v, precision_bits);
  CertifiedReal sup_part{Rational(0)};
  CertifiedReal quad{Rational(0)};
  for (int n = 0; n < u.horizon(); ++n) {
    const Rational& x = u.coord(n);
    const Rational& y = v.coord(n);
    if (x.is_zero() && y.is_zero()) continue;
    CertifiedReal t = CertifiedReal(x) / alpha - CertifiedReal(y) / beta;
    CertifiedReal a = t.abs();
    sup_part = CertifiedReal::max_of(sup_part, a);
    quad = quad + detail::interval_square(a) * CertifiedReal(Rational::pow2(-(n + 1)));
  }
  std::map<int, std::pair<Rational, Rational>> tails;
  for (const TailTerm& t : u.tail()) tails[t.member].first = t.coeff;
  for (const TailTerm& t : v.tail()) tails[t.member].second = t.coeff;
  Rational tail_sup(0);
  for (const auto& [member, cs] : tails) {
    CertifiedReal t = CertifiedReal(cs.first) / alpha - CertifiedReal(cs.second) / beta;
    CertifiedReal a = t.abs();
    sup_part = CertifiedReal::max_of(sup_part, a);
    tail_sup = std::max(tail_sup, a.hi());
  }
  if (!tail_sup.is_zero())
    quad = quad + CertifiedReal(Rational(0), tail_sup.square() * Rational::pow2(-u.horizon()));
  return sup_part + CertifiedReal::sqrt_of(quad, precision_bits + 2);
}

}  // namespace adfam
