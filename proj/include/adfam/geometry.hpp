#pragma once

// Bridges between vectors and conditions, certified distance searches over
// finite vector sets, shell/cell classification on the renormed unit sphere,
// and the finite-scale evidence suite. Decisions that involve an enclosure
// are retried at doubling precision; a comparison that stays undecided at the
// precision ceiling is a hard error carrying both intervals, never a guess.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "adfam/cliquer.hpp"
#include "adfam/condition.hpp"
#include "adfam/family.hpp"
#include "adfam/finset.hpp"
#include "adfam/interval.hpp"
#include "adfam/order_graph.hpp"
#include "adfam/prng.hpp"
#include "adfam/rational.hpp"
#include "adfam/sphere.hpp"

namespace adfam {

class geometry_error : public std::runtime_error {
 public:
  explicit geometry_error(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Bridges: conditions from functions.

namespace detail {

inline void require_tail_in_family(const Family& fam, const SphereVector& f) {
  for (const TailTerm& t : f.tail())
    if (t.member >= fam.size())
      throw geometry_error("tail references generator " + std::to_string(t.member) +
                           " outside the family");
}

// Least cut m so that above it both target sides coincide with the label
// unions; below it the targets become the correction sets.
inline Condition assemble_condition(const Family& fam, const FinSet& a, const FinSet& b,
                                    const FinSet& target_a, const FinSet& target_b) {
  FinSet ua = fam.union_of(a);
  FinSet ub = fam.union_of(b);
  int m = 0;
  for (const auto& [t, u] : {std::pair(target_a, ua), std::pair(target_b, ub)}) {
    FinSet diff = (t - u) | (u - t);
    if (!diff.empty()) m = std::max(m, diff.max() + 1);
  }
  return Condition(fam, a, b, m, target_a.below(m), target_b.below(m));
}

}  // namespace detail

// Thresholded condition of a function: the labels are the generators whose
// tail value clears eps/2 in the matching direction, the sides are the
// coordinates that do, and the cut is the least one below which the sides
// need explicit corrections.
inline Condition cond_from_function(const Family& fam, const SphereVector& f,
                                    const Rational& eps) {
  if (eps.sign() <= 0 || eps > Rational(1))
    throw geometry_error("threshold must lie in (0, 1], got " + eps.to_string());
  if (f.horizon() != fam.horizon())
    throw geometry_error("function horizon differs from the family horizon");
  detail::require_tail_in_family(fam, f);
  const Rational half = eps / 2;
  FinSet a, b;
  for (const TailTerm& t : f.tail()) {
    if (t.coeff >= half) a.insert(t.member);
    else if (t.coeff <= -half) b.insert(t.member);
  }
  FinSet sa, sb;
  for (int n = 0; n < f.horizon(); ++n) {
    const Rational& x = f.coord(n);
    if (x >= half) sa.insert(n);
    else if (x <= -half) sb.insert(n);
  }
  Condition p = detail::assemble_condition(fam, a, b, sa, sb);
  for (int n = 0; n < f.horizon(); ++n) {
    const Rational& x = f.coord(n);
    if (x >= eps && !p.A().contains(n))
      throw geometry_error("thresholding lost a certain positive coordinate");
    if (x <= -eps && !p.B().contains(n))
      throw geometry_error("thresholding lost a certain negative coordinate");
  }
  return p;
}

// Condition read off the limit values: a generator whose tail value reaches
// 1 - eps (in modulus) contributes those of its elements where the function
// itself stays beyond 1 - 2*eps; elements claimed by both signs cancel.
inline Condition cond_from_limits(const Family& fam, const SphereVector& f,
                                  const Rational& eps) {
  if (eps.sign() <= 0 || eps >= Rational(1, 2))
    throw geometry_error("limit threshold must lie in (0, 1/2), got " + eps.to_string());
  if (f.horizon() != fam.horizon())
    throw geometry_error("function horizon differs from the family horizon");
  detail::require_tail_in_family(fam, f);
  const Rational limit_cut = Rational(1) - eps;
  const Rational point_cut = Rational(1) - eps * 2;
  FinSet a, b;
  for (const TailTerm& t : f.tail()) {
    if (t.coeff >= limit_cut) a.insert(t.member);
    else if (t.coeff <= -limit_cut) b.insert(t.member);
  }
  FinSet a0, b0;
  for (int i : a.elements())
    for (int n : fam.member(i).elements())
      if (f.coord(n) > point_cut) a0.insert(n);
  for (int j : b.elements())
    for (int n : fam.member(j).elements())
      if (f.coord(n) < -point_cut) b0.insert(n);
  return detail::assemble_condition(fam, a, b, a0 - b0, b0 - a0);
}

// ---------------------------------------------------------------------------
// Certified distance comparisons.

enum class NormKind { inf, inf2 };

inline std::string to_string(NormKind k) { return k == NormKind::inf ? "inf" : "inf2"; }

namespace detail {

// Certified test `dist(u, v) >= t` (or > t when strict). The plain sup norm
// decides exactly; the renormed distance is retried at doubling precision and
// an enclosure still straddling t at the ceiling raises undecided_error.
inline bool dist_at_least(const SphereVector& u, const SphereVector& v, const Rational& t,
                          bool strict, NormKind norm, int precision_bits,
                          int max_precision_bits, const std::string& label) {
  if (norm == NormKind::inf) {
    Rational d = dist_inf(u, v);
    return strict ? d > t : d >= t;
  }
  for (int bits = precision_bits;; bits *= 2) {
    CertifiedReal d = dist_inf2(u, v, bits);
    if (strict) {
      if (d.lo() > t) return true;
      if (d.hi() <= t) return false;
    } else {
      if (d.lo() >= t) return true;
      if (d.hi() < t) return false;
    }
    if (bits >= max_precision_bits)
      throw undecided_error("distance comparison for " + label +
                                " undecided at the precision ceiling",
                            d.to_string(), "[" + t.to_string() + "]");
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Exact separated subsets and diameter covers.

struct SeparatedSubset {
  std::vector<int> members;
  bool exact = true;
};

// Largest subset of vectors that is pairwise at distance >= threshold
// (> when strict). Exact branch-and-bound search; refuses more than 64
// vectors rather than silently approximating.
inline SeparatedSubset separated_subset(const std::vector<SphereVector>& vs,
                                        const Rational& threshold, bool strict, NormKind norm,
                                        int precision_bits = 64, int max_precision_bits = 1024) {
  const int n = static_cast<int>(vs.size());
  if (n == 0) return {};
  if (n > 64)
    throw geometry_error("separated-subset search is exact and limited to 64 vectors, got " +
                         std::to_string(n));
  for (int i = 1; i < n; ++i) require_same_horizon(vs[0], vs[static_cast<size_t>(i)]);
  std::vector<uint64_t> adj(static_cast<size_t>(n), 0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const std::string label =
          "vectors " + std::to_string(i) + " and " + std::to_string(j);
      if (detail::dist_at_least(vs[static_cast<size_t>(i)], vs[static_cast<size_t>(j)],
                                threshold, strict, norm, precision_bits, max_precision_bits,
                                label)) {
        adj[static_cast<size_t>(i)] |= uint64_t{1} << j;
        adj[static_cast<size_t>(j)] |= uint64_t{1} << i;
      }
    }
  SeparatedSubset out;
  out.members = max_clique_bitset(n, adj);
  out.exact = true;
  for (size_t x = 0; x < out.members.size(); ++x)
    for (size_t y = x + 1; y < out.members.size(); ++y)
      if (!detail::dist_at_least(vs[static_cast<size_t>(out.members[x])],
                                 vs[static_cast<size_t>(out.members[y])], threshold, strict,
                                 norm, precision_bits, max_precision_bits, "certificate pair"))
        throw geometry_error("separated subset failed its own re-measurement");
  return out;
}

struct DiameterCover {
  std::vector<int> class_of;
  int classes = 0;
  bool exact = false;
};

// Partition of the vectors into classes of pairwise distance <= bound:
// color the conflict graph (edges where the distance certifiedly exceeds the
// bound), exactly up to 16 vectors, greedily beyond; every class is
// re-measured before returning.
inline DiameterCover diameter_cover(const std::vector<SphereVector>& vs, const Rational& bound,
                                    NormKind norm, int precision_bits = 64,
                                    int max_precision_bits = 1024) {
  const int n = static_cast<int>(vs.size());
  DiameterCover out;
  if (n == 0) return out;
  for (int i = 1; i < n; ++i) require_same_horizon(vs[0], vs[static_cast<size_t>(i)]);
  std::vector<std::vector<char>> conflict(static_cast<size_t>(n),
                                          std::vector<char>(static_cast<size_t>(n), 0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const std::string label =
          "vectors " + std::to_string(i) + " and " + std::to_string(j);
      if (detail::dist_at_least(vs[static_cast<size_t>(i)], vs[static_cast<size_t>(j)], bound,
                                /*strict=*/true, norm, precision_bits, max_precision_bits,
                                label)) {
        conflict[static_cast<size_t>(i)][static_cast<size_t>(j)] = 1;
        conflict[static_cast<size_t>(j)][static_cast<size_t>(i)] = 1;
      }
    }
  if (n <= 16) {
    std::vector<int> assign;
    exact_chromatic(conflict, &assign);
    out.class_of = std::move(assign);
    out.exact = true;
  } else {
    out.class_of = dsatur_coloring(conflict);
    out.exact = false;
  }
  out.classes = out.class_of.empty()
                    ? 0
                    : *std::max_element(out.class_of.begin(), out.class_of.end()) + 1;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (out.class_of[static_cast<size_t>(i)] == out.class_of[static_cast<size_t>(j)] &&
          detail::dist_at_least(vs[static_cast<size_t>(i)], vs[static_cast<size_t>(j)], bound,
                                /*strict=*/true, norm, precision_bits, max_precision_bits,
                                "cover certificate"))
        throw geometry_error("diameter cover produced a class exceeding its bound");
  return out;
}

// ---------------------------------------------------------------------------
// Cells of the renormed unit sphere.

struct SphereCell {
  int k = 0;        // quadratic-part level: certified quadratic part > 1/k
  int i = 0;        // sup-part slot: i/4k <= sup <= (i+1)/4k
  Rational c;       // the cell's contraction constant 1/k
  friend bool operator==(const SphereCell& s, const SphereCell& t) {
    return s.k == t.k && s.i == t.i;
  }
};

// Classify near-unit vectors of the renormed sphere into cells: the least
// level k <= 64 whose quadratic threshold 1/k is certifiedly exceeded, and
// the least sup slot i <= 4k-2 containing the exact sup norm. Each vector
// must first certify |‖v‖ - 1| <= sphere_tolerance.
inline std::vector<SphereCell> sphere_cells(const std::vector<SphereVector>& vs,
                                            const Rational& sphere_tolerance,
                                            int precision_bits = 64,
                                            int max_precision_bits = 1024) {
  if (sphere_tolerance.sign() < 0)
    throw geometry_error("sphere tolerance must be non-negative");
  std::vector<SphereCell> out;
  for (size_t idx = 0; idx < vs.size(); ++idx) {
    const SphereVector& v = vs[idx];
    const std::string label = "vector " + std::to_string(idx);
    const Rational lo_bound = Rational(1) - sphere_tolerance;
    const Rational hi_bound = Rational(1) + sphere_tolerance;
    for (int bits = precision_bits;; bits *= 2) {
      CertifiedReal norm = norm_inf2(v, bits);
      if (norm.lo() >= lo_bound && norm.hi() <= hi_bound) break;
      if (norm.hi() < lo_bound || norm.lo() > hi_bound)
        throw geometry_error(label + " is not on the unit sphere within tolerance (norm " +
                             norm.to_string() + ")");
      if (bits >= max_precision_bits)
        throw undecided_error(label + " sphere membership undecided at the precision ceiling",
                              norm.to_string(),
                              "[" + lo_bound.to_string() + ", " + hi_bound.to_string() + "]");
    }
    const Rational s = sup_norm(v);
    int level = 0;
    for (int k = 1; k <= 64 && level == 0; ++k) {
      const Rational cut(1, k);
      for (int bits = precision_bits;; bits *= 2) {
        CertifiedReal q = weighted_l2(v, bits);
        if (q.lo() > cut) {
          level = k;
          break;
        }
        if (q.hi() <= cut) break;
        if (bits >= max_precision_bits)
          throw undecided_error(label + " quadratic threshold 1/" + std::to_string(k) +
                                    " undecided at the precision ceiling",
                                q.to_string(), "[" + cut.to_string() + "]");
      }
    }
    if (level == 0)
      throw geometry_error(label + ": no level up to 64 has a certified quadratic excess");
    int slot = -1;
    for (int i = 0; i <= 4 * level - 2; ++i)
      if (Rational(i, 4 * level) <= s && s <= Rational(i + 1, 4 * level)) {
        slot = i;
        break;
      }
    if (slot < 0)
      throw geometry_error(label + ": sup part " + s.to_string() +
                           " lies outside every slot at level " + std::to_string(level));
    out.push_back({level, slot, Rational(1, level)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Quantitative inequality checks (exact or certified; never a float guess).

// Sup-norm squeeze for two vectors sharing a cell with contraction constant
// c: ‖u - v‖ <= (1 - c) * ‖u/‖u‖ - v/‖v‖‖ + c/4 + slack, everything in the
// sup norm, where normalization is exact. Returns whether it holds.
inline bool check_sup_squeeze(const SphereVector& u, const SphereVector& v, const Rational& c,
                              const Rational& slack) {
  if (c.sign() <= 0 || c > Rational(1))
    throw geometry_error("contraction constant must lie in (0, 1]");
  const Rational su = sup_norm(u);
  const Rational sv = sup_norm(v);
  if (su.sign() <= 0 || sv.sign() <= 0)
    throw geometry_error("sup-norm squeeze needs vectors with positive sup parts");
  const Rational lhs = dist_inf(u, v);
  const Rational nd = dist_inf(scale(u, Rational(1) / su), scale(v, Rational(1) / sv));
  return lhs <= (Rational(1) - c) * nd + c / 4 + slack;
}

// Shell bound in the renormed norm: for 0 < a <= ‖u‖, ‖v‖ <= b the distance
// obeys ‖u - v‖ <= b * ‖u/‖u‖ - v/‖v‖‖ + (b - a) + slack. Both sides are
// enclosures; the comparison is certified or retried, never guessed.
inline bool check_shell_distance_bound(const SphereVector& u, const SphereVector& v,
                                       const Rational& a, const Rational& b,
                                       const Rational& slack, int precision_bits = 64,
                                       int max_precision_bits = 1024) {
  if (a.sign() <= 0 || a > b) throw geometry_error("shell bounds need 0 < a <= b");
  for (int bits = precision_bits;; bits *= 2) {
    CertifiedReal nu = norm_inf2(u, bits);
    CertifiedReal nv = norm_inf2(v, bits);
    const bool inside = nu.lo() >= a && nu.hi() <= b && nv.lo() >= a && nv.hi() <= b;
    if (inside) break;
    if (nu.hi() < a || nu.lo() > b || nv.hi() < a || nv.lo() > b)
      throw geometry_error("vector norms leave the shell [" + a.to_string() + ", " +
                           b.to_string() + "]");
    if (bits >= max_precision_bits)
      throw undecided_error("shell membership undecided at the precision ceiling",
                            nu.to_string(), nv.to_string());
  }
  for (int bits = precision_bits;; bits *= 2) {
    CertifiedReal lhs = dist_inf2(u, v, bits);
    CertifiedReal rhs = CertifiedReal(b) * normalized_dist_inf2(u, v, bits) +
                        CertifiedReal(b - a + slack);
    auto d = lhs.decide_le(rhs);
    if (d) return *d;
    if (bits >= max_precision_bits)
      throw undecided_error("shell distance bound undecided at the precision ceiling",
                            lhs.to_string(), rhs.to_string());
  }
}

// Separation gain of the renorming: sup-unit vectors whose quadratic parts
// stay below 1 - delta and whose sup distance is 2 - eps' have renormed
// normalized distance at least 1 + eps - eps' with eps = 2/(2 - delta) - 1.
// Returns whether the certified gain holds within slack.
inline bool check_renormed_separation_gain(const SphereVector& u, const SphereVector& v,
                                           const Rational& delta, const Rational& slack,
                                           int precision_bits = 64,
                                           int max_precision_bits = 1024) {
  if (delta.sign() <= 0 || delta >= Rational(2))
    throw geometry_error("flatness parameter must lie in (0, 2)");
  if (sup_norm(u) != Rational(1) || sup_norm(v) != Rational(1))
    throw geometry_error("separation gain needs sup-unit vectors");
  const Rational flat_cut = Rational(1) - delta;
  for (const SphereVector* w : {&u, &v})
    for (int bits = precision_bits;; bits *= 2) {
      CertifiedReal q = weighted_l2(*w, bits);
      if (q.hi() <= flat_cut) break;
      if (q.lo() > flat_cut)
        throw geometry_error("quadratic part " + q.to_string() + " exceeds the flatness bound " +
                             flat_cut.to_string());
      if (bits >= max_precision_bits)
        throw undecided_error("flatness undecided at the precision ceiling", q.to_string(),
                              "[" + flat_cut.to_string() + "]");
    }
  const Rational eps_prime = Rational(2) - dist_inf(u, v);
  const Rational eps = Rational(2) / (Rational(2) - delta) - Rational(1);
  const Rational target = Rational(1) + eps - eps_prime - slack;
  for (int bits = precision_bits;; bits *= 2) {
    CertifiedReal d = normalized_dist_inf2(u, v, bits);
    if (d.lo() >= target) return true;
    if (d.hi() < target) return false;
    if (bits >= max_precision_bits)
      throw undecided_error("separation gain undecided at the precision ceiling", d.to_string(),
                            "[" + target.to_string() + "]");
  }
}

// The limit-read condition refines the threshold condition: for eps < 1/3
// both sides (labels and ground sets) of the former are contained in the
// latter's.
inline bool limit_condition_refines_threshold(const Family& fam, const SphereVector& f,
                                              const Rational& eps) {
  if (eps.sign() <= 0 || eps >= Rational(1, 3))
    throw geometry_error("refinement check needs eps in (0, 1/3)");
  Condition from_limits = cond_from_limits(fam, f, eps);
  Condition from_threshold = cond_from_function(fam, f, eps);
  return from_limits.a().subset_of(from_threshold.a()) &&
         from_limits.b().subset_of(from_threshold.b()) &&
         from_limits.A().subset_of(from_threshold.A()) &&
         from_limits.B().subset_of(from_threshold.B());
}

// When the thresholded conditions of two sup-bounded functions are
// compatible, their sup distance: returned for the caller to compare against
// 1 + eps; nullopt when the conditions are incompatible (nothing to bound).
inline std::optional<Rational> compatible_function_gap(const Family& fam, const SphereVector& f,
                                                       const SphereVector& g,
                                                       const Rational& eps) {
  if (sup_norm(f) > Rational(1) || sup_norm(g) > Rational(1))
    throw geometry_error("function gap needs sup norms at most 1");
  Condition pf = cond_from_function(fam, f, eps);
  Condition pg = cond_from_function(fam, g, eps);
  if (!compatible(pf, pg)) return std::nullopt;
  return dist_inf(f, g);
}

// ---------------------------------------------------------------------------
// Renormed separation of conditions avoiding an initial segment.

// Incompatible conditions whose sides avoid [0, m] (inclusive) have renormed
// normalized distance at least 2 - 2/(m+1); returns the certified distance
// enclosure once that bound is certified.
inline CertifiedReal renorm_separation_check(const Condition& p, const Condition& q, int m,
                                             int precision_bits = 64,
                                             int max_precision_bits = 1024) {
  require_same_family(p, q);
  if (m < 0) throw geometry_error("initial segment length must be non-negative");
  if (compatible(p, q))
    throw geometry_error("conditions are compatible; there is no separation to certify");
  const FinSet segment = FinSet::interval(0, m + 1);
  for (const Condition* r : {&p, &q})
    if ((r->A() | r->B()).intersects(segment))
      throw geometry_error("condition meets the initial segment [0, " + std::to_string(m) +
                           "]");
  const Rational bound = Rational(2) - Rational(2, m + 1);
  const SphereVector fu = f_of(p);
  const SphereVector fv = f_of(q);
  for (int bits = precision_bits;; bits *= 2) {
    CertifiedReal d = normalized_dist_inf2(fu, fv, bits);
    if (d.lo() >= bound) return d;
    if (d.hi() < bound)
      throw geometry_error("renormed separation " + d.to_string() + " falls below the bound " +
                           bound.to_string());
    if (bits >= max_precision_bits)
      throw undecided_error("renormed separation undecided at the precision ceiling",
                            d.to_string(), "[" + bound.to_string() + "]");
  }
}

// ---------------------------------------------------------------------------
// Pairings and their difference vectors.

// Two generator choices per index, all choices distinct across the pairing.
struct Pairing {
  std::vector<int> plus;
  std::vector<int> minus;
};

// The difference vectors 1_{plus} - 1_{minus} of a pairing. With
// agree_below >= 0, only pairs whose two generators share their trace on
// [0, agree_below] survive; differencing then cancels that whole segment.
inline std::vector<SphereVector> pairing_vectors(const Family& fam, const Pairing& pairing,
                                                 int agree_below = -1) {
  if (pairing.plus.size() != pairing.minus.size())
    throw geometry_error("pairing halves differ in length");
  std::set<int> used;
  for (size_t t = 0; t < pairing.plus.size(); ++t) {
    for (int i : {pairing.plus[t], pairing.minus[t]}) {
      if (i < 0 || i >= fam.size())
        throw geometry_error("pairing references generator " + std::to_string(i) +
                             " outside the family");
      if (!used.insert(i).second)
        throw geometry_error("pairing reuses generator " + std::to_string(i));
    }
    if (pairing.plus[t] == pairing.minus[t])
      throw geometry_error("pairing maps index " + std::to_string(t) + " to one generator twice");
  }
  std::vector<SphereVector> out;
  for (size_t t = 0; t < pairing.plus.size(); ++t) {
    const FinSet& mp = fam.member(pairing.plus[t]);
    const FinSet& mm = fam.member(pairing.minus[t]);
    if (agree_below >= 0 && mp.below(agree_below + 1) != mm.below(agree_below + 1)) continue;
    std::vector<Rational> c(static_cast<size_t>(fam.horizon()));
    for (int n : (mp - mm).elements()) c[static_cast<size_t>(n)] = Rational(1);
    for (int n : (mm - mp).elements()) c[static_cast<size_t>(n)] = Rational(-1);
    out.emplace_back(fam.horizon(), std::move(c),
                     std::vector<TailTerm>{{pairing.plus[t], Rational(1)},
                                           {pairing.minus[t], Rational(-1)}});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cover by closeness of the weighted image.

// Greedy leader clustering on the weighted quadratic distance: each vector
// joins the first leader certifiedly within eps/2, so classes are pairwise
// within eps; every class is re-measured before returning.
inline DiameterCover weighted_image_cover(const std::vector<SphereVector>& vs,
                                          const Rational& eps, int precision_bits = 64,
                                          int max_precision_bits = 1024) {
  if (eps.sign() <= 0) throw geometry_error("ball diameter must be positive");
  const int n = static_cast<int>(vs.size());
  DiameterCover out;
  out.class_of.assign(static_cast<size_t>(n), -1);
  if (n == 0) return out;
  for (int i = 1; i < n; ++i) require_same_horizon(vs[0], vs[static_cast<size_t>(i)]);
  const Rational radius = eps / 2;
  std::vector<int> leaders;
  auto quad_dist_within = [&](const SphereVector& x, const SphereVector& y, const Rational& cut,
                              const std::string& label) {
    for (int bits = precision_bits;; bits *= 2) {
      CertifiedReal d = weighted_l2(x - y, bits);
      if (d.hi() <= cut) return true;
      if (d.lo() > cut) return false;
      if (bits >= max_precision_bits)
        throw undecided_error("weighted image distance for " + label +
                                  " undecided at the precision ceiling",
                              d.to_string(), "[" + cut.to_string() + "]");
    }
  };
  for (int i = 0; i < n; ++i) {
    int home = -1;
    for (size_t c = 0; c < leaders.size() && home < 0; ++c)
      if (quad_dist_within(vs[static_cast<size_t>(i)],
                           vs[static_cast<size_t>(leaders[c])], radius,
                           "vector " + std::to_string(i)))
        home = static_cast<int>(c);
    if (home < 0) {
      home = static_cast<int>(leaders.size());
      leaders.push_back(i);
    }
    out.class_of[static_cast<size_t>(i)] = home;
  }
  out.classes = static_cast<int>(leaders.size());
  out.exact = false;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (out.class_of[static_cast<size_t>(i)] == out.class_of[static_cast<size_t>(j)] &&
          !quad_dist_within(vs[static_cast<size_t>(i)], vs[static_cast<size_t>(j)], eps,
                            "certificate pair"))
        throw geometry_error("weighted image cover produced a class wider than its ball");
  return out;
}

// ---------------------------------------------------------------------------
// Finite-scale evidence suite.

struct EvidenceCheck {
  std::string name;
  bool ran = false;
  bool passed = false;
  std::string note;
};

struct EvidenceReport {
  // Everything below is finite-scale evidence about one concrete family; no
  // check ever claims a statement about the infinite objects it mirrors.
  std::string scale = "finite-scale evidence";
  std::vector<EvidenceCheck> checks;
  bool all_passed() const {
    for (const EvidenceCheck& c : checks)
      if (c.ran && !c.passed) return false;
    return true;
  }
};

namespace detail {

inline std::vector<Condition> sample_lifted_conditions(const Family& fam, int want,
                                                       Prng& rng) {
  std::vector<Condition> out;
  std::set<std::pair<std::vector<int>, std::vector<int>>> seen;
  int guard = 0;
  while (static_cast<int>(out.size()) < want && guard < want * 200) {
    ++guard;
    FinSet a, b;
    const int asz = 1 + static_cast<int>(rng.below(2));
    const int bsz = 1 + static_cast<int>(rng.below(2));
    for (int t = 0; t < asz; ++t) a.insert(static_cast<int>(rng.below(static_cast<uint64_t>(fam.size()))));
    for (int t = 0; t < bsz && b.size() < bsz; ++t) {
      int j = static_cast<int>(rng.below(static_cast<uint64_t>(fam.size())));
      if (!a.contains(j)) b.insert(j);
    }
    if (a.empty() || b.empty() || a.intersects(b)) continue;
    if (!seen.insert({a.elements(), b.elements()}).second) continue;
    out.push_back(condition_of(Vertex{a, b}, fam));
  }
  return out;
}

}  // namespace detail

// Runs every evidence check the family's metadata supports and reports the
// rest as skipped with the reason. `eps` is the closeness tolerance the
// checks quote; distances themselves are exact or certified.
inline EvidenceReport verify_dichotomy_suite(const Family& fam, int sample_size,
                                             const Rational& eps, uint64_t seed) {
  if (sample_size < 2) throw geometry_error("sample size must be at least 2");
  if (eps.sign() <= 0 || eps >= Rational(1))
    throw geometry_error("tolerance must lie in (0, 1)");
  Prng rng(seed);
  EvidenceReport report;

  {  // Compatibility mirrors closeness of the signed indicators, both ways.
    EvidenceCheck c{.name = "two-point-bridge", .ran = true, .passed = false, .note = {}};
    auto ps = detail::sample_lifted_conditions(fam, sample_size, rng);
    std::vector<SphereVector> fs;
    fs.reserve(ps.size());
    for (const Condition& p : ps) fs.push_back(f_of(p));
    int pairs = 0, bad = 0;
    for (size_t x = 0; x < ps.size(); ++x)
      for (size_t y = x + 1; y < ps.size(); ++y) {
        ++pairs;
        const Rational d = dist_inf(fs[x], fs[y]);
        const bool comp = compatible(ps[x], ps[y]);
        if (comp != (d <= Rational(1)) || (!comp) != (d == Rational(2))) ++bad;
      }
    c.passed = bad == 0 && pairs > 0;
    c.note = std::to_string(ps.size()) + " conditions, " + std::to_string(pairs) +
             " pairs, " + std::to_string(bad) + " mismatches";
    report.checks.push_back(std::move(c));
  }

  if (fam.meta_as<EmbeddingMeta>()) {
    EvidenceCheck c{.name = "centered-directions", .ran = true, .passed = false, .note = {}};
    auto ps = detail::sample_lifted_conditions(fam, sample_size, rng);
    auto coloring = centered_decomposition(fam, ps);
    int bad = 0;
    for (size_t x = 0; x < ps.size(); ++x)
      for (size_t y = x + 1; y < ps.size(); ++y)
        if (coloring.class_of[x] == coloring.class_of[y] &&
            dist_inf(f_of(ps[x]), f_of(ps[y])) > Rational(1) + eps)
          ++bad;
    c.passed = bad == 0;
    c.note = std::to_string(coloring.dictionary.size()) + " classes over " +
             std::to_string(ps.size()) + " conditions, " + std::to_string(bad) +
             " pairs beyond 1+eps";
    report.checks.push_back(std::move(c));
  } else {
    report.checks.push_back({.name = "centered-directions",
                             .ran = false,
                             .passed = false,
                             .note = "skipped: family carries no rational embedding"});
  }

  if (fam.meta_as<LuzinMeta>()) {
    EvidenceCheck c{.name = "antichain-directions", .ran = true, .passed = false, .note = {}};
    // Pair up distinct generators, bound every within-pair intersection by
    // one shared cut (the decomposition wants a common (m, E, F)), and drop
    // pairs whose sides die below that cut.
    std::vector<int> perm(static_cast<size_t>(fam.size()));
    for (int i = 0; i < fam.size(); ++i) perm[static_cast<size_t>(i)] = i;
    for (int i = fam.size() - 1; i > 0; --i)
      std::swap(perm[static_cast<size_t>(i)],
                perm[static_cast<size_t>(rng.below(static_cast<uint64_t>(i + 1)))]);
    std::vector<std::pair<int, int>> pairs;
    int cut = 0;
    for (int t = 0; t + 1 < fam.size() && static_cast<int>(pairs.size()) < sample_size;
         t += 2) {
      int i = perm[static_cast<size_t>(t)], j = perm[static_cast<size_t>(t + 1)];
      FinSet clash = fam.member(i) & fam.member(j);
      if (!clash.empty()) cut = std::max(cut, clash.max() + 1);
      pairs.emplace_back(i, j);
    }
    std::vector<Condition> ps;
    for (auto [i, j] : pairs) {
      if (fam.member(i).empty() || fam.member(i).max() < cut) continue;
      if (fam.member(j).empty() || fam.member(j).max() < cut) continue;
      ps.push_back(make_condition(fam, FinSet{i}, FinSet{j}, cut));
    }
    if (ps.size() < 2) {
      c.ran = false;
      c.note = "skipped: not enough usable generator pairs above the shared cut";
    } else {
      auto coloring = luzin_antichain_decomposition(fam, ps);
      int bad = 0;
      for (size_t x = 0; x < ps.size(); ++x)
        for (size_t y = x + 1; y < ps.size(); ++y)
          if (coloring.class_of[x] == coloring.class_of[y] &&
              dist_inf(f_of(ps[x]), f_of(ps[y])) < Rational(2) - eps)
            ++bad;
      int classes = *std::max_element(coloring.class_of.begin(), coloring.class_of.end()) + 1;
      c.passed = bad == 0;
      c.note = std::to_string(classes) + " classes over " + std::to_string(ps.size()) +
               " conditions, " + std::to_string(bad) + " pairs below 2-eps" +
               (coloring.proof_faithful ? "" : " (greedy fallback)");
    }
    report.checks.push_back(std::move(c));
  } else {
    report.checks.push_back({.name = "antichain-directions",
                             .ran = false,
                             .passed = false,
                             .note = "skipped: family carries no sharing witness"});
  }

  if (const auto* sm = fam.meta_as<SteppransMeta>()) {
    EvidenceCheck c{.name = "seeded-equilateral", .ran = true, .passed = false, .note = {}};
    std::map<int, std::pair<int, int>> sides;  // seed -> (side-0 member, side-1 member)
    for (int i = 0; i < fam.size(); ++i) {
      auto [s, side] = sm->tags[static_cast<size_t>(i)];
      (side == 0 ? sides[s].first : sides[s].second) = i;
    }
    std::vector<Condition> ps;
    for (const auto& [s, pair] : sides)
      ps.push_back(condition_of(Vertex{FinSet{pair.first}, FinSet{pair.second}}, fam));
    int pairs = 0, bad = 0;
    for (size_t x = 0; x < ps.size(); ++x)
      for (size_t y = x + 1; y < ps.size(); ++y) {
        ++pairs;
        if (compatible(ps[x], ps[y]) || dist_inf(f_of(ps[x]), f_of(ps[y])) != Rational(2))
          ++bad;
      }
    c.passed = bad == 0 && pairs > 0;
    c.note = std::to_string(ps.size()) + " seeded conditions, " + std::to_string(bad) +
             " pairs not mutually separated by 2";
    report.checks.push_back(std::move(c));
  } else {
    report.checks.push_back({.name = "seeded-equilateral",
                             .ran = false,
                             .passed = false,
                             .note = "skipped: family carries no tree seeds"});
  }

  return report;
}

}  // namespace adfam
