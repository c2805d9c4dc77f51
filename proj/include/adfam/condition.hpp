#pragma once

// Conditions of the splitting order over an almost-disjoint family: label
// sets (a, b) of member indices, a modification bound m, correction sets
// E, F below m, and the materialized ground sets A, B. Compatibility is
// decided in two stages — labels first (the conceptually infinite tails),
// then exact bits — which agrees with the untruncated semantics whenever the
// family certificate holds.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "adfam/core_sets.hpp"
#include "adfam/family.hpp"
#include "adfam/finset.hpp"

namespace adfam {

class condition_error : public std::runtime_error {
 public:
  explicit condition_error(const std::string& what) : std::runtime_error(what) {}
};

class Condition {
 public:
  Condition(const Family& fam, FinSet a, FinSet b, int m, FinSet E = {}, FinSet F = {})
      : fam_(&fam), a_(std::move(a)), b_(std::move(b)), m_(m), E_(std::move(E)), F_(std::move(F)) {
    if (m_ < 0) throw condition_error("modification bound must be non-negative");
    if (a_.intersects(b_))
      throw condition_error("label sets overlap at member " +
                            std::to_string((a_ & b_).min()));
    for (const FinSet* s : {&a_, &b_})
      if (!s->empty() && s->max() >= fam.size())
        throw condition_error("label " + std::to_string(s->max()) + " outside the family");
    for (const FinSet* s : {&E_, &F_})
      if (!s->empty() && s->max() >= m_)
        throw condition_error("correction element " + std::to_string(s->max()) +
                              " not below the modification bound");
    if (E_.intersects(F_))
      throw condition_error("correction sets overlap at " + std::to_string((E_ & F_).min()));
    A_ = (fam.union_of(a_) - FinSet::interval(0, m_)) | E_;
    B_ = (fam.union_of(b_) - FinSet::interval(0, m_)) | F_;
    A_ = A_.with_horizon(fam.horizon());
    B_ = B_.with_horizon(fam.horizon());
    if (A_.intersects(B_))
      throw condition_error("materialized sides overlap at ground element " +
                            std::to_string((A_ & B_).min()));
  }

  const Family& family() const { return *fam_; }
  const FinSet& a() const { return a_; }
  const FinSet& b() const { return b_; }
  int m() const { return m_; }
  const FinSet& E() const { return E_; }
  const FinSet& F() const { return F_; }
  const FinSet& A() const { return A_; }
  const FinSet& B() const { return B_; }

  friend bool operator==(const Condition& p, const Condition& q) {
    return p.fam_ == q.fam_ && p.a_ == q.a_ && p.b_ == q.b_ && p.m_ == q.m_ && p.E_ == q.E_ &&
           p.F_ == q.F_;
  }
  friend bool operator!=(const Condition& p, const Condition& q) { return !(p == q); }

 private:
  const Family* fam_;
  FinSet a_, b_;
  int m_;
  FinSet E_, F_;
  FinSet A_, B_;
};

inline Condition make_condition(const Family& fam, FinSet a, FinSet b, int m, FinSet E = {},
                                FinSet F = {}) {
  return Condition(fam, std::move(a), std::move(b), m, std::move(E), std::move(F));
}

inline void require_same_family(const Condition& p, const Condition& q) {
  if (&p.family() != &q.family())
    throw condition_error("conditions belong to different families");
}

// Two-stage test for A_p ∩ B_q = ∅ = A_q ∩ B_p. A shared label means the
// (conceptually infinite) generator tails overlap even if the truncated bits
// do not, so labels are consulted first.
inline bool compatible(const Condition& p, const Condition& q) {
  require_same_family(p, q);
  if (p.a().intersects(q.b()) || q.a().intersects(p.b())) return false;
  return !p.A().intersects(q.B()) && !q.A().intersects(p.B());
}

// Containment order: r extends p when r's sides contain p's.
inline bool leq(const Condition& r, const Condition& p) {
  require_same_family(r, p);
  return p.A().subset_of(r.A()) && p.B().subset_of(r.B());
}

// Canonical common extension (A_p ∪ A_q, B_p ∪ B_q).
inline Condition meet(const Condition& p, const Condition& q) {
  if (!compatible(p, q)) throw condition_error("meet of incompatible conditions");
  int m = std::max(p.m(), q.m());
  FinSet E = (p.A() | q.A()).below(m);
  FinSet F = (p.B() | q.B()).below(m);
  Condition r(p.family(), p.a() | q.a(), p.b() | q.b(), m, E, F);
  return r;
}

inline bool essentially_distinct(const Condition& p, const Condition& q) {
  require_same_family(p, q);
  return p.a() != q.a() && p.b() != q.b();
}

// A finite set of conditions has a single common extension exactly when the
// unions of the two sides stay disjoint.
inline bool jointly_centered(const std::vector<Condition>& conds) {
  FinSet ua, ub;
  for (const Condition& p : conds) {
    ua |= p.A();
    ub |= p.B();
  }
  return !ua.intersects(ub);
}

// ---------------------------------------------------------------------------
// Batch normalization.

struct NormalizedBatch {
  int k = 0, l = 0, m = 0;
  FinSet E, F;
  std::vector<Condition> primes;  // parallel to gamma
};

struct ThinResult {
  std::vector<int> gamma;  // indices into the input list, ascending
  NormalizedBatch batch;
};

// Extracts a batch with constant label-set sizes, shared (m, E, F), Δ-system
// roots removed from both sides, full cross-disjointness of the reduced
// label sets, and the pairwise compatibility relation preserved exactly
// (checked exhaustively before returning).
inline ThinResult thin_normalize(const Family& fam, const std::vector<Condition>& conds) {
  if (conds.size() < 2) throw condition_error("need at least two conditions");
  for (const Condition& p : conds)
    if (&p.family() != &fam) throw condition_error("conditions belong to different families");

  // Raise every condition to one modification bound above the family ceiling;
  // re-deriving the corrections from the materialized sets preserves (A, B)
  // and therefore compatibility.
  int m2 = fam.intersection_ceiling();
  for (const Condition& p : conds) m2 = std::max(m2, p.m());
  std::vector<Condition> lifted;
  lifted.reserve(conds.size());
  for (const Condition& p : conds)
    lifted.emplace_back(fam, p.a(), p.b(), m2, p.A().below(m2), p.B().below(m2));

  // Bucket by (|a|, |b|, E, F); try buckets largest-first.
  std::map<std::tuple<int, int, std::vector<int>, std::vector<int>>, std::vector<int>> buckets;
  for (size_t i = 0; i < lifted.size(); ++i)
    buckets[{lifted[i].a().size(), lifted[i].b().size(), lifted[i].E().elements(),
             lifted[i].F().elements()}]
        .push_back(static_cast<int>(i));
  std::vector<const std::vector<int>*> order;
  for (auto& [key, idx] : buckets) order.push_back(&idx);
  std::stable_sort(order.begin(), order.end(),
                   [](const auto* x, const auto* y) { return x->size() > y->size(); });

  // Assemble, post-verify, and return a batch from original indices and
  // their root-stripped label sets.
  auto emit = [&](const std::vector<int>& members, const std::vector<FinSet>& ra,
                  const std::vector<FinSet>& rb) {
    ThinResult out;
    out.gamma = members;
    std::sort(out.gamma.begin(), out.gamma.end());
    out.batch.m = m2;
    out.batch.E = lifted[static_cast<size_t>(members[0])].E();
    out.batch.F = lifted[static_cast<size_t>(members[0])].F();
    std::vector<size_t> perm(members.size());
    for (size_t t = 0; t < members.size(); ++t)
      perm[t] = static_cast<size_t>(
          std::find(members.begin(), members.end(), out.gamma[t]) - members.begin());
    for (size_t t = 0; t < members.size(); ++t)
      out.batch.primes.emplace_back(fam, ra[perm[t]], rb[perm[t]], m2, out.batch.E, out.batch.F);
    out.batch.k = out.batch.primes[0].a().size();
    out.batch.l = out.batch.primes[0].b().size();
    // Exhaustive post-verification of compatibility preservation.
    for (size_t x = 0; x < out.gamma.size(); ++x)
      for (size_t y = x + 1; y < out.gamma.size(); ++y) {
        bool before = compatible(conds[static_cast<size_t>(out.gamma[x])],
                                 conds[static_cast<size_t>(out.gamma[y])]);
        bool after = compatible(out.batch.primes[x], out.batch.primes[y]);
        if (before != after)
          throw condition_error("normalization failed to preserve compatibility");
      }
    return out;
  };

  for (const auto* bucket : order) {
    if (bucket->size() < 2) continue;
    // Δ-system pass on the a-sides.
    std::vector<FinSet> as;
    for (int i : *bucket) as.push_back(lifted[static_cast<size_t>(i)].a());
    auto ds_a = delta_system(as, 2);
    if (!ds_a) continue;  // unreachable: any two sets form a Δ-system
    std::vector<int> g1;
    for (int t : ds_a->petal_indices) g1.push_back((*bucket)[static_cast<size_t>(t)]);
    // Δ-system pass on the b-sides of the survivors.
    std::vector<FinSet> bs;
    for (int i : g1) bs.push_back(lifted[static_cast<size_t>(i)].b());
    auto ds_b = delta_system(bs, 2);
    if (!ds_b) continue;
    std::vector<int> g2;
    for (int t : ds_b->petal_indices) g2.push_back(g1[static_cast<size_t>(t)]);

    // Strip the roots and demand full cross-disjointness via a third pass on
    // the unions; three or more petals force an empty root.
    std::vector<FinSet> reduced_a, reduced_b, unions;
    for (int i : g2) {
      reduced_a.push_back(lifted[static_cast<size_t>(i)].a() - ds_a->root);
      reduced_b.push_back(lifted[static_cast<size_t>(i)].b() - ds_b->root);
      unions.push_back(reduced_a.back() | reduced_b.back());
    }
    std::vector<int> g3_local;
    if (g2.size() >= 3) {
      if (auto ds_u = delta_system(unions, 3)) {
        if (!ds_u->root.empty())
          throw condition_error("internal: three-petal union system with nonempty root");
        g3_local = ds_u->petal_indices;
      }
    }
    if (g3_local.empty()) {
      for (size_t x = 0; x < unions.size() && g3_local.empty(); ++x)
        for (size_t y = x + 1; y < unions.size(); ++y)
          if (!unions[x].intersects(unions[y])) {
            g3_local = {static_cast<int>(x), static_cast<int>(y)};
            break;
          }
    }
    if (!g3_local.empty()) {
      std::vector<int> members;
      std::vector<FinSet> ra, rb;
      for (int t : g3_local) {
        members.push_back(g2[static_cast<size_t>(t)]);
        ra.push_back(reduced_a[static_cast<size_t>(t)]);
        rb.push_back(reduced_b[static_cast<size_t>(t)]);
      }
      return emit(members, ra, rb);
    }

    // The Δ-guided path found nothing; exhaust pairs of this bucket with
    // pair-specific roots (the Δ-system of two sets is their intersection).
    for (size_t x = 0; x + 1 < bucket->size(); ++x)
      for (size_t y = x + 1; y < bucket->size(); ++y) {
        const Condition& px = lifted[static_cast<size_t>((*bucket)[x])];
        const Condition& py = lifted[static_cast<size_t>((*bucket)[y])];
        FinSet root_a = px.a() & py.a(), root_b = px.b() & py.b();
        FinSet ax = px.a() - root_a, ay = py.a() - root_a;
        FinSet bx = px.b() - root_b, by = py.b() - root_b;
        if (!(ax | bx).intersects(ay | by))
          return emit({(*bucket)[x], (*bucket)[y]}, {ax, ay}, {bx, by});
      }
  }
  throw condition_error("no batch of size at least 2 found");
}

// ---------------------------------------------------------------------------
// Compatible decomposition through a rational embedding.

// A finite union of open rational intervals plus isolated rational points.
struct QSet {
  std::vector<std::pair<Rational, Rational>> intervals;  // open (lo, hi)
  std::vector<Rational> points;

  void normalize() {
    std::sort(intervals.begin(), intervals.end(),
              [](const auto& x, const auto& y) {
                return x.first < y.first || (x.first == y.first && x.second < y.second);
              });
    std::sort(points.begin(), points.end());
  }
  bool contains(const Rational& v) const {
    for (const auto& [lo, hi] : intervals)
      if (lo < v && v < hi) return true;
    for (const Rational& p : points)
      if (p == v) return true;
    return false;
  }
  bool disjoint_from(const QSet& o) const {
    for (const auto& [lo, hi] : intervals)
      for (const auto& [lo2, hi2] : o.intervals)
        if (!(hi <= lo2 || hi2 <= lo)) return false;
    for (const Rational& p : points)
      if (o.contains(p)) return false;
    for (const Rational& p : o.points)
      if (contains(p)) return false;
    return true;
  }
  std::string to_string() const {
    std::string s;
    for (const auto& [lo, hi] : intervals)
      s += "(" + lo.to_string() + "," + hi.to_string() + ")";
    for (const Rational& p : points) s += "[" + p.to_string() + "]";
    return s.empty() ? "{}" : s;
  }
};

struct CenteredColoring {
  std::vector<int> class_of;                      // per condition, dense ids
  std::vector<std::pair<QSet, QSet>> dictionary;  // per class: (U, V)
};

// Assigns each condition a pair (U, V) of disjoint rational-interval unions
// with the embedded values of A inside U and those of B inside V; conditions
// sharing a pair form a class, and every class is pairwise compatible.
inline CenteredColoring centered_decomposition(const Family& fam,
                                               const std::vector<Condition>& conds) {
  const auto* em = fam.meta_as<EmbeddingMeta>();
  if (!em) throw family_error("family carries no rational embedding");
  for (const Condition& p : conds)
    if (&p.family() != &fam) throw condition_error("conditions belong to different families");

  // Home cells from the stored dyadic separators (recomputed if absent).
  std::vector<Rational> seps = em->separators;
  if (static_cast<int>(seps.size()) != fam.size() + 1) {
    seps.assign(1, Rational(0));
    for (int j = 0; j + 1 < fam.size(); ++j)
      seps.push_back(detail::dyadic_between(em->limits[static_cast<size_t>(j)].hi(),
                                            em->limits[static_cast<size_t>(j + 1)].lo()));
    seps.push_back(em->limits[static_cast<size_t>(fam.size() - 1)].hi() + Rational(1));
  }
  auto cell = [&](int j) {
    return std::make_pair(seps[static_cast<size_t>(j)], seps[static_cast<size_t>(j) + 1]);
  };
  auto value_of = [&](int g) { return em->values[static_cast<size_t>(g)]; };

  CenteredColoring out;
  std::map<std::string, int> class_ids;
  for (const Condition& p : conds) {
    auto build_side = [&](const FinSet& labels, const FinSet& ground) {
      // Values landing outside every cell of this side become point atoms.
      std::vector<std::pair<Rational, Rational>> cells;
      for (int j : labels.elements()) cells.push_back(cell(j));
      std::vector<Rational> strays;
      for (int g : ground.elements()) {
        Rational v = value_of(g);
        bool inside = false;
        for (const auto& [lo, hi] : cells)
          if (lo < v && v < hi) {
            inside = true;
            break;
          }
        if (!inside) strays.push_back(v);
      }
      return std::make_pair(cells, strays);
    };
    auto [ucells, ustrays] = build_side(p.a(), p.A());
    auto [vcells, vstrays] = build_side(p.b(), p.B());

    // Puncture each side's cells at the other side's stray points.
    auto puncture = [](std::vector<std::pair<Rational, Rational>> cells,
                       const std::vector<Rational>& holes) {
      for (const Rational& h : holes) {
        std::vector<std::pair<Rational, Rational>> next;
        for (auto& [lo, hi] : cells) {
          if (lo < h && h < hi) {
            next.emplace_back(lo, h);
            next.emplace_back(h, hi);
          } else {
            next.emplace_back(lo, hi);
          }
        }
        cells = std::move(next);
      }
      return cells;
    };
    QSet U, V;
    U.intervals = puncture(std::move(ucells), vstrays);
    U.points = ustrays;
    V.intervals = puncture(std::move(vcells), ustrays);
    V.points = vstrays;
    U.normalize();
    V.normalize();

    if (!U.disjoint_from(V))
      throw condition_error("internal: overlapping color components");
    for (int g : p.A().elements())
      if (!U.contains(value_of(g)))
        throw condition_error("internal: side A value escaped its color");
    for (int g : p.B().elements())
      if (!V.contains(value_of(g)))
        throw condition_error("internal: side B value escaped its color");

    std::string key = U.to_string() + ";" + V.to_string();
    auto [it, fresh] = class_ids.try_emplace(key, static_cast<int>(out.dictionary.size()));
    if (fresh) out.dictionary.emplace_back(U, V);
    out.class_of.push_back(it->second);
  }

  // Post-verification: each class is pairwise compatible.
  for (size_t x = 0; x < conds.size(); ++x)
    for (size_t y = x + 1; y < conds.size(); ++y)
      if (out.class_of[x] == out.class_of[y] && !compatible(conds[x], conds[y]))
        throw condition_error("decomposition produced an incompatible pair in one class");
  return out;
}

// ---------------------------------------------------------------------------
// Antichain decomposition through a sharing witness.

struct AntichainColoring {
  std::vector<int> class_of;                   // per condition, dense ids
  std::vector<std::pair<int, int>> class_key;  // per class: (transversal, color)
  bool proof_faithful = true;
};

// Colors essentially distinct conditions (nonempty sides, one shared
// (m, E, F)) so that every color class is pairwise incompatible. Follows the
// witness-based diagonalization; if the exhaustive post-check ever failed,
// falls back to greedy coloring of the compatibility graph and says so.
inline AntichainColoring luzin_antichain_decomposition(const Family& fam,
                                                       const std::vector<Condition>& conds) {
  const auto* lm = fam.meta_as<LuzinMeta>();
  if (!lm) throw family_error("family carries no sharing witness");
  if (conds.empty()) throw condition_error("no conditions to decompose");
  for (const Condition& p : conds) {
    if (&p.family() != &fam) throw condition_error("conditions belong to different families");
    if (p.a().empty() || p.b().empty())
      throw condition_error("conditions must have nonempty label sets on both sides");
    if (p.m() != conds[0].m() || p.E() != conds[0].E() || p.F() != conds[0].F())
      throw condition_error("conditions must share one (m, E, F); bucket first");
  }
  for (size_t x = 0; x < conds.size(); ++x)
    for (size_t y = x + 1; y < conds.size(); ++y)
      if (!essentially_distinct(conds[x], conds[y]))
        throw condition_error("conditions " + std::to_string(x) + " and " + std::to_string(y) +
                              " are not essentially distinct");

  const int n = static_cast<int>(conds.size());
  const int m = conds[0].m();
  std::vector<int> amax(static_cast<size_t>(n)), bmax(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    amax[static_cast<size_t>(i)] = conds[static_cast<size_t>(i)].a().max();
    bmax[static_cast<size_t>(i)] = conds[static_cast<size_t>(i)].b().max();
  }

  // g dominates every partner of a max-label; closure points of g cut the
  // member range into intervals that contain both maxima of each condition.
  // Untouched indices keep g = 0 so that gaps between label clusters admit
  // closure points.
  std::vector<int> g(static_cast<size_t>(fam.size()), 0);
  for (int i = 0; i < n; ++i) {
    int ai = amax[static_cast<size_t>(i)], bi = bmax[static_cast<size_t>(i)];
    g[static_cast<size_t>(ai)] = std::max(g[static_cast<size_t>(ai)], bi + 1);
    g[static_cast<size_t>(bi)] = std::max(g[static_cast<size_t>(bi)], ai + 1);
  }
  std::vector<int> eta{0};
  while (eta.back() < fam.size()) {
    int cand = eta.back() + 1;
    for (bool moved = true; moved;) {
      moved = false;
      for (int beta = 0; beta < std::min(cand, fam.size()); ++beta)
        if (g[static_cast<size_t>(beta)] >= cand) {
          cand = g[static_cast<size_t>(beta)] + 1;
          moved = true;
        }
    }
    eta.push_back(cand);
  }
  const int T = static_cast<int>(eta.size()) - 1;  // intervals [eta[t], eta[t+1])
  auto interval_of = [&](int member) {
    int t = static_cast<int>(std::upper_bound(eta.begin(), eta.end(), member) - eta.begin()) - 1;
    return t;
  };

  // Buckets and transversal ranks.
  std::vector<std::vector<int>> buckets(static_cast<size_t>(T));
  std::vector<int> bucket_of(static_cast<size_t>(n)), rank_of(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    int t = interval_of(amax[static_cast<size_t>(i)]);
    if (interval_of(bmax[static_cast<size_t>(i)]) != t)
      throw condition_error("internal: closure intervals failed to capture both maxima");
    bucket_of[static_cast<size_t>(i)] = t;
    rank_of[static_cast<size_t>(i)] = static_cast<int>(buckets[static_cast<size_t>(t)].size());
    buckets[static_cast<size_t>(t)].push_back(i);
  }

  // max(member(x) ∩ member(gamma)) read off the stored witness maps.
  auto mu = [&](int x, int gamma) {
    int hi = std::max(x, gamma), lo = std::min(x, gamma);
    const auto& fmap = lm->f[static_cast<size_t>(hi)];
    auto it = fmap.find(lo);
    return it == fmap.end() ? -1 : it->second;
  };

  // Diagonal pass: within one transversal, a condition's color must avoid
  // the colors of earlier-bucket conditions whose whole interval carries a
  // low witness value against this condition's a-side maximum.
  std::vector<int> color(static_cast<size_t>(n), -1);
  for (int t = 0; t < T; ++t)
    for (int i : buckets[static_cast<size_t>(t)]) {
      std::set<int> banned;
      for (int s = 0; s < t; ++s)
        for (int j : buckets[static_cast<size_t>(s)]) {
          if (rank_of[static_cast<size_t>(j)] != rank_of[static_cast<size_t>(i)]) continue;
          int lowest = -2;  // min over the interval; -1 sentinel means "empty"
          bool first = true;
          for (int delta = eta[static_cast<size_t>(s)];
               delta < std::min(eta[static_cast<size_t>(s) + 1], fam.size()); ++delta) {
            int v = mu(delta, amax[static_cast<size_t>(i)]);
            if (first || v < lowest) lowest = v;
            first = false;
          }
          if (!first && lowest <= m) banned.insert(color[static_cast<size_t>(j)]);
        }
      int c = 0;
      while (banned.count(c)) ++c;
      color[static_cast<size_t>(i)] = c;
    }

  AntichainColoring out;
  out.class_of.assign(static_cast<size_t>(n), -1);
  std::map<std::pair<int, int>, int> ids;
  for (int i = 0; i < n; ++i) {
    std::pair<int, int> key{rank_of[static_cast<size_t>(i)], color[static_cast<size_t>(i)]};
    auto [it, fresh] = ids.try_emplace(key, static_cast<int>(out.class_key.size()));
    if (fresh) out.class_key.push_back(key);
    out.class_of[static_cast<size_t>(i)] = it->second;
  }

  // Exhaustive post-verification; on failure, fall back honestly.
  bool ok = true;
  for (size_t x = 0; x < conds.size() && ok; ++x)
    for (size_t y = x + 1; y < conds.size() && ok; ++y)
      if (out.class_of[x] == out.class_of[y] && compatible(conds[x], conds[y])) ok = false;
  if (!ok) {
    out.proof_faithful = false;
    out.class_of.assign(static_cast<size_t>(n), -1);
    out.class_key.clear();
    std::vector<std::vector<int>> classes;
    for (int i = 0; i < n; ++i) {
      int chosen = -1;
      for (size_t c = 0; c < classes.size() && chosen < 0; ++c) {
        bool fits = true;
        for (int j : classes[c])
          if (compatible(conds[static_cast<size_t>(i)], conds[static_cast<size_t>(j)])) {
            fits = false;
            break;
          }
        if (fits) chosen = static_cast<int>(c);
      }
      if (chosen < 0) {
        chosen = static_cast<int>(classes.size());
        classes.emplace_back();
        out.class_key.emplace_back(0, chosen);
      }
      classes[static_cast<size_t>(chosen)].push_back(i);
      out.class_of[static_cast<size_t>(i)] = chosen;
    }
  }
  return out;
}

}  // namespace adfam
