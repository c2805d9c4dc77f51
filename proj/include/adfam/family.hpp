#pragma once

// Finite-scale almost-disjoint families: an indexed list of finite sets with
// a certified pairwise-intersection bound, plus optional construction
// metadata (tree seeds, rational embedding, sharing witness, refinement).
//
// The finiteness proxy: every member owns at least one element at or above
// the family's intersection ceiling, so tail-based semantics (compatibility,
// gap clauses) behave as they would for infinite sets truncated at the
// horizon.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "adfam/core_sets.hpp"
#include "adfam/finset.hpp"
#include "adfam/interval.hpp"
#include "adfam/rational.hpp"

namespace adfam {

class family_error : public std::runtime_error {
 public:
  explicit family_error(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Metadata variants.

struct RawMeta {};

struct SteppransMeta {
  int depth = 0;
  std::vector<std::string> seeds;
  // tags[i] = (seed index, side bit) for member i.
  std::vector<std::pair<int, int>> tags;
};

struct EmbeddingMeta {
  // values[g] is the rational attached to ground element g; elements outside
  // every member carry distinct negative fillers.
  std::vector<Rational> values;
  std::vector<CertifiedReal> limits;  // one per member, pairwise disjoint
  std::vector<Rational> separators;   // separators[j] lies between limits j and j+1
  int block_length = 0;
};

struct LuzinMeta {
  int base_columns = 0;
  int multiplicity = 1;
  // f[eta] maps xi < eta to max(member(xi) ∩ member(eta)); pairs with empty
  // intersection are absent.
  std::vector<std::map<int, int>> f;
};

struct CohenMeta {
  std::string base_kind;  // short description of the refined family
  FinSet ones;            // positions where the refining bitstream is 1
};

using FamilyMeta = std::variant<RawMeta, SteppransMeta, EmbeddingMeta, LuzinMeta, CohenMeta>;

// ---------------------------------------------------------------------------
// Almost-disjointness certificate.

struct ADReport {
  bool ok = false;
  std::vector<std::vector<int>> tight;  // tight[i][j]: intersection ⊆ [0, tight[i][j])
  int ceiling = 0;
  int vi = -1, vj = -1;  // offending indices when !ok
  std::string reason;
};

// Recomputes every pairwise intersection bound from scratch and checks the
// family invariants on raw data.
inline ADReport verify_ad_raw(const std::vector<FinSet>& members, int horizon) {
  ADReport rep;
  if (horizon < 1) {
    rep.reason = "horizon must be positive";
    return rep;
  }
  const int n = static_cast<int>(members.size());
  for (int i = 0; i < n; ++i) {
    if (members[static_cast<size_t>(i)].empty()) {
      rep.vi = i;
      rep.reason = "member " + std::to_string(i) + " is empty";
      return rep;
    }
    if (members[static_cast<size_t>(i)].max() >= horizon) {
      rep.vi = i;
      rep.reason = "member " + std::to_string(i) + " exceeds the horizon";
      return rep;
    }
  }
  rep.tight.assign(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n), 0));
  int ceiling = 0, ci = -1, cj = -1;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      FinSet inter = members[static_cast<size_t>(i)] & members[static_cast<size_t>(j)];
      int bound = inter.empty() ? 0 : inter.max() + 1;
      rep.tight[static_cast<size_t>(i)][static_cast<size_t>(j)] = bound;
      rep.tight[static_cast<size_t>(j)][static_cast<size_t>(i)] = bound;
      if (bound > ceiling) {
        ceiling = bound;
        ci = i;
        cj = j;
      }
    }
  rep.ceiling = ceiling;
  for (int i = 0; i < n; ++i)
    if (members[static_cast<size_t>(i)].max() < ceiling) {
      rep.vi = ci;
      rep.vj = cj;
      rep.reason = "member " + std::to_string(i) +
                   " has no element at or above the intersection ceiling " +
                   std::to_string(ceiling) + " forced by the pair (" + std::to_string(ci) + ", " +
                   std::to_string(cj) + ")";
      return rep;
    }
  rep.ok = true;
  return rep;
}

// ---------------------------------------------------------------------------

class Family {
 public:
  Family(std::vector<FinSet> members, int horizon, FamilyMeta meta = RawMeta{})
      : horizon_(horizon), meta_(std::move(meta)) {
    ADReport rep = verify_ad_raw(members, horizon);
    if (!rep.ok) throw family_error("not an almost-disjoint family: " + rep.reason);
    members_.reserve(members.size());
    for (auto& m : members) members_.push_back(m.with_horizon(horizon));
    ad_bound_ = std::move(rep.tight);
    ceiling_ = rep.ceiling;
  }

  int size() const { return static_cast<int>(members_.size()); }
  int horizon() const { return horizon_; }
  int intersection_ceiling() const { return ceiling_; }
  const FinSet& member(int i) const { return members_.at(static_cast<size_t>(i)); }
  const std::vector<FinSet>& members() const { return members_; }
  int ad_bound(int i, int j) const {
    return ad_bound_.at(static_cast<size_t>(i)).at(static_cast<size_t>(j));
  }
  const FamilyMeta& meta() const { return meta_; }
  template <class M>
  const M* meta_as() const {
    return std::get_if<M>(&meta_);
  }

  FinSet union_of(const FinSet& indices) const {
    FinSet u;
    for (int i : indices.elements()) u |= member(i);
    return u.with_horizon(horizon_);
  }

  // max(member(x) ∩ member(y)), or -1 when the intersection is empty.
  int pair_max(int x, int y) const {
    FinSet inter = member(x) & member(y);
    return inter.empty() ? -1 : inter.max();
  }

 private:
  std::vector<FinSet> members_;
  int horizon_;
  std::vector<std::vector<int>> ad_bound_;
  int ceiling_ = 0;
  FamilyMeta meta_;
};

inline ADReport verify_ad(const Family& fam) {
  ADReport rep = verify_ad_raw(fam.members(), fam.horizon());
  if (!rep.ok) return rep;
  for (int i = 0; i < fam.size(); ++i)
    for (int j = 0; j < fam.size(); ++j)
      if (i != j && rep.tight[static_cast<size_t>(i)][static_cast<size_t>(j)] != fam.ad_bound(i, j)) {
        rep.ok = false;
        rep.vi = i;
        rep.vj = j;
        rep.reason = "stored bound for pair (" + std::to_string(i) + ", " + std::to_string(j) +
                     ") is not tight";
        return rep;
      }
  return rep;
}

// ---------------------------------------------------------------------------
// Metadata validation (run by loaders; constructors satisfy it by build).

inline void validate_metadata(const Family& fam) {
  if (const auto* sm = fam.meta_as<SteppransMeta>()) {
    if (static_cast<int>(sm->tags.size()) != fam.size())
      throw family_error("tree-seed metadata does not tag every member");
    for (int i = 0; i < fam.size(); ++i) {
      auto [sx, side] = sm->tags[static_cast<size_t>(i)];
      if (sx < 0 || sx >= static_cast<int>(sm->seeds.size()) || (side != 0 && side != 1))
        throw family_error("tree-seed tag out of range for member " + std::to_string(i));
      const std::string& x = sm->seeds[static_cast<size_t>(sx)];
      FinSet expect;
      for (int k = 0; k < static_cast<int>(x.size()); ++k)
        if (x[static_cast<size_t>(k)] == static_cast<char>('0' + side))
          expect.insert(tree_index(x.substr(0, static_cast<size_t>(k)), sm->depth));
      if (expect != fam.member(i))
        throw family_error("member " + std::to_string(i) + " does not match its tree seed");
    }
    return;
  }
  if (const auto* em = fam.meta_as<EmbeddingMeta>()) {
    if (static_cast<int>(em->values.size()) != fam.horizon())
      throw family_error("embedding must assign a value to every ground element");
    if (static_cast<int>(em->limits.size()) != fam.size())
      throw family_error("embedding must carry one limit interval per member");
    std::map<std::string, int> seen;
    for (int g = 0; g < fam.horizon(); ++g) {
      auto [it, fresh] = seen.try_emplace(em->values[static_cast<size_t>(g)].to_string(), g);
      if (!fresh)
        throw family_error("embedding value collision between ground elements " +
                           std::to_string(it->second) + " and " + std::to_string(g));
    }
    for (size_t j = 0; j < em->limits.size(); ++j) {
      if (em->limits[j].width() > Rational::pow2(-32))
        throw family_error("limit interval " + std::to_string(j) + " is wider than 2^-32");
      for (size_t k = j + 1; k < em->limits.size(); ++k)
        if (!(em->limits[j].hi() < em->limits[k].lo() || em->limits[k].hi() < em->limits[j].lo()))
          throw family_error("limit intervals " + std::to_string(j) + " and " +
                             std::to_string(k) + " overlap");
    }
    for (int i = 0; i < fam.size(); ++i) {
      const CertifiedReal& lim = em->limits[static_cast<size_t>(i)];
      Rational prev_dist;
      bool have_prev = false;
      for (int g : fam.member(i).elements()) {
        const Rational& v = em->values[static_cast<size_t>(g)];
        Rational dist = std::max({lim.lo() - v, v - lim.hi(), Rational(0)});
        if (have_prev && !(dist < prev_dist))
          throw family_error("member " + std::to_string(i) +
                             " values do not approach the limit monotonically");
        prev_dist = dist;
        have_prev = true;
      }
    }
    return;
  }
  if (const auto* lm = fam.meta_as<LuzinMeta>()) {
    if (static_cast<int>(lm->f.size()) != fam.size())
      throw family_error("sharing witness must cover every member");
    for (int eta = 0; eta < fam.size(); ++eta) {
      std::map<int, int> uses;
      for (auto [xi, mx] : lm->f[static_cast<size_t>(eta)]) {
        if (xi < 0 || xi >= eta)
          throw family_error("witness index out of range at member " + std::to_string(eta));
        if (fam.pair_max(xi, eta) != mx)
          throw family_error("witness value mismatch at pair (" + std::to_string(xi) + ", " +
                             std::to_string(eta) + ")");
        if (++uses[mx] > lm->multiplicity)
          throw family_error("witness multiplicity bound exceeded at member " +
                             std::to_string(eta));
      }
      // Pairs absent from the witness must really be disjoint.
      for (int xi = 0; xi < eta; ++xi)
        if (!lm->f[static_cast<size_t>(eta)].count(xi) && fam.pair_max(xi, eta) != -1)
          throw family_error("witness omits the intersecting pair (" + std::to_string(xi) + ", " +
                             std::to_string(eta) + ")");
    }
    return;
  }
  // RawMeta, CohenMeta: nothing beyond the a.d. certificate to re-check.
}

// ---------------------------------------------------------------------------
// Constructors.

// Two members per seed: side i of seed x collects tree codes of the prefixes
// of x that x extends by bit i.
inline Family build_steprans(int depth, const std::vector<std::string>& seeds) {
  if (depth < 2 || depth > 24) throw family_error("depth must be between 2 and 24");
  std::map<std::string, int> dup;
  for (size_t s = 0; s < seeds.size(); ++s) {
    const std::string& x = seeds[s];
    if (static_cast<int>(x.size()) != depth)
      throw family_error("seed " + std::to_string(s) + " must have length " +
                         std::to_string(depth));
    if (x.find_first_not_of("01") != std::string::npos)
      throw family_error("seed " + std::to_string(s) + " must be a binary string");
    if (x.find('0') == std::string::npos || x.find('1') == std::string::npos)
      throw family_error("seed " + std::to_string(s) + " must contain both bits");
    if (!dup.emplace(x, static_cast<int>(s)).second)
      throw family_error("duplicate seed \"" + x + "\"");
  }
  if (seeds.empty()) throw family_error("at least one seed required");
  SteppransMeta meta;
  meta.depth = depth;
  meta.seeds = seeds;
  std::vector<FinSet> members;
  for (size_t s = 0; s < seeds.size(); ++s)
    for (int side = 0; side < 2; ++side) {
      FinSet m;
      for (int k = 0; k < depth; ++k)
        if (seeds[s][static_cast<size_t>(k)] == static_cast<char>('0' + side))
          m.insert(tree_index(seeds[s].substr(0, static_cast<size_t>(k)), depth));
      members.push_back(m);
      meta.tags.emplace_back(static_cast<int>(s), side);
    }
  int horizon = (1 << depth) - 1;
  try {
    return Family(std::move(members), horizon, std::move(meta));
  } catch (const family_error& e) {
    throw family_error(std::string("these seeds do not produce a valid family: ") + e.what());
  }
}

// The two index lists (side-0 members, side-1 members) of a seed family.
inline std::pair<std::vector<int>, std::vector<int>> steprans_side_lists(const Family& fam) {
  const auto* sm = fam.meta_as<SteppransMeta>();
  if (!sm) throw family_error("family carries no tree-seed metadata");
  std::pair<std::vector<int>, std::vector<int>> lists;
  for (int i = 0; i < fam.size(); ++i)
    (sm->tags[static_cast<size_t>(i)].second == 0 ? lists.first : lists.second).push_back(i);
  return lists;
}

namespace detail {

inline int64_t isqrt64(int64_t n) {
  int64_t r = static_cast<int64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

inline int nth_prime(int j) {  // 0-based: 2, 3, 5, ...
  int count = 0;
  for (int c = 2;; ++c) {
    bool prime = true;
    for (int d = 2; d * d <= c; ++d)
      if (c % d == 0) {
        prime = false;
        break;
      }
    if (prime && count++ == j) return c;
  }
}

// Continued-fraction convergents of sqrt(n) for non-square n; exact and
// arbitrarily long thanks to promoting rational integers.
inline std::vector<Rational> sqrt_convergents(int64_t n, int how_many) {
  int64_t a0 = isqrt64(n);
  std::vector<Rational> out;
  Rational h_prev(1), h_cur(a0), q_prev(0), q_cur(1);
  out.push_back(h_cur);  // a0 / 1
  int64_t m = 0, d = 1, a = a0;
  while (static_cast<int>(out.size()) < how_many) {
    m = d * a - m;
    d = (n - m * m) / d;
    a = (a0 + m) / d;
    Rational h_next = Rational(a) * h_cur + h_prev;
    Rational q_next = Rational(a) * q_cur + q_prev;
    out.push_back(h_next / q_next);
    h_prev = h_cur;
    h_cur = h_next;
    q_prev = q_cur;
    q_cur = q_next;
  }
  return out;
}

// Smallest-denominator dyadic rational strictly inside (lo, hi).
inline Rational dyadic_between(const Rational& lo, const Rational& hi) {
  for (int k = 0;; ++k) {
    // Smallest integer a with a/2^k > lo  is floor(lo * 2^k) + 1.
    Rational scaled = lo * Rational::pow2(k);
    mpq_t q;
    scaled.to_mpq(q);
    mpz_t fl;
    mpz_init(fl);
    mpz_fdiv_q(fl, mpq_numref(q), mpq_denref(q));
    mpz_add_ui(fl, fl, 1);
    mpq_t cand;
    mpq_init(cand);
    mpq_set_z(cand, fl);
    Rational a = Rational::from_mpq(cand) * Rational::pow2(-k);
    mpq_clears(q, cand, nullptr);
    mpz_clear(fl);
    if (a < hi) return a;
    if (k > 4096) throw family_error("no dyadic separator found (intervals touch?)");
  }
}

}  // namespace detail

// Pairwise-disjoint blocks whose attached rationals walk toward certified
// irrational targets (square roots of successive primes), one per member.
inline Family build_r_embeddable(int count, int horizon, int block_length, uint64_t rng_seed) {
  (void)rng_seed;  // reserved: the construction is fully deterministic
  if (count < 1 || block_length < 1) throw family_error("count and block length must be positive");
  if (static_cast<int64_t>(count) * block_length > horizon)
    throw family_error("capacity exceeded: count * block_length > horizon");

  std::vector<int64_t> primes;
  for (int j = 0; j < count; ++j) primes.push_back(detail::nth_prime(j));

  for (int bits = 64;; bits *= 2) {
    if (bits > 1024) throw family_error("embedding certification failed to converge");
    std::vector<CertifiedReal> limits;
    for (int j = 0; j < count; ++j)
      limits.push_back(CertifiedReal::sqrt_of(Rational(primes[static_cast<size_t>(j)]),
                                              std::max(bits, 33)));
    // Dyadic separators between consecutive limit intervals, plus outer walls.
    std::vector<Rational> seps(static_cast<size_t>(count) + 1);
    seps[0] = Rational(0);
    for (int j = 0; j + 1 < count; ++j)
      seps[static_cast<size_t>(j) + 1] =
          detail::dyadic_between(limits[static_cast<size_t>(j)].hi(),
                                 limits[static_cast<size_t>(j + 1)].lo());
    seps[static_cast<size_t>(count)] =
        limits[static_cast<size_t>(count - 1)].hi() + Rational(1);

    std::vector<Rational> values(static_cast<size_t>(horizon), Rational(0));
    std::map<std::string, bool> used;
    bool ok = true;
    for (int j = 0; j < count && ok; ++j) {
      // Generate convergents, keep those strictly inside the home cell and
      // previously unused, until the block is filled.
      std::vector<Rational> kept;
      int generated = block_length + 8;
      while (static_cast<int>(kept.size()) < block_length) {
        kept.clear();
        auto conv = detail::sqrt_convergents(primes[static_cast<size_t>(j)], generated);
        for (const Rational& c : conv) {
          if (!(seps[static_cast<size_t>(j)] < c && c < seps[static_cast<size_t>(j) + 1]))
            continue;
          if (used.count(c.to_string())) continue;
          kept.push_back(c);
          if (static_cast<int>(kept.size()) == block_length) break;
        }
        generated += block_length;
        if (generated > 64 * (block_length + 8))
          throw family_error("could not collect enough in-cell convergents");
      }
      // Monotone approach to the limit interval, strictly.
      const CertifiedReal& lim = limits[static_cast<size_t>(j)];
      Rational prev;
      bool have_prev = false;
      for (const Rational& c : kept) {
        Rational dist = std::max({lim.lo() - c, c - lim.hi(), Rational(0)});
        if (dist.is_zero() || (have_prev && !(dist < prev))) {
          ok = false;  // interval too wide at this precision; retry tighter
          break;
        }
        prev = dist;
        have_prev = true;
      }
      if (!ok) break;
      for (int t = 0; t < block_length; ++t) {
        values[static_cast<size_t>(j * block_length + t)] = kept[static_cast<size_t>(t)];
        used[kept[static_cast<size_t>(t)].to_string()] = true;
      }
    }
    if (!ok) continue;
    // Distinct negative fillers for ground elements outside every block.
    for (int g = count * block_length; g < horizon; ++g)
      values[static_cast<size_t>(g)] = Rational(-(g + 1));

    std::vector<FinSet> members;
    for (int j = 0; j < count; ++j)
      members.push_back(FinSet::interval(j * block_length, (j + 1) * block_length));
    EmbeddingMeta meta;
    meta.values = std::move(values);
    meta.limits = std::move(limits);
    meta.separators = std::move(seps);
    meta.block_length = block_length;
    Family fam(std::move(members), horizon, std::move(meta));
    validate_metadata(fam);
    return fam;
  }
}

// Disjoint arithmetic-progression columns, then one fresh shared element per
// earlier member for every later member, then one private element each.
inline Family build_luzin(int count, int base_columns) {
  if (base_columns < 2 || count < base_columns)
    throw family_error("need count >= base_columns >= 2");
  const int B = base_columns, T = 4;  // T terms per base column
  std::vector<FinSet> members(static_cast<size_t>(count));
  for (int c = 0; c < B; ++c)
    for (int t = 0; t < T; ++t) members[static_cast<size_t>(c)].insert(c + t * B);
  int fresh = B * T;  // smallest unused ground element
  LuzinMeta meta;
  meta.base_columns = B;
  meta.multiplicity = 1;
  meta.f.resize(static_cast<size_t>(count));
  for (int eta = B; eta < count; ++eta)
    for (int xi = 0; xi < eta; ++xi) {
      members[static_cast<size_t>(eta)].insert(fresh);
      members[static_cast<size_t>(xi)].insert(fresh);
      meta.f[static_cast<size_t>(eta)][xi] = fresh;
      ++fresh;
    }
  for (int i = 0; i < count; ++i) members[static_cast<size_t>(i)].insert(fresh++);
  Family fam(std::move(members), fresh, std::move(meta));
  validate_metadata(fam);
  return fam;
}

// Intersects every member with the 1-positions of the stream; members left
// with no element at or above the base ceiling are fatal and all reported.
inline Family cohen_refine(const Family& base, const FinSet& ones, std::string base_kind = "") {
  if (!ones.empty() && ones.max() >= base.horizon())
    throw family_error("bitstream extends beyond the family horizon");
  std::vector<FinSet> members;
  std::vector<int> dead;
  for (int i = 0; i < base.size(); ++i) {
    FinSet m = base.member(i) & ones;
    if (m.empty() || m.max() < base.intersection_ceiling()) dead.push_back(i);
    members.push_back(m);
  }
  if (!dead.empty()) {
    std::string list;
    for (size_t k = 0; k < dead.size(); ++k)
      list += (k ? ", " : "") + std::to_string(dead[static_cast<size_t>(k)]);
    throw family_error("refinement kills member(s) " + list);
  }
  CohenMeta meta;
  meta.base_kind = base_kind;
  meta.ones = ones;
  return Family(std::move(members), base.horizon(), std::move(meta));
}

// ---------------------------------------------------------------------------
// n-way gap test and monotone extension.

struct GapVerdict {
  bool is_gap = false;
  int m = 0;
  // On failure: which clause and which indices broke it.
  int clause = 0;
  int alpha = -1, beta = -1, i = -1, j = -1;
  std::string describe() const {
    if (is_gap) return "gap(" + std::to_string(m) + ")";
    if (clause == 1)
      return "clause 1 fails at position " + std::to_string(alpha) + " between lists " +
             std::to_string(i) + " and " + std::to_string(j);
    return "clause 2 fails for positions " + std::to_string(alpha) + ", " + std::to_string(beta);
  }
};

inline void check_gap_preconditions(const Family& fam, const std::vector<std::vector<int>>& lists) {
  if (lists.size() < 2) throw family_error("need at least two index lists");
  size_t L = lists[0].size();
  if (L < 2) throw family_error("lists must have length at least 2");
  std::map<int, int> where;
  for (size_t i = 0; i < lists.size(); ++i) {
    if (lists[i].size() != L) throw family_error("lists must have equal length");
    for (int idx : lists[i]) {
      if (idx < 0 || idx >= fam.size()) throw family_error("list index out of range");
      auto [it, fresh] = where.emplace(idx, static_cast<int>(i));
      if (!fresh)
        throw family_error("member " + std::to_string(idx) + " appears in more than one list");
    }
  }
}

inline GapVerdict check_n_luzin_gap(const Family& fam, const std::vector<std::vector<int>>& lists,
                                    int m) {
  check_gap_preconditions(fam, lists);
  const int n = static_cast<int>(lists.size());
  const int L = static_cast<int>(lists[0].size());
  GapVerdict v;
  v.m = m;
  // Clause 1: same position, different lists — intersections live below m.
  for (int alpha = 0; alpha < L; ++alpha)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        int mx = fam.pair_max(lists[static_cast<size_t>(i)][static_cast<size_t>(alpha)],
                              lists[static_cast<size_t>(j)][static_cast<size_t>(alpha)]);
        if (mx >= m) {
          v.clause = 1;
          v.alpha = alpha;
          v.i = i;
          v.j = j;
          return v;
        }
      }
  // Clause 2: distinct positions — some ordered cross pair meets at or above m.
  for (int alpha = 0; alpha < L; ++alpha)
    for (int beta = 0; beta < L; ++beta) {
      if (alpha == beta) continue;
      bool witnessed = false;
      for (int i = 0; i < n && !witnessed; ++i)
        for (int j = 0; j < n && !witnessed; ++j) {
          if (i == j) continue;
          if (fam.pair_max(lists[static_cast<size_t>(i)][static_cast<size_t>(alpha)],
                           lists[static_cast<size_t>(j)][static_cast<size_t>(beta)]) >= m)
            witnessed = true;
        }
      if (!witnessed) {
        v.clause = 2;
        v.alpha = alpha;
        v.beta = beta;
        return v;
      }
    }
  v.is_gap = true;
  return v;
}

inline std::optional<int> find_gap_witness(const Family& fam,
                                           const std::vector<std::vector<int>>& lists) {
  for (int m = 0; m <= fam.intersection_ceiling(); ++m)
    if (check_n_luzin_gap(fam, lists, m).is_gap) return m;
  return std::nullopt;
}

struct LuzinGap {
  std::vector<std::vector<int>> lists;
  int m = 0;
};

// Pads an n-gap to k lists with spare members, raises m to restore clause 1,
// and keeps the largest group of positions with identical traces below the
// raised bound. The result is re-verified from scratch.
inline LuzinGap extend_gap(const Family& fam, const LuzinGap& gap, int k) {
  check_gap_preconditions(fam, gap.lists);
  const int n = static_cast<int>(gap.lists.size());
  const int L = static_cast<int>(gap.lists[0].size());
  if (k < n) throw family_error("cannot shrink a gap");
  if (!check_n_luzin_gap(fam, gap.lists, gap.m).is_gap)
    throw family_error("input is not a verified gap");
  if (k == n) return gap;

  std::vector<bool> taken(static_cast<size_t>(fam.size()), false);
  for (const auto& lst : gap.lists)
    for (int idx : lst) taken[static_cast<size_t>(idx)] = true;
  std::vector<int> spares;
  for (int i = 0; i < fam.size() && static_cast<int>(spares.size()) < (k - n) * L; ++i)
    if (!taken[static_cast<size_t>(i)]) spares.push_back(i);
  if (static_cast<int>(spares.size()) < (k - n) * L)
    throw family_error("not enough spare members to extend the gap");

  std::vector<std::vector<int>> lists = gap.lists;
  for (int t = 0; t < k - n; ++t)
    lists.emplace_back(spares.begin() + t * L, spares.begin() + (t + 1) * L);

  // Raise m until clause 1 holds across all k lists.
  int m2 = gap.m;
  for (int alpha = 0; alpha < L; ++alpha)
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        m2 = std::max(m2, fam.pair_max(lists[static_cast<size_t>(i)][static_cast<size_t>(alpha)],
                                       lists[static_cast<size_t>(j)][static_cast<size_t>(alpha)]) +
                              1);

  // Group positions by their trace below m2 and keep the largest group.
  std::map<std::vector<std::vector<int>>, std::vector<int>> groups;
  for (int alpha = 0; alpha < L; ++alpha) {
    std::vector<std::vector<int>> trace;
    for (int i = 0; i < k; ++i)
      trace.push_back(fam.member(lists[static_cast<size_t>(i)][static_cast<size_t>(alpha)])
                          .below(m2)
                          .elements());
    groups[trace].push_back(alpha);
  }
  const std::vector<int>* best = nullptr;
  for (const auto& [trace, alphas] : groups)
    if (!best || alphas.size() > best->size()) best = &alphas;
  if (!best || best->size() < 2)
    throw family_error("trace filtering left fewer than two positions");

  LuzinGap out;
  out.m = m2;
  for (int i = 0; i < k; ++i) {
    std::vector<int> lst;
    for (int alpha : *best)
      lst.push_back(lists[static_cast<size_t>(i)][static_cast<size_t>(alpha)]);
    out.lists.push_back(std::move(lst));
  }
  GapVerdict v = check_n_luzin_gap(fam, out.lists, out.m);
  if (!v.is_gap)
    throw family_error("extension failed verification: " + v.describe());
  return out;
}

}  // namespace adfam
