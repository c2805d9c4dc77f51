#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "adfam/builders.hpp"
#include "adfam/condition.hpp"
#include "adfam/family.hpp"
#include "adfam/finset.hpp"
#include "adfam/prng.hpp"

using adfam::amalgamate_3luzin;
using adfam::amalgamate_4family;
using adfam::ApproxCondition;
using adfam::builder_error;
using adfam::column_indices;
using adfam::Family;
using adfam::FinSet;
using adfam::grow_family;
using adfam::leq_approx;
using adfam::make_condition;
using adfam::Prng;
using adfam::singleton_approx;
using adfam::validate_approx;

namespace {

// ---------------------------------------------------------------------------
// Independent oracle: the structural clauses and the refinement order
// transliterated onto std::set, written before the assertions that use it
// and sharing no code with the header under test.

using RawSides = std::map<int, std::vector<std::set<int>>>;

RawSides raw_of(const ApproxCondition& p) {
  RawSides out;
  for (const auto& [xi, slots] : p.sides) {
    std::vector<std::set<int>> rs;
    for (const FinSet& s : slots) {
      auto v = s.elements();
      rs.emplace_back(v.begin(), v.end());
    }
    out[xi] = std::move(rs);
  }
  return out;
}

bool sets_meet(const std::set<int>& x, const std::set<int>& y) {
  for (int v : x)
    if (y.count(v)) return true;
  return false;
}

// Empty string when every clause holds; otherwise which one broke.
std::string oracle_violation(int arity, int n, const RawSides& sides) {
  for (const auto& [xi, slots] : sides) {
    if (static_cast<int>(slots.size()) != arity) return "slot count at " + std::to_string(xi);
    for (const auto& s : slots)
      for (int v : s)
        if (v < 0 || v >= n) return "containment at " + std::to_string(xi);
    for (size_t i = 0; i < slots.size(); ++i)
      for (size_t j = i + 1; j < slots.size(); ++j)
        if (sets_meet(slots[i], slots[j])) return "same-index overlap at " + std::to_string(xi);
  }
  for (auto it = sides.begin(); it != sides.end(); ++it)
    for (auto jt = std::next(it); jt != sides.end(); ++jt) {
      bool witnessed = false;
      if (arity == 3) {
        for (int i = 0; i < 3 && !witnessed; ++i)
          for (int j = 0; j < 3 && !witnessed; ++j)
            if (i != j && sets_meet(it->second[static_cast<size_t>(i)],
                                    jt->second[static_cast<size_t>(j)]))
              witnessed = true;
      } else {
        for (int i = 0; i < 3 && !witnessed; ++i)
          if (sets_meet(it->second[static_cast<size_t>(i)], jt->second[3]) ||
              sets_meet(it->second[3], jt->second[static_cast<size_t>(i)]))
            witnessed = true;
      }
      if (!witnessed)
        return "no crossing for " + std::to_string(it->first) + "," + std::to_string(jt->first);
    }
  return "";
}

bool oracle_leq(const ApproxCondition& p, const ApproxCondition& q) {
  if (p.n < q.n) return false;
  RawSides rp = raw_of(p), rq = raw_of(q);
  for (const auto& [xi, qslots] : rq) {
    auto it = rp.find(xi);
    if (it == rp.end()) return false;
    for (size_t i = 0; i < qslots.size(); ++i) {
      std::set<int> low;
      for (int v : it->second[i])
        if (v < q.n) low.insert(v);
      if (low != qslots[i]) return false;
    }
  }
  for (auto it = rq.begin(); it != rq.end(); ++it)
    for (auto jt = std::next(it); jt != rq.end(); ++jt) {
      std::set<int> ux, ue;
      for (const auto& s : rp[it->first]) ux.insert(s.begin(), s.end());
      for (const auto& s : rp[jt->first]) ue.insert(s.begin(), s.end());
      for (int v : ux)
        if (v >= q.n && ue.count(v)) return false;
    }
  return true;
}

void oracle_require_valid(const ApproxCondition& p) {
  REQUIRE(oracle_violation(p.arity, p.n, raw_of(p)).empty());
}

// ---------------------------------------------------------------------------
// Random generator for mergeable pairs: a shared block on the common indices
// (one private point per slot plus one crossing point per index pair), then
// each side extends it with its own indices, reusing the shared block's
// private points to cross the old/new seam so the shared slots stay
// untouched. Both outputs are padded to a common bound.

struct MergeInputs {
  ApproxCondition p, q;
};

void add_pair_witness(ApproxCondition& c, int xi, int eta, int point, Prng& rng) {
  if (c.arity == 3) {
    int i = static_cast<int>(rng.below(3));
    int j = static_cast<int>(rng.below(2));
    if (j >= i) ++j;
    c.sides[xi][static_cast<size_t>(i)].insert(point);
    c.sides[eta][static_cast<size_t>(j)].insert(point);
  } else if (rng.coin()) {
    c.sides[xi][rng.below(3)].insert(point);
    c.sides[eta][3].insert(point);
  } else {
    c.sides[xi][3].insert(point);
    c.sides[eta][rng.below(3)].insert(point);
  }
}

// Cross the seam between old index xi and new index eta by dropping one of
// xi's existing private points into a matching slot of eta.
void add_seam_witness(ApproxCondition& c, const std::vector<std::vector<int>>& private_of,
                      int xi, int eta, Prng& rng) {
  if (c.arity == 3) {
    int i = static_cast<int>(rng.below(3));
    int j = static_cast<int>(rng.below(2));
    if (j >= i) ++j;
    c.sides[eta][static_cast<size_t>(j)].insert(
        private_of[static_cast<size_t>(xi)][static_cast<size_t>(i)]);
  } else if (rng.coin()) {
    c.sides[eta][3].insert(private_of[static_cast<size_t>(xi)][rng.below(3)]);
  } else {
    c.sides[eta][rng.below(3)].insert(private_of[static_cast<size_t>(xi)][3]);
  }
}

MergeInputs random_merge_inputs(int arity, Prng& rng) {
  const int s = 1 + static_cast<int>(rng.below(3));
  const int u = 1 + static_cast<int>(rng.below(3));
  const int v = 1 + static_cast<int>(rng.below(3));

  ApproxCondition shared;
  shared.arity = arity;
  int next = 0;
  std::vector<std::vector<int>> private_of(static_cast<size_t>(s));
  for (int xi = 0; xi < s; ++xi) {
    shared.sides[xi] = std::vector<FinSet>(static_cast<size_t>(arity));
    for (int i = 0; i < arity; ++i) {
      shared.sides[xi][static_cast<size_t>(i)].insert(next);
      private_of[static_cast<size_t>(xi)].push_back(next++);
    }
  }
  for (int xi = 0; xi < s; ++xi)
    for (int eta = xi + 1; eta < s; ++eta) add_pair_witness(shared, xi, eta, next++, rng);
  shared.n = next;

  auto extend = [&](const std::vector<int>& fresh_indices) {
    ApproxCondition c = shared;
    int mark = shared.n;
    for (int eta : fresh_indices) {
      c.sides[eta] = std::vector<FinSet>(static_cast<size_t>(arity));
      for (int i = 0; i < arity; ++i) c.sides[eta][static_cast<size_t>(i)].insert(mark++);
      for (int xi = 0; xi < s; ++xi) add_seam_witness(c, private_of, xi, eta, rng);
    }
    for (size_t x = 0; x < fresh_indices.size(); ++x)
      for (size_t y = x + 1; y < fresh_indices.size(); ++y)
        add_pair_witness(c, fresh_indices[x], fresh_indices[y], mark++, rng);
    c.n = mark;
    return c;
  };

  std::vector<int> pidx, qidx;
  for (int t = 0; t < u; ++t) pidx.push_back(s + t);
  for (int t = 0; t < v; ++t) qidx.push_back(s + u + t);
  MergeInputs out{extend(pidx), extend(qidx)};
  out.p.n = out.q.n = std::max(out.p.n, out.q.n);
  return out;
}

std::set<int> as_set(const FinSet& s) {
  auto v = s.elements();
  return {v.begin(), v.end()};
}

}  // namespace

TEST_CASE("merging two approximations yields a validated common refinement") {
  SECTION("frozen three-slot merge") {
    ApproxCondition p;
    p.arity = 3;
    p.n = 4;
    p.sides[0] = {FinSet{0}, FinSet{1}, FinSet{2}};
    p.sides[1] = {FinSet{3}, FinSet{0}, FinSet{}};
    ApproxCondition q;
    q.arity = 3;
    q.n = 4;
    q.sides[0] = p.sides[0];
    q.sides[2] = {FinSet{1}, FinSet{3}, FinSet{}};
    oracle_require_valid(p);
    oracle_require_valid(q);

    ApproxCondition r = amalgamate_3luzin(p, q);
    REQUIRE(r.n == 5);
    REQUIRE(as_set(r.side(1, 0)) == std::set<int>{3, 4});
    REQUIRE(as_set(r.side(1, 1)) == std::set<int>{0});
    REQUIRE(r.side(1, 2).empty());
    REQUIRE(as_set(r.side(2, 0)) == std::set<int>{1});
    REQUIRE(as_set(r.side(2, 1)) == std::set<int>{3, 4});
    REQUIRE(r.sides.at(0) == p.sides.at(0));
    oracle_require_valid(r);
    REQUIRE(oracle_leq(r, p));
    REQUIRE(oracle_leq(r, q));
    REQUIRE(leq_approx(r, p));
    REQUIRE(leq_approx(r, q));
    REQUIRE_FALSE(leq_approx(p, r));
  }

  SECTION("contained index sets collapse to the stronger input") {
    ApproxCondition p;
    p.arity = 3;
    p.n = 2;
    p.sides[0] = {FinSet{0}, FinSet{1}, FinSet{}};
    p.sides[1] = {FinSet{1}, FinSet{0}, FinSet{}};
    ApproxCondition q;
    q.arity = 3;
    q.n = 2;
    q.sides[0] = p.sides[0];
    REQUIRE(amalgamate_3luzin(p, q) == p);
    REQUIRE(amalgamate_3luzin(q, p) == p);
    REQUIRE(amalgamate_3luzin(p, p) == p);
  }

  SECTION("disjoint singletons get exactly one crossing point") {
    ApproxCondition r3 = amalgamate_3luzin(singleton_approx(3, 0, 0), singleton_approx(3, 1, 0));
    REQUIRE(r3.n == 1);
    REQUIRE(as_set(r3.side(0, 0)) == std::set<int>{0});
    REQUIRE(as_set(r3.side(1, 1)) == std::set<int>{0});
    REQUIRE(r3.side(1, 0).empty());
    REQUIRE(r3.side(1, 2).empty());
    oracle_require_valid(r3);

    ApproxCondition r4 = amalgamate_4family(singleton_approx(4, 0, 0), singleton_approx(4, 1, 0));
    REQUIRE(r4.n == 1);
    REQUIRE(as_set(r4.side(0, 0)) == std::set<int>{0});
    REQUIRE(as_set(r4.side(1, 3)) == std::set<int>{0});
    REQUIRE(r4.side(1, 1).empty());
    oracle_require_valid(r4);
  }

  SECTION("precondition violations are rejected") {
    REQUIRE_THROWS_AS(amalgamate_3luzin(singleton_approx(3, 0, 0), singleton_approx(3, 1, 2)),
                      builder_error);
    REQUIRE_THROWS_AS(amalgamate_3luzin(singleton_approx(4, 0, 0), singleton_approx(4, 1, 0)),
                      builder_error);
    REQUIRE_THROWS_AS(amalgamate_4family(singleton_approx(3, 0, 0), singleton_approx(3, 1, 0)),
                      builder_error);

    ApproxCondition p = singleton_approx(3, 0, 2);
    p.sides[0][0].insert(1);
    ApproxCondition q = singleton_approx(3, 0, 2);
    q.sides[0][1].insert(1);
    ApproxCondition other = singleton_approx(3, 1, 2);
    REQUIRE_THROWS_AS(amalgamate_3luzin(p, q), builder_error);  // disagree on index 0

    ApproxCondition bad = singleton_approx(3, 0, 2);
    bad.sides[0][0].insert(1);
    bad.sides[0][1].insert(1);  // same-index overlap
    REQUIRE_THROWS_AS(validate_approx(bad), builder_error);
    REQUIRE_THROWS_AS(amalgamate_3luzin(bad, other), builder_error);

    ApproxCondition nocross;
    nocross.arity = 3;
    nocross.n = 0;
    nocross.sides[0] = std::vector<FinSet>(3);
    nocross.sides[1] = std::vector<FinSet>(3);
    REQUIRE_THROWS_AS(validate_approx(nocross), builder_error);
  }

  SECTION("500 randomized merges validate under the independent oracle") {
    Prng rng(240819);
    for (int trial = 0; trial < 500; ++trial) {
      const int arity = (trial % 2 == 0) ? 4 : 3;
      MergeInputs in = random_merge_inputs(arity, rng);
      oracle_require_valid(in.p);
      oracle_require_valid(in.q);
      ApproxCondition r =
          arity == 3 ? amalgamate_3luzin(in.p, in.q) : amalgamate_4family(in.p, in.q);
      oracle_require_valid(r);
      REQUIRE(oracle_leq(r, in.p));
      REQUIRE(oracle_leq(r, in.q));
      size_t only_p = 0, only_q = 0;
      for (const auto& [xi, slots] : in.p.sides)
        if (!in.q.has(xi)) ++only_p;
      for (const auto& [xi, slots] : in.q.sides)
        if (!in.p.has(xi)) ++only_q;
      REQUIRE(r.n == in.p.n + static_cast<int>(only_p * only_q));
    }
  }
}

TEST_CASE("grown families realize the crossing pattern") {
  SECTION("a single step is a disjoint block") {
    Family fam = grow_family(3, 1, 7);
    REQUIRE(fam.size() == 3);
    REQUIRE(fam.horizon() == 3);
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) REQUIRE(fam.pair_max(i, j) == -1);
  }

  SECTION("two steps with three slots form the frozen column gap") {
    Family fam = grow_family(3, 2, 3);
    REQUIRE(fam.size() == 6);
    REQUIRE(fam.horizon() == 7);  // one crossing point plus six private points
    // Slot 0 of index 0 meets slot 1 of index 1 at the crossing point 0.
    REQUIRE(as_set(fam.member(0) & fam.member(4)) == std::set<int>{0});
    int meeting_pairs = 0;
    for (int i = 0; i < 6; ++i)
      for (int j = i + 1; j < 6; ++j)
        if (fam.pair_max(i, j) >= 0) ++meeting_pairs;
    REQUIRE(meeting_pairs == 1);

    auto lists = column_indices(3, 2);
    REQUIRE(lists == std::vector<std::vector<int>>{{0, 3}, {1, 4}, {2, 5}});
    auto verdict = adfam::check_n_luzin_gap(fam, lists, 0);
    REQUIRE(verdict.is_gap);
    REQUIRE(verdict.m == 0);
  }

  SECTION("deeper growth keeps the column gap at zero") {
    Family fam = grow_family(3, 8, 11);
    REQUIRE(fam.size() == 24);
    REQUIRE(adfam::verify_ad(fam).ok);
    auto verdict = adfam::check_n_luzin_gap(fam, column_indices(3, 8), 0);
    REQUIRE(verdict.is_gap);
  }

  SECTION("four-slot growth makes the slot-split conditions pairwise clash") {
    Family fam = grow_family(4, 8, 2);
    REQUIRE(fam.size() == 32);
    std::vector<adfam::Condition> rho;
    for (int xi = 0; xi < 8; ++xi)
      rho.push_back(make_condition(fam, FinSet{4 * xi, 4 * xi + 1, 4 * xi + 2},
                                   FinSet{4 * xi + 3}, 0));
    for (size_t x = 0; x < rho.size(); ++x)
      for (size_t y = x + 1; y < rho.size(); ++y) REQUIRE_FALSE(adfam::compatible(rho[x], rho[y]));
  }

  SECTION("three-slot growth leaves the expected condition pairs compatible") {
    Family fam = grow_family(3, 10, 5);
    for (int xi = 0; xi < 10; ++xi)
      for (int eta = xi + 1; eta < 10; ++eta) {
        // Crossing points live in slots 0 and 1 only, so conditions built
        // from the 0/2 slot pair never clash on the ground...
        auto u = make_condition(fam, FinSet{3 * xi}, FinSet{3 * xi + 2}, 0);
        auto v = make_condition(fam, FinSet{3 * eta}, FinSet{3 * eta + 2}, 0);
        REQUIRE(adfam::compatible(u, v));
        // ...while the 0/1 slot pair clashes exactly at the crossing point.
        auto w = make_condition(fam, FinSet{3 * xi}, FinSet{3 * xi + 1}, 0);
        auto z = make_condition(fam, FinSet{3 * eta}, FinSet{3 * eta + 1}, 0);
        REQUIRE_FALSE(adfam::compatible(w, z));
      }
  }

  SECTION("growth is deterministic in the seed") {
    Family a = grow_family(3, 5, 1);
    Family b = grow_family(3, 5, 1);
    Family c = grow_family(3, 5, 2);
    REQUIRE(a.horizon() == b.horizon());
    for (int i = 0; i < a.size(); ++i) REQUIRE(a.member(i) == b.member(i));
    bool any_difference = false;
    for (int i = 0; i < a.size(); ++i)
      if (!(a.member(i) == c.member(i))) any_difference = true;
    REQUIRE(any_difference);
  }

  SECTION("parameter validation") {
    REQUIRE_THROWS_AS(grow_family(5, 2, 0), builder_error);
    REQUIRE_THROWS_AS(grow_family(3, 0, 0), builder_error);
    REQUIRE_THROWS_AS(grow_family(3, 10001, 0), builder_error);
  }
}
