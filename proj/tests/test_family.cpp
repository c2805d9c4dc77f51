// Family constructors, the almost-disjointness certificate, metadata
// validation, and the n-way gap machinery.

#include <catch2/catch_amalgamated.hpp>

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

#include "adfam/family.hpp"
#include "adfam/prng.hpp"

using adfam::family_error;
using adfam::Family;
using adfam::FinSet;
using adfam::Prng;
using adfam::Rational;

namespace {

// Seeds with distinct short prefixes and a fixed both-bit pad; keeps every
// cross intersection low while giving each member a high private element.
std::vector<std::string> prefixed_seeds(int prefix_bits, const std::string& pad) {
  std::vector<std::string> seeds;
  for (int v = 0; v < (1 << prefix_bits); ++v) {
    std::string s;
    for (int i = prefix_bits - 1; i >= 0; --i) s += static_cast<char>('0' + ((v >> i) & 1));
    seeds.push_back(s + pad);
  }
  return seeds;
}

mpf_class to_mpf(const Rational& r) { return mpf_class(mpq_class(r.to_string()), 256); }

}  // namespace

TEST_CASE("family constructor computes tight bounds and enforces invariants") {
  Family fam({FinSet{0, 2, 8}, FinSet{1, 2, 9}, FinSet{3, 10}}, 12);
  REQUIRE(fam.size() == 3);
  REQUIRE(fam.ad_bound(0, 1) == 3);
  REQUIRE(fam.ad_bound(1, 0) == 3);
  REQUIRE(fam.ad_bound(0, 2) == 0);
  REQUIRE(fam.intersection_ceiling() == 3);
  REQUIRE(adfam::verify_ad(fam).ok);
  REQUIRE(fam.union_of(FinSet{0, 2}) == FinSet{0, 2, 3, 8, 10});
  REQUIRE(fam.pair_max(0, 1) == 2);
  REQUIRE(fam.pair_max(0, 2) == -1);

  // Tail proxy: members need an element at or above the ceiling.
  REQUIRE_THROWS_AS(Family({FinSet{0, 1}, FinSet{1, 2}}, 4), family_error);
  // Empty members are rejected.
  REQUIRE_THROWS_AS(Family({FinSet{0}, FinSet{}}, 4), family_error);
  // Horizon is a hard wall.
  REQUIRE_THROWS_AS(Family({FinSet{0}, FinSet{5}}, 4), family_error);
}

TEST_CASE("verify_ad flags duplicated members naming the pair") {
  auto rep = adfam::verify_ad_raw({FinSet{0, 1, 7}, FinSet{0, 1, 7}}, 10);
  REQUIRE_FALSE(rep.ok);
  REQUIRE(rep.vi == 0);
  REQUIRE(rep.vj == 1);
  REQUIRE(rep.reason.find("(0, 1)") != std::string::npos);
  // Empty family: trivial certificate.
  REQUIRE(adfam::verify_ad_raw({}, 1).ok);
}

TEST_CASE("tree-seed family frozen members at depth 3") {
  Family fam = adfam::build_steprans(3, {"010", "101"});
  REQUIRE(fam.size() == 4);
  REQUIRE(fam.horizon() == 7);
  REQUIRE(fam.member(0) == FinSet{0, 4});  // seed 010, side 0
  REQUIRE(fam.member(1) == FinSet{1});     // seed 010, side 1
  REQUIRE(fam.member(2) == FinSet{2});     // seed 101, side 0
  REQUIRE(fam.member(3) == FinSet{0, 5});  // seed 101, side 1
  const auto* sm = fam.meta_as<adfam::SteppransMeta>();
  REQUIRE(sm != nullptr);
  REQUIRE(sm->tags == std::vector<std::pair<int, int>>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  REQUIRE(adfam::verify_ad(fam).ok);
  REQUIRE_NOTHROW(adfam::validate_metadata(fam));
  auto [zeros, ones] = adfam::steprans_side_lists(fam);
  REQUIRE(zeros == std::vector<int>{0, 2});
  REQUIRE(ones == std::vector<int>{1, 3});
}

TEST_CASE("tree-seed family: the two sides of one seed are disjoint") {
  Family fam = adfam::build_steprans(4, {"0110"});
  REQUIRE(fam.size() == 2);
  REQUIRE_FALSE(fam.member(0).intersects(fam.member(1)));
}

TEST_CASE("tree-seed family: distinct seeds meet on opposite sides") {
  auto seeds = prefixed_seeds(3, "01");
  Family fam = adfam::build_steprans(5, seeds);
  REQUIRE(fam.size() == 16);
  for (int s = 0; s < 8; ++s)
    for (int t = s + 1; t < 8; ++t) {
      bool witnessed = false;
      for (int i = 0; i < 2 && !witnessed; ++i)
        if (fam.member(2 * s + i).intersects(fam.member(2 * t + (1 - i)))) witnessed = true;
      REQUIRE(witnessed);
    }
}

TEST_CASE("tree-seed family rejects bad seeds") {
  REQUIRE_THROWS_AS(adfam::build_steprans(3, {"010", "010"}), family_error);
  REQUIRE_THROWS_AS(adfam::build_steprans(3, {"000"}), family_error);  // one bit only
  REQUIRE_THROWS_AS(adfam::build_steprans(3, {"01"}), family_error);   // wrong length
  REQUIRE_THROWS_AS(adfam::build_steprans(1, {"0"}), family_error);    // depth too small
  REQUIRE_THROWS_AS(adfam::build_steprans(3, {}), family_error);
  // These two seeds force an intersection ceiling above some member's top
  // element, so the finiteness proxy fails and construction must refuse.
  REQUIRE_THROWS_AS(adfam::build_steprans(3, {"011", "010"}), family_error);
}

TEST_CASE("sharing family frozen layout for count 3, columns 2") {
  Family fam = adfam::build_luzin(3, 2);
  REQUIRE(fam.size() == 3);
  REQUIRE(fam.member(0) == FinSet{0, 2, 4, 6, 8, 10});
  REQUIRE(fam.member(1) == FinSet{1, 3, 5, 7, 9, 11});
  REQUIRE(fam.member(2) == FinSet{8, 9, 12});
  REQUIRE(fam.horizon() == 13);
  REQUIRE((fam.member(0) & fam.member(2)) == FinSet{8});
  REQUIRE((fam.member(1) & fam.member(2)) == FinSet{9});
  REQUIRE_FALSE(fam.member(0).intersects(fam.member(1)));
  const auto* lm = fam.meta_as<adfam::LuzinMeta>();
  REQUIRE(lm != nullptr);
  REQUIRE(lm->multiplicity == 1);
  REQUIRE(lm->f[2] == std::map<int, int>{{0, 8}, {1, 9}});
  REQUIRE_NOTHROW(adfam::validate_metadata(fam));
}

TEST_CASE("sharing family witness properties at a larger size") {
  Family fam = adfam::build_luzin(12, 3);
  const auto* lm = fam.meta_as<adfam::LuzinMeta>();
  REQUIRE(lm != nullptr);
  REQUIRE_NOTHROW(adfam::validate_metadata(fam));
  REQUIRE(adfam::verify_ad(fam).ok);
  for (int eta = 3; eta < 12; ++eta) {
    // Later members meet every earlier member, in exactly one point.
    for (int xi = 0; xi < eta; ++xi) {
      REQUIRE((fam.member(xi) & fam.member(eta)).size() == 1);
      REQUIRE(lm->f[static_cast<size_t>(eta)].at(xi) == fam.pair_max(xi, eta));
    }
    // f_eta is injective.
    std::map<int, int> seen;
    for (auto [xi, mx] : lm->f[static_cast<size_t>(eta)]) REQUIRE(seen.emplace(mx, xi).second);
  }
  // For fixed xi the shared maxima increase along the construction order.
  for (int xi = 0; xi < 3; ++xi) {
    int prev = -1;
    for (int eta = 3; eta < 12; ++eta) {
      int cur = lm->f[static_cast<size_t>(eta)].at(xi);
      REQUIRE(cur > prev);
      prev = cur;
    }
  }
  REQUIRE_THROWS_AS(adfam::build_luzin(2, 3), family_error);
  REQUIRE_THROWS_AS(adfam::build_luzin(5, 1), family_error);
}

TEST_CASE("tampered sharing witness fails validation") {
  Family fam = adfam::build_luzin(5, 2);
  auto lm = *fam.meta_as<adfam::LuzinMeta>();
  lm.f[3][0] += 1;
  Family tampered(std::vector<FinSet>(fam.members()), fam.horizon(), lm);
  REQUIRE_THROWS_AS(adfam::validate_metadata(tampered), family_error);
}

TEST_CASE("embedded family frozen convergents for two blocks of three") {
  Family fam = adfam::build_r_embeddable(2, 6, 3, 1);
  REQUIRE(fam.size() == 2);
  REQUIRE(fam.member(0) == FinSet{0, 1, 2});
  REQUIRE(fam.member(1) == FinSet{3, 4, 5});
  REQUIRE(fam.intersection_ceiling() == 0);
  const auto* em = fam.meta_as<adfam::EmbeddingMeta>();
  REQUIRE(em != nullptr);
  // Continued-fraction convergents of sqrt(2), skipping 3/2 which sits
  // exactly on the dyadic separator between the two home cells.
  REQUIRE(em->values[0] == Rational(1));
  REQUIRE(em->values[1] == Rational(7, 5));
  REQUIRE(em->values[2] == Rational(17, 12));
  // Convergents of sqrt(3), skipping the initial 1 which falls outside the
  // home cell.
  REQUIRE(em->values[3] == Rational(2));
  REQUIRE(em->values[4] == Rational(5, 3));
  REQUIRE(em->values[5] == Rational(7, 4));
  REQUIRE(em->separators.size() == 3);
  REQUIRE(em->separators[1] == Rational(3, 2));
  REQUIRE_NOTHROW(adfam::validate_metadata(fam));

  // Oracle: the limit intervals really bracket sqrt(2) and sqrt(3).
  mpf_class s2(0, 256), s3(0, 256);
  mpf_sqrt_ui(s2.get_mpf_t(), 2);
  mpf_sqrt_ui(s3.get_mpf_t(), 3);
  REQUIRE(to_mpf(em->limits[0].lo()) <= s2);
  REQUIRE(s2 <= to_mpf(em->limits[0].hi()));
  REQUIRE(to_mpf(em->limits[1].lo()) <= s3);
  REQUIRE(s3 <= to_mpf(em->limits[1].hi()));
  REQUIRE(em->limits[0].width() <= Rational::pow2(-32));
}

TEST_CASE("embedded family capacity and degenerate cases") {
  REQUIRE_THROWS_AS(adfam::build_r_embeddable(3, 8, 3, 0), family_error);
  Family one = adfam::build_r_embeddable(1, 4, 4, 0);
  REQUIRE(one.size() == 1);
  REQUIRE_NOTHROW(adfam::validate_metadata(one));
  // Larger instance: pairwise disjoint limits, injective values.
  Family big = adfam::build_r_embeddable(6, 80, 12, 0);
  REQUIRE_NOTHROW(adfam::validate_metadata(big));
  REQUIRE(adfam::verify_ad(big).ok);
}

TEST_CASE("tampered embedding values fail validation") {
  Family fam = adfam::build_r_embeddable(2, 6, 3, 1);
  auto em = *fam.meta_as<adfam::EmbeddingMeta>();
  em.values[1] = em.values[4];  // break injectivity
  Family tampered(std::vector<FinSet>(fam.members()), fam.horizon(), em);
  REQUIRE_THROWS_AS(adfam::validate_metadata(tampered), family_error);
}

TEST_CASE("refinement by a bitstream") {
  Family base = adfam::build_luzin(16, 4);
  // Identity stream.
  Family same = adfam::cohen_refine(base, FinSet::interval(0, base.horizon()), "sharing(16,4)");
  REQUIRE(same.size() == base.size());
  for (int i = 0; i < base.size(); ++i) REQUIRE(same.member(i) == base.member(i));
  REQUIRE(same.meta_as<adfam::CohenMeta>() != nullptr);

  // All-zero stream kills everything, and says so.
  try {
    adfam::cohen_refine(base, FinSet{});
    FAIL("expected a refinement failure");
  } catch (const family_error& e) {
    REQUIRE(std::string(e.what()).find("kills member") != std::string::npos);
    REQUIRE(std::string(e.what()).find("15") != std::string::npos);
  }

  // Seeded stream, forced to keep each member's top element alive.
  Prng rng(2024);
  FinSet ones;
  for (int g = 0; g < base.horizon(); ++g)
    if (rng.below(4) < 3) ones.insert(g);
  for (int i = 0; i < base.size(); ++i) ones.insert(base.member(i).max());
  Family refined = adfam::cohen_refine(base, ones, "sharing(16,4)");
  REQUIRE(adfam::verify_ad(refined).ok);
  for (int i = 0; i < base.size(); ++i) {
    REQUIRE(refined.member(i).subset_of(base.member(i)));
    for (int j = 0; j < base.size(); ++j)
      if (i != j) REQUIRE(refined.ad_bound(i, j) <= base.ad_bound(i, j));
  }
}

TEST_CASE("gap verdicts on the two-sided tree-seed family") {
  Family fam = adfam::build_steprans(5, prefixed_seeds(3, "01"));
  auto [zeros, ones] = adfam::steprans_side_lists(fam);
  auto verdict = adfam::check_n_luzin_gap(fam, {zeros, ones}, 0);
  REQUIRE(verdict.is_gap);
  REQUIRE(verdict.describe() == "gap(0)");
  REQUIRE(adfam::find_gap_witness(fam, {zeros, ones}) == std::optional<int>(0));
}

TEST_CASE("gap fails on disjoint column families") {
  Family fam({FinSet{0, 4}, FinSet{1, 5}, FinSet{2, 6}, FinSet{3, 7}}, 8);
  for (int m = 0; m <= fam.intersection_ceiling(); ++m) {
    auto verdict = adfam::check_n_luzin_gap(fam, {{0, 1}, {2, 3}}, m);
    REQUIRE_FALSE(verdict.is_gap);
    REQUIRE(verdict.clause == 2);
  }
  REQUIRE_FALSE(adfam::find_gap_witness(fam, {{0, 1}, {2, 3}}).has_value());
}

TEST_CASE("gap precondition violations") {
  Family fam = adfam::build_steprans(5, prefixed_seeds(3, "01"));
  REQUIRE_THROWS_AS(adfam::check_n_luzin_gap(fam, {{0, 1}, {1, 2}}, 0), family_error);
  REQUIRE_THROWS_AS(adfam::check_n_luzin_gap(fam, {{0, 1}}, 0), family_error);
  REQUIRE_THROWS_AS(adfam::check_n_luzin_gap(fam, {{0, 1}, {2}}, 0), family_error);
  REQUIRE_THROWS_AS(adfam::check_n_luzin_gap(fam, {{0}, {2}}, 0), family_error);
}

TEST_CASE("a gap survives raising the witness after trace filtering") {
  Family fam = adfam::build_steprans(5, prefixed_seeds(3, "01"));
  auto [zeros, ones] = adfam::steprans_side_lists(fam);
  REQUIRE(adfam::check_n_luzin_gap(fam, {zeros, ones}, 0).is_gap);
  const int m2 = 2;
  // Bucket positions by their trace below m2 across both lists.
  std::map<std::vector<std::vector<int>>, std::vector<int>> groups;
  for (size_t alpha = 0; alpha < zeros.size(); ++alpha) {
    std::vector<std::vector<int>> trace = {
        fam.member(zeros[alpha]).below(m2).elements(),
        fam.member(ones[alpha]).below(m2).elements()};
    groups[trace].push_back(static_cast<int>(alpha));
  }
  bool found_multi = false;
  for (const auto& [trace, alphas] : groups) {
    if (alphas.size() < 2) continue;
    found_multi = true;
    std::vector<int> z2, o2;
    for (int a : alphas) {
      z2.push_back(zeros[static_cast<size_t>(a)]);
      o2.push_back(ones[static_cast<size_t>(a)]);
    }
    REQUIRE(adfam::check_n_luzin_gap(fam, {z2, o2}, m2).is_gap);
  }
  REQUIRE(found_multi);
}

namespace {

// A family laid out as k position-classes of three members each: members in
// distinct position classes share one fresh element, members in the same
// class are disjoint. Every member also gets one private element.
Family cross_sharing_family(int lists, int length) {
  int n = lists * length;
  std::vector<FinSet> members(static_cast<size_t>(n));
  auto pos_class = [length](int v) { return v % length; };
  int fresh = 0;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      if (pos_class(u) == pos_class(v)) continue;
      members[static_cast<size_t>(u)].insert(fresh);
      members[static_cast<size_t>(v)].insert(fresh);
      ++fresh;
    }
  for (int u = 0; u < n; ++u) members[static_cast<size_t>(u)].insert(fresh++);
  return Family(std::move(members), fresh);
}

}  // namespace

TEST_CASE("extending a 2-gap to a verified 3-gap") {
  // Members 0..3 and 4..7 form the 2-gap lists; 8..11 are spares that the
  // extension will adopt. Position classes are v mod 4.
  Family fam = cross_sharing_family(3, 4);
  adfam::LuzinGap gap;
  gap.lists = {{0, 1, 2, 3}, {4, 5, 6, 7}};
  gap.m = 0;
  REQUIRE(adfam::check_n_luzin_gap(fam, gap.lists, gap.m).is_gap);

  adfam::LuzinGap wide = adfam::extend_gap(fam, gap, 3);
  REQUIRE(wide.lists.size() == 3);
  REQUIRE(adfam::check_n_luzin_gap(fam, wide.lists, wide.m).is_gap);
  REQUIRE(wide.lists[2] == std::vector<int>{8, 9, 10, 11});

  // Identity extension.
  adfam::LuzinGap same = adfam::extend_gap(fam, gap, 2);
  REQUIRE(same.lists == gap.lists);
  REQUIRE(same.m == gap.m);

  // Not enough spares.
  REQUIRE_THROWS_AS(adfam::extend_gap(fam, gap, 4), family_error);
}
