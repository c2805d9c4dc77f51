#pragma once

// Randomized instance generators and a batch runner for the quantitative
// inequalities: the shell distance bound, the same-cell sup squeeze, the
// renormed separation gain at delta = 2/3, and the containment of the
// limit-read condition in the threshold-read one. Every instance is checked
// with certified arithmetic; the runner reports instance and violation
// counts per inequality and never weakens a bound to pass.

#include <cstdint>
#include <string>
#include <vector>

#include "adfam/family.hpp"
#include "adfam/geometry.hpp"
#include "adfam/prng.hpp"
#include "adfam/rational.hpp"
#include "adfam/sphere.hpp"

namespace adfam {

struct QuantLine {
  std::string name;
  int instances = 0;
  int violations = 0;
  std::string note;
};

struct QuantReport {
  std::vector<QuantLine> lines;
  bool all_ok() const {
    for (const QuantLine& l : lines)
      if (l.violations != 0 || l.instances == 0) return false;
    return true;
  }
};

namespace detail {

// A signed sixteenth at a random position of the low block [0, span).
inline void drop_random_coord(std::vector<Rational>& coords, int span, Prng& rng) {
  coords[rng.below(static_cast<uint64_t>(span))] =
      Rational(static_cast<int64_t>(rng.below(33)) - 16, 16);
}

inline SphereVector random_vector(int horizon, Prng& rng) {
  std::vector<Rational> coords(static_cast<size_t>(horizon));
  const int span = std::min(horizon, 40);
  for (int k = 0; k < 5; ++k) drop_random_coord(coords, span, rng);
  return SphereVector(horizon, std::move(coords));
}

// A near-unit vector whose weighted quadratic part certifies at a small
// level: the dominant coordinate sits at position < 4 with magnitude in
// [1/2, 1], the noise is capped at 1/4 and pushed to positions >= 8, so after
// exact division by the certified midpoint the quadratic part stays above
// 1/6 while the sup part stays the dominant coordinate's share.
inline SphereVector random_near_unit(int horizon, Prng& rng) {
  std::vector<Rational> coords(static_cast<size_t>(horizon));
  coords[rng.below(4)] = Rational(static_cast<int64_t>(rng.below(9)) + 8, 16) *
                         (rng.coin() ? Rational(1) : Rational(-1));
  const int span = std::min(horizon, 40);
  for (int k = 0; k < 3; ++k)
    if (rng.coin())
      coords[8 + rng.below(static_cast<uint64_t>(span - 8))] =
          Rational(static_cast<int64_t>(rng.below(9)) - 4, 16);
  SphereVector raw(horizon, std::move(coords));
  return scale(raw, Rational(1) / norm_inf2(raw, 128).mid());
}

// A sup-unit vector supported above position 10, keeping its quadratic part
// certifiably small.
inline SphereVector random_flat_unit(int horizon, Prng& rng) {
  std::vector<Rational> coords(static_cast<size_t>(horizon));
  const int lo = 11, hi = std::min(horizon, 44);
  coords[lo + rng.below(static_cast<uint64_t>(hi - lo))] = rng.coin() ? Rational(1) : Rational(-1);
  for (int k = 0; k < 2; ++k)
    if (rng.coin())
      coords[lo + rng.below(static_cast<uint64_t>(hi - lo))] =
          rng.coin() ? Rational(1) : Rational(-1);
  return SphereVector(horizon, std::move(coords));
}

// A rational combination of the family's members plus off-pattern noise; the
// tail records the nonzero coefficients.
inline SphereVector random_member_combination(const Family& fam, Prng& rng) {
  static const Rational pool[] = {Rational(0),     Rational(1),      Rational(-1),
                                  Rational(3, 4),  Rational(-3, 4),  Rational(1, 2),
                                  Rational(-1, 2), Rational(1, 4),   Rational(-1, 4),
                                  Rational(1, 8),  Rational(-1, 8)};
  std::vector<Rational> coords(static_cast<size_t>(fam.horizon()));
  std::vector<TailTerm> tail;
  for (int i = 0; i < fam.size(); ++i) {
    const Rational& r = pool[rng.below(11)];
    if (r.is_zero()) continue;
    for (int n : fam.member(i).elements()) coords[static_cast<size_t>(n)] = r;
    tail.push_back({i, r});
  }
  for (int k = 0; k < 3; ++k) drop_random_coord(coords, fam.horizon(), rng);
  return SphereVector(fam.horizon(), std::move(coords), std::move(tail));
}

}  // namespace detail

// Runs each inequality on `instances` random instances at the given slack.
// The family supplies the horizon for the vector inequalities and the
// members for the containment instances; it needs a horizon of at least 16.
inline QuantReport run_quantitative_suite(const Family& fam, int instances, const Rational& slack,
                                          uint64_t seed) {
  if (instances < 1) throw geometry_error("need at least one instance per inequality");
  if (slack.sign() < 0) throw geometry_error("slack must be nonnegative");
  if (fam.horizon() < 16) throw geometry_error("the suite needs a horizon of at least 16");
  const int H = fam.horizon();
  Prng rng(seed);
  QuantReport rep;

  {
    QuantLine line{.name = "shell-distance", .instances = 0, .violations = 0, .note = {}};
    static const Rational targets[] = {Rational(2, 5), Rational(1, 2), Rational(3, 5),
                                       Rational(7, 10), Rational(4, 5)};
    const Rational a(3, 10), b(9, 10);
    while (line.instances < instances) {
      SphereVector u = detail::random_vector(H, rng);
      SphereVector v = detail::random_vector(H, rng);
      if (sup_norm(u).is_zero() || sup_norm(v).is_zero()) continue;
      u = scale(u, targets[rng.below(5)] / norm_inf2(u, 128).mid());
      v = scale(v, targets[rng.below(5)] / norm_inf2(v, 128).mid());
      ++line.instances;
      if (!check_shell_distance_bound(u, v, a, b, slack)) ++line.violations;
    }
    line.note = "norms certified inside [3/10, 9/10]";
    rep.lines.push_back(line);
  }

  {
    QuantLine line{.name = "same-cell-squeeze", .instances = 0, .violations = 0, .note = {}};
    int batches = 0;
    while (line.instances < instances && batches < 40) {
      ++batches;
      std::vector<SphereVector> vs;
      for (int k = 0; k < 24; ++k) vs.push_back(detail::random_near_unit(H, rng));
      auto cells = sphere_cells(vs, Rational(1, 1000000000));
      for (size_t x = 0; x < vs.size() && line.instances < instances; ++x)
        for (size_t y = x + 1; y < vs.size() && line.instances < instances; ++y) {
          if (!(cells[x] == cells[y])) continue;
          ++line.instances;
          if (!check_sup_squeeze(vs[x], vs[y], cells[x].c, slack)) ++line.violations;
        }
    }
    if (line.instances < instances)
      throw geometry_error("could not assemble enough same-cell pairs");
    line.note = "pairs classified into one sphere cell before checking";
    rep.lines.push_back(line);
  }

  {
    QuantLine line{.name = "separation-gain", .instances = 0, .violations = 0, .note = {}};
    const Rational delta(2, 3);
    while (line.instances < instances) {
      SphereVector u = detail::random_flat_unit(H, rng);
      SphereVector v = detail::random_flat_unit(H, rng);
      ++line.instances;
      if (!check_renormed_separation_gain(u, v, delta, slack)) ++line.violations;
    }
    line.note = "delta = 2/3, so renormed distance must clear 1 + 1/2 minus the sup defect";
    rep.lines.push_back(line);
  }

  {
    QuantLine line{.name = "limit-refines-threshold", .instances = 0, .violations = 0, .note = {}};
    static const Rational eps_pool[] = {Rational(1, 4), Rational(3, 10), Rational(1, 5),
                                        Rational(1, 6)};
    while (line.instances < instances) {
      SphereVector f = detail::random_member_combination(fam, rng);
      ++line.instances;
      if (!limit_condition_refines_threshold(fam, f, eps_pool[rng.below(4)]))
        ++line.violations;
    }
    line.note = "limit-read sides certified inside the threshold-read sides";
    rep.lines.push_back(line);
  }

  return rep;
}

}  // namespace adfam
