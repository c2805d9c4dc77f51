#pragma once

// Finite amalgamation moves on indexed approximations. An approximation
// carries, for each index in a finite set, a fixed number of disjoint ground
// sets below a bound n, such that every pair of indices is already linked by
// a crossing point in a designated pattern of slots. Two approximations that
// agree where they overlap can be merged into a common refinement by
// allocating one fresh crossing point per new index pair; iterating the move
// grows an almost-disjoint family realizing the crossing pattern.

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "adfam/family.hpp"
#include "adfam/finset.hpp"
#include "adfam/prng.hpp"

namespace adfam {

class builder_error : public std::runtime_error {
 public:
  explicit builder_error(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Approximations.

struct ApproxCondition {
  int arity = 3;                             // ground sets carried per index
  int n = 0;                                 // every ground set lives in [0, n)
  std::map<int, std::vector<FinSet>> sides;  // index -> its arity ground sets

  bool has(int xi) const { return sides.count(xi) > 0; }
  const FinSet& side(int xi, int i) const {
    auto it = sides.find(xi);
    if (it == sides.end()) throw builder_error("index " + std::to_string(xi) + " not present");
    return it->second.at(static_cast<size_t>(i));
  }
  std::vector<int> indices() const {
    std::vector<int> out;
    out.reserve(sides.size());
    for (const auto& [xi, _] : sides) out.push_back(xi);
    return out;
  }
  friend bool operator==(const ApproxCondition& x, const ApproxCondition& y) {
    return x.arity == y.arity && x.n == y.n && x.sides == y.sides;
  }
  friend bool operator!=(const ApproxCondition& x, const ApproxCondition& y) {
    return !(x == y);
  }
};

// An approximation holding one index with all-empty ground sets.
inline ApproxCondition singleton_approx(int arity, int index, int n) {
  if (arity != 3 && arity != 4) throw builder_error("arity must be 3 or 4");
  if (n < 0) throw builder_error("the bound must be nonnegative");
  ApproxCondition p;
  p.arity = arity;
  p.n = n;
  p.sides[index] = std::vector<FinSet>(static_cast<size_t>(arity));
  return p;
}

// Whether the required crossing between two distinct indices is present:
// for arity 3, some two distinct slots meet; for arity 4, one of the first
// three slots meets the last slot in either orientation.
inline bool crossing_present(const ApproxCondition& p, int xi, int eta) {
  const auto& sx = p.sides.at(xi);
  const auto& se = p.sides.at(eta);
  if (p.arity == 3) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (i != j && !(sx[static_cast<size_t>(i)] & se[static_cast<size_t>(j)]).empty())
          return true;
    return false;
  }
  for (int i = 0; i < 3; ++i)
    if (!(sx[static_cast<size_t>(i)] & se[3]).empty() ||
        !(sx[3] & se[static_cast<size_t>(i)]).empty())
      return true;
  return false;
}

// Structural validity: slot counts, containment in [0, n), same-index
// disjointness, and the pairwise crossing requirement.
inline void validate_approx(const ApproxCondition& p) {
  if (p.arity != 3 && p.arity != 4) throw builder_error("arity must be 3 or 4");
  if (p.n < 0) throw builder_error("the bound must be nonnegative");
  for (const auto& [xi, slots] : p.sides) {
    if (static_cast<int>(slots.size()) != p.arity)
      throw builder_error("index " + std::to_string(xi) + " does not carry " +
                          std::to_string(p.arity) + " ground sets");
    for (const FinSet& s : slots)
      if (!s.empty() && s.max() >= p.n)
        throw builder_error("a ground set of index " + std::to_string(xi) +
                            " reaches beyond the bound");
    for (int i = 0; i < p.arity; ++i)
      for (int j = i + 1; j < p.arity; ++j)
        if (!(slots[static_cast<size_t>(i)] & slots[static_cast<size_t>(j)]).empty())
          throw builder_error("ground sets " + std::to_string(i) + " and " + std::to_string(j) +
                              " of index " + std::to_string(xi) + " overlap");
  }
  for (auto it = p.sides.begin(); it != p.sides.end(); ++it)
    for (auto jt = std::next(it); jt != p.sides.end(); ++jt)
      if (!crossing_present(p, it->first, jt->first))
        throw builder_error("indices " + std::to_string(it->first) + " and " +
                            std::to_string(jt->first) + " have no crossing point");
}

// The refinement order: p extends q when p keeps q's bound and indices,
// agrees with q below q's bound, and confines the overlap of any two of q's
// index columns to below q's bound.
inline bool leq_approx(const ApproxCondition& p, const ApproxCondition& q) {
  if (p.arity != q.arity) throw builder_error("cannot compare approximations of different arity");
  if (p.n < q.n) return false;
  for (const auto& [xi, qslots] : q.sides) {
    auto it = p.sides.find(xi);
    if (it == p.sides.end()) return false;
    for (int i = 0; i < p.arity; ++i)
      if (it->second[static_cast<size_t>(i)].below(q.n) != qslots[static_cast<size_t>(i)])
        return false;
  }
  for (auto it = q.sides.begin(); it != q.sides.end(); ++it)
    for (auto jt = std::next(it); jt != q.sides.end(); ++jt) {
      FinSet ux, ue;
      for (const FinSet& s : p.sides.at(it->first)) ux |= s;
      for (const FinSet& s : p.sides.at(jt->first)) ue |= s;
      FinSet overlap = ux & ue;
      if (!overlap.empty() && overlap.max() >= q.n) return false;
    }
  return true;
}

namespace detail {

// The merge itself, applied to inputs already known valid and agreeing.
// Fresh crossing points are the leftmost values at or above the shared
// bound, handed out in lexicographic order of (p-only index, q-only index).
// Each lands in slot 0 of its p-only index and slot `q_slot` of its q-only
// index, realizing the crossing requirement across the merge seam.
inline ApproxCondition amalgamate_impl(const ApproxCondition& p, const ApproxCondition& q,
                                       int q_slot) {
  std::vector<int> only_p, only_q;
  for (const auto& [xi, _] : p.sides)
    if (!q.has(xi)) only_p.push_back(xi);
  for (const auto& [xi, _] : q.sides)
    if (!p.has(xi)) only_q.push_back(xi);
  if (only_q.empty()) return p;
  if (only_p.empty()) return q;

  ApproxCondition r;
  r.arity = p.arity;
  r.n = p.n + static_cast<int>(only_p.size() * only_q.size());
  r.sides = p.sides;
  for (int xi : only_q) r.sides[xi] = q.sides.at(xi);

  int next = p.n;
  for (int xi : only_p)
    for (int eta : only_q) {
      r.sides[xi][0].insert(next);
      r.sides[eta][static_cast<size_t>(q_slot)].insert(next);
      ++next;
    }
  return r;
}

inline void require_mergeable(const ApproxCondition& p, const ApproxCondition& q, int arity) {
  if (p.arity != arity || q.arity != arity)
    throw builder_error("this merge handles arity-" + std::to_string(arity) +
                        " approximations only");
  validate_approx(p);
  validate_approx(q);
  if (p.n != q.n) throw builder_error("cannot merge approximations with different bounds");
  for (const auto& [xi, pslots] : p.sides) {
    auto it = q.sides.find(xi);
    if (it != q.sides.end() && pslots != it->second)
      throw builder_error("the approximations disagree on shared index " + std::to_string(xi));
  }
}

}  // namespace detail

// Merge two arity-3 approximations; fresh crossing points pair slot 0 on the
// p side with slot 1 on the q side.
inline ApproxCondition amalgamate_3luzin(const ApproxCondition& p, const ApproxCondition& q) {
  detail::require_mergeable(p, q, 3);
  ApproxCondition r = detail::amalgamate_impl(p, q, 1);
  validate_approx(r);
  if (!leq_approx(r, p) || !leq_approx(r, q))
    throw builder_error("internal: merge output does not refine both inputs");
  return r;
}

// Merge two arity-4 approximations; fresh crossing points pair slot 0 on the
// p side with slot 3 on the q side.
inline ApproxCondition amalgamate_4family(const ApproxCondition& p, const ApproxCondition& q) {
  detail::require_mergeable(p, q, 4);
  ApproxCondition r = detail::amalgamate_impl(p, q, 3);
  validate_approx(r);
  if (!leq_approx(r, p) || !leq_approx(r, q))
    throw builder_error("internal: merge output does not refine both inputs");
  return r;
}

// Column index lists for a grown family: list i holds, for each growth step,
// the member built from slot i of that step's index.
inline std::vector<std::vector<int>> column_indices(int arity, int steps) {
  std::vector<std::vector<int>> lists(static_cast<size_t>(arity));
  for (int i = 0; i < arity; ++i)
    for (int xi = 0; xi < steps; ++xi)
      lists[static_cast<size_t>(i)].push_back(arity * xi + i);
  return lists;
}

// Grows an approximation by merging in one fresh index at a time, then pads
// every slot with one private point (in a seed-shuffled order) so the slots
// become members of an almost-disjoint family. Member arity*xi + i is slot i
// of index xi. The final approximation is re-validated exhaustively before
// the family is assembled; the family constructor re-verifies disjointness.
// The ground grows quadratically in steps (one crossing point per index
// pair), so large step counts are expensive by nature.
inline Family grow_family(int arity, int steps, uint64_t seed) {
  if (arity != 3 && arity != 4) throw builder_error("arity must be 3 or 4");
  if (steps < 1 || steps > 10000) throw builder_error("steps must lie in [1, 10000]");

  ApproxCondition r = singleton_approx(arity, 0, 0);
  for (int t = 1; t < steps; ++t)
    r = detail::amalgamate_impl(r, singleton_approx(arity, t, r.n), arity == 3 ? 1 : 3);

  // One private point per slot, dealt above all crossing points so every
  // member keeps an element beyond every pairwise overlap.
  std::vector<std::pair<int, int>> slots;
  for (int xi = 0; xi < steps; ++xi)
    for (int i = 0; i < arity; ++i) slots.emplace_back(xi, i);
  Prng rng(seed);
  for (size_t k = slots.size(); k > 1; --k)
    std::swap(slots[k - 1], slots[rng.below(k)]);
  int next = r.n;
  for (const auto& [xi, i] : slots) r.sides[xi][static_cast<size_t>(i)].insert(next++);
  r.n = next;

  validate_approx(r);
  std::vector<FinSet> members;
  members.reserve(static_cast<size_t>(arity * steps));
  for (int xi = 0; xi < steps; ++xi)
    for (int i = 0; i < arity; ++i) members.push_back(r.sides[xi][static_cast<size_t>(i)]);
  return Family(std::move(members), r.n);
}

}  // namespace adfam
