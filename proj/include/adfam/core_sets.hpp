#pragma once

// Ground-interval combinatorics: the four-set join operator, the level-order
// bijection between short binary strings and integers, and Δ-system
// extraction from a list of finite sets.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "adfam/finset.hpp"

namespace adfam {

// join(A,B,C,D) = ((A\B) ∩ (D\C)) ∪ ((B\A) ∩ (C\D)).
// All stamped horizons among the inputs must agree.
inline FinSet join(const FinSet& A, const FinSet& B, const FinSet& C, const FinSet& D) {
  int h = FinSet::kFreeHorizon;
  for (const FinSet* s : {&A, &B, &C, &D}) {
    if (s->horizon() == FinSet::kFreeHorizon) continue;
    if (h != FinSet::kFreeHorizon && s->horizon() != h)
      throw horizon_error("join over mismatched ground intervals");
    h = s->horizon();
  }
  return ((A - B) & (D - C)) | ((B - A) & (C - D));
}

// Level-order bijection between binary strings of length < depth_bound and
// the integers [0, 2^depth_bound - 1): "" -> 0, "0" -> 1, "1" -> 2, "00" -> 3, ...
inline int tree_index(const std::string& t, int depth_bound) {
  if (static_cast<int>(t.size()) >= depth_bound)
    throw std::out_of_range("binary string too long for depth bound");
  int value = 0;
  for (char c : t) {
    if (c != '0' && c != '1') throw std::invalid_argument("binary string expected");
    value = value * 2 + (c - '0');
  }
  return (1 << t.size()) - 1 + value;
}

inline std::string tree_string(int n, int depth_bound) {
  if (n < 0 || n >= (1 << depth_bound) - 1)
    throw std::out_of_range("integer outside tree-code range");
  int len = 0;
  while ((1 << (len + 1)) - 1 <= n) ++len;
  int value = n - ((1 << len) - 1);
  std::string t(static_cast<size_t>(len), '0');
  for (int i = len - 1; i >= 0; --i) {
    t[static_cast<size_t>(i)] = static_cast<char>('0' + (value & 1));
    value >>= 1;
  }
  return t;
}

struct DeltaSystem {
  FinSet root;
  std::vector<int> petal_indices;  // ascending
};

namespace detail {

// Exact maximum independent set on <= 63 vertices given a bitmask adjacency.
inline void mis_recurse(const std::vector<uint64_t>& adj, uint64_t candidates, int count,
                        uint64_t chosen, int& best_count, uint64_t& best_set) {
  if (count + std::popcount(candidates) <= best_count) return;
  if (!candidates) {
    if (count > best_count) {
      best_count = count;
      best_set = chosen;
    }
    return;
  }
  int v = std::countr_zero(candidates);
  uint64_t bit = uint64_t(1) << v;
  mis_recurse(adj, candidates & ~(adj[static_cast<size_t>(v)] | bit), count + 1, chosen | bit,
              best_count, best_set);
  mis_recurse(adj, candidates & ~bit, count, chosen, best_count, best_set);
}

}  // namespace detail

// Finds >= target_size indices whose sets pairwise intersect in exactly one
// common root. Exhaustive (exact maximum per candidate root) for lists of at
// most 20 sets; greedy by root frequency beyond that. Absence is a value.
inline std::optional<DeltaSystem> delta_system(const std::vector<FinSet>& sets, int target_size) {
  if (sets.empty()) throw std::invalid_argument("delta_system over empty list");
  if (target_size < 2) throw std::invalid_argument("delta_system target must be at least 2");
  const int n = static_cast<int>(sets.size());
  if (n < target_size) return std::nullopt;

  // Any root of a >= 2-petal system is the intersection of two petals, so the
  // pairwise intersections exhaust the candidates.
  std::map<std::vector<int>, std::pair<FinSet, int>> candidates;  // elements -> (set, freq)
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      FinSet r = sets[static_cast<size_t>(i)] & sets[static_cast<size_t>(j)];
      auto [it, fresh] = candidates.try_emplace(r.elements(), r, 0);
      it->second.second += 1;
      (void)fresh;
    }
  std::vector<std::pair<FinSet, int>> order;
  for (auto& [key, val] : candidates) order.push_back(val);
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  for (auto& [root, freq] : order) {
    (void)freq;
    std::vector<int> eligible;
    for (int i = 0; i < n; ++i)
      if (root.subset_of(sets[static_cast<size_t>(i)])) eligible.push_back(i);
    if (static_cast<int>(eligible.size()) < target_size) continue;

    if (n <= 20) {
      // Conflict graph: petals clash when their intersection differs from root.
      const int k = static_cast<int>(eligible.size());
      std::vector<uint64_t> adj(static_cast<size_t>(k), 0);
      for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b) {
          FinSet inter = sets[static_cast<size_t>(eligible[static_cast<size_t>(a)])] &
                         sets[static_cast<size_t>(eligible[static_cast<size_t>(b)])];
          if (inter != root) {
            adj[static_cast<size_t>(a)] |= uint64_t(1) << b;
            adj[static_cast<size_t>(b)] |= uint64_t(1) << a;
          }
        }
      int best_count = 0;
      uint64_t best_set = 0;
      detail::mis_recurse(adj, (k == 64 ? ~uint64_t(0) : (uint64_t(1) << k) - 1), 0, 0, best_count,
                          best_set);
      if (best_count >= target_size) {
        DeltaSystem ds;
        ds.root = root;
        for (int a = 0; a < k; ++a)
          if ((best_set >> a) & 1) ds.petal_indices.push_back(eligible[static_cast<size_t>(a)]);
        return ds;
      }
    } else {
      std::vector<int> kept;
      for (int i : eligible) {
        bool ok = true;
        for (int j : kept)
          if ((sets[static_cast<size_t>(i)] & sets[static_cast<size_t>(j)]) != root) {
            ok = false;
            break;
          }
        if (ok) kept.push_back(i);
      }
      if (static_cast<int>(kept.size()) >= target_size) return DeltaSystem{root, kept};
    }
  }
  return std::nullopt;
}

// Re-checks a claimed Δ-system against the sets it was extracted from.
inline bool verify_delta_system(const std::vector<FinSet>& sets, const DeltaSystem& ds) {
  for (size_t a = 0; a < ds.petal_indices.size(); ++a)
    for (size_t b = a + 1; b < ds.petal_indices.size(); ++b) {
      const FinSet& x = sets[static_cast<size_t>(ds.petal_indices[a])];
      const FinSet& y = sets[static_cast<size_t>(ds.petal_indices[b])];
      if ((x & y) != ds.root) return false;
    }
  return true;
}

}  // namespace adfam
