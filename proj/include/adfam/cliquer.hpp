#pragma once

// Dense-graph search engines: exact maximum clique / independent set via
// branch and bound with greedy-coloring bounds (up to 64 vertices), a
// degree-greedy heuristic beyond that, DSATUR covers, and an exact
// chromatic number by dynamic programming over subsets (up to 16 vertices).

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace adfam {

class graph_error : public std::runtime_error {
 public:
  explicit graph_error(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

// Greedy coloring of the candidate set: the number of classes bounds the
// largest clique inside `cand` from above.
inline int color_bound(uint64_t cand, const std::vector<uint64_t>& adj) {
  int colors = 0;
  while (cand) {
    ++colors;
    uint64_t avail = cand;
    while (avail) {
      int v = std::countr_zero(avail);
      uint64_t bit = uint64_t{1} << v;
      avail &= ~adj[static_cast<size_t>(v)];
      avail &= ~bit;
      cand &= ~bit;
    }
  }
  return colors;
}

inline void clique_expand(uint64_t cand, uint64_t current, int size,
                          const std::vector<uint64_t>& adj, uint64_t& best_mask, int& best_size) {
  if (size > best_size) {
    best_size = size;
    best_mask = current;
  }
  if (!cand) return;
  if (size + color_bound(cand, adj) <= best_size) return;
  while (cand) {
    if (size + std::popcount(cand) <= best_size) return;
    int v = std::countr_zero(cand);
    uint64_t bit = uint64_t{1} << v;
    cand &= ~bit;
    clique_expand(cand & adj[static_cast<size_t>(v)], current | bit, size + 1, adj, best_mask,
                  best_size);
  }
}

}  // namespace detail

// Exact maximum clique on adjacency bitsets (n <= 64, irreflexive rows).
inline std::vector<int> max_clique_bitset(int n, const std::vector<uint64_t>& adj) {
  if (n < 0 || n > 64) throw graph_error("exact engine handles at most 64 vertices");
  uint64_t all = n == 64 ? ~uint64_t{0} : (uint64_t{1} << n) - 1;
  uint64_t best_mask = 0;
  int best_size = 0;
  detail::clique_expand(all, 0, 0, adj, best_mask, best_size);
  std::vector<int> out;
  for (int v = 0; v < n; ++v)
    if (best_mask >> v & 1) out.push_back(v);
  return out;
}

// Degree-greedy clique: scan vertices by descending degree (index
// tie-break), keep those adjacent to everything already kept.
inline std::vector<int> greedy_clique(const std::vector<std::vector<char>>& adj) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> order(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
  std::vector<int> deg(static_cast<size_t>(n), 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (adj[static_cast<size_t>(i)][static_cast<size_t>(j)]) ++deg[static_cast<size_t>(i)];
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return deg[static_cast<size_t>(x)] > deg[static_cast<size_t>(y)]; });
  std::vector<int> out;
  for (int v : order) {
    bool fits = true;
    for (int u : out)
      if (!adj[static_cast<size_t>(v)][static_cast<size_t>(u)]) {
        fits = false;
        break;
      }
    if (fits) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// DSATUR greedy coloring: repeatedly color the vertex seeing the most
// distinct neighbor colors (ties broken by lowest index, for determinism).
inline std::vector<int> dsatur_coloring(const std::vector<std::vector<char>>& adj) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> color(static_cast<size_t>(n), -1);
  for (int step = 0; step < n; ++step) {
    int pick = -1, pick_sat = -1;
    for (int v = 0; v < n; ++v) {
      if (color[static_cast<size_t>(v)] >= 0) continue;
      std::vector<char> seen(static_cast<size_t>(n) + 1, 0);
      int sat = 0;
      for (int u = 0; u < n; ++u)
        if (adj[static_cast<size_t>(v)][static_cast<size_t>(u)] && color[static_cast<size_t>(u)] >= 0 &&
            !seen[static_cast<size_t>(color[static_cast<size_t>(u)])]) {
          seen[static_cast<size_t>(color[static_cast<size_t>(u)])] = 1;
          ++sat;
        }
      if (sat > pick_sat) pick = v, pick_sat = sat;
    }
    std::vector<char> used(static_cast<size_t>(n) + 1, 0);
    for (int u = 0; u < n; ++u)
      if (adj[static_cast<size_t>(pick)][static_cast<size_t>(u)] && color[static_cast<size_t>(u)] >= 0)
        used[static_cast<size_t>(color[static_cast<size_t>(u)])] = 1;
    int c = 0;
    while (used[static_cast<size_t>(c)]) ++c;
    color[static_cast<size_t>(pick)] = c;
  }
  return color;
}

// Exact chromatic number by subset dynamic programming (n <= 16): the best
// coloring peels off one independent set containing the lowest vertex.
inline int exact_chromatic(const std::vector<std::vector<char>>& adj, std::vector<int>* assign) {
  const int n = static_cast<int>(adj.size());
  if (n > 16) throw graph_error("exact chromatic limited to 16 vertices");
  if (n == 0) {
    if (assign) assign->clear();
    return 0;
  }
  std::vector<uint32_t> nb(static_cast<size_t>(n), 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (adj[static_cast<size_t>(i)][static_cast<size_t>(j)]) nb[static_cast<size_t>(i)] |= uint32_t{1} << j;
  auto independent = [&](uint32_t s) {
    for (uint32_t t = s; t;) {
      int v = std::countr_zero(t);
      t &= t - 1;
      if (nb[static_cast<size_t>(v)] & s) return false;
    }
    return true;
  };
  const uint32_t full = (uint32_t{1} << n) - 1;
  std::vector<int> chi(static_cast<size_t>(full) + 1, 0);
  std::vector<uint32_t> pick(static_cast<size_t>(full) + 1, 0);
  for (uint32_t mask = 1; mask <= full; ++mask) {
    int v = std::countr_zero(mask);
    uint32_t rest = mask & ~(uint32_t{1} << v);
    int best = n + 1;
    uint32_t best_s = 0;
    // Walk submasks s' of rest; the peeled class is s' plus the low vertex.
    for (uint32_t sub = rest;; sub = (sub - 1) & rest) {
      uint32_t s = sub | (uint32_t{1} << v);
      if (independent(s)) {
        int c = chi[mask & ~s] + 1;
        if (c < best) best = c, best_s = s;
      }
      if (sub == 0) break;
    }
    chi[mask] = best;
    pick[mask] = best_s;
  }
  if (assign) {
    assign->assign(static_cast<size_t>(n), -1);
    int c = 0;
    for (uint32_t mask = full; mask; ++c) {
      uint32_t s = pick[mask];
      for (uint32_t t = s; t;) {
        int v = std::countr_zero(t);
        t &= t - 1;
        (*assign)[static_cast<size_t>(v)] = c;
      }
      mask &= ~s;
    }
  }
  return chi[full];
}

}  // namespace adfam
