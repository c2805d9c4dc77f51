#pragma once

// The compatibility graph on vertices (a, b) of disjoint generator-label
// sets: building adjacency from the four-set join of label unions (under a
// recorded edge convention), moving between vertices and conditions, clique
// and independent-set search, cover computations, and DOT/JSON export.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "adfam/cliquer.hpp"
#include "adfam/condition.hpp"
#include "adfam/core_sets.hpp"
#include "adfam/family.hpp"
#include "adfam/finset.hpp"
#include "adfam/parallel.hpp"

namespace adfam {

struct Vertex {
  FinSet a;
  FinSet b;
  bool operator==(const Vertex& o) const { return a == o.a && b == o.b; }
};

// What an edge asserts about the four-set join of the label unions: either
// that it is empty (equivalently, the conditions are compatible) or that it
// is nonempty.  Every export records the convention in force.
enum class EdgeConvention { compatible, join_nonempty };

inline std::string to_string(EdgeConvention c) {
  return c == EdgeConvention::compatible ? "compatible" : "join_nonempty";
}

struct OrderGraph {
  std::vector<Vertex> vertices;
  std::vector<std::vector<char>> adjacency;  // symmetric, zero diagonal
  EdgeConvention edge_means = EdgeConvention::compatible;

  int size() const { return static_cast<int>(vertices.size()); }
  bool edge(int i, int j) const {
    return adjacency.at(static_cast<size_t>(i)).at(static_cast<size_t>(j)) != 0;
  }
};

inline Vertex vertex_of(const Condition& p) { return Vertex{p.a(), p.b()}; }

// Build the condition whose sides are exactly ⋃a∖⋃b and ⋃b∖⋃a: the ground
// cut sits just above the last clash of the two unions, and the explicit
// parts keep everything of each difference that falls below the cut.
inline Condition condition_of(const Vertex& v, const Family& fam) {
  FinSet U = fam.union_of(v.a);
  FinSet V = fam.union_of(v.b);
  FinSet clash = U & V;
  int m = clash.empty() ? 0 : clash.max() + 1;
  return Condition(fam, v.a, v.b, m, (U - V).below(m), (V - U).below(m));
}

inline OrderGraph build_graph(const Family& fam, const std::vector<Vertex>& vertices,
                              EdgeConvention convention = EdgeConvention::compatible) {
  const int n = static_cast<int>(vertices.size());
  std::vector<FinSet> ua(static_cast<size_t>(n)), ub(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const Vertex& v = vertices[static_cast<size_t>(i)];
    if (v.a.intersects(v.b)) throw graph_error("vertex label sets overlap");
    if ((!v.a.empty() && v.a.max() >= fam.size()) || (!v.b.empty() && v.b.max() >= fam.size()))
      throw graph_error("vertex labels an absent family member");
    ua[static_cast<size_t>(i)] = fam.union_of(v.a);
    ub[static_cast<size_t>(i)] = fam.union_of(v.b);
  }
  OrderGraph g;
  g.vertices = vertices;
  g.edge_means = convention;
  g.adjacency.assign(static_cast<size_t>(n), std::vector<char>(static_cast<size_t>(n), 0));
  parallel_for(n, [&](int64_t i) {
    for (int j = 0; j < n; ++j) {
      if (j == static_cast<int>(i)) continue;
      bool join_empty = join(ua[static_cast<size_t>(i)], ub[static_cast<size_t>(i)],
                             ua[static_cast<size_t>(j)], ub[static_cast<size_t>(j)])
                            .empty();
      bool e = convention == EdgeConvention::compatible ? join_empty : !join_empty;
      g.adjacency[static_cast<size_t>(i)][static_cast<size_t>(j)] = e ? 1 : 0;
    }
  });
  return g;
}

enum class SearchMode { automatic, exact, heuristic };

struct VertexSetResult {
  std::vector<int> members;
  bool exact = false;
};

namespace detail {

inline void verify_vertex_set(const std::vector<std::vector<char>>& adj, const std::vector<int>& set,
                              bool want_adjacent, const char* what) {
  for (size_t x = 0; x < set.size(); ++x)
    for (size_t y = x + 1; y < set.size(); ++y) {
      bool e = adj[static_cast<size_t>(set[x])][static_cast<size_t>(set[y])] != 0;
      if (e != want_adjacent) throw graph_error(std::string("search returned an invalid ") + what);
    }
}

inline VertexSetResult search_vertex_set(const std::vector<std::vector<char>>& adj, SearchMode mode,
                                         bool want_adjacent, const char* what) {
  const int n = static_cast<int>(adj.size());
  // For an independent set, run the clique machinery on the complement.
  auto edge = [&](int i, int j) {
    bool e = adj[static_cast<size_t>(i)][static_cast<size_t>(j)] != 0;
    return want_adjacent ? e : (i != j && !e);
  };
  bool exact = mode == SearchMode::exact || (mode == SearchMode::automatic && n <= 64);
  if (exact && n > 64) throw graph_error("size limit exceeded for exact mode");
  if (!exact && n > 10000) throw graph_error("size limit exceeded for the heuristic engine");
  VertexSetResult out;
  out.exact = exact;
  if (exact) {
    std::vector<uint64_t> rows(static_cast<size_t>(n), 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (edge(i, j)) rows[static_cast<size_t>(i)] |= uint64_t{1} << j;
    out.members = max_clique_bitset(n, rows);
  } else {
    std::vector<std::vector<char>> work(static_cast<size_t>(n),
                                        std::vector<char>(static_cast<size_t>(n), 0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) work[static_cast<size_t>(i)][static_cast<size_t>(j)] = edge(i, j);
    out.members = greedy_clique(work);
  }
  verify_vertex_set(adj, out.members, want_adjacent, what);
  return out;
}

}  // namespace detail

inline VertexSetResult max_clique(const OrderGraph& g, SearchMode mode = SearchMode::automatic) {
  return detail::search_vertex_set(g.adjacency, mode, true, "clique");
}

inline VertexSetResult max_independent_set(const OrderGraph& g,
                                           SearchMode mode = SearchMode::automatic) {
  return detail::search_vertex_set(g.adjacency, mode, false, "independent set");
}

struct CoverResult {
  std::vector<int> class_of;
  int classes = 0;
  bool exact = false;
};

namespace detail {

inline CoverResult cover_by_coloring(const std::vector<std::vector<char>>& adj, SearchMode mode,
                                     bool color_complement, const char* what) {
  const int n = static_cast<int>(adj.size());
  std::vector<std::vector<char>> work(static_cast<size_t>(n),
                                      std::vector<char>(static_cast<size_t>(n), 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      bool e = adj[static_cast<size_t>(i)][static_cast<size_t>(j)] != 0;
      work[static_cast<size_t>(i)][static_cast<size_t>(j)] = color_complement ? (i != j && !e) : e;
    }
  bool exact = mode == SearchMode::exact || (mode == SearchMode::automatic && n <= 16);
  if (exact && n > 16) throw graph_error("size limit exceeded for exact mode");
  CoverResult out;
  out.exact = exact;
  if (exact) {
    out.classes = exact_chromatic(work, &out.class_of);
  } else {
    out.class_of = dsatur_coloring(work);
    out.classes = 0;
    for (int c : out.class_of) out.classes = std::max(out.classes, c + 1);
  }
  // Certify every class: classes of a clique cover must be pairwise
  // adjacent in the original graph, classes of an independent cover must
  // be pairwise non-adjacent.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (out.class_of[static_cast<size_t>(i)] != out.class_of[static_cast<size_t>(j)]) continue;
      bool e = adj[static_cast<size_t>(i)][static_cast<size_t>(j)] != 0;
      if (e != color_complement)
        throw graph_error(std::string("cover class is not a valid ") + what);
    }
  return out;
}

}  // namespace detail

inline CoverResult cover_by_cliques(const OrderGraph& g, SearchMode mode = SearchMode::automatic) {
  return detail::cover_by_coloring(g.adjacency, mode, true, "clique");
}

inline CoverResult cover_by_independent_sets(const OrderGraph& g,
                                             SearchMode mode = SearchMode::automatic) {
  return detail::cover_by_coloring(g.adjacency, mode, false, "independent set");
}

namespace detail {

inline std::string label_text(const FinSet& s) {
  std::string out;
  bool first = true;
  for (int e : s.elements()) {
    if (!first) out += ' ';
    out += std::to_string(e);
    first = false;
  }
  return out;
}

}  // namespace detail

inline std::string export_graph(const OrderGraph& g, const std::string& format) {
  const int n = g.size();
  if (format == "dot") {
    std::string out = "graph conditions {\n";
    out += "  edge_means=\"" + to_string(g.edge_means) + "\";\n";
    for (int i = 0; i < n; ++i) {
      const Vertex& v = g.vertices[static_cast<size_t>(i)];
      out += "  v" + std::to_string(i) + " [label=\"" + detail::label_text(v.a) + "|" +
             detail::label_text(v.b) + "\"];\n";
    }
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (g.edge(i, j)) out += "  v" + std::to_string(i) + " -- v" + std::to_string(j) + ";\n";
    out += "}\n";
    return out;
  }
  if (format == "json") {
    nlohmann::json j;
    j["edge_means"] = to_string(g.edge_means);
    j["vertices"] = nlohmann::json::array();
    for (const Vertex& v : g.vertices)
      j["vertices"].push_back({{"a", v.a.elements()}, {"b", v.b.elements()}});
    j["adjacency"] = nlohmann::json::array();
    for (int i = 0; i < n; ++i) {
      std::vector<int> row(static_cast<size_t>(n), 0);
      for (int jx = 0; jx < n; ++jx) row[static_cast<size_t>(jx)] = g.edge(i, jx) ? 1 : 0;
      j["adjacency"].push_back(row);
    }
    return j.dump(2) + "\n";
  }
  throw graph_error("unknown export format: " + format);
}

inline OrderGraph import_graph(const std::string& json_bytes) {
  nlohmann::json j = nlohmann::json::parse(json_bytes);
  OrderGraph g;
  std::string conv = j.at("edge_means").get<std::string>();
  if (conv == "compatible")
    g.edge_means = EdgeConvention::compatible;
  else if (conv == "join_nonempty")
    g.edge_means = EdgeConvention::join_nonempty;
  else
    throw graph_error("unknown edge convention: " + conv);
  for (const auto& jv : j.at("vertices")) {
    std::vector<int> av = jv.at("a").get<std::vector<int>>();
    std::vector<int> bv = jv.at("b").get<std::vector<int>>();
    Vertex v{FinSet::from_sorted(av), FinSet::from_sorted(bv)};
    if (v.a.intersects(v.b)) throw graph_error("vertex label sets overlap");
    g.vertices.push_back(std::move(v));
  }
  const int n = g.size();
  const auto& adj = j.at("adjacency");
  if (static_cast<int>(adj.size()) != n) throw graph_error("adjacency size mismatch");
  g.adjacency.assign(static_cast<size_t>(n), std::vector<char>(static_cast<size_t>(n), 0));
  for (int i = 0; i < n; ++i) {
    const auto& row = adj.at(static_cast<size_t>(i));
    if (static_cast<int>(row.size()) != n) throw graph_error("adjacency size mismatch");
    for (int jx = 0; jx < n; ++jx)
      g.adjacency[static_cast<size_t>(i)][static_cast<size_t>(jx)] =
          row.at(static_cast<size_t>(jx)).get<int>() ? 1 : 0;
  }
  for (int i = 0; i < n; ++i) {
    if (g.adjacency[static_cast<size_t>(i)][static_cast<size_t>(i)])
      throw graph_error("adjacency has a loop");
    for (int jx = 0; jx < n; ++jx)
      if (g.adjacency[static_cast<size_t>(i)][static_cast<size_t>(jx)] !=
          g.adjacency[static_cast<size_t>(jx)][static_cast<size_t>(i)])
        throw graph_error("adjacency is not symmetric");
  }
  return g;
}

}  // namespace adfam
