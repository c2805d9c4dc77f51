#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "adfam/condition.hpp"
#include "adfam/family.hpp"
#include "adfam/finset.hpp"
#include "adfam/order_graph.hpp"
#include "adfam/prng.hpp"

using adfam::build_graph;
using adfam::Condition;
using adfam::condition_of;
using adfam::cover_by_cliques;
using adfam::cover_by_independent_sets;
using adfam::EdgeConvention;
using adfam::export_graph;
using adfam::Family;
using adfam::FinSet;
using adfam::graph_error;
using adfam::import_graph;
using adfam::make_condition;
using adfam::max_clique;
using adfam::max_independent_set;
using adfam::OrderGraph;
using adfam::Prng;
using adfam::SearchMode;
using adfam::Vertex;
using adfam::vertex_of;

namespace {

// ---------------------------------------------------------------------------
// Independent oracles, written against the contracts before the module.
// ---------------------------------------------------------------------------

// Recover a vertex from a condition by tail containment: member i belongs to
// the first component exactly when its tail above the intersection ceiling
// (and above the condition's own cut) sits inside the condition's first side.
// Tails are nonempty because every member keeps mass above the ceiling, and
// tails of distinct members never meet above it, so the recovery is sharp.
Vertex oracle_vertex(const Condition& p) {
  const Family& fam = p.family();
  int cutoff = std::max(fam.intersection_ceiling(), p.m());
  std::vector<int> av, bv;
  for (int i = 0; i < fam.size(); ++i) {
    FinSet tail = fam.member(i) - FinSet::interval(0, cutoff);
    REQUIRE(!tail.empty());
    if (tail.subset_of(p.A())) av.push_back(i);
    if (tail.subset_of(p.B())) bv.push_back(i);
  }
  return Vertex{FinSet::from_sorted(av), FinSet::from_sorted(bv)};
}

// Exhaustive maximum clique by enumerating every vertex subset.
int oracle_max_clique_size(const std::vector<std::vector<char>>& adj) {
  const int n = static_cast<int>(adj.size());
  int best = 0;
  for (uint32_t mask = 0; mask < (uint32_t{1} << n); ++mask) {
    if (std::popcount(mask) <= best) continue;
    std::vector<int> vs;
    for (int v = 0; v < n; ++v)
      if (mask >> v & 1) vs.push_back(v);
    bool ok = true;
    for (size_t x = 0; x < vs.size() && ok; ++x)
      for (size_t y = x + 1; y < vs.size(); ++y)
        if (!adj[static_cast<size_t>(vs[x])][static_cast<size_t>(vs[y])]) {
          ok = false;
          break;
        }
    if (ok) best = std::popcount(mask);
  }
  return best;
}

// Exhaustive k-colorability by backtracking (new vertices may only open one
// fresh color, which breaks color symmetry without losing any coloring).
bool oracle_colorable(const std::vector<std::vector<char>>& adj, int k) {
  const int n = static_cast<int>(adj.size());
  if (n == 0) return true;
  if (k <= 0) return false;
  std::vector<int> col(static_cast<size_t>(n), -1);
  std::function<bool(int, int)> go = [&](int v, int used) {
    if (v == n) return true;
    int top = std::min(used + 1, k);
    for (int c = 0; c < top; ++c) {
      bool ok = true;
      for (int u = 0; u < v; ++u)
        if (adj[static_cast<size_t>(v)][static_cast<size_t>(u)] && col[static_cast<size_t>(u)] == c) {
          ok = false;
          break;
        }
      if (!ok) continue;
      col[static_cast<size_t>(v)] = c;
      if (go(v + 1, std::max(used, c + 1))) return true;
      col[static_cast<size_t>(v)] = -1;
    }
    return false;
  };
  return go(0, 0);
}

void require_clique(const OrderGraph& g, const std::vector<int>& vs) {
  for (size_t x = 0; x < vs.size(); ++x)
    for (size_t y = x + 1; y < vs.size(); ++y) REQUIRE(g.edge(vs[x], vs[y]));
}

// ---------------------------------------------------------------------------
// Fixtures.
// ---------------------------------------------------------------------------

// Four members, each pair meeting in exactly one ground element below 6.
Family k4_family() {
  std::vector<FinSet> ms = {
      FinSet{0, 1, 2, 10, 14},
      FinSet{0, 3, 4, 11, 15},
      FinSet{1, 3, 5, 12, 16},
      FinSet{2, 4, 5, 13, 17},
  };
  return Family(ms, 18);
}

// Three members sharing the same low block {0,1,2} plus two members with no
// low mass at all: many label sets induce identical traces below the ceiling.
Family shared_block_family() {
  std::vector<FinSet> ms = {
      FinSet{0, 1, 2, 8, 16}, FinSet{0, 1, 2, 9, 17}, FinSet{0, 1, 2, 10, 18},
      FinSet{3, 11, 19},      FinSet{4, 12, 20},
  };
  return Family(ms, 21);
}

// Every assignment of each member to first side / second side / absent.
std::vector<Vertex> all_vertices(int members) {
  std::vector<Vertex> out;
  int total = 1;
  for (int i = 0; i < members; ++i) total *= 3;
  for (int code = 0; code < total; ++code) {
    std::vector<int> av, bv;
    int c = code;
    for (int i = 0; i < members; ++i, c /= 3) {
      if (c % 3 == 1) av.push_back(i);
      if (c % 3 == 2) bv.push_back(i);
    }
    out.push_back(Vertex{FinSet::from_sorted(av), FinSet::from_sorted(bv)});
  }
  return out;
}

OrderGraph random_graph(int n, uint64_t seed) {
  OrderGraph g;
  g.edge_means = EdgeConvention::compatible;
  g.vertices.assign(static_cast<size_t>(n), Vertex{});
  g.adjacency.assign(static_cast<size_t>(n), std::vector<char>(static_cast<size_t>(n), 0));
  Prng rng(seed);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      char e = rng.coin() ? 1 : 0;
      g.adjacency[static_cast<size_t>(i)][static_cast<size_t>(j)] = e;
      g.adjacency[static_cast<size_t>(j)][static_cast<size_t>(i)] = e;
    }
  return g;
}

}  // namespace

TEST_CASE("conditions project to vertices and vertices lift back", "[graph]") {
  Family fam = k4_family();

  SECTION("the lift of every vertex recovers that vertex, exhaustively") {
    for (const Vertex& v : all_vertices(fam.size())) {
      Condition p = condition_of(v, fam);
      REQUIRE(vertex_of(p) == v);
      // Independent recovery from the materialized sides alone.
      REQUIRE(oracle_vertex(p) == v);
    }
  }

  SECTION("the lift materializes exact set differences of the unions") {
    Condition p = condition_of(Vertex{FinSet{0}, FinSet{1}}, fam);
    REQUIRE(p.m() == 1);  // the unions clash exactly at ground element 0
    REQUIRE(p.A() == FinSet{1, 2, 10, 14});
    REQUIRE(p.B() == FinSet{3, 4, 11, 15});
    REQUIRE(p.E().empty());
    REQUIRE(p.F().empty());
  }

  SECTION("the empty vertex corresponds to the empty condition") {
    Condition p = condition_of(Vertex{FinSet{}, FinSet{}}, fam);
    REQUIRE(p.m() == 0);
    REQUIRE(p.A().empty());
    REQUIRE(p.B().empty());
    REQUIRE(vertex_of(p) == Vertex{FinSet{}, FinSet{}});
  }

  SECTION("two conditions differing only below the cut share a vertex") {
    Condition p1 = make_condition(fam, FinSet{0}, FinSet{1}, 1, FinSet{}, FinSet{});
    Condition p2 = make_condition(fam, FinSet{0}, FinSet{1}, 1, FinSet{0}, FinSet{});
    REQUIRE(!(p1 == p2));
    REQUIRE(p1.A() != p2.A());
    REQUIRE(vertex_of(p1) == vertex_of(p2));
  }
}

TEST_CASE("adjacency follows the recorded edge convention", "[graph]") {
  SECTION("vertices over pairwise disjoint generators form a complete graph") {
    Family fam = adfam::build_r_embeddable(8, 48, 6, 1);
    std::vector<Vertex> vs;
    for (int i = 0; i < 4; ++i) vs.push_back(Vertex{FinSet{2 * i}, FinSet{2 * i + 1}});
    OrderGraph g = build_graph(fam, vs);
    REQUIRE(g.edge_means == EdgeConvention::compatible);
    for (int i = 0; i < g.size(); ++i)
      for (int j = 0; j < g.size(); ++j) REQUIRE(g.edge(i, j) == (i != j));
  }

  SECTION("tree-branch vertices with distinct seeds form an edgeless graph") {
    Family fam = adfam::build_steprans(6, {"001011", "010100", "101011", "110100"});
    std::vector<Vertex> vs;
    std::vector<Condition> ps;
    for (int x = 0; x < 4; ++x) {
      vs.push_back(Vertex{FinSet{2 * x}, FinSet{2 * x + 1}});
      ps.push_back(make_condition(fam, FinSet{2 * x}, FinSet{2 * x + 1}, 0, FinSet{}, FinSet{}));
    }
    for (size_t x = 0; x < ps.size(); ++x)
      for (size_t y = x + 1; y < ps.size(); ++y) REQUIRE_FALSE(adfam::compatible(ps[x], ps[y]));
    OrderGraph g = build_graph(fam, vs);
    for (int i = 0; i < g.size(); ++i)
      for (int j = 0; j < g.size(); ++j) REQUIRE_FALSE(g.edge(i, j));
    // The antichain structure shows up as a full independent set and as
    // singleton clique classes.
    REQUIRE(max_independent_set(g).members == std::vector<int>{0, 1, 2, 3});
    REQUIRE(cover_by_cliques(g).classes == 4);
  }

  SECTION("the two conventions complement each other, exhaustively") {
    Family fam = k4_family();
    std::vector<Vertex> vs = all_vertices(fam.size());
    OrderGraph gc = build_graph(fam, vs, EdgeConvention::compatible);
    OrderGraph gj = build_graph(fam, vs, EdgeConvention::join_nonempty);
    REQUIRE(gc.size() == 81);
    for (int i = 0; i < gc.size(); ++i)
      for (int j = 0; j < gc.size(); ++j) {
        if (i == j) {
          REQUIRE_FALSE(gc.edge(i, j));
          REQUIRE_FALSE(gj.edge(i, j));
        } else {
          REQUIRE(gc.edge(i, j) != gj.edge(i, j));
        }
      }
    // The empty vertex joins nothing, so it is compatible with everything.
    for (int j = 1; j < gc.size(); ++j) REQUIRE(gc.edge(0, j));
  }

  SECTION("vertex validation rejects overlapping or absent labels") {
    Family fam = k4_family();
    REQUIRE_THROWS_AS(build_graph(fam, {Vertex{FinSet{0, 1}, FinSet{1}}}), graph_error);
    REQUIRE_THROWS_AS(build_graph(fam, {Vertex{FinSet{0}, FinSet{7}}}), graph_error);
  }
}

TEST_CASE("within a shared-trace bucket edges coincide with compatibility", "[graph]") {
  Family fam = shared_block_family();
  REQUIRE(fam.intersection_ceiling() == 3);

  // All conditions with cut 3, no explicit parts, first side drawn from the
  // shared low block and second side from the blockless members: every one
  // has the same traces below the cut (union {0,1,2} against union ∅, both
  // materialized sides empty below 3), so they sit in one bucket.
  std::vector<Condition> ps;
  std::vector<Vertex> vs;
  for (int amask = 1; amask < 8; ++amask)
    for (int bmask = 0; bmask < 4; ++bmask) {
      std::vector<int> av, bv;
      for (int i = 0; i < 3; ++i)
        if (amask >> i & 1) av.push_back(i);
      for (int i = 0; i < 2; ++i)
        if (bmask >> i & 1) bv.push_back(3 + i);
      Condition p = make_condition(fam, FinSet::from_sorted(av), FinSet::from_sorted(bv), 3,
                                   FinSet{}, FinSet{});
      REQUIRE(fam.union_of(p.a()).below(3) == FinSet{0, 1, 2});
      REQUIRE(fam.union_of(p.b()).below(3).empty());
      REQUIRE(p.A().below(3).empty());
      REQUIRE(p.B().below(3).empty());
      ps.push_back(p);
      vs.push_back(vertex_of(p));
    }
  REQUIRE(ps.size() == 28);

  OrderGraph g = build_graph(fam, vs);
  const int n = g.size();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      REQUIRE(g.edge(i, j) == adfam::compatible(ps[static_cast<size_t>(i)], ps[static_cast<size_t>(j)]));

  // At finite scale, triangles are exactly the centered triples.
  int triangles = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        bool tri = g.edge(i, j) && g.edge(i, k) && g.edge(j, k);
        bool centered = adfam::jointly_centered(
            {ps[static_cast<size_t>(i)], ps[static_cast<size_t>(j)], ps[static_cast<size_t>(k)]});
        REQUIRE(tri == centered);
        if (tri) ++triangles;
      }
  REQUIRE(triangles > 0);
}

TEST_CASE("search engines match exhaustive enumeration", "[graph]") {
  SECTION("complete and edgeless extremes") {
    Family fam = adfam::build_r_embeddable(8, 48, 6, 1);
    std::vector<Vertex> vs;
    for (int i = 0; i < 4; ++i) vs.push_back(Vertex{FinSet{2 * i}, FinSet{2 * i + 1}});
    OrderGraph g = build_graph(fam, vs);
    REQUIRE(max_clique(g).members == std::vector<int>{0, 1, 2, 3});
    REQUIRE(max_clique(g).exact);
    REQUIRE(max_independent_set(g).members.size() == 1);
    // The heuristic engine still finds the full clique on a complete graph.
    REQUIRE(max_clique(g, SearchMode::heuristic).members.size() == 4);
    REQUIRE_FALSE(max_clique(g, SearchMode::heuristic).exact);
  }

  SECTION("random 16-vertex graphs agree with subset enumeration") {
    for (uint64_t seed = 1; seed <= 12; ++seed) {
      OrderGraph g = random_graph(16, seed);
      int clique = oracle_max_clique_size(g.adjacency);
      auto got = max_clique(g, SearchMode::exact);
      REQUIRE(got.exact);
      REQUIRE(static_cast<int>(got.members.size()) == clique);
      require_clique(g, got.members);

      // Independent sets against the complement's enumeration.
      std::vector<std::vector<char>> comp(16, std::vector<char>(16, 0));
      for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) comp[static_cast<size_t>(i)][static_cast<size_t>(j)] = i != j && !g.edge(i, j);
      int indep = oracle_max_clique_size(comp);
      auto goti = max_independent_set(g, SearchMode::exact);
      REQUIRE(static_cast<int>(goti.members.size()) == indep);
      for (size_t x = 0; x < goti.members.size(); ++x)
        for (size_t y = x + 1; y < goti.members.size(); ++y)
          REQUIRE_FALSE(g.edge(goti.members[x], goti.members[y]));
    }
  }

  SECTION("the heuristic engine returns a verified lower bound beyond 64 vertices") {
    OrderGraph g = random_graph(200, 7);
    auto r = max_clique(g);
    REQUIRE_FALSE(r.exact);
    REQUIRE(r.members.size() >= 2);
    require_clique(g, r.members);
    auto ri = max_independent_set(g);
    REQUIRE_FALSE(ri.exact);
    for (size_t x = 0; x < ri.members.size(); ++x)
      for (size_t y = x + 1; y < ri.members.size(); ++y)
        REQUIRE_FALSE(g.edge(ri.members[x], ri.members[y]));
  }

  SECTION("exact mode refuses oversized graphs") {
    REQUIRE_THROWS_AS(max_clique(random_graph(65, 3), SearchMode::exact), graph_error);
    REQUIRE_THROWS_AS(cover_by_cliques(random_graph(17, 3), SearchMode::exact), graph_error);
  }
}

TEST_CASE("covers certify their classes and reach the optimum when exact", "[graph]") {
  SECTION("a complete graph is one clique class") {
    Family fam = adfam::build_r_embeddable(8, 48, 6, 1);
    std::vector<Vertex> vs;
    for (int i = 0; i < 4; ++i) vs.push_back(Vertex{FinSet{2 * i}, FinSet{2 * i + 1}});
    OrderGraph g = build_graph(fam, vs);
    auto cover = cover_by_cliques(g);
    REQUIRE(cover.exact);
    REQUIRE(cover.classes == 1);
    REQUIRE(cover_by_independent_sets(g).classes == 4);
  }

  SECTION("random 12-vertex instances: exact optimum, greedy at least it") {
    for (uint64_t seed = 21; seed <= 26; ++seed) {
      OrderGraph g = random_graph(12, seed);
      auto exact = cover_by_cliques(g, SearchMode::exact);
      auto greedy = cover_by_cliques(g, SearchMode::heuristic);
      REQUIRE(exact.exact);
      REQUIRE_FALSE(greedy.exact);
      REQUIRE(greedy.classes >= exact.classes);

      // The exact count is the complement's chromatic number; certify both
      // sides with an independent backtracking search.
      std::vector<std::vector<char>> comp(12, std::vector<char>(12, 0));
      for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j) comp[static_cast<size_t>(i)][static_cast<size_t>(j)] = i != j && !g.edge(i, j);
      REQUIRE(oracle_colorable(comp, exact.classes));
      REQUIRE_FALSE(oracle_colorable(comp, exact.classes - 1));

      // Re-verify the clique certificates by hand.
      for (int i = 0; i < 12; ++i)
        for (int j = i + 1; j < 12; ++j) {
          if (exact.class_of[static_cast<size_t>(i)] == exact.class_of[static_cast<size_t>(j)])
            REQUIRE(g.edge(i, j));
          if (greedy.class_of[static_cast<size_t>(i)] == greedy.class_of[static_cast<size_t>(j)])
            REQUIRE(g.edge(i, j));
        }

      // The same machinery covers by independent sets on the graph itself.
      auto indep = cover_by_independent_sets(g, SearchMode::exact);
      REQUIRE(oracle_colorable(g.adjacency, indep.classes));
      REQUIRE_FALSE(oracle_colorable(g.adjacency, indep.classes - 1));
    }
  }

  SECTION("clique-cover count matches the interval-coloring class count") {
    // Four pairwise incompatible conditions, two copies each: the interval
    // coloring keeps the four (U, V) classes apart, and no clique cover can
    // do better because distinct classes are never adjacent.
    Family fam = adfam::build_r_embeddable(4, 24, 6, 3);
    std::vector<Condition> ps;
    std::vector<Vertex> vs;
    auto add = [&](std::initializer_list<int> a, std::initializer_list<int> b) {
      Condition p = make_condition(fam, FinSet(a), FinSet(b), 0, FinSet{}, FinSet{});
      ps.push_back(p);
      vs.push_back(vertex_of(p));
    };
    for (int copy = 0; copy < 2; ++copy) {
      add({0}, {1});
      add({1}, {0});
      add({0, 1}, {2});
      add({2}, {0, 1});
    }
    for (size_t x = 0; x < ps.size(); ++x)
      for (size_t y = x + 1; y < ps.size(); ++y)
        REQUIRE(adfam::compatible(ps[x], ps[y]) == (x % 4 == y % 4));

    auto coloring = adfam::centered_decomposition(fam, ps);
    int centered_classes = static_cast<int>(coloring.dictionary.size());
    REQUIRE(centered_classes == 4);

    OrderGraph g = build_graph(fam, vs);
    auto cover = cover_by_cliques(g, SearchMode::exact);
    REQUIRE(cover.classes == centered_classes);
  }
}

TEST_CASE("graphs export to DOT and round-trip through JSON", "[graph]") {
  Family fam = adfam::build_r_embeddable(4, 24, 6, 1);

  SECTION("a two-vertex one-edge graph in DOT") {
    OrderGraph g = build_graph(fam, {Vertex{FinSet{0}, FinSet{1}}, Vertex{FinSet{2}, FinSet{3}}});
    std::string expected =
        "graph conditions {\n"
        "  edge_means=\"compatible\";\n"
        "  v0 [label=\"0|1\"];\n"
        "  v1 [label=\"2|3\"];\n"
        "  v0 -- v1;\n"
        "}\n";
    REQUIRE(export_graph(g, "dot") == expected);
  }

  SECTION("the empty graph is a bare header") {
    OrderGraph g = build_graph(fam, {});
    REQUIRE(export_graph(g, "dot") == "graph conditions {\n  edge_means=\"compatible\";\n}\n");
  }

  SECTION("JSON export and import are mutually inverse, byte for byte") {
    Family shared = shared_block_family();
    std::vector<Vertex> vs;  // ordered pairs over the shared block: mixed adjacency
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (i != j) vs.push_back(Vertex{FinSet{i}, FinSet{j}});
    vs.push_back(Vertex{FinSet{3}, FinSet{4}});
    OrderGraph g = build_graph(shared, vs, EdgeConvention::join_nonempty);
    int edges = 0, nonedges = 0;
    for (int i = 0; i < g.size(); ++i)
      for (int j = i + 1; j < g.size(); ++j) (g.edge(i, j) ? edges : nonedges) += 1;
    REQUIRE(edges > 0);
    REQUIRE(nonedges > 0);
    std::string bytes = export_graph(g, "json");
    OrderGraph back = import_graph(bytes);
    REQUIRE(back.edge_means == EdgeConvention::join_nonempty);
    REQUIRE(back.vertices.size() == g.vertices.size());
    for (int i = 0; i < g.size(); ++i) {
      REQUIRE(back.vertices[static_cast<size_t>(i)] == g.vertices[static_cast<size_t>(i)]);
      for (int j = 0; j < g.size(); ++j) REQUIRE(back.edge(i, j) == g.edge(i, j));
    }
    REQUIRE(export_graph(back, "json") == bytes);
    // Repeated export is byte-stable.
    REQUIRE(export_graph(g, "json") == bytes);
  }

  SECTION("malformed inputs are rejected") {
    OrderGraph g = build_graph(fam, {Vertex{FinSet{0}, FinSet{1}}});
    REQUIRE_THROWS_AS(export_graph(g, "gml"), graph_error);
    REQUIRE_THROWS_AS(import_graph(R"({"adjacency":[[1]],"edge_means":"compatible",)"
                                   R"("vertices":[{"a":[0],"b":[1]}]})"),
                      graph_error);  // loop
    REQUIRE_THROWS_AS(import_graph(R"({"adjacency":[[0,1],[0,0]],"edge_means":"compatible",)"
                                   R"("vertices":[{"a":[0],"b":[1]},{"a":[2],"b":[3]}]})"),
                      graph_error);  // asymmetric
    REQUIRE_THROWS_AS(import_graph(R"({"adjacency":[],"edge_means":"sideways","vertices":[]})"),
                      graph_error);  // unknown convention
  }
}
