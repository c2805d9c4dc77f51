// adfam — batch front door for the almost-disjoint family laboratory.
//
//   adfam build KIND --out FILE [kind flags]     construct + save a family
//   adfam order ACTION --family FILE [flags]     decompositions, order graphs
//   adfam geometry ACTION --family FILE [flags]  certified vector geometry
//   adfam verify SUITE --family FILE [flags]     cross-checking suites
//
// Every report is JSON with sorted keys and embeds the fully resolved
// configuration, so a repeated run with the same inputs is byte-identical.
// Every certificate printed by a command is re-verified by an independent
// pass before the process exits 0.
//
// Exit codes: 0 success, 1 usage error, 2 certification failure,
// 3 metadata mismatch, 4 comparison undecided at the precision ceiling.

#include <algorithm>
#include <array>
#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "adfam/builders.hpp"
#include "adfam/condition.hpp"
#include "adfam/family.hpp"
#include "adfam/finset.hpp"
#include "adfam/geometry.hpp"
#include "adfam/interval.hpp"
#include "adfam/json_io.hpp"
#include "adfam/order_graph.hpp"
#include "adfam/prng.hpp"
#include "adfam/quantitative.hpp"
#include "adfam/rational.hpp"
#include "adfam/sphere.hpp"

namespace {

using adfam::CertifiedReal;
using adfam::Condition;
using adfam::Family;
using adfam::FinSet;
using adfam::Json;
using adfam::NormKind;
using adfam::Prng;
using adfam::Rational;
using adfam::SphereVector;

// Exit-code carriers: main() maps these to the documented codes.
struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct metadata_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct certification_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Rational parse_rational(const std::string& text, const char* what) {
  try {
    return Rational::from_string(text);
  } catch (const std::exception&) {
    throw usage_error(std::string(what) + ": cannot parse \"" + text + "\" as a rational");
  }
}

Family load_family_checked(const std::string& path) {
  if (path.empty()) throw usage_error("--family is required for this command");
  return adfam::load_family(path);  // loader re-verifies everything the file claims
}

void emit_report(const Json& report, const std::string& out_path) {
  const std::string text = report.dump(2) + "\n";
  std::cout << text;
  if (!out_path.empty()) adfam::write_text_file(out_path, text);
}

void emit_csv(const std::string& csv, const std::string& csv_path) {
  if (!csv_path.empty()) adfam::write_text_file(csv_path, csv);
}

std::string decimal(const Rational& r, int digits, Rational::Round mode) {
  return r.to_decimal(digits, mode);
}

// Distance matrix CSV: row/col = vector index, cells = decimal midpoint of the
// certified distance, one sidecar column per row with the row's largest
// interval width. Exact (sup) distances have width zero.
std::string distance_matrix_csv(const std::vector<SphereVector>& vs, NormKind norm, int bits) {
  const int n = static_cast<int>(vs.size());
  std::ostringstream csv;
  csv << "index";
  for (int j = 0; j < n; ++j) csv << ",v" << j;
  csv << ",max_width\n";
  for (int i = 0; i < n; ++i) {
    csv << i;
    Rational row_width(0);
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        csv << "," << decimal(Rational(0), 12, Rational::Round::Nearest);
        continue;
      }
      if (norm == NormKind::inf) {
        Rational d = adfam::dist_inf(vs[static_cast<size_t>(i)], vs[static_cast<size_t>(j)]);
        csv << "," << decimal(d, 12, Rational::Round::Nearest);
      } else {
        CertifiedReal d =
            adfam::dist_inf2(vs[static_cast<size_t>(i)], vs[static_cast<size_t>(j)], bits);
        csv << "," << decimal(d.mid(), 12, Rational::Round::Nearest);
        row_width = std::max(row_width, d.width());
      }
    }
    csv << "," << decimal(row_width, 18, Rational::Round::Ceil) << "\n";
  }
  return csv.str();
}

Json qset_to_json(const adfam::QSet& q) {
  Json j;
  j["intervals"] = Json::array();
  for (const auto& [lo, hi] : q.intervals)
    j["intervals"].push_back(Json::array({adfam::rational_to_json(lo), adfam::rational_to_json(hi)}));
  j["points"] = Json::array();
  for (const Rational& p : q.points) j["points"].push_back(adfam::rational_to_json(p));
  return j;
}

NormKind parse_norm(const std::string& name) {
  if (name == "inf") return NormKind::inf;
  if (name == "inf2") return NormKind::inf2;
  throw usage_error("--norm must be one of: inf, inf2");
}

adfam::SearchMode search_mode(bool exact, bool heuristic) {
  if (exact && heuristic) throw usage_error("--exact and --heuristic are mutually exclusive");
  if (exact) return adfam::SearchMode::exact;
  if (heuristic) return adfam::SearchMode::heuristic;
  return adfam::SearchMode::automatic;
}

// Sample conditions with 1-2 member labels per side via the shared helper;
// refuses the degenerate families the sampler cannot serve.
std::vector<Condition> sample_conditions(const Family& fam, int want, Prng& rng) {
  if (fam.size() < 2) return {};
  return adfam::detail::sample_lifted_conditions(fam, want, rng);
}

// ---------------------------------------------------------------------------
// build

struct BuildParams {
  std::string kind;
  std::string out;
  int depth = 11;
  int seeds = 16;
  int count = 32;
  int horizon = 4096;
  int block_length = 8;
  int base_columns = 8;
  int arity = 3;
  int steps = 6;
  uint64_t seed = 2026;
};

// Distinct binary seed strings built as (distinct short prefix, random
// middle, fixed "01" tail). Any two seeds diverge inside the prefix, so every
// pairwise overlap sits at a shallow tree node, while the tail guarantees
// each seed a deep node of either bit — the resulting family is tight.
std::vector<std::string> random_seed_strings(int depth, int want, Prng& rng) {
  if (want < 1) throw usage_error("--seeds must be positive");
  int prefix = 0;
  while ((1 << prefix) < want) ++prefix;
  if (prefix > depth - 2)
    throw usage_error("--seeds is too large for this depth (need 2^(depth-2) >= seeds)");
  std::vector<std::string> out;
  out.reserve(static_cast<size_t>(want));
  for (int s = 0; s < want; ++s) {
    std::string str;
    str.reserve(static_cast<size_t>(depth));
    for (int b = prefix - 1; b >= 0; --b) str += ((s >> b) & 1) ? '1' : '0';
    for (int k = prefix; k < depth - 2; ++k) str += rng.coin() ? '1' : '0';
    str += "01";
    out.push_back(std::move(str));
  }
  return out;
}

int run_build(const BuildParams& p) {
  if (p.out.empty()) throw usage_error("build requires --out FILE");
  Json config;
  config["kind"] = p.kind;
  config["out"] = p.out;
  config["seed"] = p.seed;

  std::optional<Family> fam;
  if (p.kind == "steprans") {
    Prng rng(p.seed);
    std::vector<std::string> seeds = random_seed_strings(p.depth, p.seeds, rng);
    config["depth"] = p.depth;
    config["seeds"] = p.seeds;
    config["seed_strings"] = seeds;
    try {
      fam = adfam::build_steprans(p.depth, seeds);
    } catch (const adfam::family_error& e) {
      throw usage_error(std::string("steprans parameters rejected: ") + e.what());
    }
  } else if (p.kind == "r-embeddable") {
    config["count"] = p.count;
    config["horizon"] = p.horizon;
    config["block_length"] = p.block_length;
    try {
      fam = adfam::build_r_embeddable(p.count, p.horizon, p.block_length, p.seed);
    } catch (const adfam::family_error& e) {
      throw usage_error(std::string("r-embeddable parameters rejected: ") + e.what());
    }
  } else if (p.kind == "luzin") {
    config["count"] = p.count;
    config["base_columns"] = p.base_columns;
    try {
      fam = adfam::build_luzin(p.count, p.base_columns);
    } catch (const adfam::family_error& e) {
      throw usage_error(std::string("luzin parameters rejected: ") + e.what());
    }
  } else if (p.kind == "grown") {
    config["arity"] = p.arity;
    config["steps"] = p.steps;
    try {
      fam = adfam::grow_family(p.arity, p.steps, p.seed);
    } catch (const adfam::builder_error& e) {
      throw usage_error(std::string("grown parameters rejected: ") + e.what());
    }
  } else {
    throw usage_error("unknown build kind \"" + p.kind +
                      "\" (expected steprans, r-embeddable, luzin, or grown)");
  }

  adfam::save_family(p.out, *fam);

  // Independent re-verification: reload the file through the checking loader
  // and confirm it round-trips to the same family.
  Family reloaded = adfam::load_family(p.out);
  if (reloaded.size() != fam->size() || reloaded.horizon() != fam->horizon())
    throw certification_error("saved family does not round-trip");
  for (int i = 0; i < fam->size(); ++i)
    if (!(reloaded.member(i) == fam->member(i)))
      throw certification_error("saved family member " + std::to_string(i) +
                                " does not round-trip");

  Json report;
  report["command"] = "build";
  report["config"] = config;
  Json cert;
  cert["almost_disjoint"] = true;  // reload would have thrown otherwise
  cert["members"] = fam->size();
  cert["horizon"] = fam->horizon();
  cert["intersection_ceiling"] = fam->intersection_ceiling();
  cert["metadata"] = adfam::metadata_to_json(fam->meta())["kind"];
  report["certificate"] = cert;
  report["file"] = p.out;
  report["verdict"] = "pass";
  emit_report(report, "");
  return 0;
}

// ---------------------------------------------------------------------------
// order

struct OrderParams {
  std::string action;
  std::string family;
  std::string out;
  std::string graph_out;
  std::string format = "json";
  std::string convention = "compatible";
  int samples = 0;  // 0 = per-action default
  uint64_t seed = 2026;
  bool exact = false;
  bool heuristic = false;
};

int run_order_decompose(const Family& fam, const OrderParams& p, Json config) {
  if (!fam.meta_as<adfam::EmbeddingMeta>())
    throw metadata_error("decompose needs a family with rational-embedding metadata");
  const int samples = p.samples > 0 ? p.samples : 200;
  config["samples"] = samples;
  Prng rng(p.seed);
  std::vector<Condition> conds = sample_conditions(fam, samples, rng);
  adfam::CenteredColoring coloring = adfam::centered_decomposition(fam, conds);

  // Independent re-verification: same class => compatible, exhaustively.
  for (size_t i = 0; i < conds.size(); ++i)
    for (size_t j = i + 1; j < conds.size(); ++j)
      if (coloring.class_of[i] == coloring.class_of[j] &&
          !adfam::compatible(conds[i], conds[j]))
        throw certification_error("class " + std::to_string(coloring.class_of[i]) +
                                  " contains an incompatible pair");

  Json report;
  report["command"] = "order";
  report["action"] = "decompose";
  report["config"] = config;
  report["conditions"] = Json::array();
  for (const Condition& c : conds) report["conditions"].push_back(adfam::condition_to_json(c));
  report["class_of"] = coloring.class_of;
  report["classes"] = static_cast<int>(coloring.dictionary.size());
  report["dictionary"] = Json::array();
  for (const auto& [U, V] : coloring.dictionary)
    report["dictionary"].push_back(Json{{"U", qset_to_json(U)}, {"V", qset_to_json(V)}});
  report["verified"] = "every class re-checked pairwise compatible";
  report["verdict"] = "pass";
  emit_report(report, p.out);
  return 0;
}

int run_order_antichains(const Family& fam, const OrderParams& p, Json config) {
  if (!fam.meta_as<adfam::LuzinMeta>())
    throw metadata_error("antichains needs a family with sharing-witness metadata");
  const int samples = p.samples > 0 ? p.samples : 100;
  config["samples"] = samples;
  if (fam.size() < 4) throw usage_error("antichains needs at least 4 members");

  // Essentially distinct label pairs: all first labels pairwise distinct and
  // all second labels pairwise distinct, sides disjoint.
  Prng rng(p.seed);
  std::set<std::vector<int>> seen_a, seen_b;
  std::vector<std::pair<FinSet, FinSet>> labels;
  int guard = 0;
  while (static_cast<int>(labels.size()) < samples && guard < samples * 400) {
    ++guard;
    FinSet a, b;
    const int asz = 1 + static_cast<int>(rng.below(2));
    const int bsz = 1 + static_cast<int>(rng.below(2));
    for (int t = 0; t < asz; ++t)
      a.insert(static_cast<int>(rng.below(static_cast<uint64_t>(fam.size()))));
    for (int t = 0; t < 8 && b.size() < bsz; ++t) {
      int j = static_cast<int>(rng.below(static_cast<uint64_t>(fam.size())));
      if (!a.contains(j)) b.insert(j);
    }
    if (a.empty() || b.empty() || a.intersects(b)) continue;
    if (seen_a.count(a.elements()) || seen_b.count(b.elements())) continue;
    seen_a.insert(a.elements());
    seen_b.insert(b.elements());
    labels.emplace_back(std::move(a), std::move(b));
  }
  if (static_cast<int>(labels.size()) < samples)
    throw usage_error("could not sample " + std::to_string(samples) +
                      " essentially distinct label pairs; lower --samples");

  // One shared ground cut above every clash between the sampled sides.
  int cut = 0;
  for (const auto& [a, b] : labels)
    for (int i : a.elements())
      for (int j : b.elements()) cut = std::max(cut, fam.pair_max(i, j) + 1);
  std::vector<Condition> conds;
  conds.reserve(labels.size());
  for (const auto& [a, b] : labels) conds.emplace_back(fam, a, b, cut, FinSet{}, FinSet{});

  adfam::AntichainColoring coloring = adfam::luzin_antichain_decomposition(fam, conds);

  // Independent re-verification: same class => incompatible, exhaustively.
  for (size_t i = 0; i < conds.size(); ++i)
    for (size_t j = i + 1; j < conds.size(); ++j)
      if (coloring.class_of[i] == coloring.class_of[j] &&
          adfam::compatible(conds[i], conds[j]))
        throw certification_error("class " + std::to_string(coloring.class_of[i]) +
                                  " contains a compatible pair");

  Json report;
  report["command"] = "order";
  report["action"] = "antichains";
  report["config"] = config;
  report["cut"] = cut;
  report["conditions"] = Json::array();
  for (const Condition& c : conds) report["conditions"].push_back(adfam::condition_to_json(c));
  report["class_of"] = coloring.class_of;
  report["classes"] = static_cast<int>(coloring.class_key.size());
  report["class_key"] = Json::array();
  for (const auto& [t, color] : coloring.class_key)
    report["class_key"].push_back(Json::array({t, color}));
  report["proof_faithful"] = coloring.proof_faithful;
  report["verified"] = "every class re-checked pairwise incompatible";
  report["verdict"] = "pass";
  emit_report(report, p.out);
  return 0;
}

int run_order_graph(const Family& fam, const OrderParams& p, Json config) {
  adfam::EdgeConvention convention;
  if (p.convention == "compatible")
    convention = adfam::EdgeConvention::compatible;
  else if (p.convention == "join_nonempty")
    convention = adfam::EdgeConvention::join_nonempty;
  else
    throw usage_error("--convention must be one of: compatible, join_nonempty");
  adfam::SearchMode mode = search_mode(p.exact, p.heuristic);
  config["convention"] = p.convention;

  std::vector<adfam::Vertex> verts;
  if (fam.size() >= 2 && fam.size() <= 8) {
    config["vertices"] = "exhaustive singleton pairs";
    for (int i = 0; i < fam.size(); ++i)
      for (int j = 0; j < fam.size(); ++j)
        if (i != j) verts.push_back(adfam::Vertex{FinSet{i}, FinSet{j}});
  } else {
    const int samples = p.samples > 0 ? p.samples : 40;
    config["samples"] = samples;
    config["vertices"] = "sampled label pairs";
    Prng rng(p.seed);
    for (const Condition& c : sample_conditions(fam, samples, rng))
      verts.push_back(adfam::vertex_of(c));
  }

  adfam::OrderGraph g = adfam::build_graph(fam, verts, convention);
  adfam::VertexSetResult clique = adfam::max_clique(g, mode);
  adfam::VertexSetResult indep = adfam::max_independent_set(g, mode);
  adfam::CoverResult clique_cover = adfam::cover_by_cliques(g, mode);
  adfam::CoverResult indep_cover = adfam::cover_by_independent_sets(g, mode);

  // Independent re-verification against the compatibility relation itself.
  auto vertex_compatible = [&](int i, int j) {
    return adfam::compatible(adfam::condition_of(g.vertices[static_cast<size_t>(i)], fam),
                             adfam::condition_of(g.vertices[static_cast<size_t>(j)], fam));
  };
  const bool edge_is_compatible = convention == adfam::EdgeConvention::compatible;
  for (size_t x = 0; x < clique.members.size(); ++x)
    for (size_t y = x + 1; y < clique.members.size(); ++y)
      if (vertex_compatible(clique.members[x], clique.members[y]) != edge_is_compatible)
        throw certification_error("clique certificate failed against the order relation");
  for (size_t x = 0; x < indep.members.size(); ++x)
    for (size_t y = x + 1; y < indep.members.size(); ++y)
      if (vertex_compatible(indep.members[x], indep.members[y]) == edge_is_compatible)
        throw certification_error("independent-set certificate failed against the order relation");

  Json report;
  report["command"] = "order";
  report["action"] = "graph";
  report["config"] = config;
  report["vertices"] = g.size();
  int edges = 0;
  for (int i = 0; i < g.size(); ++i)
    for (int j = i + 1; j < g.size(); ++j) edges += g.edge(i, j) ? 1 : 0;
  report["edges"] = edges;
  report["max_clique"] =
      Json{{"size", static_cast<int>(clique.members.size())}, {"members", clique.members},
           {"exact", clique.exact}};
  report["max_independent_set"] =
      Json{{"size", static_cast<int>(indep.members.size())}, {"members", indep.members},
           {"exact", indep.exact}};
  report["clique_cover"] = Json{{"classes", clique_cover.classes}, {"exact", clique_cover.exact}};
  report["independent_cover"] =
      Json{{"classes", indep_cover.classes}, {"exact", indep_cover.exact}};
  if (p.format == "json")
    report["graph"] = Json::parse(adfam::export_graph(g, "json"));
  else if (p.format == "dot")
    report["graph_dot"] = adfam::export_graph(g, "dot");
  else
    throw usage_error("--format must be one of: json, dot");
  report["verified"] = "clique and independent-set certificates re-checked pairwise";
  report["verdict"] = "pass";
  if (!p.graph_out.empty()) adfam::write_text_file(p.graph_out, adfam::export_graph(g, p.format));
  emit_report(report, p.out);
  return 0;
}

int run_order(const OrderParams& p) {
  Family fam = load_family_checked(p.family);
  Json config;
  config["action"] = p.action;
  config["family"] = p.family;
  config["seed"] = p.seed;
  if (p.action == "decompose") return run_order_decompose(fam, p, std::move(config));
  if (p.action == "antichains") return run_order_antichains(fam, p, std::move(config));
  if (p.action == "graph") return run_order_graph(fam, p, std::move(config));
  throw usage_error("unknown order action \"" + p.action +
                    "\" (expected decompose, antichains, or graph)");
}

// ---------------------------------------------------------------------------
// geometry

struct GeometryParams {
  std::string action;
  std::string family;
  std::string out;
  std::string csv;
  std::string epsilon;  // empty = per-action default
  std::string norm = "inf";
  int m = 7;
  int precision = 64;
  int samples = 0;  // 0 = per-action default
  uint64_t seed = 2026;
  bool normalize = false;
};

int run_geometry_equilateral(const Family& fam, const GeometryParams& p, Json config) {
  if (!fam.meta_as<adfam::SteppransMeta>())
    throw metadata_error("equilateral needs a family with tree-seed metadata");
  auto [zeros, ones] = adfam::steprans_side_lists(fam);
  if (zeros.size() != ones.size() || zeros.empty())
    throw certification_error("tree-seed side lists are unbalanced");

  std::vector<Condition> conds;
  std::vector<SphereVector> vecs;
  for (size_t s = 0; s < zeros.size(); ++s) {
    conds.emplace_back(fam, FinSet{zeros[s]}, FinSet{ones[s]}, 0, FinSet{}, FinSet{});
    vecs.push_back(adfam::f_of(conds.back()));
  }
  int pairs = 0;
  for (size_t s = 0; s < conds.size(); ++s)
    for (size_t t = s + 1; t < conds.size(); ++t) {
      ++pairs;
      if (adfam::compatible(conds[s], conds[t]))
        throw certification_error("seed conditions " + std::to_string(s) + " and " +
                                  std::to_string(t) + " are compatible");
      if (adfam::dist_inf(vecs[s], vecs[t]) != Rational(2))
        throw certification_error("vector pair " + std::to_string(s) + "," + std::to_string(t) +
                                  " is not at distance exactly 2");
    }

  Json report;
  report["command"] = "geometry";
  report["action"] = "equilateral";
  report["config"] = config;
  report["conditions"] = static_cast<int>(conds.size());
  report["pairs"] = pairs;
  report["distance"] = "2";
  report["equilateral"] = true;
  report["verified"] = "all pairs re-checked incompatible and at sup distance exactly 2";
  report["verdict"] = "pass";
  emit_csv(distance_matrix_csv(vecs, NormKind::inf, p.precision), p.csv);
  emit_report(report, p.out);
  return 0;
}

int run_geometry_separated(const Family& fam, const GeometryParams& p, Json config) {
  const int samples = p.samples > 0 ? p.samples : 24;
  if (samples > 64) throw usage_error("separated search is exact; --samples is capped at 64");
  const Rational threshold =
      parse_rational(p.epsilon.empty() ? "2" : p.epsilon, "--epsilon");
  const NormKind norm = parse_norm(p.norm);
  config["samples"] = samples;
  config["epsilon"] = threshold.to_string();
  config["norm"] = p.norm;
  config["precision"] = p.precision;

  Prng rng(p.seed);
  std::vector<Condition> conds = sample_conditions(fam, samples, rng);
  if (conds.size() < 2) throw usage_error("family is too small to sample condition vectors");
  std::vector<SphereVector> vecs;
  vecs.reserve(conds.size());
  for (const Condition& c : conds) vecs.push_back(adfam::f_of(c));

  adfam::SeparatedSubset sep =
      adfam::separated_subset(vecs, threshold, /*strict=*/false, norm, p.precision,
                              std::max(4 * p.precision, 1024));

  // Independent re-verification of the chosen subset.
  for (size_t x = 0; x < sep.members.size(); ++x)
    for (size_t y = x + 1; y < sep.members.size(); ++y) {
      const SphereVector& u = vecs[static_cast<size_t>(sep.members[x])];
      const SphereVector& v = vecs[static_cast<size_t>(sep.members[y])];
      if (!adfam::detail::dist_at_least(u, v, threshold, /*strict=*/false, norm, p.precision,
                                        std::max(4 * p.precision, 1024), "subset re-check"))
        throw certification_error("separated subset failed re-measurement");
    }

  Json report;
  report["command"] = "geometry";
  report["action"] = "separated";
  report["config"] = config;
  report["vectors"] = static_cast<int>(vecs.size());
  report["subset"] = sep.members;
  report["subset_size"] = static_cast<int>(sep.members.size());
  report["exact"] = sep.exact;
  report["verified"] = "subset pairs re-measured above the threshold";
  report["verdict"] = "pass";
  emit_csv(distance_matrix_csv(vecs, norm, p.precision), p.csv);
  emit_report(report, p.out);
  return 0;
}

int run_geometry_cover(const Family& fam, const GeometryParams& p, Json config) {
  const int samples = p.samples > 0 ? p.samples : 24;
  const Rational bound = parse_rational(p.epsilon.empty() ? "5/4" : p.epsilon, "--epsilon");
  const NormKind norm = parse_norm(p.norm);
  config["samples"] = samples;
  config["epsilon"] = bound.to_string();
  config["norm"] = p.norm;
  config["precision"] = p.precision;
  config["normalize"] = p.normalize;

  Prng rng(p.seed);
  std::vector<Condition> conds = sample_conditions(fam, samples, rng);
  if (conds.empty()) throw usage_error("family is too small to sample condition vectors");
  std::vector<SphereVector> vecs;
  vecs.reserve(conds.size());
  for (const Condition& c : conds) {
    SphereVector f = adfam::f_of(c);
    if (p.normalize) {
      Rational sup = adfam::sup_norm(f);
      if (sup != Rational(0)) f = adfam::scale(f, Rational(1) / sup);
    }
    vecs.push_back(std::move(f));
  }

  adfam::DiameterCover cover = adfam::diameter_cover(vecs, bound, norm, p.precision,
                                                     std::max(4 * p.precision, 1024));

  // Independent re-verification: a class pair certifiedly above the bound is
  // a broken cover; enclosures straddling the bound raise undecided instead.
  for (size_t i = 0; i < vecs.size(); ++i)
    for (size_t j = i + 1; j < vecs.size(); ++j) {
      if (cover.class_of[i] != cover.class_of[j]) continue;
      if (adfam::detail::dist_at_least(vecs[i], vecs[j], bound, /*strict=*/true, norm,
                                       p.precision, std::max(4 * p.precision, 1024),
                                       "cover re-check"))
        throw certification_error("cover class exceeded its diameter bound");
    }

  Json report;
  report["command"] = "geometry";
  report["action"] = "cover";
  report["config"] = config;
  report["vectors"] = static_cast<int>(vecs.size());
  report["class_of"] = cover.class_of;
  report["classes"] = cover.classes;
  report["exact"] = cover.exact;
  report["verified"] = "every class re-measured within the bound";
  report["verdict"] = "pass";
  emit_csv(distance_matrix_csv(vecs, norm, p.precision), p.csv);
  emit_report(report, p.out);
  return 0;
}

int run_geometry_renorm_check(const Family& fam, const GeometryParams& p, Json config) {
  const int samples = p.samples > 0 ? p.samples : 200;
  if (p.m < 0) throw usage_error("--m must be non-negative");
  if (fam.size() < 3) throw usage_error("renorm-check needs at least 3 members");
  config["samples"] = samples;
  config["m"] = p.m;
  config["precision"] = p.precision;
  const Rational bound = Rational(2) - Rational(2, p.m + 1);

  // Crossing pattern p=({i},{j}), q=({j},{k}) is incompatible outright; one
  // shared ground cut clears the segment [0, m] and every pairwise clash.
  Prng rng(p.seed);
  std::vector<std::array<int, 3>> trios;
  std::set<std::array<int, 3>> seen;
  int guard = 0;
  const int want = samples;
  while (static_cast<int>(trios.size()) < want && guard < want * 400) {
    ++guard;
    int i = static_cast<int>(rng.below(static_cast<uint64_t>(fam.size())));
    int j = static_cast<int>(rng.below(static_cast<uint64_t>(fam.size())));
    int k = static_cast<int>(rng.below(static_cast<uint64_t>(fam.size())));
    if (i == j || j == k || i == k) continue;
    std::array<int, 3> trio{i, j, k};
    if (!seen.insert(trio).second) continue;
    trios.push_back(trio);
  }
  if (static_cast<int>(trios.size()) < want)
    throw usage_error("could not sample " + std::to_string(want) +
                      " distinct member trios; lower --samples");
  int cut = p.m + 1;
  for (const auto& [i, j, k] : trios) {
    cut = std::max(cut, fam.pair_max(i, j) + 1);
    cut = std::max(cut, fam.pair_max(j, k) + 1);
  }

  Rational min_lo(3);
  Rational max_width(0);
  Json rows = Json::array();
  std::ostringstream csv;
  csv << "pair,i,j,k,lo,hi,width\n";
  for (size_t t = 0; t < trios.size(); ++t) {
    const auto& [i, j, k] = trios[t];
    Condition cp(fam, FinSet{i}, FinSet{j}, cut, FinSet{}, FinSet{});
    Condition cq(fam, FinSet{j}, FinSet{k}, cut, FinSet{}, FinSet{});
    CertifiedReal d =
        adfam::renorm_separation_check(cp, cq, p.m, p.precision, std::max(4 * p.precision, 1024));
    min_lo = std::min(min_lo, d.lo());
    max_width = std::max(max_width, d.width());
    rows.push_back(Json{{"pair", static_cast<int>(t)},
                        {"labels", Json::array({i, j, k})},
                        {"interval", adfam::interval_to_json(d)}});
    csv << t << "," << i << "," << j << "," << k << ","
        << decimal(d.lo(), 12, Rational::Round::Floor) << ","
        << decimal(d.hi(), 12, Rational::Round::Ceil) << ","
        << decimal(d.width(), 18, Rational::Round::Ceil) << "\n";
  }

  Json report;
  report["command"] = "geometry";
  report["action"] = "renorm-check";
  report["config"] = config;
  report["bound"] = bound.to_string();
  report["cut"] = cut;
  report["pairs"] = static_cast<int>(trios.size());
  report["min_lo"] = min_lo.to_string();
  report["max_width"] = max_width.to_string();
  report["separations"] = rows;
  report["verified"] = "every pair certified at or above 2 - 2/(m+1)";
  report["verdict"] = "pass";
  emit_csv(csv.str(), p.csv);
  emit_report(report, p.out);
  return 0;
}

int run_geometry_dichotomy(const Family& fam, const GeometryParams& p, Json config) {
  const int samples = p.samples > 0 ? p.samples : 12;
  const Rational eps = parse_rational(p.epsilon.empty() ? "1/4" : p.epsilon, "--epsilon");
  config["samples"] = samples;
  config["epsilon"] = eps.to_string();

  adfam::EvidenceReport rep = adfam::verify_dichotomy_suite(fam, samples, eps, p.seed);

  Json report;
  report["command"] = "geometry";
  report["action"] = "dichotomy-suite";
  report["config"] = config;
  report["scale"] = rep.scale;
  report["checks"] = Json::array();
  std::vector<std::string> failing;
  for (const adfam::EvidenceCheck& c : rep.checks) {
    report["checks"].push_back(
        Json{{"name", c.name}, {"ran", c.ran}, {"passed", c.passed}, {"note", c.note}});
    if (c.ran && !c.passed) failing.push_back(c.name);
  }
  report["all_passed"] = rep.all_passed();
  report["verdict"] = rep.all_passed() ? "pass" : "fail";
  emit_report(report, p.out);
  if (!rep.all_passed()) {
    std::string msg = "dichotomy checks failed:";
    for (const std::string& name : failing) msg += " " + name;
    throw certification_error(msg);
  }
  return 0;
}

int run_geometry(const GeometryParams& p) {
  Family fam = load_family_checked(p.family);
  Json config;
  config["action"] = p.action;
  config["family"] = p.family;
  config["seed"] = p.seed;
  if (p.action == "equilateral") return run_geometry_equilateral(fam, p, std::move(config));
  if (p.action == "separated") return run_geometry_separated(fam, p, std::move(config));
  if (p.action == "cover") return run_geometry_cover(fam, p, std::move(config));
  if (p.action == "renorm-check") return run_geometry_renorm_check(fam, p, std::move(config));
  if (p.action == "dichotomy-suite") return run_geometry_dichotomy(fam, p, std::move(config));
  throw usage_error("unknown geometry action \"" + p.action +
                    "\" (expected equilateral, separated, cover, renorm-check, or dichotomy-suite)");
}

// ---------------------------------------------------------------------------
// verify

struct VerifyParams {
  std::string suite;
  std::string family;
  std::string out;
  std::string epsilon;  // lemmas slack / closeness, empty = default
  int m = 7;
  int precision = 64;
  int samples = 0;
  uint64_t seed = 2026;
};

// The constructive directions of the equivalence, checked on this instance:
//   1. incompatible pairs sit at sup distance exactly 2, compatible ones <= 1;
//   2. a 2-separated vector subset lifts back to pairwise incompatibility;
//   3. classes of compatible conditions have sup-diameter <= 1 (when a
//      rational embedding is present to produce the classes);
//   4. incompatible pairs clear of [0, m] keep renormed distance >= 2-2/(m+1).
Json run_verify_directions(const Family& fam, const VerifyParams& p, bool* all_ok) {
  const int samples = p.samples > 0 ? p.samples : 16;
  if (samples > 64) throw usage_error("--samples is capped at 64 for the direction suite");
  Json directions = Json::array();
  *all_ok = true;
  auto push = [&](const std::string& name, bool ran, bool passed, const std::string& note,
                  int pairs) {
    directions.push_back(Json{
        {"name", name}, {"ran", ran}, {"passed", passed}, {"note", note}, {"pairs", pairs}});
    if (ran && !passed) *all_ok = false;
  };

  Prng rng(p.seed);
  std::vector<Condition> conds = sample_conditions(fam, samples, rng);
  std::vector<SphereVector> vecs;
  vecs.reserve(conds.size());
  for (const Condition& c : conds) vecs.push_back(adfam::f_of(c));

  if (conds.size() < 2) {
    push("incompatible-pairs-are-2-apart", false, false, "family too small to sample", 0);
    push("separated-subset-is-antichain", false, false, "family too small to sample", 0);
  } else {
    bool ok = true;
    std::string note;
    int pairs = 0;
    for (size_t i = 0; i < conds.size() && ok; ++i)
      for (size_t j = i + 1; j < conds.size() && ok; ++j) {
        ++pairs;
        Rational d = adfam::dist_inf(vecs[i], vecs[j]);
        if (adfam::compatible(conds[i], conds[j]) ? d > Rational(1) : d != Rational(2)) {
          ok = false;
          note = "pair " + std::to_string(i) + "," + std::to_string(j) + " disagrees";
        }
      }
    push("incompatible-pairs-are-2-apart", true, ok, note, pairs);

    adfam::SeparatedSubset sep =
        adfam::separated_subset(vecs, Rational(2), /*strict=*/false, NormKind::inf);
    bool anti_ok = true;
    std::string anti_note = "subset size " + std::to_string(sep.members.size());
    int anti_pairs = 0;
    for (size_t x = 0; x < sep.members.size() && anti_ok; ++x)
      for (size_t y = x + 1; y < sep.members.size() && anti_ok; ++y) {
        ++anti_pairs;
        if (adfam::compatible(conds[static_cast<size_t>(sep.members[x])],
                              conds[static_cast<size_t>(sep.members[y])])) {
          anti_ok = false;
          anti_note = "separated pair is compatible";
        }
      }
    push("separated-subset-is-antichain", true, anti_ok, anti_note, anti_pairs);
  }

  if (fam.meta_as<adfam::EmbeddingMeta>() && conds.size() >= 2) {
    adfam::CenteredColoring coloring = adfam::centered_decomposition(fam, conds);
    bool ok = true;
    std::string note = std::to_string(coloring.dictionary.size()) + " classes";
    int pairs = 0;
    for (size_t i = 0; i < conds.size() && ok; ++i)
      for (size_t j = i + 1; j < conds.size() && ok; ++j) {
        if (coloring.class_of[i] != coloring.class_of[j]) continue;
        ++pairs;
        if (adfam::dist_inf(vecs[i], vecs[j]) > Rational(1)) {
          ok = false;
          note = "class pair exceeds sup distance 1";
        }
      }
    push("centered-classes-have-small-diameter", true, ok, note, pairs);
  } else {
    push("centered-classes-have-small-diameter", false, false,
         "needs rational-embedding metadata", 0);
  }

  if (fam.size() >= 3) {
    const int want = std::min(samples, 24);
    Prng rng2(p.seed + 1);
    std::set<std::array<int, 3>> seen;
    std::vector<std::array<int, 3>> trios;
    int guard = 0;
    while (static_cast<int>(trios.size()) < want && guard < want * 400) {
      ++guard;
      int i = static_cast<int>(rng2.below(static_cast<uint64_t>(fam.size())));
      int j = static_cast<int>(rng2.below(static_cast<uint64_t>(fam.size())));
      int k = static_cast<int>(rng2.below(static_cast<uint64_t>(fam.size())));
      if (i == j || j == k || i == k) continue;
      if (!seen.insert({i, j, k}).second) continue;
      trios.push_back({i, j, k});
    }
    int cut = p.m + 1;
    for (const auto& [i, j, k] : trios) {
      cut = std::max(cut, fam.pair_max(i, j) + 1);
      cut = std::max(cut, fam.pair_max(j, k) + 1);
    }
    bool ok = true;
    std::string note = "bound 2 - 2/(m+1) at m = " + std::to_string(p.m);
    for (const auto& [i, j, k] : trios) {
      Condition cp(fam, FinSet{i}, FinSet{j}, cut, FinSet{}, FinSet{});
      Condition cq(fam, FinSet{j}, FinSet{k}, cut, FinSet{}, FinSet{});
      try {
        adfam::renorm_separation_check(cp, cq, p.m, p.precision,
                                       std::max(4 * p.precision, 1024));
      } catch (const adfam::geometry_error& e) {
        ok = false;
        note = e.what();
        break;
      }
    }
    push("renorm-bound-on-clear-pairs", !trios.empty(), ok, note,
         static_cast<int>(trios.size()));
  } else {
    push("renorm-bound-on-clear-pairs", false, false, "needs at least 3 members", 0);
  }

  return directions;
}

Json quant_report_json(const adfam::QuantReport& rep) {
  Json lines = Json::array();
  for (const adfam::QuantLine& line : rep.lines)
    lines.push_back(Json{{"name", line.name},
                         {"instances", line.instances},
                         {"violations", line.violations},
                         {"note", line.note}});
  return lines;
}

int run_verify(const VerifyParams& p) {
  Family fam = load_family_checked(p.family);
  Json config;
  config["suite"] = p.suite;
  config["family"] = p.family;
  config["seed"] = p.seed;
  config["m"] = p.m;
  config["precision"] = p.precision;

  Json report;
  report["command"] = "verify";
  report["config"] = config;
  bool pass = true;

  const bool want_directions = p.suite == "thm-equi" || p.suite == "all";
  const bool want_lemmas = p.suite == "lemmas" || p.suite == "all";
  if (!want_directions && !want_lemmas)
    throw usage_error("unknown verify suite \"" + p.suite +
                      "\" (expected thm-equi, lemmas, or all)");

  if (want_directions) {
    bool dir_ok = true;
    report["directions"] = run_verify_directions(fam, p, &dir_ok);
    pass = pass && dir_ok;
  }
  if (want_lemmas) {
    if (fam.horizon() < 16) throw usage_error("lemma suite needs a family horizon of at least 16");
    const int instances = p.samples > 0 ? p.samples : 50;
    const Rational slack = parse_rational(p.epsilon.empty() ? "1/1000000" : p.epsilon, "--epsilon");
    report["config"]["instances"] = instances;
    report["config"]["slack"] = slack.to_string();
    adfam::QuantReport rep = adfam::run_quantitative_suite(fam, instances, slack, p.seed);
    report["lemmas"] = quant_report_json(rep);
    pass = pass && rep.all_ok();
  }
  if (p.suite == "all") {
    adfam::EvidenceReport rep = adfam::verify_dichotomy_suite(
        fam, p.samples > 0 ? std::min(p.samples, 24) : 12, Rational(1, 4), p.seed);
    Json checks = Json::array();
    for (const adfam::EvidenceCheck& c : rep.checks)
      checks.push_back(
          Json{{"name", c.name}, {"ran", c.ran}, {"passed", c.passed}, {"note", c.note}});
    report["dichotomy"] = checks;
    pass = pass && rep.all_passed();
  }

  report["verdict"] = pass ? "pass" : "fail";
  emit_report(report, p.out);
  if (!pass) throw certification_error("verification suite reported failures (see report)");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-scale laboratory for almost-disjoint families, their splitting order, "
               "and the induced vector geometry"};
  app.require_subcommand(1);

  BuildParams bp;
  CLI::App* build = app.add_subcommand("build", "construct a family and write it to a JSON file");
  build->add_option("kind", bp.kind, "steprans | r-embeddable | luzin | grown")->required();
  build->add_option("--out", bp.out, "output family file")->required();
  build->add_option("--depth", bp.depth, "steprans: tree depth");
  build->add_option("--seeds", bp.seeds, "steprans: number of random seed strings");
  build->add_option("--count", bp.count, "r-embeddable/luzin: member count");
  build->add_option("--horizon", bp.horizon, "r-embeddable: ground horizon");
  build->add_option("--block-length", bp.block_length, "r-embeddable: digits per block");
  build->add_option("--base-columns", bp.base_columns, "luzin: base column count");
  build->add_option("--arity", bp.arity, "grown: slots per index (3 or 4)");
  build->add_option("--steps", bp.steps, "grown: number of indices");
  build->add_option("--seed", bp.seed, "random seed");

  OrderParams op;
  CLI::App* order = app.add_subcommand("order", "decompositions and graphs of the splitting order");
  order->add_option("action", op.action, "decompose | antichains | graph")->required();
  order->add_option("--family", op.family, "family file")->required();
  order->add_option("--out", op.out, "write the JSON report here as well");
  order->add_option("--graph-out", op.graph_out, "graph: write the exported graph here");
  order->add_option("--format", op.format, "graph: export format (json | dot)");
  order->add_option("--convention", op.convention,
                    "graph: edge meaning (compatible | join_nonempty)");
  order->add_option("--samples", op.samples, "sampled conditions (0 = default)");
  order->add_option("--seed", op.seed, "random seed");
  order->add_flag("--exact", op.exact, "force exact search");
  order->add_flag("--heuristic", op.heuristic, "force heuristic search");

  GeometryParams gp;
  CLI::App* geometry = app.add_subcommand("geometry", "certified geometry of induced vectors");
  geometry->add_option("action", gp.action,
                       "equilateral | separated | cover | renorm-check | dichotomy-suite")
      ->required();
  geometry->add_option("--family", gp.family, "family file")->required();
  geometry->add_option("--out", gp.out, "write the JSON report here as well");
  geometry->add_option("--csv", gp.csv, "write the CSV distance/pair table here");
  geometry->add_option("--epsilon", gp.epsilon, "threshold / bound / closeness (rational)");
  geometry->add_option("--norm", gp.norm, "distance to use (inf | inf2)");
  geometry->add_option("--m", gp.m, "renorm-check: initial segment length");
  geometry->add_option("--precision", gp.precision, "certified arithmetic precision in bits");
  geometry->add_option("--samples", gp.samples, "sampled conditions (0 = default)");
  geometry->add_option("--seed", gp.seed, "random seed");
  geometry->add_flag("--normalize", gp.normalize, "cover: scale vectors to sup norm 1 first");

  VerifyParams vp;
  CLI::App* verify = app.add_subcommand("verify", "cross-checking verification suites");
  verify->add_option("suite", vp.suite, "thm-equi | lemmas | all")->required();
  verify->add_option("--family", vp.family, "family file")->required();
  verify->add_option("--out", vp.out, "write the JSON report here as well");
  verify->add_option("--epsilon", vp.epsilon, "lemmas: slack for the quantitative suite");
  verify->add_option("--m", vp.m, "initial segment length for the renorm direction");
  verify->add_option("--precision", vp.precision, "certified arithmetic precision in bits");
  verify->add_option("--samples", vp.samples, "sample size (0 = default)");
  verify->add_option("--seed", vp.seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(build)) return run_build(bp);
    if (app.got_subcommand(order)) return run_order(op);
    if (app.got_subcommand(geometry)) return run_geometry(gp);
    if (app.got_subcommand(verify)) return run_verify(vp);
    std::cerr << "error: no subcommand selected\n";
    return 1;
  } catch (const usage_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const metadata_error& e) {
    std::cerr << "metadata mismatch: " << e.what() << "\n";
    return 3;
  } catch (const adfam::undecided_error& e) {
    std::cerr << "undecided at the precision ceiling: " << e.what() << "\n";
    return 4;
  } catch (const certification_error& e) {
    std::cerr << "certification failure: " << e.what() << "\n";
    return 2;
  } catch (const adfam::io_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "certification failure: " << e.what() << "\n";
    return 2;
  }
}
