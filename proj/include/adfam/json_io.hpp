#pragma once

// JSON file formats: families (with their metadata variants), vectors,
// indexed approximations, and conditions. Loaders re-verify everything a
// file claims — a family file that fails verification is refused, not
// repaired. Serialization is deterministic: object keys are emitted in
// sorted order and rationals render exactly.

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "adfam/builders.hpp"
#include "adfam/condition.hpp"
#include "adfam/family.hpp"
#include "adfam/finset.hpp"
#include "adfam/interval.hpp"
#include "adfam/rational.hpp"
#include "adfam/sphere.hpp"

namespace adfam {

class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Scalars.

inline Json finset_to_json(const FinSet& s) {
  Json out = Json::array();
  for (int v : s.elements()) out.push_back(v);
  return out;
}

inline FinSet finset_from_json(const Json& j, const char* what = "set") {
  if (!j.is_array()) throw io_error(std::string(what) + " must be an integer array");
  FinSet s;
  for (const Json& e : j) {
    if (!e.is_number_integer()) throw io_error(std::string(what) + " must hold integers");
    int v = e.get<int>();
    if (v < 0) throw io_error(std::string(what) + " holds a negative element");
    s.insert(v);
  }
  return s;
}

// A rational serializes as the pair [numerator, denominator]; each entry is
// a JSON number when it is small enough for every consumer to read exactly,
// and a decimal string otherwise.
inline Json rational_to_json(const Rational& r) {
  auto entry = [](const std::string& digits) -> Json {
    const size_t figures = digits.size() - (digits[0] == '-' ? 1 : 0);
    if (figures <= 15) return Json(std::stoll(digits));
    return Json(digits);
  };
  return Json::array({entry(r.num_string()), entry(r.den_string())});
}

inline Rational rational_from_json(const Json& j, const char* what = "rational") {
  if (!j.is_array() || j.size() != 2)
    throw io_error(std::string(what) + " must be a [numerator, denominator] pair");
  auto digits = [&](const Json& e) -> std::string {
    if (e.is_number_integer()) return std::to_string(e.get<int64_t>());
    if (e.is_string()) return e.get<std::string>();
    throw io_error(std::string(what) + " entries must be integers or digit strings");
  };
  try {
    return Rational::from_string(digits(j[0]) + "/" + digits(j[1]));
  } catch (const std::exception& e) {
    throw io_error(std::string(what) + ": " + e.what());
  }
}

inline Json interval_to_json(const CertifiedReal& x) {
  return Json::array({rational_to_json(x.lo()), rational_to_json(x.hi())});
}

inline CertifiedReal interval_from_json(const Json& j, const char* what = "interval") {
  if (!j.is_array() || j.size() != 2)
    throw io_error(std::string(what) + " must be a [lo, hi] pair");
  return CertifiedReal(rational_from_json(j[0], what), rational_from_json(j[1], what));
}

// ---------------------------------------------------------------------------
// Family files: { "horizon": H, "members": [[ints]...], "metadata": {...} }.

inline Json metadata_to_json(const FamilyMeta& meta) {
  Json j;
  if (std::holds_alternative<RawMeta>(meta)) {
    j["kind"] = "raw";
  } else if (const auto* sm = std::get_if<SteppransMeta>(&meta)) {
    j["kind"] = "tree-seed";
    j["depth"] = sm->depth;
    j["seeds"] = sm->seeds;
    Json tags = Json::array();
    for (const auto& [seed, side] : sm->tags) tags.push_back(Json::array({seed, side}));
    j["tags"] = tags;
  } else if (const auto* em = std::get_if<EmbeddingMeta>(&meta)) {
    j["kind"] = "embedding";
    j["block_length"] = em->block_length;
    Json values = Json::array();
    for (const Rational& v : em->values) values.push_back(rational_to_json(v));
    j["values"] = values;
    Json limits = Json::array();
    for (const CertifiedReal& l : em->limits) limits.push_back(interval_to_json(l));
    j["limits"] = limits;
    Json seps = Json::array();
    for (const Rational& s : em->separators) seps.push_back(rational_to_json(s));
    j["separators"] = seps;
  } else if (const auto* lm = std::get_if<LuzinMeta>(&meta)) {
    j["kind"] = "shared-witness";
    j["base_columns"] = lm->base_columns;
    j["multiplicity"] = lm->multiplicity;
    Json shared = Json::array();
    for (size_t eta = 0; eta < lm->f.size(); ++eta)
      for (const auto& [xi, point] : lm->f[eta])
        shared.push_back(Json::array({static_cast<int>(eta), xi, point}));
    j["shared"] = shared;
  } else if (const auto* cm = std::get_if<CohenMeta>(&meta)) {
    j["kind"] = "stream-refined";
    j["base_kind"] = cm->base_kind;
    j["ones"] = finset_to_json(cm->ones);
  } else {
    throw io_error("unknown metadata variant");
  }
  return j;
}

inline FamilyMeta metadata_from_json(const Json& j, int family_size) {
  if (!j.is_object() || !j.contains("kind")) throw io_error("metadata must carry a kind");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "raw") return RawMeta{};
  if (kind == "tree-seed") {
    SteppransMeta sm;
    sm.depth = j.at("depth").get<int>();
    sm.seeds = j.at("seeds").get<std::vector<std::string>>();
    for (const Json& t : j.at("tags")) {
      if (!t.is_array() || t.size() != 2) throw io_error("tree-seed tags must be [seed, side]");
      sm.tags.emplace_back(t[0].get<int>(), t[1].get<int>());
    }
    return sm;
  }
  if (kind == "embedding") {
    EmbeddingMeta em;
    em.block_length = j.at("block_length").get<int>();
    for (const Json& v : j.at("values")) em.values.push_back(rational_from_json(v, "value"));
    for (const Json& l : j.at("limits")) em.limits.push_back(interval_from_json(l, "limit"));
    for (const Json& s : j.at("separators"))
      em.separators.push_back(rational_from_json(s, "separator"));
    return em;
  }
  if (kind == "shared-witness") {
    LuzinMeta lm;
    lm.base_columns = j.at("base_columns").get<int>();
    lm.multiplicity = j.at("multiplicity").get<int>();
    lm.f.assign(static_cast<size_t>(family_size), {});
    for (const Json& t : j.at("shared")) {
      if (!t.is_array() || t.size() != 3)
        throw io_error("shared witnesses must be [eta, xi, point] triples");
      int eta = t[0].get<int>();
      if (eta < 0 || eta >= family_size) throw io_error("shared witness index out of range");
      lm.f[static_cast<size_t>(eta)][t[1].get<int>()] = t[2].get<int>();
    }
    return lm;
  }
  if (kind == "stream-refined") {
    CohenMeta cm;
    cm.base_kind = j.at("base_kind").get<std::string>();
    cm.ones = finset_from_json(j.at("ones"), "ones");
    return cm;
  }
  throw io_error("unknown metadata kind: " + kind);
}

inline Json family_to_json(const Family& fam) {
  Json j;
  j["horizon"] = fam.horizon();
  Json members = Json::array();
  for (const FinSet& m : fam.members()) members.push_back(finset_to_json(m));
  j["members"] = members;
  j["metadata"] = metadata_to_json(fam.meta());
  return j;
}

// Rebuilds the family from a file image. The constructor re-verifies
// almost-disjointness and the metadata validator re-checks every claim the
// metadata makes about the members; both throw family_error on refusal.
inline Family family_from_json(const Json& j) {
  if (!j.is_object()) throw io_error("family file must be a JSON object");
  for (const char* key : {"horizon", "members", "metadata"})
    if (!j.contains(key)) throw io_error(std::string("family file lacks \"") + key + "\"");
  const int horizon = j.at("horizon").get<int>();
  std::vector<FinSet> members;
  for (const Json& m : j.at("members")) members.push_back(finset_from_json(m, "member"));
  FamilyMeta meta = metadata_from_json(j.at("metadata"), static_cast<int>(members.size()));
  Family fam(std::move(members), horizon, std::move(meta));
  validate_metadata(fam);
  return fam;
}

// ---------------------------------------------------------------------------
// Vector files: { "coords": [[num, den]...], "tail": {"member": [num, den]} }.
// The horizon is the length of the coordinate array.

inline Json vector_to_json(const SphereVector& v) {
  Json j;
  Json coords = Json::array();
  for (const Rational& c : v.coords()) coords.push_back(rational_to_json(c));
  j["coords"] = coords;
  Json tail = Json::object();
  for (const TailTerm& t : v.tail())
    tail[std::to_string(t.member)] = rational_to_json(t.coeff);
  j["tail"] = tail;
  return j;
}

inline SphereVector vector_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("coords")) throw io_error("vector file lacks \"coords\"");
  std::vector<Rational> coords;
  for (const Json& c : j.at("coords")) coords.push_back(rational_from_json(c, "coordinate"));
  std::vector<TailTerm> tail;
  if (j.contains("tail")) {
    if (!j.at("tail").is_object()) throw io_error("vector tail must map members to rationals");
    for (const auto& [key, val] : j.at("tail").items()) {
      size_t used = 0;
      int member = std::stoi(key, &used);
      if (used != key.size()) throw io_error("vector tail key is not an integer: " + key);
      tail.push_back({member, rational_from_json(val, "tail coefficient")});
    }
  }
  const int horizon = static_cast<int>(coords.size());
  return SphereVector(horizon, std::move(coords), std::move(tail));
}

// ---------------------------------------------------------------------------
// Indexed approximations.

inline Json approx_to_json(const ApproxCondition& p) {
  Json j;
  j["arity"] = p.arity;
  j["n"] = p.n;
  Json sides = Json::object();
  for (const auto& [xi, slots] : p.sides) {
    Json row = Json::array();
    for (const FinSet& s : slots) row.push_back(finset_to_json(s));
    sides[std::to_string(xi)] = row;
  }
  j["sides"] = sides;
  return j;
}

inline ApproxCondition approx_from_json(const Json& j) {
  if (!j.is_object()) throw io_error("approximation must be a JSON object");
  ApproxCondition p;
  p.arity = j.at("arity").get<int>();
  p.n = j.at("n").get<int>();
  for (const auto& [key, row] : j.at("sides").items()) {
    size_t used = 0;
    int xi = std::stoi(key, &used);
    if (used != key.size()) throw io_error("approximation index is not an integer: " + key);
    std::vector<FinSet> slots;
    for (const Json& s : row) slots.push_back(finset_from_json(s, "ground set"));
    p.sides[xi] = std::move(slots);
  }
  validate_approx(p);
  return p;
}

// ---------------------------------------------------------------------------
// Conditions (relative to a family the reader already holds).

inline Json condition_to_json(const Condition& p) {
  Json j;
  j["a"] = finset_to_json(p.a());
  j["b"] = finset_to_json(p.b());
  j["m"] = p.m();
  j["E"] = finset_to_json(p.E());
  j["F"] = finset_to_json(p.F());
  return j;
}

inline Condition condition_from_json(const Json& j, const Family& fam) {
  for (const char* key : {"a", "b", "m", "E", "F"})
    if (!j.contains(key)) throw io_error(std::string("condition lacks \"") + key + "\"");
  return Condition(fam, finset_from_json(j.at("a"), "a"), finset_from_json(j.at("b"), "b"),
                   j.at("m").get<int>(), finset_from_json(j.at("E"), "E"),
                   finset_from_json(j.at("F"), "F"));
}

// ---------------------------------------------------------------------------
// Files.

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw io_error("write failed: " + path);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void save_family(const std::string& path, const Family& fam) {
  write_text_file(path, family_to_json(fam).dump(2) + "\n");
}

inline Family load_family(const std::string& path) {
  Json j;
  try {
    j = Json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw io_error("not valid JSON: " + path + " (" + e.what() + ")");
  }
  return family_from_json(j);
}

}  // namespace adfam
