#pragma once

// JSON forms of sentences, descriptors, certificates, outcomes and
// structures. Keys are emitted in a fixed order so output is byte-stable.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "ackermann/construction.hpp"
#include "ackermann/solver.hpp"
#include "ackermann/structure.hpp"
#include "ackermann/syntax.hpp"
#include "ackermann/types.hpp"
#include "ackermann/witness.hpp"

namespace ack {

using Json = nlohmann::ordered_json;

// {{{ Sentences

namespace detail {

inline Json NodeToJson(const PrenexSentence& s, int i) {
  const Matrix::Node& n = s.matrix.nodes()[i];
  if (n.op == Connective::Atom) {
    const Atom& a = s.matrix.atoms()[n.atom];
    Json args = Json::array();
    for (std::size_t v : a.args) args.push_back(s.variable_name(v));
    if (a.is_equality) return Json{{"eq", args}};
    return Json{{"rel", s.signature[a.rel].name}, {"args", args}};
  }
  const char* op = n.op == Connective::Not       ? "not"
                   : n.op == Connective::And     ? "and"
                   : n.op == Connective::Or      ? "or"
                   : n.op == Connective::Implies ? "implies"
                                                 : "iff";
  Json args = Json::array();
  args.push_back(NodeToJson(s, n.lhs));
  if (n.rhs >= 0) args.push_back(NodeToJson(s, n.rhs));
  return Json{{"op", op}, {"args", args}};
}

}  // namespace detail

inline Json sentence_to_json(const PrenexSentence& s) {
  Json sig = Json::object();
  for (const auto& r : s.signature) sig[r.name] = r.arity;
  return Json{{"sentence", print(s)},   {"z", s.z},
              {"x", s.x},               {"ys", s.ys},
              {"z_synthesized", s.z_synthesized},
              {"signature", sig},       {"matrix", detail::NodeToJson(s, s.matrix.root())}};
}

// }}}

// {{{ Types and descriptors

inline Json one_type_to_json(OneType t, const Signature& sig) { return Json(signed_symbols(t, sig)); }

inline OneType one_type_from_json(const Json& j, const Signature& sig) {
  if (!j.is_array()) throw std::invalid_argument("a 1-type must be a list of signed symbols");
  return one_type_from_symbols(j.get<std::vector<std::string>>(), sig);
}

inline Json descriptor_to_json(const WitnessDescriptor& d, const PrenexSentence& s,
                               const ExtLayout* layout = nullptr) {
  Json partition = Json::object();
  for (std::size_t v = 0; v < s.variable_count() && v < d.partition.size(); ++v)
    partition[s.variable_name(v)] = d.partition[v];
  Json types = Json::object();
  for (std::size_t c = 0; c < d.class_types.size(); ++c)
    types[std::to_string(c)] = one_type_to_json(d.class_types[c], s.signature);
  Json atoms = Json::array();
  for (const AtomValue& av : d.atom_values) {
    std::string rel = av.rel == kEqualityRel ? "=" : (av.rel < s.signature.size() ? s.signature[av.rel].name : "?");
    atoms.push_back(Json{{"rel", rel}, {"classes", av.classes}, {"value", av.value}});
  }
  Json out{{"partition", partition}, {"class_types", types}};
  if (d.extended()) {
    if (!layout) throw std::invalid_argument("extended descriptor needs a layout to serialize");
    Json ext = Json::object();
    for (std::size_t c = 0; c < d.class_exttypes.size(); ++c) ext[std::to_string(c)] = render(d.class_exttypes[c], *layout);
    out["class_exttypes"] = ext;
  }
  out["atom_values"] = atoms;
  out["padding_count"] = d.padding_count;
  return out;
}

inline WitnessDescriptor descriptor_from_json(const Json& j, const PrenexSentence& s,
                                              const ExtLayout* layout = nullptr) {
  WitnessDescriptor d;
  const Json& part = j.at("partition");
  for (std::size_t v = 0; v < s.variable_count(); ++v) {
    if (!part.contains(s.variable_name(v)))
      throw std::invalid_argument("partition does not mention variable " + s.variable_name(v));
    d.partition.push_back(part.at(s.variable_name(v)).get<std::size_t>());
  }
  const Json& types = j.at("class_types");
  for (std::size_t c = 0; c < types.size(); ++c) {
    d.class_types.push_back(one_type_from_json(types.at(std::to_string(c)), s.signature));
  }
  if (j.contains("class_exttypes")) {
    if (!layout) throw std::invalid_argument("extended descriptor in a plain context");
    const Json& ext = j.at("class_exttypes");
    for (std::size_t c = 0; c < ext.size(); ++c)
      d.class_exttypes.push_back(parse_extended_type(ext.at(std::to_string(c)).get<std::string>(), *layout));
  }
  for (const Json& a : j.at("atom_values")) {
    AtomValue av;
    std::string rel = a.at("rel").get<std::string>();
    if (rel == "=") {
      av.rel = kEqualityRel;
    } else {
      auto r = s.signature.index_of(rel);
      if (!r) throw std::invalid_argument("unknown relation '" + rel + "' in atom_values");
      av.rel = *r;
    }
    av.classes = a.at("classes").get<std::vector<std::size_t>>();
    av.value = a.at("value").get<bool>();
    d.atom_values.push_back(std::move(av));
  }
  d.padding_count = j.at("padding_count").get<std::size_t>();
  return d;
}

// }}}

// {{{ Certificates and outcomes

inline Json certificate_to_json(const Certificate& c, const PrenexSentence& s,
                                std::size_t arity_cap = kDefaultArityCap) {
  std::optional<ExtLayout> layout;
  if (c.extended) layout.emplace(s.signature, arity_cap);
  const ExtLayout* L = layout ? &*layout : nullptr;
  Json strategy = Json::array();
  if (!c.extended) {
    for (const auto& [t, d] : c.strategy)
      strategy.push_back(Json{{"type", one_type_to_json(t, s.signature)}, {"witness", descriptor_to_json(d, s)}});
  } else {
    for (const auto& [t, d] : c.ext_strategy)
      strategy.push_back(Json{{"state", render(t, *layout)}, {"witness", descriptor_to_json(d, s, L)}});
  }
  return Json{{"kind", c.extended ? "extended" : "plain"},
              {"pi0", one_type_to_json(c.pi0, s.signature)},
              {"root", c.root ? descriptor_to_json(*c.root, s, L) : Json(nullptr)},
              {"strategy", strategy}};
}

/// Accepts either a bare certificate or a whole outcome carrying one.
inline Certificate certificate_from_json(const Json& in, const PrenexSentence& s,
                                         std::size_t arity_cap = kDefaultArityCap) {
  try {
    const Json& j = in.contains("certificate") ? in.at("certificate") : in;
    if (j.is_null()) throw std::invalid_argument("outcome carries no certificate");
    Certificate c;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind != "plain" && kind != "extended") throw std::invalid_argument("unknown certificate kind '" + kind + "'");
    c.extended = kind == "extended";
    std::optional<ExtLayout> layout;
    if (c.extended) layout.emplace(s.signature, arity_cap);
    const ExtLayout* L = layout ? &*layout : nullptr;
    c.pi0 = one_type_from_json(j.at("pi0"), s.signature);
    if (j.contains("root") && !j.at("root").is_null()) c.root = descriptor_from_json(j.at("root"), s, L);
    for (const Json& e : j.at("strategy")) {
      WitnessDescriptor d = descriptor_from_json(e.at("witness"), s, L);
      if (c.extended) {
        ExtendedType t = parse_extended_type(e.at("state").get<std::string>(), *layout);
        if (!c.ext_strategy.emplace(t, std::move(d)).second) throw std::invalid_argument("duplicate strategy state");
      } else {
        OneType t = one_type_from_json(e.at("type"), s.signature);
        if (!c.strategy.emplace(t, std::move(d)).second) throw std::invalid_argument("duplicate strategy type");
      }
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed certificate: ") + e.what());
  }
}

inline Json refutation_to_json(const Refutation& r, const PrenexSentence& s,
                               std::size_t arity_cap = kDefaultArityCap) {
  std::optional<ExtLayout> layout;
  if (r.extended) layout.emplace(s.signature, arity_cap);
  auto item = [&](std::uint64_t bits) -> Json {
    if (layout) return render(ExtendedType{bits}, *layout);
    return one_type_to_json(OneType{static_cast<std::uint32_t>(bits)}, s.signature);
  };
  Json traces = Json::array();
  for (const auto& t : r.traces) {
    Json rounds = Json::array();
    for (const auto& rd : t.rounds) {
      Json el = Json::array();
      for (auto b : rd.eliminated) el.push_back(item(b));
      rounds.push_back(Json{{"round", rd.round}, {"eliminated", el}});
    }
    Json fin = Json::array();
    for (auto b : t.final_set) fin.push_back(item(b));
    Json tj{{"pi0", one_type_to_json(t.pi0, s.signature)}, {"rounds", rounds}, {"final", fin}};
    if (r.extended) tj["root_failed"] = t.root_failed;
    traces.push_back(tj);
  }
  return Json{{"traces", traces}};
}

/// `include_timing` adds stats.elapsed_ms; it is off by default so repeated
/// runs produce identical bytes.
inline Json outcome_to_json(const SolveOutcome& o, const PrenexSentence& s, bool include_timing = false,
                            std::size_t arity_cap = kDefaultArityCap) {
  Json out{{"verdict", to_string(o.verdict)}, {"method", to_string(o.method)}};
  if (o.pi0) out["pi0"] = one_type_to_json(*o.pi0, s.signature);
  if (o.certificate) out["certificate"] = certificate_to_json(*o.certificate, s, arity_cap);
  if (o.refutation) out["refutation"] = refutation_to_json(*o.refutation, s, arity_cap);
  Json stats{{"witness_searches", o.stats.witness_searches}, {"cache_hits", o.stats.cache_hits}};
  if (include_timing) stats["elapsed_ms"] = o.stats.elapsed_ms;
  stats["types_total"] = o.stats.types_total;
  out["stats"] = stats;
  return out;
}

// }}}

// {{{ Structures

inline Json structure_to_json(const FiniteStructure& m) {
  Json ext = Json::object();
  for (std::size_t r = 0; r < m.signature().size(); ++r) {
    Json tuples = Json::array();
    for (const Tuple& t : m.extent(r)) tuples.push_back(t);
    ext[m.signature()[r].name] = tuples;
  }
  return Json{{"universe_size", m.size()}, {"extents", ext}};
}

inline Json staged_to_json(const StagedModel& sm) {
  Json stages = Json::array();
  for (const auto& st : sm.stages) stages.push_back(structure_to_json(st));
  Json glue = Json::array();
  for (const auto& g : sm.glue) {
    Json emap = Json::object();
    for (std::size_t c = 0; c < g.element_map.size(); ++c) emap[std::to_string(c)] = g.element_map[c];
    glue.push_back(Json{{"stage", g.stage}, {"b", g.b}, {"type", g.key}, {"element_map", emap}});
  }
  return Json{{"b0", sm.b0}, {"stages", stages}, {"glue", glue}};
}

inline Json conflict_to_json(const ConstructionConflict& c) {
  return Json{{"conflict",
               Json{{"stage", c.stage},
                    {"element", c.element},
                    {"relation", c.relation},
                    {"tuple", c.tuple},
                    {"required", c.required},
                    {"existing", c.existing}}}};
}

// }}}

}  // namespace ack
