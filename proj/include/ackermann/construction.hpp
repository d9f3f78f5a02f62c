#pragma once

// Turning descriptors and certificates back into explicit structures: single
// witness realization and the staged model B0 <= B1 <= ... <= Bm.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ackermann/errors.hpp"
#include "ackermann/solver.hpp"
#include "ackermann/structure.hpp"
#include "ackermann/types.hpp"
#include "ackermann/witness.hpp"

namespace ack {

struct Realization {
  FiniteStructure structure;
  std::vector<Element> assignment;  // per prefix variable
};

/// One element per class (element id = class id) followed by padding copies
/// of the z-class. Extents hold exactly the diagonals dictated by class types
/// and the true atoms; for extended descriptors also the z-relative patterns
/// of every class. Everything else is false.
inline Realization descriptor_to_structure(const PrenexSentence& s, const WitnessDescriptor& d,
                                           std::size_t arity_cap = kDefaultArityCap) {
  const Signature& sig = s.signature;
  const std::size_t k = d.class_count();
  Realization r{FiniteStructure(sig, k + d.padding_count), {}};
  for (std::size_t v = 0; v < s.variable_count(); ++v) r.assignment.push_back(d.partition[v]);

  auto type_of_slot = [&](Element e) { return e < k ? d.class_types[e] : d.class_types[d.z_class()]; };
  for (Element e = 0; e < r.structure.size(); ++e) {
    OneType t = type_of_slot(e);
    for (std::size_t rel = 0; rel < sig.size(); ++rel) {
      if (t.has(rel)) r.structure.set(rel, Tuple(sig[rel].arity, e), true);
    }
  }
  for (const AtomValue& av : d.atom_values) {
    if (!av.value) continue;
    Tuple t(av.classes.begin(), av.classes.end());
    r.structure.set(av.rel, t, true);
  }
  if (d.extended()) {
    ExtLayout layout(sig, arity_cap);
    const Element b0 = d.z_class();
    for (Element e = 0; e < r.structure.size(); ++e) {
      if (e == b0) continue;
      ExtendedType et = e < k ? d.class_exttypes[e] : d.class_exttypes[b0];
      for (std::size_t rel = 0; rel < sig.size(); ++rel) {
        for (std::size_t p = 0; p < layout.pattern_count(rel); ++p) {
          if (!layout.bit(et, rel, p)) continue;
          Tuple t(sig[rel].arity);
          for (std::size_t j = 0; j < t.size(); ++j) t[j] = ((p >> j) & 1u) ? e : b0;
          r.structure.set(rel, t, true);
        }
      }
    }
  }
  return r;
}

// {{{ Staged construction

struct GlueRecord {
  std::size_t stage = 0;
  Element b = 0;
  std::string key;                   // rendered type or extended state used for the lookup
  std::vector<Element> element_map;  // per class
  std::vector<Element> assignment;   // per prefix variable
};

struct StagedModel {
  std::vector<FiniteStructure> stages;
  Element b0 = 0;
  bool extended = false;
  std::vector<GlueRecord> glue;
};

/// A tuple that two parts of the construction want with opposite values.
/// Relation "=" marks an identity clash: the witness wants z and x to be the
/// same element (or different ones) and the glue point says otherwise.
struct ConstructionConflict {
  std::size_t stage = 0;
  Element element = 0;
  std::string relation;
  Tuple tuple;
  bool required = false;
  bool existing = false;
};

using ConstructionResult = std::variant<StagedModel, ConstructionConflict>;

/// Builds B0 ... Bm from a certificate. B0 is b0 alone. Each stage glues a
/// witness onto every element created by the previous stage: the z-class goes
/// to b0, the x-class to the element, every other class to a fresh element.
/// Elements of older stages already have their witnesses inside the
/// structure. Tuples never mentioned stay false. Any requirement that
/// contradicts an earlier value aborts with a ConstructionConflict.
inline ConstructionResult build_model_sequence(const PrenexSentence& s, const Certificate& cert,
                                               std::size_t depth, std::size_t arity_cap = kDefaultArityCap) {
  const Signature& sig = s.signature;
  std::optional<ExtLayout> layout;
  if (cert.extended) layout.emplace(sig, arity_cap);

  StagedModel out;
  out.extended = cert.extended;
  out.b0 = 0;
  FiniteStructure current(sig, 1);
  for (std::size_t rel = 0; rel < sig.size(); ++rel) {
    if (cert.pi0.has(rel)) current.set(rel, Tuple(sig[rel].arity, 0), true);
  }
  out.stages.push_back(current);
  std::vector<Element> frontier{out.b0};

  for (std::size_t stage = 1; stage <= depth; ++stage) {
    FiniteStructure next = current;
    std::map<std::pair<std::size_t, Tuple>, bool> pending;
    std::vector<Element> created;

    for (Element b : frontier) {
      const WitnessDescriptor* d = nullptr;
      std::string key;
      if (b == out.b0) {
        if (cert.root) {
          d = &*cert.root;
        } else if (!cert.extended && cert.strategy.count(cert.pi0)) {
          d = &cert.strategy.at(cert.pi0);
        } else {
          throw CertificateError("certificate has no witness for the z-element");
        }
        key = render(cert.pi0, sig);
      } else if (!cert.extended) {
        OneType t = type_of_element(current, b);
        auto it = cert.strategy.find(t);
        if (it == cert.strategy.end())
          throw CertificateError("no strategy entry for realized type " + render(t, sig));
        d = &it->second;
        key = render(t, sig);
      } else {
        ExtendedType t = ext_type_of_element(current, *layout, out.b0, b);
        auto it = cert.ext_strategy.find(t);
        if (it == cert.ext_strategy.end())
          throw CertificateError("no strategy entry for realized state " + render(t, *layout));
        d = &it->second;
        key = render(t, *layout);
      }

      const std::size_t zc = d->z_class(), xc = d->x_class();
      if (zc == xc && b != out.b0) return ConstructionConflict{stage, b, "=", {out.b0, b}, true, false};
      if (zc != xc && b == out.b0) return ConstructionConflict{stage, b, "=", {out.b0, b}, false, true};

      GlueRecord rec;
      rec.stage = stage;
      rec.b = b;
      rec.key = key;
      rec.element_map.resize(d->class_count());
      for (std::size_t c = 0; c < d->class_count(); ++c) {
        if (c == zc) {
          rec.element_map[c] = out.b0;
        } else if (c == xc) {
          rec.element_map[c] = b;
        } else {
          rec.element_map[c] = next.size();
          next.grow(next.size() + 1);
          created.push_back(rec.element_map[c]);
        }
      }
      for (std::size_t v = 0; v < s.variable_count(); ++v) rec.assignment.push_back(rec.element_map[d->partition[v]]);

      std::optional<ConstructionConflict> clash;
      auto require = [&](std::size_t rel, const Tuple& t, bool value) {
        if (clash) return;
        bool old = std::all_of(t.begin(), t.end(), [&](Element e) { return e < current.size(); });
        if (old) {
          bool existing = current.holds(rel, t);
          if (existing != value) clash = ConstructionConflict{stage, b, sig[rel].name, t, value, existing};
          return;
        }
        auto [it, fresh] = pending.emplace(std::make_pair(rel, t), value);
        if (!fresh && it->second != value) {
          clash = ConstructionConflict{stage, b, sig[rel].name, t, value, it->second};
          return;
        }
        if (value) next.set(rel, t, true);
      };

      for (std::size_t c = 0; c < d->class_count(); ++c) {
        for (std::size_t rel = 0; rel < sig.size(); ++rel)
          require(rel, Tuple(sig[rel].arity, rec.element_map[c]), d->class_types[c].has(rel));
      }
      for (const AtomValue& av : d->atom_values) {
        Tuple t;
        for (std::size_t c : av.classes) t.push_back(rec.element_map[c]);
        require(av.rel, t, av.value);
      }
      if (cert.extended) {
        for (std::size_t c = 0; c < d->class_count(); ++c) {
          if (c == zc) continue;
          for (std::size_t rel = 0; rel < sig.size(); ++rel) {
            for (std::size_t p = 0; p < layout->pattern_count(rel); ++p) {
              Tuple t(sig[rel].arity);
              for (std::size_t j = 0; j < t.size(); ++j) t[j] = ((p >> j) & 1u) ? rec.element_map[c] : out.b0;
              require(rel, t, layout->bit(d->class_exttypes[c], rel, p));
            }
          }
        }
      }
      if (clash) return *clash;
      out.glue.push_back(std::move(rec));
    }
    out.stages.push_back(next);
    current = std::move(next);
    frontier = std::move(created);
  }
  return out;
}

struct ConstructionReport {
  std::vector<Violation> failures;
  bool ok() const { return failures.empty(); }
};

/// Checks the staged model against the certificate: each stage is the induced
/// substructure of the next ("chain"), every element's type (extended state
/// for non-z elements of extended certificates) is a strategy key ("R1"), and
/// every element of B_i has a recorded y-tuple satisfying the matrix in
/// B_{i+1} ("R2").
inline ConstructionReport verify_construction(const StagedModel& staged, const PrenexSentence& s,
                                              const Certificate& cert, std::size_t arity_cap = kDefaultArityCap) {
  ConstructionReport rep;
  const auto& st = staged.stages;
  std::optional<ExtLayout> layout;
  if (cert.extended) layout.emplace(s.signature, arity_cap);

  for (std::size_t i = 1; i < st.size(); ++i) {
    if (st[i].size() < st[i - 1].size() || !(st[i].restrict_to(st[i - 1].size()) == st[i - 1]))
      rep.failures.push_back({"chain", "stage " + std::to_string(i - 1) + " is not an induced substructure of stage " +
                                           std::to_string(i)});
  }
  for (std::size_t i = 0; i < st.size(); ++i) {
    for (Element e = 0; e < st[i].size(); ++e) {
      bool known;
      if (!cert.extended) {
        known = cert.strategy.count(type_of_element(st[i], e)) != 0;
      } else if (e == staged.b0) {
        known = type_of_element(st[i], e) == cert.pi0;
      } else {
        known = cert.ext_strategy.count(ext_type_of_element(st[i], *layout, staged.b0, e)) != 0;
      }
      if (!known)
        rep.failures.push_back({"R1", "stage " + std::to_string(i) + ": element " + std::to_string(e) +
                                          " realizes a type outside the strategy"});
    }
  }
  std::map<Element, const GlueRecord*> witness_of;
  for (const auto& g : staged.glue) witness_of.emplace(g.b, &g);
  for (std::size_t i = 0; i + 1 < st.size(); ++i) {
    for (Element b = 0; b < st[i].size(); ++b) {
      auto it = witness_of.find(b);
      if (it == witness_of.end() || it->second->stage > i + 1) {
        rep.failures.push_back({"R2", "stage " + std::to_string(i) + ": element " + std::to_string(b) +
                                          " has no recorded witness"});
        continue;
      }
      const auto& a = it->second->assignment;
      bool in_range = std::all_of(a.begin(), a.end(), [&](Element e) { return e < st[i + 1].size(); });
      if (!in_range || a[kVarZ] != staged.b0 || a[kVarX] != b || !eval_qf(st[i + 1], a, s))
        rep.failures.push_back({"R2", "stage " + std::to_string(i) + ": element " + std::to_string(b) +
                                          " has no satisfying y-tuple in stage " + std::to_string(i + 1)});
    }
  }
  return rep;
}

// }}}

}  // namespace ack
