#pragma once

// Witness descriptors: a witness model of size n + 2 together with an
// assignment of the prefix variables, compressed to the variable partition,
// one label per class, and the truth values of the matrix atoms.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ackermann/errors.hpp"
#include "ackermann/syntax.hpp"
#include "ackermann/types.hpp"

namespace ack {

inline constexpr std::size_t kEqualityRel = std::numeric_limits<std::size_t>::max();
inline constexpr std::size_t kDefaultMaxWitnesses = 1'000'000;

/// How the z-class and the x-class of a descriptor relate. `Merged` describes
/// a witness for the z-element itself, `Split` one for any other element.
/// `Fresh` is Split with no y sharing a class with z or x, so gluing the
/// witness touches no old tuple except those over {z, x}.
enum class XzMode { Any, Merged, Split, Fresh };

struct AtomValue {
  std::size_t rel = 0;
  std::vector<std::size_t> classes;
  bool value = false;

  friend bool operator==(const AtomValue&, const AtomValue&) = default;
  friend auto operator<=>(const AtomValue&, const AtomValue&) = default;
};

struct WitnessDescriptor {
  std::vector<std::size_t> partition;        // class id per prefix variable (z, x, y1..yn)
  std::vector<OneType> class_types;          // per class
  std::vector<ExtendedType> class_exttypes;  // per class; empty for plain descriptors
  std::vector<AtomValue> atom_values;        // sorted by (rel, classes)
  std::size_t padding_count = 0;

  std::size_t class_count() const { return class_types.size(); }
  std::size_t z_class() const { return partition[kVarZ]; }
  std::size_t x_class() const { return partition[kVarX]; }
  bool extended() const { return !class_exttypes.empty(); }

  friend bool operator==(const WitnessDescriptor&, const WitnessDescriptor&) = default;
  // Member order makes this the canonical order for descriptors of one
  // sentence: partition, then labels, then atom values (keys coincide once
  // the partition does, so only values differ, false before true).
  friend auto operator<=>(const WitnessDescriptor&, const WitnessDescriptor&) = default;
};

struct WitnessContext {
  OneType pi0;
  OneType pi;
  TypeSet allowed;
};

struct ExtWitnessContext {
  OneType pi0;
  ExtendedType state;
  std::set<ExtendedType> allowed;  // states permitted for classes other than the z-class
};

struct Violation {
  std::string code;
  std::string detail;

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Restricted growth strings: p[0] = 0 and p[i] <= max(p[0..i-1]) + 1.
inline bool is_canonical_partition(const std::vector<std::size_t>& p) {
  std::size_t next = 0;
  for (std::size_t v : p) {
    if (v > next) return false;
    if (v == next) ++next;
  }
  return true;
}

inline std::size_t partition_classes(const std::vector<std::size_t>& p) {
  std::size_t k = 0;
  for (std::size_t v : p) k = std::max(k, v + 1);
  return k;
}

/// The relation atoms of the matrix after collapsing variables to classes,
/// sorted and deduplicated; values are left false.
inline std::vector<AtomValue> atom_keys(const PrenexSentence& s, const std::vector<std::size_t>& partition) {
  std::vector<AtomValue> keys;
  for (const Atom& a : s.matrix.atoms()) {
    if (a.is_equality) continue;
    AtomValue k;
    k.rel = a.rel;
    for (std::size_t v : a.args) k.classes.push_back(partition[v]);
    keys.push_back(std::move(k));
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return keys;
}

inline std::set<OneType> realized_types(const WitnessDescriptor& d) {
  return {d.class_types.begin(), d.class_types.end()};
}

/// Extended states the descriptor asks the opponent to continue from: every
/// class except the z-class (which is the z-element itself).
inline std::set<ExtendedType> ext_obligations(const WitnessDescriptor& d) {
  std::set<ExtendedType> out;
  for (std::size_t c = 0; c < d.class_exttypes.size(); ++c) {
    if (c != d.z_class()) out.insert(d.class_exttypes[c]);
  }
  return out;
}

/// Pattern index of an atom over classes {zc, c}: x at position j iff the
/// argument's class is c.
inline std::size_t pattern_of(const std::vector<std::size_t>& classes, std::size_t c) {
  std::size_t p = 0;
  for (std::size_t j = 0; j < classes.size(); ++j) {
    if (classes[j] == c) p |= std::size_t{1} << j;
  }
  return p;
}

namespace detail {

inline std::string ClassesString(const std::vector<std::size_t>& cs) {
  std::string s = "(";
  for (std::size_t i = 0; i < cs.size(); ++i) s += (i ? "," : "") + std::to_string(cs[i]);
  return s + ")";
}

/// Partition, class count, padding and atom-key checks shared by both
/// checkers. Returns the key->value map when the atom set is exactly right.
inline std::optional<std::map<std::pair<std::size_t, std::vector<std::size_t>>, bool>> CheckShape(
    const PrenexSentence& s, const WitnessDescriptor& d, std::vector<Violation>& out) {
  const std::size_t vars = s.variable_count();
  if (d.partition.size() != vars) {
    out.push_back({"partition", "partition covers " + std::to_string(d.partition.size()) +
                                    " variables, expected " + std::to_string(vars)});
    return std::nullopt;
  }
  if (!is_canonical_partition(d.partition)) {
    out.push_back({"partition", "class ids are not numbered by first occurrence"});
    return std::nullopt;
  }
  const std::size_t k = partition_classes(d.partition);
  if (d.class_types.size() != k) {
    out.push_back({"partition", std::to_string(d.class_types.size()) + " class types for " +
                                    std::to_string(k) + " classes"});
    return std::nullopt;
  }
  if (d.padding_count != vars - k)
    out.push_back({"padding", "padding_count is " + std::to_string(d.padding_count) + ", expected " +
                                  std::to_string(vars - k)});

  std::map<std::pair<std::size_t, std::vector<std::size_t>>, bool> values;
  bool well_formed = true;
  for (const AtomValue& av : d.atom_values) {
    if (av.rel == kEqualityRel) {
      out.push_back({"C1", "equality atom listed in atom_values"});
      well_formed = false;
      continue;
    }
    if (av.rel >= s.signature.size() || av.classes.size() != s.signature[av.rel].arity) {
      out.push_back({"atoms", "atom entry with unknown relation or wrong arity"});
      well_formed = false;
      continue;
    }
    bool in_range = std::all_of(av.classes.begin(), av.classes.end(),
                                [&](std::size_t c) { return c < k; });
    if (!in_range) {
      out.push_back({"atoms", "atom " + s.signature[av.rel].name + ClassesString(av.classes) +
                                  " refers to a nonexistent class"});
      well_formed = false;
      continue;
    }
    auto [it, fresh] = values.emplace(std::make_pair(av.rel, av.classes), av.value);
    if (!fresh) {
      if (it->second != av.value) {
        out.push_back({"C3", "atom " + s.signature[av.rel].name + ClassesString(av.classes) +
                                 " has two different values"});
      } else {
        out.push_back({"atoms", "atom " + s.signature[av.rel].name + ClassesString(av.classes) +
                                    " listed twice"});
      }
      well_formed = false;
    }
  }
  std::set<std::pair<std::size_t, std::vector<std::size_t>>> expected;
  for (const AtomValue& key : atom_keys(s, d.partition)) expected.insert({key.rel, key.classes});
  for (const auto& key : expected) {
    if (!values.count(key)) {
      out.push_back({"atoms", "missing value for atom " + s.signature[key.first].name +
                                  ClassesString(key.second)});
      well_formed = false;
    }
  }
  for (const auto& [key, v] : values) {
    if (!expected.count(key)) {
      out.push_back({"atoms", "atom " + s.signature[key.first].name + ClassesString(key.second) +
                                  " does not occur in the matrix"});
      well_formed = false;
    }
  }
  if (!well_formed) return std::nullopt;
  return values;
}

inline void CheckMode(const WitnessDescriptor& d, XzMode mode, std::vector<Violation>& out) {
  if (mode == XzMode::Merged && d.z_class() != d.x_class())
    out.push_back({"xz", "witness for the z-element must put z and x in one class"});
  if ((mode == XzMode::Split || mode == XzMode::Fresh) && d.z_class() == d.x_class())
    out.push_back({"xz", "witness for a non-z element must separate z and x"});
  if (mode == XzMode::Fresh) {
    for (std::size_t v = 2; v < d.partition.size(); ++v) {
      if (d.partition[v] == d.z_class() || d.partition[v] == d.x_class()) {
        out.push_back({"xz", "a y-variable shares a class with z or x"});
        break;
      }
    }
  }
}

inline void CheckDiagonals(const PrenexSentence& s, const WitnessDescriptor& d,
                           const std::vector<AtomValue>& keys,
                           const std::map<std::pair<std::size_t, std::vector<std::size_t>>, bool>& values,
                           std::vector<Violation>& out) {
  for (const AtomValue& key : keys) {
    const std::size_t c = key.classes[0];
    bool single = std::all_of(key.classes.begin(), key.classes.end(),
                              [&](std::size_t x) { return x == c; });
    if (!single) continue;
    bool v = values.at({key.rel, key.classes});
    if (v != d.class_types[c].has(key.rel))
      out.push_back({"C2", "atom " + s.signature[key.rel].name + ClassesString(key.classes) +
                               " disagrees with the 1-type of class " + std::to_string(c)});
  }
}

inline bool MatrixHolds(const PrenexSentence& s, const WitnessDescriptor& d,
                        const std::map<std::pair<std::size_t, std::vector<std::size_t>>, bool>& values) {
  return s.matrix.evaluate([&](std::size_t id) {
    const Atom& a = s.matrix.atoms()[id];
    if (a.is_equality) return d.partition[a.args[0]] == d.partition[a.args[1]];
    std::vector<std::size_t> cs;
    for (std::size_t v : a.args) cs.push_back(d.partition[v]);
    return values.at({a.rel, cs});
  });
}

}  // namespace detail

/// Verifies C1-C5, padding, the x/z mode and realized types within
/// ctx.allowed. Reports every violation found.
inline std::vector<Violation> check_descriptor(const PrenexSentence& s, const WitnessDescriptor& d,
                                               const WitnessContext& ctx, XzMode mode = XzMode::Any) {
  std::vector<Violation> out;
  auto values = detail::CheckShape(s, d, out);
  if (d.partition.size() != s.variable_count() || !is_canonical_partition(d.partition) ||
      d.class_types.size() != partition_classes(d.partition))
    return out;
  detail::CheckMode(d, mode, out);
  if (d.class_types[d.z_class()] != ctx.pi0)
    out.push_back({"C4", "class of z does not have type pi0"});
  if (d.class_types[d.x_class()] != ctx.pi)
    out.push_back({"C4", "class of x does not have type pi"});
  for (std::size_t c = 0; c < d.class_types.size(); ++c) {
    if (!ctx.allowed.contains(d.class_types[c]))
      out.push_back({"allowed", "class " + std::to_string(c) + " realizes a type outside the allowed set"});
  }
  if (!values) return out;
  detail::CheckDiagonals(s, d, atom_keys(s, d.partition), *values, out);
  if (!detail::MatrixHolds(s, d, *values)) out.push_back({"C5", "matrix is false under the descriptor"});
  return out;
}

/// As check_descriptor, plus the extended-type invariants: per-class
/// projections, z-class = initial type, x-class = ctx.state, and C7 (atoms
/// over {z-class, c} agree with c's extended type).
inline std::vector<Violation> check_ext_descriptor(const PrenexSentence& s, const ExtLayout& layout,
                                                   const WitnessDescriptor& d, const ExtWitnessContext& ctx,
                                                   XzMode mode = XzMode::Any) {
  std::vector<Violation> out;
  auto values = detail::CheckShape(s, d, out);
  if (d.partition.size() != s.variable_count() || !is_canonical_partition(d.partition) ||
      d.class_types.size() != partition_classes(d.partition))
    return out;
  const std::size_t k = d.class_types.size();
  if (d.class_exttypes.size() != k) {
    out.push_back({"ext", std::to_string(d.class_exttypes.size()) + " extended types for " +
                              std::to_string(k) + " classes"});
    return out;
  }
  detail::CheckMode(d, mode, out);
  const std::size_t zc = d.z_class(), xc = d.x_class();
  for (std::size_t c = 0; c < k; ++c) {
    if (layout.x_projection(d.class_exttypes[c]) != d.class_types[c])
      out.push_back({"projection", "class " + std::to_string(c) + ": extended type does not project to its 1-type"});
    if (layout.z_projection(d.class_exttypes[c]) != ctx.pi0)
      out.push_back({"projection", "class " + std::to_string(c) + ": extended type disagrees with pi0 on z"});
  }
  if (d.class_exttypes[zc] != initial_extended_type(layout, ctx.pi0))
    out.push_back({"C4", "class of z does not carry the initial extended type"});
  if (d.class_exttypes[xc] != ctx.state)
    out.push_back({"C4", "class of x does not carry the current extended type"});
  if (d.class_types[zc] != ctx.pi0) out.push_back({"C4", "class of z does not have type pi0"});
  if (d.class_types[xc] != layout.x_projection(ctx.state))
    out.push_back({"C4", "class of x does not have the current 1-type"});
  for (std::size_t c = 0; c < k; ++c) {
    if (c != zc && !ctx.allowed.count(d.class_exttypes[c]))
      out.push_back({"allowed", "class " + std::to_string(c) + " realizes a state outside the allowed set"});
  }
  if (!values) return out;
  const auto keys = atom_keys(s, d.partition);
  detail::CheckDiagonals(s, d, keys, *values, out);
  for (const AtomValue& key : keys) {
    std::optional<std::size_t> other;
    bool pair_only = true;
    for (std::size_t c : key.classes) {
      if (c == zc) continue;
      if (other && *other != c) pair_only = false;
      other = c;
    }
    if (!pair_only || !other) continue;
    bool want = layout.bit(d.class_exttypes[*other], key.rel, pattern_of(key.classes, *other));
    if (values->at({key.rel, key.classes}) != want)
      out.push_back({"C7", "atom " + s.signature[key.rel].name + detail::ClassesString(key.classes) +
                               " disagrees with the extended type of class " + std::to_string(*other)});
  }
  if (!detail::MatrixHolds(s, d, *values)) out.push_back({"C5", "matrix is false under the descriptor"});
  return out;
}

// {{{ Search

/// Backtracking witness search. Candidates are ordered by partition
/// (restricted growth strings, lexicographic), then class labels
/// (lexicographic, class 0 most significant, each label in ascending order),
/// then atom values (lexicographic over sorted keys, false before true). The
/// first candidate in that order that passes the checker is returned.
class WitnessSearch {
 public:
  explicit WitnessSearch(PrenexSentence s, std::optional<ExtLayout> layout = std::nullopt)
      : s_(std::move(s)), layout_(std::move(layout)) {
    const std::size_t vars = s_.variable_count();
    if (vars > 12) throw CapExceeded("witness search supports at most 10 existential y-variables");
    std::vector<std::size_t> p(vars, 0);
    BuildShapes(p, 1, 1);
  }

  const PrenexSentence& sentence() const { return s_; }
  std::size_t partition_count() const { return shapes_.size(); }

  std::optional<WitnessDescriptor> find(const WitnessContext& ctx, XzMode mode = XzMode::Any) const {
    if (!ctx.allowed.contains(ctx.pi0) || !ctx.allowed.contains(ctx.pi)) return std::nullopt;
    std::vector<std::uint64_t> others;
    for (OneType t : ctx.allowed.members()) others.push_back(t.bits);
    for (const Shape& sh : shapes_) {
      if (!ModeAllows(sh, mode)) continue;
      if (sh.zc == sh.xc && ctx.pi0 != ctx.pi) continue;
      Run run(sh, s_.matrix, nullptr);
      for (std::size_t c = 0; c < sh.k; ++c) {
        if (c == sh.zc) run.options[c] = {ctx.pi0.bits};
        else if (c == sh.xc) run.options[c] = {ctx.pi.bits};
        else run.options[c] = others;
      }
      if (run.Solve()) return run.Build(s_, false);
    }
    return std::nullopt;
  }

  std::optional<WitnessDescriptor> find_ext(const ExtWitnessContext& ctx, XzMode mode = XzMode::Any) const {
    if (!layout_) throw std::logic_error("find_ext requires a search built with an extended layout");
    const ExtLayout& L = *layout_;
    const ExtendedType init = initial_extended_type(L, ctx.pi0);
    if (L.z_projection(ctx.state) != ctx.pi0) return std::nullopt;
    std::vector<std::uint64_t> others;
    for (ExtendedType t : ctx.allowed) {
      if (L.z_projection(t) == ctx.pi0) others.push_back(t.bits);
    }
    for (const Shape& sh : shapes_) {
      if (!ModeAllows(sh, mode)) continue;
      if (sh.zc == sh.xc) {
        if (ctx.state != init) continue;
      } else if (!ctx.allowed.count(ctx.state)) {
        continue;
      }
      Run run(sh, s_.matrix, &L);
      for (std::size_t c = 0; c < sh.k; ++c) {
        if (c == sh.zc) run.options[c] = {init.bits};
        else if (c == sh.xc) run.options[c] = {ctx.state.bits};
        else run.options[c] = others;
      }
      if (run.Solve()) return run.Build(s_, true);
    }
    return std::nullopt;
  }

 private:
  struct Key {
    std::size_t rel;
    std::vector<std::size_t> classes;
    int owner;            // class whose label forces the value, or -1
    std::size_t pattern;  // bit offset inside the owner's label
  };

  struct Shape {
    std::vector<std::size_t> partition;
    std::size_t k = 0;
    std::size_t zc = 0, xc = 0;
    std::vector<Key> plain_keys;
    std::vector<Key> ext_keys;
    std::vector<int> atom_key;  // per matrix atom; -1 for equality
    std::vector<bool> eq_value;
  };

  static bool ModeAllows(const Shape& sh, XzMode mode) {
    if (mode == XzMode::Merged) return sh.zc == sh.xc;
    if (mode == XzMode::Split) return sh.zc != sh.xc;
    if (mode == XzMode::Fresh) {
      if (sh.zc == sh.xc) return false;
      for (std::size_t v = 2; v < sh.partition.size(); ++v) {
        if (sh.partition[v] == sh.zc || sh.partition[v] == sh.xc) return false;
      }
    }
    return true;
  }

  void BuildShapes(std::vector<std::size_t>& p, std::size_t i, std::size_t used) {
    if (i == p.size()) {
      shapes_.push_back(MakeShape(p, used));
      return;
    }
    for (std::size_t c = 0; c <= used && c < p.size(); ++c) {
      p[i] = c;
      BuildShapes(p, i + 1, c == used ? used + 1 : used);
    }
  }

  Shape MakeShape(const std::vector<std::size_t>& p, std::size_t k) const {
    Shape sh;
    sh.partition = p;
    sh.k = k;
    sh.zc = p[kVarZ];
    sh.xc = p[kVarX];
    const auto keys = atom_keys(s_, p);
    for (const AtomValue& kv : keys) {
      Key plain{kv.rel, kv.classes, -1, 0};
      const std::size_t c0 = kv.classes[0];
      if (std::all_of(kv.classes.begin(), kv.classes.end(), [&](std::size_t c) { return c == c0; })) {
        plain.owner = static_cast<int>(c0);
        plain.pattern = kv.rel;
      }
      sh.plain_keys.push_back(plain);

      Key ext{kv.rel, kv.classes, -1, 0};
      if (layout_) {
        std::optional<std::size_t> other;
        bool pair_only = true;
        for (std::size_t c : kv.classes) {
          if (c == sh.zc) continue;
          if (other && *other != c) pair_only = false;
          other = c;
        }
        if (pair_only) {
          std::size_t owner = other ? *other : sh.zc;
          ext.owner = static_cast<int>(owner);
          ext.pattern = layout_->offset(kv.rel) + (other ? pattern_of(kv.classes, owner) : 0);
        }
      }
      sh.ext_keys.push_back(ext);
    }
    for (const Atom& a : s_.matrix.atoms()) {
      if (a.is_equality) {
        sh.atom_key.push_back(-1);
        sh.eq_value.push_back(p[a.args[0]] == p[a.args[1]]);
        continue;
      }
      AtomValue probe{a.rel, {}, false};
      for (std::size_t v : a.args) probe.classes.push_back(p[v]);
      auto it = std::lower_bound(keys.begin(), keys.end(), probe);
      sh.atom_key.push_back(static_cast<int>(it - keys.begin()));
      sh.eq_value.push_back(false);
    }
    return sh;
  }

  struct Run {
    Run(const Shape& shape, const Matrix& matrix, const ExtLayout* layout)
        : sh(shape), m(matrix), L(layout), keys(layout ? shape.ext_keys : shape.plain_keys),
          options(shape.k), owned(shape.k), val(keys.size(), Tri::Unknown), label(shape.k, 0) {
      for (std::size_t i = 0; i < keys.size(); ++i) {
        if (keys[i].owner >= 0) owned[static_cast<std::size_t>(keys[i].owner)].push_back(i);
        else free_keys.push_back(i);
      }
    }

    Tri Eval() const {
      return m.evaluate3([&](std::size_t a) {
        int key = sh.atom_key[a];
        return key < 0 ? tri(sh.eq_value[a]) : val[static_cast<std::size_t>(key)];
      });
    }

    bool Solve() {
      if (Eval() == Tri::False) return false;
      return AssignClass(0);
    }

    bool AssignClass(std::size_t c) {
      if (c == sh.k) return AssignFree(0);
      // Whether the remaining search succeeds depends on this label only
      // through the atom values it forces; remember failed combinations.
      std::set<std::uint64_t> failed;
      const bool memo = owned[c].size() <= 64;
      for (std::uint64_t lab : options[c]) {
        std::uint64_t sig = 0;
        for (std::size_t j = 0; j < owned[c].size(); ++j) {
          bool v = (lab >> keys[owned[c][j]].pattern) & 1u;
          val[owned[c][j]] = tri(v);
          if (v && j < 64) sig |= std::uint64_t{1} << j;
        }
        if (memo && failed.count(sig)) continue;
        label[c] = lab;
        if (Eval() != Tri::False && AssignClass(c + 1)) return true;
        if (memo) failed.insert(sig);
      }
      for (std::size_t key : owned[c]) val[key] = Tri::Unknown;
      return false;
    }

    bool AssignFree(std::size_t i) {
      if (i == free_keys.size()) return Eval() == Tri::True;
      for (bool v : {false, true}) {
        val[free_keys[i]] = tri(v);
        if (Eval() != Tri::False && AssignFree(i + 1)) return true;
      }
      val[free_keys[i]] = Tri::Unknown;
      return false;
    }

    WitnessDescriptor Build(const PrenexSentence& s, bool extended) const {
      WitnessDescriptor d;
      d.partition = sh.partition;
      d.padding_count = s.variable_count() - sh.k;
      for (std::size_t c = 0; c < sh.k; ++c) {
        if (extended) {
          d.class_exttypes.push_back(ExtendedType{label[c]});
          d.class_types.push_back(L->x_projection(ExtendedType{label[c]}));
        } else {
          d.class_types.push_back(OneType{static_cast<std::uint32_t>(label[c])});
        }
      }
      for (std::size_t i = 0; i < keys.size(); ++i)
        d.atom_values.push_back({keys[i].rel, keys[i].classes, val[i] == Tri::True});
      return d;
    }

    const Shape& sh;
    const Matrix& m;
    const ExtLayout* L;
    const std::vector<Key>& keys;
    std::vector<std::vector<std::uint64_t>> options;
    std::vector<std::vector<std::size_t>> owned;
    std::vector<std::size_t> free_keys;
    std::vector<Tri> val;
    std::vector<std::uint64_t> label;
  };

  PrenexSentence s_;
  std::optional<ExtLayout> layout_;
  std::vector<Shape> shapes_;
};

inline std::optional<WitnessDescriptor> find_witness(const PrenexSentence& s, const WitnessContext& ctx,
                                                     XzMode mode = XzMode::Any) {
  return WitnessSearch(s).find(ctx, mode);
}

inline std::optional<WitnessDescriptor> find_ext_witness(const PrenexSentence& s, const ExtLayout& layout,
                                                         const ExtWitnessContext& ctx,
                                                         XzMode mode = XzMode::Any) {
  return WitnessSearch(s, layout).find_ext(ctx, mode);
}

// }}}

// {{{ Exhaustive enumeration

namespace detail {

/// Every candidate in canonical order, filtered by `accept`. Written as plain
/// nested loops over all partitions, labels and valuations; shares no code
/// with WitnessSearch so it can serve as its oracle.
template <class Labels, class MakeDescriptor, class Accept>
std::vector<WitnessDescriptor> EnumerateCandidates(const PrenexSentence& s, std::size_t budget,
                                                   const Labels& labels, MakeDescriptor&& make,
                                                   Accept&& accept) {
  std::vector<WitnessDescriptor> out;
  const std::size_t vars = s.variable_count();
  std::size_t examined = 0;
  std::vector<std::size_t> p(vars, 0);
  for (;;) {
    if (is_canonical_partition(p)) {
      const std::size_t k = partition_classes(p);
      auto keys = atom_keys(s, p);
      if (keys.size() >= 63) throw CapExceeded("too many atoms to enumerate valuations");
      std::vector<std::size_t> pick(k, 0);
      for (;;) {
        std::vector<std::uint64_t> chosen(k);
        for (std::size_t c = 0; c < k; ++c) chosen[c] = labels[pick[c]];
        if (accept.labels_ok(p, chosen)) {
          const std::uint64_t combos = std::uint64_t{1} << keys.size();
          for (std::uint64_t bits = 0; bits < combos; ++bits) {
            if (++examined > budget)
              throw BudgetExceeded("witness enumeration exceeded its budget", examined - 1);
            for (std::size_t i = 0; i < keys.size(); ++i)
              keys[i].value = (bits >> (keys.size() - 1 - i)) & 1u;
            WitnessDescriptor d = make(p, chosen, keys);
            if (accept(d)) out.push_back(std::move(d));
          }
        }
        std::size_t c = k;
        while (c > 0 && ++pick[c - 1] == labels.size()) pick[--c] = 0;
        if (c == 0) break;
      }
    }
    std::size_t i = vars;
    while (i > 0 && ++p[i - 1] == vars) p[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

}  // namespace detail

/// All valid descriptors for ctx in canonical order. Meant for tiny instances;
/// `budget` caps the number of candidate descriptors examined.
inline std::vector<WitnessDescriptor> enumerate_witnesses(const PrenexSentence& s, const WitnessContext& ctx,
                                                          std::size_t budget = kDefaultMaxWitnesses,
                                                          XzMode mode = XzMode::Any) {
  std::vector<std::uint64_t> labels;
  for (OneType t : enumerate_one_types(s.signature)) labels.push_back(t.bits);
  struct Accept {
    const PrenexSentence& s;
    const WitnessContext& ctx;
    XzMode mode;
    // Cheap label-level rejection; the full check below repeats it.
    bool labels_ok(const std::vector<std::size_t>& p, const std::vector<std::uint64_t>& chosen) const {
      if (chosen[p[kVarZ]] != ctx.pi0.bits || chosen[p[kVarX]] != ctx.pi.bits) return false;
      for (auto l : chosen) {
        if (!ctx.allowed.contains(OneType{static_cast<std::uint32_t>(l)})) return false;
      }
      return true;
    }
    bool operator()(const WitnessDescriptor& d) const { return check_descriptor(s, d, ctx, mode).empty(); }
  } accept{s, ctx, mode};
  auto make = [&](const std::vector<std::size_t>& p, const std::vector<std::uint64_t>& chosen,
                  const std::vector<AtomValue>& keys) {
    WitnessDescriptor d;
    d.partition = p;
    for (auto l : chosen) d.class_types.push_back(OneType{static_cast<std::uint32_t>(l)});
    d.atom_values = keys;
    d.padding_count = p.size() - chosen.size();
    return d;
  };
  return detail::EnumerateCandidates(s, budget, labels, make, accept);
}

/// Extended counterpart of enumerate_witnesses; labels range over every
/// extended type with z-projection ctx.pi0.
inline std::vector<WitnessDescriptor> enumerate_ext_witnesses(const PrenexSentence& s, const ExtLayout& layout,
                                                              const ExtWitnessContext& ctx,
                                                              std::size_t budget = kDefaultMaxWitnesses,
                                                              XzMode mode = XzMode::Any) {
  std::vector<std::uint64_t> labels;
  for (ExtendedType t : layout.states_for(ctx.pi0)) labels.push_back(t.bits);
  const ExtendedType init = initial_extended_type(layout, ctx.pi0);
  struct Accept {
    const PrenexSentence& s;
    const ExtLayout& layout;
    const ExtWitnessContext& ctx;
    ExtendedType init;
    XzMode mode;
    bool labels_ok(const std::vector<std::size_t>& p, const std::vector<std::uint64_t>& chosen) const {
      return chosen[p[kVarZ]] == init.bits && chosen[p[kVarX]] == ctx.state.bits;
    }
    bool operator()(const WitnessDescriptor& d) const {
      return check_ext_descriptor(s, layout, d, ctx, mode).empty();
    }
  } accept{s, layout, ctx, init, mode};
  auto make = [&](const std::vector<std::size_t>& p, const std::vector<std::uint64_t>& chosen,
                  const std::vector<AtomValue>& keys) {
    WitnessDescriptor d;
    d.partition = p;
    for (auto l : chosen) {
      d.class_exttypes.push_back(ExtendedType{l});
      d.class_types.push_back(layout.x_projection(ExtendedType{l}));
    }
    d.atom_values = keys;
    d.padding_count = p.size() - chosen.size();
    return d;
  };
  return detail::EnumerateCandidates(s, budget, labels, make, accept);
}

// }}}

}  // namespace ack
