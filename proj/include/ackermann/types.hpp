#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ackermann/errors.hpp"
#include "ackermann/structure.hpp"
#include "ackermann/syntax.hpp"

namespace ack {

inline constexpr std::size_t kMaxSignatureSize = 20;

/// A 1-type over a signature: bit r is the truth of R_r(x, ..., x).
/// The numeric value of `bits` is the type's position in canonical order.
struct OneType {
  std::uint32_t bits = 0;

  bool has(std::size_t rel) const { return (bits >> rel) & 1u; }
  std::size_t index() const { return bits; }

  friend bool operator==(const OneType&, const OneType&) = default;
  friend auto operator<=>(const OneType&, const OneType&) = default;
};

inline std::size_t type_count(const Signature& sig) {
  if (sig.size() > kMaxSignatureSize)
    throw CapExceeded("signature has " + std::to_string(sig.size()) + " symbols; at most " +
                      std::to_string(kMaxSignatureSize) + " are supported");
  return std::size_t{1} << sig.size();
}

/// All 2^|sig| types, binary counting with the first symbol least significant.
inline std::vector<OneType> enumerate_one_types(const Signature& sig) {
  std::vector<OneType> out(type_count(sig));
  for (std::size_t i = 0; i < out.size(); ++i) out[i].bits = static_cast<std::uint32_t>(i);
  return out;
}

inline std::vector<std::string> signed_symbols(OneType t, const Signature& sig) {
  std::vector<std::string> out;
  for (std::size_t r = 0; r < sig.size(); ++r) out.push_back((t.has(r) ? "+" : "-") + sig[r].name);
  return out;
}

/// `{+P, -R}`; the empty signature renders as `{}`.
inline std::string render(OneType t, const Signature& sig) {
  std::string out = "{";
  auto syms = signed_symbols(t, sig);
  for (std::size_t i = 0; i < syms.size(); ++i) {
    if (i) out += ", ";
    out += syms[i];
  }
  return out + "}";
}

/// Inverse of signed_symbols. Every symbol must be decided exactly once.
inline OneType one_type_from_symbols(const std::vector<std::string>& syms, const Signature& sig) {
  OneType t;
  std::vector<bool> seen(sig.size(), false);
  for (const auto& s : syms) {
    if (s.size() < 2 || (s[0] != '+' && s[0] != '-'))
      throw std::invalid_argument("malformed signed symbol '" + s + "'");
    auto r = sig.index_of(s.substr(1));
    if (!r) throw std::invalid_argument("unknown relation '" + s.substr(1) + "'");
    if (seen[*r]) throw std::invalid_argument("relation '" + s.substr(1) + "' decided twice");
    seen[*r] = true;
    if (s[0] == '+') t.bits |= 1u << *r;
  }
  for (std::size_t r = 0; r < sig.size(); ++r) {
    if (!seen[r]) throw std::invalid_argument("type does not decide '" + sig[r].name + "'");
  }
  return t;
}

/// Dense set of 1-types, indexed by OneType::index().
class TypeSet {
 public:
  TypeSet() = default;
  explicit TypeSet(std::size_t universe, bool full = false)
      : universe_(universe), words_((universe + 63) / 64, 0) {
    if (full) {
      for (std::size_t i = 0; i < universe; ++i) insert(OneType{static_cast<std::uint32_t>(i)});
    }
  }

  static TypeSet all(const Signature& sig) { return TypeSet(type_count(sig), true); }

  std::size_t universe() const { return universe_; }
  bool contains(OneType t) const {
    return t.index() < universe_ && ((words_[t.index() / 64] >> (t.index() % 64)) & 1u);
  }
  void insert(OneType t) { words_[t.index() / 64] |= std::uint64_t{1} << (t.index() % 64); }
  void erase(OneType t) { words_[t.index() / 64] &= ~(std::uint64_t{1} << (t.index() % 64)); }

  std::size_t size() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  std::vector<OneType> members() const {
    std::vector<OneType> out;
    for (std::size_t i = 0; i < universe_; ++i) {
      OneType t{static_cast<std::uint32_t>(i)};
      if (contains(t)) out.push_back(t);
    }
    return out;
  }

  bool subset_of(const TypeSet& other) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t theirs = i < other.words_.size() ? other.words_[i] : 0;
      if (words_[i] & ~theirs) return false;
    }
    return true;
  }

  friend bool operator==(const TypeSet&, const TypeSet&) = default;

 private:
  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

inline OneType type_of_element(const FiniteStructure& m, Element a) {
  if (a >= m.size()) throw std::out_of_range("type_of_element: element outside universe");
  OneType t;
  const Signature& sig = m.signature();
  for (std::size_t r = 0; r < sig.size(); ++r) {
    if (m.holds(r, Tuple(sig[r].arity, a))) t.bits |= 1u << r;
  }
  return t;
}

// {{{ z-relative extended types

/// Truth of R(w) for every R and every w in {z, x}^arity(R). Pattern p of R
/// puts x at argument position j iff bit j of p is set, so pattern 0 is the
/// all-z tuple and pattern 2^arity - 1 the all-x (diagonal) tuple.
struct ExtendedType {
  std::uint64_t bits = 0;

  friend bool operator==(const ExtendedType&, const ExtendedType&) = default;
  friend auto operator<=>(const ExtendedType&, const ExtendedType&) = default;
};

inline constexpr std::size_t kDefaultArityCap = 3;
inline constexpr std::size_t kDefaultMaxExtStates = std::size_t{1} << 16;

/// Bit layout of ExtendedType for one signature.
class ExtLayout {
 public:
  ExtLayout() = default;
  explicit ExtLayout(const Signature& sig, std::size_t arity_cap = kDefaultArityCap) : sig_(sig) {
    std::size_t off = 0;
    for (const auto& r : sig) {
      if (r.arity > arity_cap)
        throw CapExceeded("relation " + r.name + " has arity " + std::to_string(r.arity) +
                          "; the extended method is capped at arity " + std::to_string(arity_cap));
      offsets_.push_back(off);
      off += std::size_t{1} << r.arity;
    }
    if (off > 64)
      throw CapExceeded("extended types need " + std::to_string(off) +
                        " pattern bits; at most 64 are supported");
    total_ = off;
  }

  const Signature& signature() const { return sig_; }
  std::size_t total_bits() const { return total_; }
  std::size_t offset(std::size_t rel) const { return offsets_[rel]; }
  std::size_t pattern_count(std::size_t rel) const { return std::size_t{1} << sig_[rel].arity; }
  std::size_t all_x(std::size_t rel) const { return pattern_count(rel) - 1; }

  bool bit(ExtendedType t, std::size_t rel, std::size_t pattern) const {
    return (t.bits >> (offsets_[rel] + pattern)) & 1u;
  }
  void set(ExtendedType& t, std::size_t rel, std::size_t pattern, bool v) const {
    std::uint64_t m = std::uint64_t{1} << (offsets_[rel] + pattern);
    t.bits = v ? (t.bits | m) : (t.bits & ~m);
  }

  /// The element's own 1-type.
  OneType x_projection(ExtendedType t) const {
    OneType o;
    for (std::size_t r = 0; r < sig_.size(); ++r) {
      if (bit(t, r, all_x(r))) o.bits |= 1u << r;
    }
    return o;
  }

  /// The 1-type of the fixed z-element.
  OneType z_projection(ExtendedType t) const {
    OneType o;
    for (std::size_t r = 0; r < sig_.size(); ++r) {
      if (bit(t, r, 0)) o.bits |= 1u << r;
    }
    return o;
  }

  /// Number of extended types whose z-projection is a given 1-type.
  std::size_t states_per_pi0() const {
    std::size_t free = total_ - sig_.size();
    return free >= 63 ? std::numeric_limits<std::size_t>::max() : (std::size_t{1} << free);
  }

  /// All extended types with z-projection pi0, in increasing order of `bits`.
  std::vector<ExtendedType> states_for(OneType pi0, std::size_t cap = kDefaultMaxExtStates) const {
    std::size_t count = states_per_pi0();
    if (count > cap)
      throw CapExceeded("extended state space has " +
                        (count == std::numeric_limits<std::size_t>::max() ? std::string("over 2^63")
                                                                          : std::to_string(count)) +
                        " states per pi0; cap is " + std::to_string(cap));
    std::uint64_t fixed_mask = 0, fixed_bits = 0;
    for (std::size_t r = 0; r < sig_.size(); ++r) {
      fixed_mask |= std::uint64_t{1} << offsets_[r];
      if (pi0.has(r)) fixed_bits |= std::uint64_t{1} << offsets_[r];
    }
    std::vector<std::size_t> free_positions;
    for (std::size_t b = 0; b < total_; ++b) {
      if (!((fixed_mask >> b) & 1u)) free_positions.push_back(b);
    }
    // Deposit a counter into the free positions; ascending counter values give
    // ascending `bits` because positions are visited low to high.
    std::vector<ExtendedType> out;
    out.reserve(count);
    for (std::size_t c = 0; c < count; ++c) {
      std::uint64_t v = fixed_bits;
      for (std::size_t j = 0; j < free_positions.size(); ++j) {
        if ((c >> j) & 1u) v |= std::uint64_t{1} << free_positions[j];
      }
      out.push_back(ExtendedType{v});
    }
    return out;
  }

  std::string pattern_name(std::size_t rel, std::size_t pattern) const {
    std::string s;
    for (std::size_t j = 0; j < sig_[rel].arity; ++j) s += ((pattern >> j) & 1u) ? 'x' : 'z';
    return s;
  }

 private:
  Signature sig_;
  std::vector<std::size_t> offsets_;
  std::size_t total_ = 0;
};

/// The extended type of b0 seen from itself: every pattern is the diagonal.
inline ExtendedType initial_extended_type(const ExtLayout& layout, OneType pi0) {
  ExtendedType t;
  const Signature& sig = layout.signature();
  for (std::size_t r = 0; r < sig.size(); ++r) {
    for (std::size_t p = 0; p < layout.pattern_count(r); ++p) layout.set(t, r, p, pi0.has(r));
  }
  return t;
}

/// `{R[zz]=0, R[zx]=1, ...}`.
inline std::string render(ExtendedType t, const ExtLayout& layout) {
  std::string out = "{";
  const Signature& sig = layout.signature();
  bool first = true;
  for (std::size_t r = 0; r < sig.size(); ++r) {
    for (std::size_t p = 0; p < layout.pattern_count(r); ++p) {
      if (!first) out += ", ";
      first = false;
      out += sig[r].name + "[" + layout.pattern_name(r, p) + "]=" + (layout.bit(t, r, p) ? "1" : "0");
    }
  }
  return out + "}";
}

/// Inverse of render(ExtendedType). Every pattern must appear exactly once.
inline ExtendedType parse_extended_type(const std::string& text, const ExtLayout& layout) {
  const Signature& sig = layout.signature();
  if (text.size() < 2 || text.front() != '{' || text.back() != '}')
    throw std::invalid_argument("extended type must be enclosed in braces: " + text);
  std::string body = text.substr(1, text.size() - 2);
  ExtendedType t;
  std::vector<bool> seen(layout.total_bits(), false);
  std::size_t pos = 0;
  while (pos < body.size()) {
    std::size_t comma = body.find(',', pos);
    std::string item = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    pos = comma == std::string::npos ? body.size() : comma + 1;
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    if (item.empty()) continue;
    std::size_t lb = item.find('['), rb = item.find(']'), eq = item.find('=');
    if (lb == std::string::npos || rb == std::string::npos || eq != rb + 1 || eq + 2 != item.size())
      throw std::invalid_argument("malformed pattern entry '" + item + "'");
    auto r = sig.index_of(item.substr(0, lb));
    if (!r) throw std::invalid_argument("unknown relation in '" + item + "'");
    std::string pat = item.substr(lb + 1, rb - lb - 1);
    if (pat.size() != sig[*r].arity) throw std::invalid_argument("pattern length mismatch in '" + item + "'");
    std::size_t p = 0;
    for (std::size_t j = 0; j < pat.size(); ++j) {
      if (pat[j] == 'x') p |= std::size_t{1} << j;
      else if (pat[j] != 'z') throw std::invalid_argument("pattern letters must be z or x: '" + item + "'");
    }
    char v = item[eq + 1];
    if (v != '0' && v != '1') throw std::invalid_argument("pattern value must be 0 or 1: '" + item + "'");
    std::size_t b = layout.offset(*r) + p;
    if (seen[b]) throw std::invalid_argument("pattern given twice: '" + item + "'");
    seen[b] = true;
    layout.set(t, *r, p, v == '1');
  }
  for (std::size_t b = 0; b < seen.size(); ++b) {
    if (!seen[b]) throw std::invalid_argument("extended type is missing patterns: " + text);
  }
  return t;
}

/// Extended type of element a relative to the z-element b0 in a structure.
inline ExtendedType ext_type_of_element(const FiniteStructure& m, const ExtLayout& layout,
                                        Element b0, Element a) {
  ExtendedType t;
  const Signature& sig = layout.signature();
  for (std::size_t r = 0; r < sig.size(); ++r) {
    for (std::size_t p = 0; p < layout.pattern_count(r); ++p) {
      Tuple tup(sig[r].arity);
      for (std::size_t j = 0; j < tup.size(); ++j) tup[j] = ((p >> j) & 1u) ? a : b0;
      layout.set(t, r, p, m.holds(r, tup));
    }
  }
  return t;
}

// }}}

/// State of the bounded game: the chosen pi0, the current type, and the counter.
struct GameState {
  OneType pi0;
  OneType current;
  std::size_t counter = 0;

  friend bool operator==(const GameState&, const GameState&) = default;
  friend auto operator<=>(const GameState&, const GameState&) = default;
};

}  // namespace ack
