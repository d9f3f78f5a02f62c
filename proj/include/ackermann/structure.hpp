#pragma once

#include <cstddef>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ackermann/syntax.hpp"

namespace ack {

using Element = std::size_t;
using Tuple = std::vector<Element>;

inline constexpr Element kUnbound = std::numeric_limits<Element>::max();

/// Explicit finite model over a signature: universe {0, ..., size-1} and one
/// tuple set per relation symbol (signature order).
class FiniteStructure {
 public:
  FiniteStructure() = default;
  FiniteStructure(Signature sig, std::size_t size)
      : sig_(std::move(sig)), size_(size), extents_(sig_.size()) {}

  const Signature& signature() const { return sig_; }
  std::size_t size() const { return size_; }

  bool holds(std::size_t rel, const Tuple& t) const { return extents_[rel].count(t) != 0; }

  void set(std::size_t rel, const Tuple& t, bool value) {
    if (t.size() != sig_[rel].arity)
      throw std::invalid_argument("tuple length does not match arity of " + sig_[rel].name);
    for (Element e : t) {
      if (e >= size_) throw std::out_of_range("element " + std::to_string(e) + " outside universe");
    }
    if (value) {
      extents_[rel].insert(t);
    } else {
      extents_[rel].erase(t);
    }
  }

  const std::set<Tuple>& extent(std::size_t rel) const { return extents_[rel]; }

  /// Adds fresh elements; existing extents are untouched.
  void grow(std::size_t new_size) {
    if (new_size < size_) throw std::invalid_argument("grow() cannot shrink a structure");
    size_ = new_size;
  }

  /// Induced substructure on {0, ..., k-1}.
  FiniteStructure restrict_to(std::size_t k) const {
    FiniteStructure out(sig_, k);
    for (std::size_t r = 0; r < extents_.size(); ++r) {
      for (const Tuple& t : extents_[r]) {
        bool inside = true;
        for (Element e : t) inside = inside && e < k;
        if (inside) out.extents_[r].insert(t);
      }
    }
    return out;
  }

  friend bool operator==(const FiniteStructure&, const FiniteStructure&) = default;

 private:
  Signature sig_;
  std::size_t size_ = 0;
  std::vector<std::set<Tuple>> extents_;
};

/// Truth of the matrix under `assignment` (indexed by prefix variable).
inline bool eval_qf(const FiniteStructure& m, const std::vector<Element>& assignment,
                    const PrenexSentence& s) {
  auto lookup = [&](std::size_t v) {
    if (v >= assignment.size() || assignment[v] == kUnbound)
      throw std::out_of_range("variable '" + s.variable_name(v) + "' is unbound");
    if (assignment[v] >= m.size())
      throw std::out_of_range("variable '" + s.variable_name(v) + "' mapped outside the universe");
    return assignment[v];
  };
  return s.matrix.evaluate([&](std::size_t atom_id) {
    const Atom& a = s.matrix.atoms()[atom_id];
    if (a.is_equality) return lookup(a.args[0]) == lookup(a.args[1]);
    Tuple t;
    t.reserve(a.args.size());
    for (std::size_t v : a.args) t.push_back(lookup(v));
    return m.holds(a.rel, t);
  });
}

/// exists z forall x exists y1..yn psi, by direct enumeration.
inline bool eval_sentence(const FiniteStructure& m, const PrenexSentence& s) {
  if (m.size() == 0) throw std::invalid_argument("eval_sentence: empty universe");
  const std::size_t k = m.size();
  const std::size_t n = s.n();
  std::vector<Element> a(n + 2, 0);
  for (Element z = 0; z < k; ++z) {
    a[kVarZ] = z;
    bool all_x = true;
    for (Element x = 0; x < k && all_x; ++x) {
      a[kVarX] = x;
      std::fill(a.begin() + 2, a.end(), 0);
      bool found = false;
      for (;;) {
        if (eval_qf(m, a, s)) {
          found = true;
          break;
        }
        std::size_t i = 2;
        while (i < n + 2 && ++a[i] == k) a[i++] = 0;
        if (i == n + 2) break;
      }
      all_x = found;
    }
    if (all_x) return true;
  }
  return false;
}

/// Same semantics as eval_sentence, computed by tabulating, for every (z, x),
/// whether some y-tuple satisfies the matrix in one pass over all assignments.
inline bool eval_sentence_tabled(const FiniteStructure& m, const PrenexSentence& s) {
  if (m.size() == 0) throw std::invalid_argument("eval_sentence: empty universe");
  const std::size_t k = m.size();
  const std::size_t vars = s.variable_count();
  std::vector<char> table(k * k, 0);
  std::vector<Element> a(vars, 0);
  for (;;) {
    char& cell = table[a[kVarZ] * k + a[kVarX]];
    if (!cell && eval_qf(m, a, s)) cell = 1;
    std::size_t i = vars;
    while (i > 0 && ++a[i - 1] == k) a[--i] = 0;
    if (i == 0) break;
  }
  for (Element z = 0; z < k; ++z) {
    bool ok = true;
    for (Element x = 0; x < k && ok; ++x) ok = table[z * k + x] != 0;
    if (ok) return true;
  }
  return false;
}

}  // namespace ack
