#pragma once

// Seeded random sentences for property tests: at most two relation symbols
// (arity 1 or 2), at most two y-variables, at most six atoms, equality
// included.

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ackermann/syntax.hpp"

namespace ack::testing {

struct CorpusEntry {
  std::string text;
  PrenexSentence sentence;
};

class CorpusGenerator {
 public:
  explicit CorpusGenerator(std::uint64_t seed) : rng_(seed) {}

  CorpusEntry Next() {
    const std::size_t n = Pick(3);
    vars_ = {"z", "x"};
    for (std::size_t i = 1; i <= n; ++i) vars_.push_back("y" + std::to_string(i));
    // Two candidate symbols with independently chosen arities.
    rels_.clear();
    const char* names[] = {"P", "R"};
    for (const char* name : names) rels_.push_back({name, 1 + Pick(2)});
    std::string text = "exists z. forall x.";
    for (std::size_t i = 1; i <= n; ++i) text += " exists y" + std::to_string(i) + ".";
    text += " " + Formula(1 + Pick(6));
    return {text, parse(text)};
  }

  std::vector<CorpusEntry> Take(std::size_t count) {
    std::vector<CorpusEntry> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(Next());
    return out;
  }

 private:
  std::size_t Pick(std::size_t bound) { return std::uniform_int_distribution<std::size_t>(0, bound - 1)(rng_); }

  std::string Var() { return vars_[Pick(vars_.size())]; }

  std::string AtomText() {
    if (Pick(5) == 0) return "(" + Var() + " = " + Var() + ")";
    const auto& [name, arity] = rels_[Pick(rels_.size())];
    std::string s = name + "(";
    for (std::size_t j = 0; j < arity; ++j) s += (j ? "," : "") + Var();
    return s + ")";
  }

  std::string Formula(std::size_t leaves) {
    if (leaves == 1) return Pick(3) == 0 ? "~" + AtomText() : AtomText();
    const std::size_t left = 1 + Pick(leaves - 1);
    static const char* ops[] = {" & ", " | ", " -> ", " <-> "};
    std::string body = "(" + Formula(left) + ops[Pick(4)] + Formula(leaves - left) + ")";
    return Pick(5) == 0 ? "~" + body : body;
  }

  std::mt19937_64 rng_;
  std::vector<std::string> vars_;
  std::vector<std::pair<std::string, std::size_t>> rels_;
};

inline constexpr std::uint64_t kCorpusSeed = 20240611;
inline constexpr std::size_t kCorpusSize = 300;

inline std::vector<CorpusEntry> standard_corpus() { return CorpusGenerator(kCorpusSeed).Take(kCorpusSize); }

}  // namespace ack::testing
