#pragma once

// Differential harness: every solving method plus the brute-force oracle on
// one sentence, with the verdicts classified.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ackermann/oracle.hpp"
#include "ackermann/solver.hpp"

namespace ack {

enum class DiffClass {
  Agree,                // all methods agree, and the oracle does not contradict them
  DocumentedDivergence, // gfp = game = SAT, extended = UNSAT, no oracle model
  HardDisagreement,
};

inline const char* to_string(DiffClass c) {
  switch (c) {
    case DiffClass::Agree: return "agree";
    case DiffClass::DocumentedDivergence: return "documented-divergence";
    case DiffClass::HardDisagreement: return "hard-disagreement";
  }
  return "?";
}

struct DiffReport {
  Verdict gfp = Verdict::Unsat;
  Verdict game = Verdict::Unsat;
  Verdict extended = Verdict::Unsat;
  std::size_t max_size = 0;
  std::optional<std::size_t> oracle_model_size;
  std::size_t oracle_enumerated = 0;
  DiffClass classification = DiffClass::Agree;
  std::vector<std::string> notes;

  int exit_code() const { return classification == DiffClass::HardDisagreement ? 4 : 0; }
};

/// Pure classification so the decision table can be tested on its own.
inline DiffReport classify(Verdict gfp, Verdict game, Verdict extended, std::size_t max_size,
                           std::optional<std::size_t> oracle_model_size) {
  DiffReport r;
  r.gfp = gfp;
  r.game = game;
  r.extended = extended;
  r.max_size = max_size;
  r.oracle_model_size = oracle_model_size;
  const bool model = oracle_model_size.has_value();
  bool hard = false;
  if (gfp != game) {
    hard = true;
    r.notes.push_back("gfp and game disagree");
  }
  if (model) {
    for (auto [name, v] : {std::pair{"gfp", gfp}, {"game", game}, {"extended", extended}}) {
      if (v == Verdict::Unsat) {
        hard = true;
        r.notes.push_back(std::string(name) + " says UNSAT but the oracle found a model of size " +
                          std::to_string(*oracle_model_size));
      }
    }
  }
  // The extended method only rejects more than gfp, never less.
  if (extended == Verdict::Sat && gfp == Verdict::Unsat) {
    hard = true;
    r.notes.push_back("extended says SAT where gfp says UNSAT");
  }
  if (hard) {
    r.classification = DiffClass::HardDisagreement;
    return r;
  }
  if (gfp == Verdict::Sat && extended == Verdict::Unsat) {
    r.classification = DiffClass::DocumentedDivergence;
    r.notes.push_back("warning: gfp and game accept while extended rejects; no model of size <= " +
                      std::to_string(max_size) + " exists");
    return r;
  }
  r.classification = DiffClass::Agree;
  if (gfp == Verdict::Sat && !model)
    r.notes.push_back("oracle inconclusive: no model of size <= " + std::to_string(max_size));
  if (gfp == Verdict::Unsat)
    r.notes.push_back("oracle agrees: no model of size <= " + std::to_string(max_size));
  return r;
}

inline DiffReport run_diff(const PrenexSentence& s, std::size_t max_size, const SolveOptions& opt = {},
                           std::size_t max_structures = kDefaultMaxStructures) {
  const Verdict g = gfp_solve(s, opt).verdict;
  const Verdict gm = bounded_game_solve(s, opt).verdict;
  const Verdict e = extended_solve(s, opt).verdict;
  BruteForceResult bf = brute_force_search(s, max_size, max_structures, opt.jobs);
  std::optional<std::size_t> size;
  if (bf.model) size = bf.model->size();
  DiffReport r = classify(g, gm, e, max_size, size);
  r.oracle_enumerated = bf.enumerated;
  return r;
}

}  // namespace ack
