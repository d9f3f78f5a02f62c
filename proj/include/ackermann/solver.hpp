#pragma once

// Deterministic decision procedures for exists z forall x exists y* psi.
//
//   gfp       greatest-fixpoint elimination over 1-types, one run per pi0
//   game      the counter-bounded acceptance game, memoized on (type, counter)
//   extended  elimination over z-relative extended types, with a separate
//             root witness for the z-element itself

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <future>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ackermann/errors.hpp"
#include "ackermann/syntax.hpp"
#include "ackermann/types.hpp"
#include "ackermann/witness.hpp"

namespace ack {

enum class Verdict { Sat, Unsat };
enum class Method { Gfp, Game, Extended };

inline const char* to_string(Verdict v) { return v == Verdict::Sat ? "SAT" : "UNSAT"; }

inline const char* to_string(Method m) {
  switch (m) {
    case Method::Gfp: return "gfp";
    case Method::Game: return "game";
    case Method::Extended: return "extended";
  }
  return "?";
}

inline std::optional<Method> method_from_string(const std::string& s) {
  if (s == "gfp") return Method::Gfp;
  if (s == "game") return Method::Game;
  if (s == "extended") return Method::Extended;
  return std::nullopt;
}

inline constexpr std::size_t kDefaultMaxGameDepth = (std::size_t{1} << 12) + 1;

struct SolveOptions {
  std::size_t jobs = 1;
  std::size_t max_game_depth = kDefaultMaxGameDepth;
  std::size_t arity_cap = kDefaultArityCap;
  std::size_t max_ext_states = kDefaultMaxExtStates;
  bool witness_cache = true;
  std::size_t max_witness_searches = kDefaultMaxWitnesses;  // per pi0
};

struct SolveStats {
  std::size_t witness_searches = 0;
  std::size_t cache_hits = 0;
  std::size_t types_total = 0;
  double elapsed_ms = 0;

  SolveStats& operator+=(const SolveStats& o) {
    witness_searches += o.witness_searches;
    cache_hits += o.cache_hits;
    return *this;
  }
};

/// Positional strategy for the existential player.
///
/// Plain certificates map each 1-type to the witness used for elements of that
/// type. Extended certificates map extended states instead. In both kinds
/// `root` is a witness with z and x merged, used for the z-element itself;
/// it is optional for plain certificates and mandatory for extended ones.
/// Strategies are restricted to the types reachable from pi0.
struct Certificate {
  bool extended = false;
  OneType pi0;
  std::optional<WitnessDescriptor> root;
  std::map<OneType, WitnessDescriptor> strategy;
  std::map<ExtendedType, WitnessDescriptor> ext_strategy;

  friend bool operator==(const Certificate&, const Certificate&) = default;
};

struct EliminationRound {
  std::size_t round = 0;
  std::vector<std::uint64_t> eliminated;  // OneType bits, or ExtendedType bits
};

struct EliminationTrace {
  OneType pi0;
  std::vector<EliminationRound> rounds;
  std::vector<std::uint64_t> final_set;
  bool root_failed = false;  // extended only: no merged witness for the z-element
};

struct Refutation {
  bool extended = false;
  std::vector<EliminationTrace> traces;
};

struct SolveOutcome {
  Verdict verdict = Verdict::Unsat;
  Method method = Method::Gfp;
  std::optional<OneType> pi0;
  std::optional<Certificate> certificate;
  std::optional<Refutation> refutation;
  SolveStats stats;
};

namespace detail {

struct Pi0Result {
  bool sat = false;
  EliminationTrace trace;
  std::optional<Certificate> certificate;
  SolveStats stats;
};

/// Runs `per_pi0` for every pi0 in canonical order and reports the first
/// satisfiable one. With jobs > 1, pi0s are processed in waves; results past
/// the first SAT are discarded so the outcome matches sequential order.
template <class PerPi0>
SolveOutcome Drive(const Signature& sig, Method method, std::size_t jobs, PerPi0&& per_pi0) {
  auto start = std::chrono::steady_clock::now();
  const auto types = enumerate_one_types(sig);
  std::vector<Pi0Result> results;
  std::optional<std::size_t> winner;
  const std::size_t wave = std::max<std::size_t>(1, jobs);
  for (std::size_t base = 0; base < types.size() && !winner; base += wave) {
    const std::size_t end = std::min(types.size(), base + wave);
    if (wave == 1) {
      results.push_back(per_pi0(types[base]));
    } else {
      std::vector<std::future<Pi0Result>> fs;
      for (std::size_t i = base; i < end; ++i)
        fs.push_back(std::async(std::launch::async, [&, t = types[i]] { return per_pi0(t); }));
      for (auto& f : fs) results.push_back(f.get());
    }
    for (std::size_t i = base; i < end; ++i) {
      if (results[i].sat) {
        winner = i;
        break;
      }
    }
  }
  SolveOutcome out;
  out.method = method;
  const std::size_t used = winner ? *winner + 1 : results.size();
  for (std::size_t i = 0; i < used; ++i) out.stats += results[i].stats;
  if (winner) {
    out.verdict = Verdict::Sat;
    out.pi0 = types[*winner];
    out.certificate = std::move(results[*winner].certificate);
  } else {
    out.verdict = Verdict::Unsat;
    Refutation ref;
    ref.extended = method == Method::Extended;
    for (auto& r : results) ref.traces.push_back(std::move(r.trace));
    out.refutation = std::move(ref);
  }
  out.stats.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

inline void CountSearch(SolveStats& st, std::size_t cap) {
  if (++st.witness_searches > cap)
    throw BudgetExceeded("witness searches exceeded the cap of " + std::to_string(cap), st.witness_searches - 1);
}

inline std::vector<std::uint64_t> Bits(const std::vector<OneType>& ts) {
  std::vector<std::uint64_t> out;
  for (OneType t : ts) out.push_back(t.bits);
  return out;
}

inline Pi0Result GfpForPi0(const WitnessSearch& search, const Signature& sig, OneType pi0, const SolveOptions& opt) {
  const bool use_cache = opt.witness_cache;
  Pi0Result res;
  res.trace.pi0 = pi0;
  const std::size_t count = type_count(sig);
  TypeSet alive = TypeSet::all(sig);
  std::vector<std::optional<WitnessDescriptor>> cache(count);

  auto cached_valid = [&](OneType t) {
    if (!use_cache || !cache[t.index()]) return false;
    for (OneType r : realized_types(*cache[t.index()])) {
      if (!alive.contains(r)) return false;
    }
    return true;
  };

  for (std::size_t round = 1;; ++round) {
    std::vector<OneType> eliminated;
    for (OneType t : alive.members()) {
      if (cached_valid(t)) {
        ++res.stats.cache_hits;
        continue;
      }
      CountSearch(res.stats, opt.max_witness_searches);
      cache[t.index()] = search.find({pi0, t, alive});
      if (!cache[t.index()]) eliminated.push_back(t);
    }
    if (eliminated.empty()) break;
    for (OneType t : eliminated) alive.erase(t);
    res.trace.rounds.push_back({round, Bits(eliminated)});
    if (!alive.contains(pi0)) break;
  }
  res.trace.final_set = Bits(alive.members());
  if (!alive.contains(pi0)) return res;

  // Every surviving type's cache entry is now its canonical witness under the
  // final set. Collect the part of the strategy reachable from pi0. Entries
  // prefer witnesses whose y-classes are all fresh, then (for pi0, which also
  // serves elements other than the z-element) ones separating z and x; the
  // staged construction can glue those without touching old tuples.
  Certificate cert;
  cert.pi0 = pi0;
  CountSearch(res.stats, opt.max_witness_searches);
  cert.root = search.find({pi0, pi0, alive}, XzMode::Merged);
  std::deque<OneType> queue{pi0};
  if (cert.root) {
    for (OneType t : realized_types(*cert.root)) queue.push_back(t);
  }
  while (!queue.empty()) {
    OneType t = queue.front();
    queue.pop_front();
    if (cert.strategy.count(t)) continue;
    CountSearch(res.stats, opt.max_witness_searches);
    std::optional<WitnessDescriptor> w = search.find({pi0, t, alive}, XzMode::Fresh);
    if (!w && t == pi0) {
      CountSearch(res.stats, opt.max_witness_searches);
      w = search.find({pi0, t, alive}, XzMode::Split);
    }
    if (!w) {
      if (!cache[t.index()]) {
        CountSearch(res.stats, opt.max_witness_searches);
        cache[t.index()] = search.find({pi0, t, alive});
      }
      w = cache[t.index()];
    }
    for (OneType r : realized_types(*w)) queue.push_back(r);
    cert.strategy.emplace(t, std::move(*w));
  }
  res.sat = true;
  res.certificate = std::move(cert);
  return res;
}

class GameSolver {
 public:
  GameSolver(const WitnessSearch& search, const Signature& sig, OneType pi0, std::size_t cap)
      : search_(search), pi0_(pi0), cap_(cap), count_(type_count(sig)), depth_(count_ + 1),
        levels_(depth_ + 1), memo_(depth_ + 1, std::vector<std::int8_t>(count_, -1)) {}

  Pi0Result Run() {
    Pi0Result res;
    res.trace.pi0 = pi0_;
    res.sat = Accepts(pi0_, 0);
    res.stats = stats_;
    if (!res.sat) {
      // Types rejected at the root level, as the game's analogue of a trace.
      const TypeSet& top = Level(0);
      std::vector<std::uint64_t> rejected, accepted;
      for (std::size_t i = 0; i < count_; ++i) {
        OneType t{static_cast<std::uint32_t>(i)};
        (top.contains(t) ? accepted : rejected).push_back(t.bits);
      }
      res.trace.rounds.push_back({depth_, rejected});
      res.trace.final_set = accepted;
    }
    return res;
  }

 private:
  // Acc(pi, c): accept once the counter reaches 2^|sigma| + 1; otherwise some
  // witness for (pi0, pi) must exist whose realized types all accept at c + 1.
  bool Accepts(OneType t, std::size_t c) {
    if (c == depth_) return true;
    std::int8_t& m = memo_[c][t.index()];
    if (m >= 0) {
      ++stats_.cache_hits;
      return m == 1;
    }
    const TypeSet& next = Level(c + 1);
    bool ok = false;
    if (next.contains(pi0_) && next.contains(t)) {
      CountSearch(stats_, cap_);
      ok = search_.find({pi0_, t, next}).has_value();
    }
    m = ok ? 1 : 0;
    return ok;
  }

  const TypeSet& Level(std::size_t c) {
    if (!levels_[c]) {
      TypeSet s(count_);
      for (std::size_t i = 0; i < count_; ++i) {
        OneType t{static_cast<std::uint32_t>(i)};
        if (Accepts(t, c)) s.insert(t);
      }
      levels_[c] = std::move(s);
    }
    return *levels_[c];
  }

  const WitnessSearch& search_;
  OneType pi0_;
  std::size_t cap_;
  std::size_t count_;
  std::size_t depth_;
  std::vector<std::optional<TypeSet>> levels_;
  std::vector<std::vector<std::int8_t>> memo_;
  SolveStats stats_;
};

inline Pi0Result ExtendedForPi0(const WitnessSearch& search, const ExtLayout& layout, OneType pi0,
                                const SolveOptions& opt) {
  Pi0Result res;
  res.trace.pi0 = pi0;
  const auto states = layout.states_for(pi0, opt.max_ext_states);
  std::set<ExtendedType> alive(states.begin(), states.end());
  std::map<ExtendedType, std::optional<WitnessDescriptor>> cache;

  auto cached_valid = [&](ExtendedType t) {
    if (!opt.witness_cache) return false;
    auto it = cache.find(t);
    if (it == cache.end() || !it->second) return false;
    for (ExtendedType r : ext_obligations(*it->second)) {
      if (!alive.count(r)) return false;
    }
    return true;
  };

  for (std::size_t round = 1;; ++round) {
    std::vector<std::uint64_t> eliminated;
    for (ExtendedType t : alive) {
      if (cached_valid(t)) {
        ++res.stats.cache_hits;
        continue;
      }
      CountSearch(res.stats, opt.max_witness_searches);
      auto w = search.find_ext({pi0, t, alive}, XzMode::Split);
      if (!w) eliminated.push_back(t.bits);
      cache[t] = std::move(w);
    }
    if (eliminated.empty()) break;
    for (auto b : eliminated) alive.erase(ExtendedType{b});
    res.trace.rounds.push_back({round, eliminated});
  }
  for (ExtendedType t : alive) res.trace.final_set.push_back(t.bits);

  CountSearch(res.stats, opt.max_witness_searches);
  auto root = search.find_ext({pi0, initial_extended_type(layout, pi0), alive}, XzMode::Merged);
  if (!root) {
    res.trace.root_failed = true;
    return res;
  }
  Certificate cert;
  cert.extended = true;
  cert.pi0 = pi0;
  std::deque<ExtendedType> queue;
  for (ExtendedType t : ext_obligations(*root)) queue.push_back(t);
  cert.root = std::move(root);
  while (!queue.empty()) {
    ExtendedType t = queue.front();
    queue.pop_front();
    if (cert.ext_strategy.count(t)) continue;
    const WitnessDescriptor& w = *cache.at(t);
    for (ExtendedType r : ext_obligations(w)) queue.push_back(r);
    cert.ext_strategy.emplace(t, w);
  }
  res.sat = true;
  res.certificate = std::move(cert);
  return res;
}

}  // namespace detail

/// Greatest-fixpoint elimination: for each pi0, repeatedly drop types with no
/// witness whose realized types all survive. SAT on the first pi0 that
/// survives; the certificate is the strategy restricted to reachable types.
inline SolveOutcome gfp_solve(const PrenexSentence& s, const SolveOptions& opt = {}) {
  WitnessSearch search(s);
  auto out = detail::Drive(s.signature, Method::Gfp, opt.jobs, [&](OneType pi0) {
    return detail::GfpForPi0(search, s.signature, pi0, opt);
  });
  out.stats.types_total = type_count(s.signature);
  return out;
}

/// The acceptance game with an explicit counter bound of 2^|sigma| + 1.
inline SolveOutcome bounded_game_solve(const PrenexSentence& s, const SolveOptions& opt = {}) {
  const std::size_t depth = type_count(s.signature) + 1;
  if (depth > opt.max_game_depth)
    throw BudgetExceeded("game depth 2^|sigma|+1 = " + std::to_string(depth) + " exceeds the cap of " +
                             std::to_string(opt.max_game_depth),
                         depth);
  WitnessSearch search(s);
  auto out = detail::Drive(s.signature, Method::Game, opt.jobs, [&](OneType pi0) {
    return detail::GameSolver(search, s.signature, pi0, opt.max_witness_searches).Run();
  });
  out.stats.types_total = type_count(s.signature);
  return out;
}

/// Elimination over extended types. Non-z elements need witnesses that keep z
/// and x apart; the z-element needs a merged root witness over the surviving
/// states.
inline SolveOutcome extended_solve(const PrenexSentence& s, const SolveOptions& opt = {}) {
  ExtLayout layout(s.signature, opt.arity_cap);
  // Surface cap violations before spawning workers.
  layout.states_for(OneType{}, opt.max_ext_states);
  WitnessSearch search(s, layout);
  auto out = detail::Drive(s.signature, Method::Extended, opt.jobs, [&](OneType pi0) {
    return detail::ExtendedForPi0(search, layout, pi0, opt);
  });
  out.stats.types_total = layout.states_per_pi0();
  return out;
}

inline SolveOutcome solve(const PrenexSentence& s, Method method = Method::Gfp, const SolveOptions& opt = {}) {
  switch (method) {
    case Method::Gfp: return gfp_solve(s, opt);
    case Method::Game: return bounded_game_solve(s, opt);
    case Method::Extended: return extended_solve(s, opt);
  }
  return gfp_solve(s, opt);
}

/// Independent check of a certificate: every entry is re-verified with the
/// descriptor checker against allowed = keys(strategy), which is exactly the
/// closure condition.
inline std::vector<Violation> check_certificate(const PrenexSentence& s, const Certificate& cert,
                                                std::size_t arity_cap = kDefaultArityCap) {
  std::vector<Violation> out;
  auto tag = [&](const std::string& where, std::vector<Violation> vs) {
    for (auto& v : vs) {
      if (v.code == "allowed") v.code = "closure";
      out.push_back({v.code, where + ": " + v.detail});
    }
  };
  if (cert.pi0.index() >= type_count(s.signature)) {
    out.push_back({"pi0", "pi0 is not a type over the signature"});
    return out;
  }
  if (!cert.extended) {
    if (!cert.ext_strategy.empty()) out.push_back({"kind", "plain certificate carries extended entries"});
    if (!cert.strategy.count(cert.pi0)) out.push_back({"pi0", "pi0 has no strategy entry"});
    TypeSet keys(type_count(s.signature));
    for (const auto& [t, d] : cert.strategy) {
      if (t.index() >= keys.universe()) {
        out.push_back({"pi0", "strategy key is not a type over the signature"});
        return out;
      }
      keys.insert(t);
    }
    for (const auto& [t, d] : cert.strategy) {
      const std::string where = "strategy " + render(t, s.signature);
      if (d.extended()) out.push_back({"kind", where + ": extended descriptor in a plain certificate"});
      tag(where, check_descriptor(s, d, {cert.pi0, t, keys}));
    }
    if (cert.root) tag("root", check_descriptor(s, *cert.root, {cert.pi0, cert.pi0, keys}, XzMode::Merged));
    return out;
  }

  ExtLayout layout(s.signature, arity_cap);
  if (!cert.strategy.empty()) out.push_back({"kind", "extended certificate carries plain entries"});
  std::set<ExtendedType> keys;
  for (const auto& [t, d] : cert.ext_strategy) keys.insert(t);
  for (const auto& [t, d] : cert.ext_strategy) {
    const std::string where = "strategy " + render(t, layout);
    if (layout.z_projection(t) != cert.pi0) out.push_back({"pi0", where + ": state disagrees with pi0 on z"});
    tag(where, check_ext_descriptor(s, layout, d, {cert.pi0, t, keys}, XzMode::Split));
  }
  if (!cert.root) {
    out.push_back({"root", "extended certificate has no root witness"});
  } else {
    tag("root", check_ext_descriptor(s, layout, *cert.root,
                                     {cert.pi0, initial_extended_type(layout, cert.pi0), keys},
                                     XzMode::Merged));
  }
  return out;
}

}  // namespace ack
