#pragma once

// Brute-force finite model search: the independent oracle for "a model of
// size <= k exists".

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "ackermann/errors.hpp"
#include "ackermann/structure.hpp"
#include "ackermann/syntax.hpp"

namespace ack {

inline constexpr std::size_t kDefaultMaxStructures = 10'000'000;

struct BruteForceResult {
  std::optional<FiniteStructure> model;
  std::size_t enumerated = 0;  // structures visited, up to and including the model
};

namespace detail {

/// Structures of one size encoded as a bit mask: bit offset(R) + index(t) is
/// R(t), with tuples indexed lexicographically (first position most
/// significant) and relations in signature order.
class MaskSpace {
 public:
  MaskSpace(const PrenexSentence& s, std::size_t k) : s_(s), k_(k) {
    // Saturate well above 64 so oversized spaces are reported, not wrapped.
    constexpr std::size_t kSat = std::size_t{1} << 40;
    std::size_t off = 0;
    for (const auto& r : s.signature) {
      offsets_.push_back(off);
      std::size_t count = 1;
      for (std::size_t j = 0; j < r.arity; ++j) count = std::min(count * k, kSat);
      off = std::min(off + count, kSat);
    }
    bits_ = off;
    for (const Atom& a : s.matrix.atoms()) {
      std::vector<std::size_t> w(a.args.size(), 1);
      for (std::size_t j = a.args.size(); j-- > 1;) w[j - 1] = w[j] * k;
      weights_.push_back(std::move(w));
    }
  }

  std::size_t bits() const { return bits_; }

  bool Satisfies(std::uint64_t mask) const {
    const std::size_t vars = s_.variable_count();
    std::vector<Element> a(vars, 0);
    auto holds = [&](std::size_t id) {
      const Atom& at = s_.matrix.atoms()[id];
      if (at.is_equality) return a[at.args[0]] == a[at.args[1]];
      std::size_t idx = offsets_[at.rel];
      for (std::size_t j = 0; j < at.args.size(); ++j) idx += a[at.args[j]] * weights_[id][j];
      return ((mask >> idx) & 1u) != 0;
    };
    for (Element z = 0; z < k_; ++z) {
      a[kVarZ] = z;
      bool all_x = true;
      for (Element x = 0; x < k_ && all_x; ++x) {
        a[kVarX] = x;
        std::fill(a.begin() + 2, a.end(), 0);
        bool found = false;
        for (;;) {
          if (s_.matrix.evaluate(holds)) {
            found = true;
            break;
          }
          std::size_t i = 2;
          while (i < vars && ++a[i] == k_) a[i++] = 0;
          if (i == vars) break;
        }
        all_x = found;
      }
      if (all_x) return true;
    }
    return false;
  }

  FiniteStructure Decode(std::uint64_t mask) const {
    FiniteStructure m(s_.signature, k_);
    for (std::size_t r = 0; r < s_.signature.size(); ++r) {
      const std::size_t arity = s_.signature[r].arity;
      Tuple t(arity, 0);
      for (std::size_t idx = 0;; ++idx) {
        if ((mask >> (offsets_[r] + idx)) & 1u) m.set(r, t, true);
        std::size_t j = arity;
        while (j > 0 && ++t[j - 1] == k_) t[--j] = 0;
        if (j == 0) break;
      }
    }
    return m;
  }

 private:
  const PrenexSentence& s_;
  std::size_t k_;
  std::vector<std::size_t> offsets_;
  std::vector<std::vector<std::size_t>> weights_;
  std::size_t bits_ = 0;
};

}  // namespace detail

/// Enumerates every structure of size 1..max_size in canonical order (by size,
/// then binary counting over the tuple mask) and returns the first model.
/// Before each size, the whole size class must fit in the remaining budget.
inline BruteForceResult brute_force_search(const PrenexSentence& s, std::size_t max_size,
                                           std::size_t max_structures = kDefaultMaxStructures,
                                           std::size_t jobs = 1) {
  if (max_size == 0) throw std::invalid_argument("brute_force_search: max_size must be at least 1");
  BruteForceResult res;
  for (std::size_t k = 1; k <= max_size; ++k) {
    detail::MaskSpace space(s, k);
    if (space.bits() > 62 || (std::uint64_t{1} << space.bits()) > max_structures - std::min(max_structures, res.enumerated))
      throw BudgetExceeded("brute force: structures of size " + std::to_string(k) + " exceed the budget of " +
                               std::to_string(max_structures),
                           res.enumerated);
    const std::uint64_t total = std::uint64_t{1} << space.bits();
    std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
    if (jobs <= 1) {
      for (std::uint64_t m = 0; m < total; ++m) {
        if (space.Satisfies(m)) {
          best = m;
          break;
        }
      }
    } else {
      // Chunks are claimed in increasing order; a worker stops once its chunk
      // starts past the best model found so far, so the minimum is exact.
      const std::uint64_t chunk = std::max<std::uint64_t>(1, total / (jobs * 16));
      std::atomic<std::uint64_t> next_chunk{0};
      std::atomic<std::uint64_t> best_atomic{best};
      std::vector<std::thread> workers;
      for (std::size_t w = 0; w < jobs; ++w) {
        workers.emplace_back([&] {
          for (;;) {
            std::uint64_t begin = next_chunk.fetch_add(chunk);
            if (begin >= total || begin > best_atomic.load()) return;
            std::uint64_t end = std::min(total, begin + chunk);
            for (std::uint64_t m = begin; m < end; ++m) {
              if (m > best_atomic.load()) break;
              if (space.Satisfies(m)) {
                std::uint64_t cur = best_atomic.load();
                while (m < cur && !best_atomic.compare_exchange_weak(cur, m)) {
                }
                break;
              }
            }
          }
        });
      }
      for (auto& t : workers) t.join();
      best = best_atomic.load();
    }
    if (best != std::numeric_limits<std::uint64_t>::max()) {
      res.enumerated += static_cast<std::size_t>(best) + 1;
      res.model = space.Decode(best);
      if (!eval_sentence(*res.model, s))
        throw std::logic_error("brute force: decoded model fails eval_sentence");
      return res;
    }
    res.enumerated += static_cast<std::size_t>(total);
  }
  return res;
}

}  // namespace ack
