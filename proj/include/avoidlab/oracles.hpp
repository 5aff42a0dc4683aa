// Copyright 2026 The avoidlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "avoidlab/bits.hpp"
#include "avoidlab/circuit.hpp"
#include "avoidlab/errors.hpp"

namespace avoidlab {

// ---------------------------------------------------------------------------
// Image enumeration
// ---------------------------------------------------------------------------

/*! \brief Image(C) with preimage counts.
 *
 * Entries are (lexicographic rank of y, |C^{-1}(y)|), sorted by rank.
 * Requires m <= 64 so that every y packs into a word.
 */
struct ImageProfile {
  unsigned n = 0;
  unsigned m = 0;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> entries;

  std::size_t size() const { return entries.size(); }

  std::uint64_t preimages(std::uint64_t rank) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), std::make_pair(rank, std::uint64_t{0}));
    return (it != entries.end() && it->first == rank) ? it->second : 0;
  }
  bool contains(std::uint64_t rank) const { return preimages(rank) != 0; }
  bool contains(const BitString &y) const { return y.size() == m && contains(y.to_lex_rank()); }
};

namespace detail {

inline bool table_bit(const std::vector<std::uint64_t> &t, std::uint64_t i) { return (t[i / 64] >> (i % 64)) & 1u; }

}  // namespace detail

inline ImageProfile image_profile(const Circuit &c, unsigned cap = kDefaultEnumerationCap) {
  if (c.num_outputs() > 64) throw CapacityError("image enumeration needs m <= 64");
  const auto tables = simulate_all(c, cap);
  const unsigned n = c.num_inputs(), m = c.num_outputs();
  const std::uint64_t domain = std::uint64_t{1} << n;
  std::vector<std::uint64_t> ranks(domain, 0);
  for (unsigned j = 0; j < m; ++j) {
    const auto &t = tables[j];
    const unsigned shift = m - 1 - j;
    for (std::uint64_t i = 0; i < domain; ++i) ranks[i] |= std::uint64_t{detail::table_bit(t, i)} << shift;
  }
  std::sort(ranks.begin(), ranks.end());
  ImageProfile out{n, m, {}};
  for (std::uint64_t i = 0; i < domain;) {
    std::uint64_t k = i;
    while (k < domain && ranks[k] == ranks[i]) ++k;
    out.entries.emplace_back(ranks[i], k - i);
    i = k;
  }
  return out;
}

/// True iff some x in {0,1}^n has C(x) = y. Decided by full enumeration.
inline bool image_contains(const Circuit &c, const BitString &y, unsigned cap = kDefaultEnumerationCap) {
  if (y.size() != c.num_outputs()) {
    throw DomainError("y has length " + std::to_string(y.size()) + ", circuit has " +
                      std::to_string(c.num_outputs()) + " outputs");
  }
  const auto tables = simulate_all(c, cap);
  const std::size_t words = tables.front().size();
  const std::uint64_t domain = std::uint64_t{1} << c.num_inputs();
  const std::uint64_t tail = domain >= 64 ? ~0ull : ((1ull << domain) - 1);
  for (std::size_t w = 0; w < words; ++w) {
    std::uint64_t match = (w + 1 == words) ? tail : ~0ull;
    for (unsigned j = 0; j < c.num_outputs() && match; ++j) match &= y[j] ? tables[j][w] : ~tables[j][w];
    if (match) return true;
  }
  return false;
}

/// Lexicographically smallest y (y1 most significant) outside Image(C).
inline BitString exact_avoid(const Circuit &c, unsigned cap = kDefaultEnumerationCap) {
  if (c.num_outputs() <= c.num_inputs()) {
    throw DomainError("not an Avoid instance: need m > n (m=" + std::to_string(c.num_outputs()) +
                      ", n=" + std::to_string(c.num_inputs()) + ")");
  }
  const auto image = image_profile(c, cap);
  std::uint64_t candidate = 0;
  for (const auto &[rank, count] : image.entries) {
    if (rank != candidate) break;
    ++candidate;
  }
  return BitString::from_lex_rank(candidate, c.num_outputs());
}

// ---------------------------------------------------------------------------
// MCSP
// ---------------------------------------------------------------------------

enum class Basis : std::uint8_t {
  AndOrNot,     ///< {AND, OR, NOT}
  AndOrNotXor,  ///< {AND, OR, NOT, XOR}
};

inline std::string_view basis_name(Basis b) { return b == Basis::AndOrNot ? "aon" : "xaon"; }

inline Basis parse_basis(std::string_view s) {
  if (s == "aon") return Basis::AndOrNot;
  if (s == "xaon") return Basis::AndOrNotXor;
  throw DomainError("unknown basis '" + std::string(s) + "' (expected aon or xaon)");
}

/// A finite slice of an oracle language B, usable as a single gate of cost 1.
struct OracleFun {
  unsigned arity = 0;
  TruthTable table;

  OracleFun(unsigned k, TruthTable t) : arity(k), table(std::move(t)) {
    if (k < 1) throw DomainError("oracle gate arity must be >= 1");
    if (table.num_vars() != k) throw DomainError("oracle table size does not match arity " + std::to_string(k));
  }
};

/// Parses lines of the form `oraclefun <k> <bits>`; '#' starts a comment.
inline std::vector<OracleFun> parse_oracle_funs(std::string_view text) {
  std::vector<OracleFun> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::string kw, bits, extra;
    long k = 0;
    if (!(fields >> kw)) continue;
    if (kw != "oraclefun" || !(fields >> k) || !(fields >> bits) || (fields >> extra) || k < 1 || k > 6) {
      throw DomainError("oracle file line " + std::to_string(line_no) + ": expected 'oraclefun <k> <bits>' with 1 <= k <= 6");
    }
    try {
      out.emplace_back(static_cast<unsigned>(k), TruthTable(static_cast<unsigned>(k), BitString::parse(bits)));
    } catch (const DomainError &e) {
      throw DomainError("oracle file line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

struct McspBudget {
  unsigned max_vars = 4;
  unsigned max_size = 6;
};

struct McspQuery {
  TruthTable tt;
  std::uint64_t s = 0;
  Basis basis = Basis::AndOrNotXor;
  std::vector<OracleFun> oracle_gates = {};
};

namespace detail {

using Word = std::uint64_t;

inline Word word_mask(unsigned n) { return (n >= 6) ? ~Word{0} : ((Word{1} << (Word{1} << n)) - 1); }

inline Word projection_word(unsigned n, unsigned j) {
  Word w = 0;
  for (Word i = 0; i < (Word{1} << n); ++i) {
    if ((i >> j) & 1u) w |= Word{1} << i;
  }
  return w;
}

inline Word apply_oracle_word(const OracleFun &f, unsigned n, const Word *args) {
  Word out = 0;
  for (Word i = 0; i < (Word{1} << n); ++i) {
    std::uint64_t idx = 0;
    for (unsigned a = 0; a < f.arity; ++a) idx |= ((args[a] >> i) & 1u) << a;
    if (f.table.at(idx)) out |= Word{1} << i;
  }
  return out;
}

struct WordVecHash {
  std::size_t operator()(const std::vector<Word> &v) const {
    std::size_t h = v.size();
    for (auto w : v) h ^= std::hash<Word>{}(w) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  }
};

/*! \brief Breadth-first search over sets of computed truth tables.
 *
 * Level k holds every set of k distinct non-free tables computable by a
 * k-gate circuit. Sets rather than gate sequences, so reorderings of the
 * same circuit collapse. Returns the least k <= limit at which the target
 * appears, or nullopt.
 */
inline std::optional<std::uint64_t> search_min_size(const TruthTable &tt, Basis basis,
                                                    const std::vector<OracleFun> &oracles, unsigned limit) {
  const unsigned n = tt.num_vars();
  const Word mask = word_mask(n);
  const Word target = tt.to_word();

  std::vector<Word> free_wires{0, mask};
  for (unsigned j = 0; j < n; ++j) free_wires.push_back(projection_word(n, j));
  auto is_free = [&](Word w) { return std::find(free_wires.begin(), free_wires.end(), w) != free_wires.end(); };
  if (is_free(target)) return 0;

  const bool with_xor = basis == Basis::AndOrNotXor;
  std::vector<std::vector<Word>> frontier{{}};
  std::vector<Word> wires;
  std::vector<Word> args(8);

  for (unsigned level = 1; level <= limit; ++level) {
    const bool last = level == limit;
    std::unordered_set<std::vector<Word>, WordVecHash> next;
    for (const auto &state : frontier) {
      // Binary basis gates never need a constant operand: the result is
      // free or a negation, which NOT already provides at the same cost.
      wires.assign(free_wires.begin() + 2, free_wires.end());
      wires.insert(wires.end(), state.begin(), state.end());

      bool found = false;
      auto visit = [&](Word v) {
        if (v == target) {
          found = true;
          return;
        }
        if (last || is_free(v) || std::find(state.begin(), state.end(), v) != state.end()) return;
        std::vector<Word> grown(state);
        grown.insert(std::upper_bound(grown.begin(), grown.end(), v), v);
        next.insert(std::move(grown));
      };

      for (std::size_t a = 0; a < wires.size() && !found; ++a) {
        visit(~wires[a] & mask);
        for (std::size_t b = a + 1; b < wires.size() && !found; ++b) {
          visit(wires[a] & wires[b]);
          visit(wires[a] | wires[b]);
          if (with_xor) visit(wires[a] ^ wires[b]);
        }
      }
      if (!found && !oracles.empty()) {
        std::vector<Word> all(free_wires.begin(), free_wires.end());
        all.insert(all.end(), state.begin(), state.end());
        for (const auto &f : oracles) {
          if (args.size() < f.arity) args.resize(f.arity);
          std::vector<std::size_t> pick(f.arity, 0);
          while (!found) {
            for (unsigned i = 0; i < f.arity; ++i) args[i] = all[pick[i]];
            visit(apply_oracle_word(f, n, args.data()));
            unsigned i = 0;
            while (i < f.arity && ++pick[i] == all.size()) pick[i++] = 0;
            if (i == f.arity) break;
          }
          if (found) break;
        }
      }
      if (found) return level;
    }
    if (last || next.empty()) break;
    frontier.assign(std::make_move_iterator(next.begin()), std::make_move_iterator(next.end()));
  }
  return std::nullopt;
}

/// Size of a Shannon-expansion circuit; an upper bound used when the exact search runs out of budget.
inline std::uint64_t shannon_upper_bound(Word f, unsigned vars, unsigned n, Basis basis) {
  const Word mask = word_mask(n);
  f &= mask;
  if (f == 0 || f == mask) return 0;
  for (unsigned j = 0; j < n; ++j) {
    if (f == projection_word(n, j)) return 0;
  }
  if (vars == 0) return 0;
  const unsigned v = vars - 1;
  // Cofactors lifted back to full tables that ignore x_v.
  Word f0 = 0, f1 = 0;
  for (Word i = 0; i < (Word{1} << n); ++i) {
    const Word lo = i & ~(Word{1} << v), hi = i | (Word{1} << v);
    if ((f >> lo) & 1u) f0 |= Word{1} << i;
    if ((f >> hi) & 1u) f1 |= Word{1} << i;
  }
  if (f0 == f1) return shannon_upper_bound(f0, v, n, basis);
  const std::uint64_t c0 = shannon_upper_bound(f0, v, n, basis);
  const std::uint64_t c1 = shannon_upper_bound(f1, v, n, basis);
  if (f0 == 0) return c1 + 1;
  if (f1 == mask) return c0 + 1;
  if (f1 == 0 || f0 == mask) return (f1 == 0 ? c0 : c1) + 2;
  if (basis == Basis::AndOrNotXor && f1 == (~f0 & mask)) return c0 + 1;
  return c0 + c1 + (basis == Basis::AndOrNotXor ? 3 : 4);
}

struct McspCacheEntry {
  std::optional<std::uint64_t> size;
};

class McspCache {
 public:
  std::optional<McspCacheEntry> get(const std::string &key) {
    std::lock_guard lock(mu_);
    auto it = map_.find(key);
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }
  void put(const std::string &key, McspCacheEntry e) {
    std::lock_guard lock(mu_);
    map_.emplace(key, e);
  }

 private:
  std::mutex mu_;
  std::unordered_map<std::string, McspCacheEntry> map_;
};

inline McspCache &mcsp_cache() {
  static McspCache cache;
  return cache;
}

inline std::string mcsp_key(const TruthTable &tt, Basis basis, const std::vector<OracleFun> &oracles, unsigned limit) {
  std::string key = tt.str();
  key += '|';
  key += basis_name(basis);
  key += '|' + std::to_string(limit);
  for (const auto &f : oracles) key += "|" + std::to_string(f.arity) + ":" + f.table.str();
  return key;
}

inline std::optional<std::uint64_t> cached_search(const TruthTable &tt, Basis basis,
                                                  const std::vector<OracleFun> &oracles, unsigned limit) {
  const auto key = mcsp_key(tt, basis, oracles, limit);
  if (auto hit = mcsp_cache().get(key)) return hit->size;
  const auto size = search_min_size(tt, basis, oracles, limit);
  mcsp_cache().put(key, {size});
  return size;
}

inline void check_mcsp_domain(const TruthTable &tt, const McspBudget &budget) {
  if (budget.max_vars > 6) throw DomainError("MCSP enumeration supports at most 6 variables");
  if (tt.num_vars() > budget.max_vars) {
    throw CapacityError("MCSP enumeration limited to n <= " + std::to_string(budget.max_vars) + " (got n=" +
                        std::to_string(tt.num_vars()) + ")");
  }
}

}  // namespace detail

/// Least gate count of a circuit over `basis` (plus unit-cost oracle gates) computing tt.
inline std::uint64_t min_circuit_size(const TruthTable &tt, Basis basis = Basis::AndOrNotXor,
                                      const std::vector<OracleFun> &oracle_gates = {}, McspBudget budget = {}) {
  detail::check_mcsp_domain(tt, budget);
  if (auto size = detail::cached_search(tt, basis, oracle_gates, budget.max_size)) return *size;
  const auto ub = detail::shannon_upper_bound(tt.to_word(), tt.num_vars(), tt.num_vars(), basis);
  throw CapacityError("no circuit with at most " + std::to_string(budget.max_size) +
                          " gates; best known upper bound is " + std::to_string(ub),
                      ub);
}

/// MCSP (or MCSP^B with oracle gates): does tt have a circuit of size at most s?
inline bool mcsp_decide(const McspQuery &q, McspBudget budget = {}) {
  detail::check_mcsp_domain(q.tt, budget);
  const std::uint64_t s = std::min<std::uint64_t>(q.s, std::uint64_t{1} << q.tt.num_vars());
  if (s <= budget.max_size) {
    return detail::cached_search(q.tt, q.basis, q.oracle_gates, static_cast<unsigned>(s)).has_value();
  }
  if (detail::cached_search(q.tt, q.basis, q.oracle_gates, budget.max_size)) return true;
  const auto ub = detail::shannon_upper_bound(q.tt.to_word(), q.tt.num_vars(), q.tt.num_vars(), q.basis);
  if (ub <= s) return true;
  throw CapacityError("cannot decide size bound " + std::to_string(s) + " beyond the enumeration budget of " +
                          std::to_string(budget.max_size) + " gates",
                      ub);
}

}  // namespace avoidlab
