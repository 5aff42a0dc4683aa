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
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "avoidlab/bits.hpp"
#include "avoidlab/circuit.hpp"
#include "avoidlab/errors.hpp"
#include "avoidlab/inverters.hpp"
#include "avoidlab/oracles.hpp"
#include "avoidlab/random.hpp"

namespace avoidlab {

struct AvoidParams {
  double epsilon = 0.1;  ///< per-call inverter error target
  std::uint64_t t = 1;   ///< loop count
  std::uint64_t seed = 0;

  void validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0,1)");
    if (t < 1) throw DomainError("t must be >= 1");
  }
};

struct AvoidIteration {
  BitString y;
  bool inverted = false;

  friend bool operator==(const AvoidIteration &, const AvoidIteration &) = default;
};

struct AvoidResult {
  std::optional<BitString> found;  ///< nullopt is the give-up answer
  std::uint64_t iterations_used = 0;
  std::vector<AvoidIteration> transcript;

  bool is_bottom() const { return !found.has_value(); }

  /// "FOUND <bits>" or "BOTTOM".
  std::string headline() const { return found ? "FOUND " + found->str() : std::string("BOTTOM"); }

  /// One "ITER <i> y=<bits> inverted=<0|1>" line per iteration.
  std::string transcript_text() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < transcript.size(); ++i) {
      out << "ITER " << (i + 1) << " y=" << transcript[i].y.str() << " inverted=" << (transcript[i].inverted ? 1 : 0)
          << "\n";
    }
    return out.str();
  }

  friend bool operator==(const AvoidResult &, const AvoidResult &) = default;
};

namespace detail {
inline constexpr std::uint64_t kPlanStream = 0x706c616eull;
}

/*! \brief The randomized Avoid solver.
 *
 * Up to t times: draw y uniformly from {0,1}^m and ask the inverter for a
 * preimage. The first y the inverter fails on is returned. If every draw
 * is inverted the answer is bottom.
 *
 * y-draws and inverter randomness come from disjoint sub-streams of
 * params.seed, indexed by iteration.
 */
inline AvoidResult solve_avoid(const Circuit &c, const AvoidParams &params, const InverterSpec &spec) {
  params.validate();
  if (c.num_outputs() <= c.num_inputs()) {
    throw DomainError("not an Avoid instance: need m > n (m=" + std::to_string(c.num_outputs()) +
                      ", n=" + std::to_string(c.num_inputs()) + ")");
  }
  const InverterSpec resolved =
      resolve_amplifier(spec, c, params.epsilon, derive_seed(params.seed, {detail::kPlanStream}));
  AvoidResult result;
  for (std::uint64_t i = 0; i < params.t; ++i) {
    Rng y_rng(derive_seed(params.seed, {i, 0}));
    auto y = detail::random_bits(y_rng, c.num_outputs());
    const auto out = invert(resolved, c, y, params.epsilon, derive_seed(params.seed, {i, 1}));
    result.transcript.push_back({y, out.success});
    result.iterations_used = i + 1;
    if (!out.success) {
      result.found = std::move(y);
      return result;
    }
  }
  return result;
}

struct AvoidMode {
  enum class Kind : std::uint8_t { Theorem, Corollary };
  Kind kind = Kind::Theorem;
  std::uint64_t queries = 0;  ///< p(n), corollary mode only

  static AvoidMode theorem() { return {}; }
  static AvoidMode corollary(std::uint64_t p_of_n) {
    if (p_of_n < 1) throw DomainError("corollary mode needs p(n) >= 1");
    return {Kind::Corollary, p_of_n};
  }

  /// "theorem" or "corollary:P".
  static AvoidMode parse(std::string_view s) {
    if (s == "theorem") return theorem();
    constexpr std::string_view prefix = "corollary:";
    if (s.substr(0, prefix.size()) == prefix) {
      const auto digits = s.substr(prefix.size());
      std::uint64_t p = 0;
      bool ok = !digits.empty();
      for (char ch : digits) {
        if (ch < '0' || ch > '9' || p > UINT64_MAX / 10) {
          ok = false;
          break;
        }
        p = p * 10 + static_cast<std::uint64_t>(ch - '0');
      }
      if (ok) return corollary(p);
    }
    throw DomainError("invalid mode '" + std::string(s) + "' (expected theorem or corollary:P)");
  }

  std::string str() const { return kind == Kind::Theorem ? "theorem" : "corollary:" + std::to_string(queries); }
};

/*! \brief Parameters from a total error target epsilon'.
 *
 * theorem:      t = n, epsilon = epsilon' / (2n), so epsilon*t + 2^-t <= epsilon'
 *               whenever 2^-n <= epsilon'/2.
 * corollary(p): t = n, epsilon = 1 / (8 p), enough for p queries to all be
 *               answered correctly with probability >= 7/8.
 */
inline AvoidParams choose_params(double epsilon_prime, unsigned n, AvoidMode mode = AvoidMode::theorem(),
                                 std::uint64_t seed = 0) {
  if (!(epsilon_prime > 0.0 && epsilon_prime < 1.0)) throw DomainError("epsilon' must lie in (0,1)");
  if (n < 1) throw DomainError("n must be >= 1");
  AvoidParams p;
  p.t = n;
  p.seed = seed;
  if (mode.kind == AvoidMode::Kind::Theorem) {
    p.epsilon = epsilon_prime / (2.0 * n);
  } else {
    if (mode.queries < 1) throw DomainError("corollary mode needs p(n) >= 1");
    p.epsilon = 1.0 / (8.0 * static_cast<double>(mode.queries));
  }
  return p;
}

/// epsilon * t + 2^-t.
inline double theorem_error_bound(double per_call_miss, std::uint64_t t) {
  return per_call_miss * static_cast<double>(t) + std::ldexp(1.0, -static_cast<int>(std::min<std::uint64_t>(t, 1074)));
}

struct TrivialSample {
  BitString y;
  bool valid = false;  ///< y outside Image(C), checked by enumeration
};

/// One uniform draw from {0,1}^m. The validity flag uses the exact image oracle and is for experiments only.
inline TrivialSample trivial_sample(const Circuit &c, std::uint64_t seed) {
  if (c.num_outputs() <= c.num_inputs()) throw DomainError("not an Avoid instance: need m > n");
  Rng rng(derive_seed(seed, {0x7472697669616cull}));
  TrivialSample s;
  s.y = detail::random_bits(rng, c.num_outputs());
  s.valid = !image_contains(c, s.y);
  return s;
}

}  // namespace avoidlab
