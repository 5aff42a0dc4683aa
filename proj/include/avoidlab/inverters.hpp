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
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "avoidlab/bits.hpp"
#include "avoidlab/circuit.hpp"
#include "avoidlab/errors.hpp"
#include "avoidlab/oracles.hpp"
#include "avoidlab/random.hpp"

namespace avoidlab {

enum class InverterKind : std::uint8_t { Perfect, Bounded, Lex, Amplified };

/*! \brief Which inversion strategy to run.
 *
 * perfect     exhaustive preimage search
 * bounded(r)  r uniform probes (with replacement) drawn from tau
 * lex(r)      the first r inputs in lexicographic order; ignores tau
 * amplified   direct-product amplification around one of the above
 *
 * Unset t_rep / attempts on an amplified spec mean "use the defaults for
 * this circuit and epsilon", see resolve_amplifier().
 */
struct InverterSpec {
  InverterKind kind = InverterKind::Perfect;
  std::uint64_t probes = 1;
  InverterKind inner_kind = InverterKind::Perfect;
  std::uint64_t inner_probes = 1;
  std::optional<unsigned> t_rep;
  std::optional<std::uint64_t> attempts;

  static InverterSpec perfect() { return {}; }
  static InverterSpec bounded(std::uint64_t r) { return checked(of(InverterKind::Bounded, r)); }
  static InverterSpec lex(std::uint64_t r) { return checked(of(InverterKind::Lex, r)); }
  static InverterSpec amplified(const InverterSpec &inner, std::optional<unsigned> t_rep = std::nullopt,
                                std::optional<std::uint64_t> attempts = std::nullopt) {
    if (inner.kind == InverterKind::Amplified) throw DomainError("amplified inverters cannot be nested");
    InverterSpec s;
    s.kind = InverterKind::Amplified;
    s.inner_kind = inner.kind;
    s.inner_probes = inner.probes;
    s.t_rep = t_rep;
    s.attempts = attempts;
    return checked(s);
  }

  InverterSpec inner() const {
    InverterSpec s;
    s.kind = inner_kind;
    s.probes = inner_probes;
    return s;
  }

  bool is_deterministic() const { return kind == InverterKind::Perfect || kind == InverterKind::Lex; }

  std::string str() const {
    switch (kind) {
      case InverterKind::Perfect: return "perfect";
      case InverterKind::Bounded: return "bounded:" + std::to_string(probes);
      case InverterKind::Lex: return "lex:" + std::to_string(probes);
      case InverterKind::Amplified: {
        std::string s = "amplified:" + inner().str();
        if (t_rep || attempts) {
          s += ":" + (t_rep ? std::to_string(*t_rep) : std::string("auto"));
          s += ":" + (attempts ? std::to_string(*attempts) : std::string("auto"));
        }
        return s;
      }
    }
    return "?";
  }

  /// `perfect`, `bounded:R`, `lex:R`, `amplified:INNER[:T:A]` with T/A numeric or `auto`.
  static InverterSpec parse(std::string_view text) {
    std::vector<std::string_view> parts;
    for (std::size_t pos = 0;;) {
      const auto colon = text.find(':', pos);
      parts.push_back(text.substr(pos, colon == std::string_view::npos ? std::string_view::npos : colon - pos));
      if (colon == std::string_view::npos) break;
      pos = colon + 1;
    }
    std::size_t i = 0;
    auto bad = [&]() -> DomainError { return DomainError("invalid inverter spec '" + std::string(text) + "'"); };
    auto number = [&](std::string_view s) {
      std::uint64_t v = 0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) throw bad();
      return v;
    };
    auto base = [&]() {
      if (i >= parts.size()) throw bad();
      const auto head = parts[i++];
      if (head == "perfect") return perfect();
      if (head == "bounded" || head == "lex") {
        if (i >= parts.size()) throw bad();
        const auto r = number(parts[i++]);
        return head == "bounded" ? bounded(r) : lex(r);
      }
      throw bad();
    };
    InverterSpec out;
    if (!parts.empty() && parts[0] == "amplified") {
      ++i;
      const auto inner = base();
      std::optional<unsigned> t;
      std::optional<std::uint64_t> a;
      if (i < parts.size()) {
        if (i + 2 != parts.size()) throw bad();
        if (parts[i] != "auto") {
          const auto tv = number(parts[i]);
          if (tv > 1'000'000) throw bad();
          t = static_cast<unsigned>(tv);
        }
        if (parts[i + 1] != "auto") a = number(parts[i + 1]);
        i += 2;
      }
      out = amplified(inner, t, a);
    } else {
      out = base();
    }
    if (i != parts.size()) throw bad();
    return out;
  }

  friend bool operator==(const InverterSpec &, const InverterSpec &) = default;

 private:
  static InverterSpec of(InverterKind kind, std::uint64_t probes) {
    InverterSpec s;
    s.kind = kind;
    s.probes = probes;
    return s;
  }
  static InverterSpec checked(InverterSpec s) {
    if ((s.kind == InverterKind::Bounded || s.kind == InverterKind::Lex) && s.probes < 1) {
      throw DomainError("probe budget r must be >= 1");
    }
    if (s.kind == InverterKind::Amplified) {
      if (s.t_rep && *s.t_rep < 1) throw DomainError("t_rep must be >= 1");
      if (s.attempts && *s.attempts < 1) throw DomainError("attempts must be >= 1");
      if ((s.inner_kind == InverterKind::Bounded || s.inner_kind == InverterKind::Lex) && s.inner_probes < 1) {
        throw DomainError("probe budget r must be >= 1");
      }
    }
    return s;
  }
};

/// Result of one inversion call. `success` is the event I_{C,y,tau}.
struct InversionOutcome {
  std::optional<BitString> candidate;
  bool success = false;
  std::uint64_t probes_used = 0;
  std::uint64_t tau = 0;

  friend bool operator==(const InversionOutcome &, const InversionOutcome &) = default;
};

namespace detail {

inline constexpr std::uint64_t kBoundedStream = 0x626f756e64ull;
inline constexpr std::uint64_t kAmplifyStream = 0x616d706cull;
inline constexpr std::uint64_t kEstimateStream = 0x657374ull;

/// Success is recomputed from the candidate; an inverter's claim is never trusted.
inline InversionOutcome finish(const Circuit &c, const BitString &y, std::optional<BitString> candidate,
                               std::uint64_t probes, std::uint64_t tau) {
  InversionOutcome out;
  out.probes_used = probes;
  out.tau = tau;
  if (candidate && candidate->size() == c.num_inputs() && eval(c, *candidate) == y) {
    out.candidate = std::move(candidate);
    out.success = true;
  }
  return out;
}

inline BitString random_bits(Rng &rng, std::size_t length) {
  BitString x(length);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < length; ++i) {
    if (i % 64 == 0) word = rng();
    x.set(i, (word >> (i % 64)) & 1u);
  }
  return x;
}

inline InversionOutcome invert_perfect(const Circuit &c, const BitString &y, std::uint64_t tau) {
  const auto tables = simulate_all(c);
  const std::uint64_t domain = std::uint64_t{1} << c.num_inputs();
  const std::size_t words = tables.front().size();
  const std::uint64_t tail = domain >= 64 ? ~0ull : ((1ull << domain) - 1);
  for (std::size_t w = 0; w < words; ++w) {
    std::uint64_t match = (w + 1 == words) ? tail : ~0ull;
    for (unsigned j = 0; j < c.num_outputs() && match; ++j) match &= y[j] ? tables[j][w] : ~tables[j][w];
    if (match) {
      const std::uint64_t index = 64 * w + static_cast<std::uint64_t>(std::countr_zero(match));
      return finish(c, y, BitString::from_index_lsb(index, c.num_inputs()), index + 1, tau);
    }
  }
  return finish(c, y, std::nullopt, domain, tau);
}

inline InversionOutcome invert_bounded(const Circuit &c, const BitString &y, std::uint64_t r, std::uint64_t tau) {
  Rng rng(derive_seed(tau, {kBoundedStream}));
  for (std::uint64_t k = 0; k < r; ++k) {
    auto x = random_bits(rng, c.num_inputs());
    if (eval(c, x) == y) return finish(c, y, std::move(x), k + 1, tau);
  }
  return finish(c, y, std::nullopt, r, tau);
}

inline InversionOutcome invert_lex(const Circuit &c, const BitString &y, std::uint64_t r, std::uint64_t tau) {
  std::uint64_t limit = r;
  if (c.num_inputs() < 64) limit = std::min(limit, std::uint64_t{1} << c.num_inputs());
  for (std::uint64_t k = 0; k < limit; ++k) {
    auto x = BitString::from_lex_rank(k, c.num_inputs());
    if (eval(c, x) == y) return finish(c, y, std::move(x), k + 1, tau);
  }
  return finish(c, y, std::nullopt, limit, tau);
}

inline void check_invert_args(const Circuit &c, const BitString &y, double epsilon) {
  if (y.size() != c.num_outputs()) {
    throw DomainError("y has length " + std::to_string(y.size()) + ", circuit has " +
                      std::to_string(c.num_outputs()) + " outputs");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0,1)");
}

}  // namespace detail

/// Per-call success of bounded(r) on a y with preimage mass q: 1 - (1 - q)^r.
inline double bounded_success(double q, std::uint64_t r) {
  if (q >= 1.0) return 1.0;
  return -std::expm1(static_cast<double>(r) * std::log1p(-q));
}

/// Default repetition count: ceil(4 n / epsilon).
inline unsigned default_t_rep(unsigned n, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0,1)");
  return static_cast<unsigned>(std::ceil(4.0 * n / epsilon - 1e-9));
}

inline constexpr std::uint64_t kMaxDefaultAttempts = 100'000'000;

/// ceil(t_rep * ln(3/epsilon) / p_hat).
inline std::uint64_t default_attempts(unsigned t_rep, double epsilon, double p_hat) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0,1)");
  if (!(p_hat > 0.0)) throw CapacityError("inner inverter never succeeds on product images; no finite attempt budget");
  const double a = std::ceil(t_rep * std::log(3.0 / epsilon) / p_hat - 1e-9);
  if (a > static_cast<double>(kMaxDefaultAttempts)) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "default attempt budget %.3g exceeds the cap of %llu", a,
                  static_cast<unsigned long long>(kMaxDefaultAttempts));
    throw CapacityError(buf);
  }
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(a));
}

inline InversionOutcome invert(const InverterSpec &spec, const Circuit &c, const BitString &y, double epsilon,
                               std::uint64_t tau);

/// Inner inverter's per-call success on (C(x_1), ..., C(x_t)) for uniform x_i.
struct ProductSuccess {
  double p = 0.0;
  bool closed_form = false;
  std::uint64_t samples = 0;
};

inline constexpr std::uint64_t kProductEstimateSamples = 4000;

namespace detail {

// Sum over compositions e of t into d parts of multinomial(t; e) * prod w^e * g(prod q^e).
inline std::optional<double> bounded_product_closed_form(const ImageProfile &image, unsigned t, std::uint64_t r) {
  // Group image points by preimage count k: q = k / 2^n, class mass = (#points) * q.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> classes;  // (k, points)
  for (const auto &[rank, k] : image.entries) {
    auto it = std::find_if(classes.begin(), classes.end(), [&](const auto &p) { return p.first == k; });
    if (it == classes.end()) {
      classes.emplace_back(k, 1);
    } else {
      ++it->second;
    }
  }
  const std::size_t d = classes.size();
  // Number of compositions C(t + d - 1, d - 1).
  double count = 1.0;
  for (std::size_t i = 1; i < d; ++i) count = count * static_cast<double>(t + i) / static_cast<double>(i);
  if (count > 2.0e6) return std::nullopt;

  const double domain = std::ldexp(1.0, static_cast<int>(image.n));
  std::vector<double> log_q(d), log_w(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double q = static_cast<double>(classes[i].first) / domain;
    log_q[i] = std::log(q);
    log_w[i] = std::log(static_cast<double>(classes[i].second) * q);
  }
  const double log_t_fact = std::lgamma(t + 1.0);
  double total = 0.0;
  std::vector<unsigned> e(d, 0);
  auto recurse = [&](auto &&self, std::size_t idx, unsigned left, double log_weight, double log_prod) -> void {
    if (idx + 1 == d) {
      const double lw = log_weight + left * log_w[idx] - std::lgamma(left + 1.0);
      const double lp = log_prod + left * log_q[idx];
      total += std::exp(log_t_fact + lw) * bounded_success(std::exp(lp), r);
      return;
    }
    for (unsigned k = 0; k <= left; ++k) {
      self(self, idx + 1, left - k, log_weight + k * log_w[idx] - std::lgamma(k + 1.0), log_prod + k * log_q[idx]);
    }
  };
  recurse(recurse, 0, t, 0.0, 0.0);
  return std::min(1.0, total);
}

}  // namespace detail

/*! \brief p_hat for the default attempt budget.
 *
 * perfect: 1. bounded(r): exact sum over preimage-mass classes when the
 * image is enumerable and the class count is small. Otherwise a Monte
 * Carlo estimate over kProductEstimateSamples random product images.
 */
inline ProductSuccess product_success(const InverterSpec &inner, const Circuit &c, unsigned t_rep, double epsilon,
                                      std::uint64_t seed) {
  if (inner.kind == InverterKind::Amplified) throw DomainError("amplified inverters cannot be nested");
  if (inner.kind == InverterKind::Perfect) return {1.0, true, 0};
  if (inner.kind == InverterKind::Bounded && c.num_inputs() <= kDefaultEnumerationCap && c.num_outputs() <= 64) {
    if (auto p = detail::bounded_product_closed_form(image_profile(c), t_rep, inner.probes)) return {*p, true, 0};
  }
  const Circuit product = product_circuit(c, t_rep);
  Rng rng(derive_seed(seed, {detail::kEstimateStream}));
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < kProductEstimateSamples; ++s) {
    const auto x = detail::random_bits(rng, product.num_inputs());
    if (invert(inner, product, eval(product, x), epsilon, rng()).success) ++hits;
  }
  const double p = hits == 0 ? 0.5 / static_cast<double>(kProductEstimateSamples)
                             : static_cast<double>(hits) / static_cast<double>(kProductEstimateSamples);
  return {p, false, kProductEstimateSamples};
}

struct AmplifierPlan {
  unsigned t_rep = 1;
  std::uint64_t attempts = 1;
  ProductSuccess p_hat;
};

/// Fills in default t_rep / attempts for an amplified spec on circuit c.
inline AmplifierPlan plan_amplifier(const InverterSpec &spec, const Circuit &c, double epsilon, std::uint64_t seed) {
  if (spec.kind != InverterKind::Amplified) throw DomainError("plan_amplifier needs an amplified spec");
  AmplifierPlan plan;
  plan.t_rep = spec.t_rep ? *spec.t_rep : default_t_rep(c.num_inputs(), epsilon);
  if (spec.attempts) {
    plan.attempts = *spec.attempts;
  } else {
    plan.p_hat = product_success(spec.inner(), c, plan.t_rep, epsilon, seed);
    plan.attempts = default_attempts(plan.t_rep, epsilon, plan.p_hat.p);
  }
  return plan;
}

inline InverterSpec resolve_amplifier(const InverterSpec &spec, const Circuit &c, double epsilon, std::uint64_t seed) {
  if (spec.kind != InverterKind::Amplified || (spec.t_rep && spec.attempts)) return spec;
  const auto plan = plan_amplifier(spec, c, epsilon, seed);
  return InverterSpec::amplified(spec.inner(), plan.t_rep, plan.attempts);
}

/*! \brief Direct-product amplification.
 *
 * Each attempt picks a block j, fills the other blocks with images of
 * fresh random inputs, plants y at block j, and asks `inner` to invert
 * the t_rep-fold product circuit. The j-th block of the answer is kept
 * only if it really is a preimage of y. A perfect inner inverter answers
 * each block of the product independently, so block j is inverted
 * directly and a single attempt decides.
 */
inline InversionOutcome amplify_product(const InverterSpec &inner, const Circuit &c, const BitString &y,
                                        double epsilon, unsigned t_rep, std::uint64_t attempts, std::uint64_t tau) {
  detail::check_invert_args(c, y, epsilon);
  if (inner.kind == InverterKind::Amplified) throw DomainError("amplified inverters cannot be nested");
  if (t_rep < 1 || attempts < 1) throw DomainError("t_rep and attempts must be >= 1");
  if (inner.kind == InverterKind::Perfect) return detail::invert_perfect(c, y, tau);
  const Circuit product = product_circuit(c, t_rep);
  const unsigned n = c.num_inputs();
  std::uint64_t probes = 0;
  for (std::uint64_t a = 0; a < attempts; ++a) {
    Rng rng(derive_seed(tau, {detail::kAmplifyStream, a}));
    const auto j = static_cast<unsigned>(uniform_below(rng, t_rep));
    BitString target;
    for (unsigned i = 0; i < t_rep; ++i) {
      if (i == j) {
        target.append(y);
      } else {
        target.append(eval(c, detail::random_bits(rng, n)));
      }
    }
    const auto out = invert(inner, product, target, epsilon, derive_seed(tau, {detail::kAmplifyStream, a, 1}));
    probes += out.probes_used;
    if (out.candidate) {
      auto block = out.candidate->slice(std::size_t{j} * n, n);
      if (eval(c, block) == y) return detail::finish(c, y, std::move(block), probes, tau);
    }
  }
  return detail::finish(c, y, std::nullopt, probes, tau);
}

/// M(1/epsilon, C, y, tau). Deterministic in all arguments.
inline InversionOutcome invert(const InverterSpec &spec, const Circuit &c, const BitString &y, double epsilon,
                               std::uint64_t tau) {
  detail::check_invert_args(c, y, epsilon);
  switch (spec.kind) {
    case InverterKind::Perfect: return detail::invert_perfect(c, y, tau);
    case InverterKind::Bounded: return detail::invert_bounded(c, y, spec.probes, tau);
    case InverterKind::Lex: return detail::invert_lex(c, y, spec.probes, tau);
    case InverterKind::Amplified: {
      const auto plan = plan_amplifier(spec, c, epsilon, tau);
      return amplify_product(spec.inner(), c, y, epsilon, plan.t_rep, plan.attempts, tau);
    }
  }
  throw DomainError("unknown inverter kind");
}

}  // namespace avoidlab
