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
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "avoidlab/avoid.hpp"
#include "avoidlab/bits.hpp"
#include "avoidlab/circuit.hpp"
#include "avoidlab/errors.hpp"
#include "avoidlab/inverters.hpp"
#include "avoidlab/oracles.hpp"
#include "avoidlab/parallel.hpp"
#include "avoidlab/random.hpp"

namespace avoidlab {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational &r) { return r.convert_to<double>(); }

inline Rational pow2(long e) {
  BigInt one = 1;
  if (e >= 0) return Rational(one << static_cast<unsigned>(e));
  return Rational(BigInt(1), one << static_cast<unsigned>(-e));
}

// ---------------------------------------------------------------------------
// Statistical budget
// ---------------------------------------------------------------------------

/// Hoeffding sample count: ceil(ln(2/delta) / (2 tau^2)).
inline std::uint64_t hoeffding_samples(double tau, double delta) {
  if (!(tau > 0.0 && tau < 1.0)) throw DomainError("half-width tau must lie in (0,1)");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0,1)");
  const double n = std::log(2.0 / delta) / (2.0 * tau * tau);
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(n - 1e-9)));
}

/// sqrt(ln(2/delta) / (2 samples)).
inline double hoeffding_half_width(std::uint64_t samples, double delta) {
  if (samples < 1) throw DomainError("half-width needs at least one sample");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0,1)");
  return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(samples)));
}

struct ProbEstimate {
  enum class Kind : std::uint8_t { Exact, MonteCarlo };

  double value = 0.0;
  Kind kind = Kind::Exact;
  double half_width = 0.0;
  std::uint64_t samples = 0;
  double confidence = 1.0;
  std::optional<Rational> exact;  ///< set iff kind == Exact

  static ProbEstimate from_exact(const Rational &r, std::uint64_t enumerated) {
    ProbEstimate p;
    p.value = to_double(r);
    p.samples = enumerated;
    p.exact = r;
    return p;
  }

  static ProbEstimate from_counts(std::uint64_t hits, std::uint64_t samples, double delta) {
    ProbEstimate p;
    p.kind = Kind::MonteCarlo;
    p.value = static_cast<double>(hits) / static_cast<double>(samples);
    p.samples = samples;
    p.half_width = hoeffding_half_width(samples, delta);
    p.confidence = 1.0 - delta;
    return p;
  }

  bool is_exact() const { return kind == Kind::Exact; }
};

enum class Side : std::uint8_t {
  OverY,  ///< Pr_{y, tau}[I_{C,y,tau}], y uniform in {0,1}^m
  OverX,  ///< Pr_{x, tau}[I_{C,C(x),tau}], x uniform in {0,1}^n
};

// ---------------------------------------------------------------------------
// Exact success probabilities
// ---------------------------------------------------------------------------

inline constexpr unsigned kDefaultExactMaxInputs = 16;

/*! \brief Per-y success probabilities Pr_tau[I_{C,y,tau}] for every image point.
 *
 * perfect: 1. lex(r): 1 iff one of the first r inputs maps to y.
 * bounded(r): 1 - (1 - k/2^n)^r with k = |C^{-1}(y)|. Points outside the
 * image have probability 0 for every sound inverter and are omitted.
 */
struct ExactProfile {
  ImageProfile image;
  std::vector<Rational> success;  // parallel to image.entries
};

inline ExactProfile exact_profile(const InverterSpec &spec, const Circuit &c,
                                  unsigned max_inputs = kDefaultExactMaxInputs) {
  if (c.num_inputs() > max_inputs || c.num_outputs() > 62) {
    throw CapacityError("exact enumeration limited to n <= " + std::to_string(max_inputs) + " and m <= 62");
  }
  ExactProfile out{image_profile(c, max_inputs), {}};
  const unsigned n = c.num_inputs();
  switch (spec.kind) {
    case InverterKind::Perfect:
      out.success.assign(out.image.size(), Rational(1));
      break;
    case InverterKind::Lex: {
      out.success.assign(out.image.size(), Rational(0));
      const std::uint64_t limit = std::min<std::uint64_t>(spec.probes, std::uint64_t{1} << n);
      for (std::uint64_t k = 0; k < limit; ++k) {
        const auto rank = eval(c, BitString::from_lex_rank(k, n)).to_lex_rank();
        auto it = std::lower_bound(out.image.entries.begin(), out.image.entries.end(),
                                   std::make_pair(rank, std::uint64_t{0}));
        out.success[static_cast<std::size_t>(it - out.image.entries.begin())] = 1;
      }
      break;
    }
    case InverterKind::Bounded: {
      if (spec.probes > 4096) throw CapacityError("closed form limited to r <= 4096");
      const BigInt domain = BigInt(1) << n;
      const BigInt denom = boost::multiprecision::pow(domain, static_cast<unsigned>(spec.probes));
      for (const auto &[rank, k] : out.image.entries) {
        const BigInt miss = boost::multiprecision::pow(domain - k, static_cast<unsigned>(spec.probes));
        out.success.emplace_back(denom - miss, denom);
      }
      break;
    }
    case InverterKind::Amplified:
      throw DomainError("no closed form for amplified inverters; use the Monte Carlo estimator");
  }
  return out;
}

inline ProbEstimate exact_success_prob(const ExactProfile &profile, Side side) {
  Rational total = 0;
  for (std::size_t i = 0; i < profile.image.size(); ++i) {
    if (side == Side::OverY) {
      total += profile.success[i];
    } else {
      total += profile.success[i] * profile.image.entries[i].second;
    }
  }
  const unsigned bits = side == Side::OverY ? profile.image.m : profile.image.n;
  total /= pow2(bits);
  return ProbEstimate::from_exact(total, std::uint64_t{1} << bits);
}

inline ProbEstimate exact_success_prob(const InverterSpec &spec, const Circuit &c, Side side,
                                       unsigned max_inputs = kDefaultExactMaxInputs) {
  return exact_success_prob(exact_profile(spec, c, max_inputs), side);
}

// ---------------------------------------------------------------------------
// Monte Carlo success probabilities
// ---------------------------------------------------------------------------

inline ProbEstimate mc_success_prob(const InverterSpec &spec, const Circuit &c, Side side, std::uint64_t samples,
                                    double delta, std::uint64_t seed, double epsilon = 0.1) {
  if (samples < 1) throw DomainError("Monte Carlo needs at least one sample");
  const InverterSpec resolved = resolve_amplifier(spec, c, epsilon, derive_seed(seed, {detail::kPlanStream}));
  const auto hits = parallel_reduce<std::uint64_t>(
      samples, 0,
      [&](std::uint64_t i, std::uint64_t &acc) {
        Rng rng(derive_seed(seed, {i, 0}));
        const BitString y = side == Side::OverY ? detail::random_bits(rng, c.num_outputs())
                                                : eval(c, detail::random_bits(rng, c.num_inputs()));
        if (invert(resolved, c, y, epsilon, derive_seed(seed, {i, 1})).success) ++acc;
      },
      [](std::uint64_t a, std::uint64_t b) { return a + b; });
  return ProbEstimate::from_counts(hits, samples, delta);
}

// ---------------------------------------------------------------------------
// Lemma verification
// ---------------------------------------------------------------------------

enum class Verdict : std::uint8_t { Holds, Violated, Inconclusive };

inline std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "true";
    case Verdict::Violated: return "false";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct LemmaReport {
  std::string circuit_id;
  std::string inverter;
  ProbEstimate lhs;
  ProbEstimate rhs;
  double bound = 0.0;   ///< the value lhs is compared against
  double margin = 0.0;  ///< signed slack in the lemma's direction; >= 0 when it holds
  Verdict verdict = Verdict::Inconclusive;

  bool holds() const { return verdict == Verdict::Holds; }
};

/*! \brief Pr_y[I] <= 2^{n-m} Pr_x[I], by exact enumeration with rational arithmetic. */
inline LemmaReport verify_lemma_ratio(const InverterSpec &spec, const Circuit &c,
                                      unsigned max_inputs = kDefaultExactMaxInputs) {
  const auto profile = exact_profile(spec, c, max_inputs);
  LemmaReport r;
  r.circuit_id = c.name();
  r.inverter = spec.str();
  r.lhs = exact_success_prob(profile, Side::OverY);
  r.rhs = exact_success_prob(profile, Side::OverX);
  const Rational bound = *r.rhs.exact * pow2(static_cast<long>(c.num_inputs()) - static_cast<long>(c.num_outputs()));
  r.bound = to_double(bound);
  r.margin = to_double(bound - *r.lhs.exact);
  r.verdict = *r.lhs.exact <= bound ? Verdict::Holds : Verdict::Violated;
  return r;
}

/// Monte Carlo version; any uncertainty overlap reports Inconclusive rather than a violation.
inline LemmaReport verify_lemma_ratio_mc(const InverterSpec &spec, const Circuit &c, std::uint64_t samples,
                                         double delta, std::uint64_t seed, double epsilon = 0.1) {
  LemmaReport r;
  r.circuit_id = c.name();
  r.inverter = spec.str();
  r.lhs = mc_success_prob(spec, c, Side::OverY, samples, delta, derive_seed(seed, {1}), epsilon);
  r.rhs = mc_success_prob(spec, c, Side::OverX, samples, delta, derive_seed(seed, {2}), epsilon);
  const double scale = std::ldexp(1.0, static_cast<int>(c.num_inputs()) - static_cast<int>(c.num_outputs()));
  r.bound = scale * r.rhs.value;
  r.margin = r.bound - r.lhs.value;
  if (r.lhs.value + r.lhs.half_width <= scale * (r.rhs.value - r.rhs.half_width)) {
    r.verdict = Verdict::Holds;
  } else if (r.lhs.value - r.lhs.half_width > scale * (r.rhs.value + r.rhs.half_width)) {
    r.verdict = Verdict::Violated;
  } else {
    r.verdict = Verdict::Inconclusive;
  }
  return r;
}

/*! \brief Pr[y not in Image | not I] >= Pr_x[I], exactly.
 *
 * A sound inverter never succeeds off the image, so the joint event
 * {y not in Image, not I} is just {y not in Image} and the conditional
 * is Pr[y not in Image] / Pr[not I].
 */
inline LemmaReport verify_lemma_conditional(const InverterSpec &spec, const Circuit &c,
                                            unsigned max_inputs = kDefaultExactMaxInputs) {
  const auto profile = exact_profile(spec, c, max_inputs);
  const unsigned m = c.num_outputs();
  const Rational off_image = Rational(1) - Rational(BigInt(profile.image.size())) / pow2(m);
  const auto p_y = exact_success_prob(profile, Side::OverY);
  const Rational fail = Rational(1) - *p_y.exact;
  if (fail == 0) throw DomainError("Pr[not I] = 0; impossible when m > n");
  LemmaReport r;
  r.circuit_id = c.name();
  r.inverter = spec.str();
  r.lhs = ProbEstimate::from_exact(off_image / fail, std::uint64_t{1} << m);
  r.rhs = exact_success_prob(profile, Side::OverX);
  r.bound = r.rhs.value;
  r.margin = to_double(*r.lhs.exact - *r.rhs.exact);
  r.verdict = *r.lhs.exact >= *r.rhs.exact ? Verdict::Holds : Verdict::Violated;
  return r;
}

/// Monte Carlo version: Pr[y not in Image] is taken from the exact image, Pr[not I] and Pr_x[I] are sampled.
inline LemmaReport verify_lemma_conditional_mc(const InverterSpec &spec, const Circuit &c, std::uint64_t samples,
                                               double delta, std::uint64_t seed, double epsilon = 0.1) {
  const auto image = image_profile(c);
  const double off_image = 1.0 - static_cast<double>(image.size()) / std::ldexp(1.0, static_cast<int>(c.num_outputs()));
  const auto p_y = mc_success_prob(spec, c, Side::OverY, samples, delta, derive_seed(seed, {1}), epsilon);
  LemmaReport r;
  r.circuit_id = c.name();
  r.inverter = spec.str();
  r.rhs = mc_success_prob(spec, c, Side::OverX, samples, delta, derive_seed(seed, {2}), epsilon);
  const double fail = 1.0 - p_y.value;
  const double fail_hi = std::min(1.0, fail + p_y.half_width);
  const double fail_lo = std::max(0.0, fail - p_y.half_width);
  r.lhs = p_y;
  r.lhs.value = fail > 0 ? std::min(1.0, off_image / fail) : 1.0;
  const double lhs_lo = off_image / fail_hi;
  const double lhs_hi = fail_lo > 0 ? off_image / fail_lo : 1.0;
  r.lhs.half_width = std::max(r.lhs.value - lhs_lo, lhs_hi - r.lhs.value);
  r.bound = r.rhs.value;
  r.margin = r.lhs.value - r.rhs.value;
  if (lhs_lo >= r.rhs.value + r.rhs.half_width) {
    r.verdict = Verdict::Holds;
  } else if (lhs_hi < r.rhs.value - r.rhs.half_width) {
    r.verdict = Verdict::Violated;
  } else {
    r.verdict = Verdict::Inconclusive;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Theorem error measurement
// ---------------------------------------------------------------------------

struct TheoremErrorReport {
  std::string circuit_id;
  std::string inverter;
  AvoidParams params;
  std::uint64_t runs = 0;
  std::uint64_t found_valid = 0;
  std::uint64_t found_invalid = 0;
  std::uint64_t bottom = 0;
  double per_call_miss = 0.0;  ///< 1 - Pr_x[I]
  bool miss_is_exact = false;
  double bound = 0.0;       ///< per_call_miss * t + 2^-t
  double half_width = 0.0;  ///< Hoeffding half-width of the error rate
  bool holds = false;

  double rate(std::uint64_t count) const { return static_cast<double>(count) / static_cast<double>(runs); }
  double error_rate() const { return rate(found_invalid + bottom); }
};

struct SolverCounts {
  std::uint64_t found_valid = 0, found_invalid = 0, bottom = 0;
  SolverCounts operator+(const SolverCounts &o) const {
    return {found_valid + o.found_valid, found_invalid + o.found_invalid, bottom + o.bottom};
  }
};

/// Runs solve_avoid `runs` times; run i uses seed derive_seed(params.seed, {i}).
inline SolverCounts count_solver_outcomes(const Circuit &c, const AvoidParams &params, const InverterSpec &spec,
                                          std::uint64_t runs) {
  const auto image = image_profile(c);
  const InverterSpec resolved =
      resolve_amplifier(spec, c, params.epsilon, derive_seed(params.seed, {detail::kPlanStream}));
  return parallel_reduce<SolverCounts>(
      runs, SolverCounts{},
      [&](std::uint64_t i, SolverCounts &acc) {
        AvoidParams p = params;
        p.seed = derive_seed(params.seed, {i});
        const auto result = solve_avoid(c, p, resolved);
        if (result.is_bottom()) {
          ++acc.bottom;
        } else if (image.contains(*result.found)) {
          ++acc.found_invalid;
        } else {
          ++acc.found_valid;
        }
      },
      [](const SolverCounts &a, const SolverCounts &b) { return a + b; });
}

/*! \brief Measures found-valid / found-invalid / bottom rates of the solver.
 *
 * The per-call miss rate is exact (closed form) for perfect, lex and
 * bounded inverters; for amplified ones it is the upper end of a Monte
 * Carlo interval. The bound holds if error <= miss * t + 2^-t + half_width.
 */
inline TheoremErrorReport measure_theorem_error(const Circuit &c, const AvoidParams &params, const InverterSpec &spec,
                                                std::uint64_t runs, double delta) {
  if (runs < 1) throw DomainError("need at least one run");
  TheoremErrorReport r;
  r.circuit_id = c.name();
  r.inverter = spec.str();
  r.params = params;
  r.runs = runs;
  if (spec.kind == InverterKind::Amplified) {
    const auto est = mc_success_prob(spec, c, Side::OverX, hoeffding_samples(0.02, delta), delta,
                                     derive_seed(params.seed, {0x6d697373ull}), params.epsilon);
    r.per_call_miss = std::min(1.0, 1.0 - est.value + est.half_width);
  } else {
    r.per_call_miss = 1.0 - exact_success_prob(spec, c, Side::OverX).value;
    r.miss_is_exact = true;
  }
  const auto counts = count_solver_outcomes(c, params, spec, runs);
  r.found_valid = counts.found_valid;
  r.found_invalid = counts.found_invalid;
  r.bottom = counts.bottom;
  r.bound = theorem_error_bound(r.per_call_miss, params.t);
  r.half_width = hoeffding_half_width(runs, delta);
  r.holds = r.error_rate() <= r.bound + r.half_width;
  return r;
}

// ---------------------------------------------------------------------------
// Corpus
// ---------------------------------------------------------------------------

struct CorpusEntry {
  std::string id;
  Circuit circuit;
};

inline Circuit renamed(const Circuit &c, std::string name) {
  return Circuit(std::move(name), c.num_inputs(), c.gates(), c.outputs());
}

/*! \brief The fixed lemma corpus: 150 circuits with m = n + 1.
 *
 * 50 circuits for each gate count g in {2, 4, 6}; the first 25 of every
 * group have n = 2, the rest n = 3. Ids look like "n3-g4-07".
 */
inline std::vector<CorpusEntry> generate_corpus(std::uint64_t seed) {
  std::vector<CorpusEntry> out;
  out.reserve(150);
  for (unsigned g : {2u, 4u, 6u}) {
    for (unsigned n : {2u, 3u}) {
      for (unsigned i = 0; i < 25; ++i) {
        char id[32];
        std::snprintf(id, sizeof id, "n%u-g%u-%02u", n, g, i);
        auto c = random_circuit(n, n + 1, g, derive_seed(seed, {n, g, i}));
        out.push_back({id, renamed(c, id)});
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Configuration and CSV
// ---------------------------------------------------------------------------

struct LabConfig {
  std::optional<std::uint64_t> seed;
  double delta = 0.01;
  double tau = 0.02;
  double epsilon_prime = 0.1;
  unsigned image_cap = kDefaultEnumerationCap;
  unsigned exact_max_inputs = kDefaultExactMaxInputs;
  unsigned mcsp_max_vars = 4;
  unsigned mcsp_max_size = 6;
  std::uint64_t runs = 0;  ///< 0: Hoeffding sample count for (tau, delta)
  std::vector<InverterSpec> inverters{InverterSpec::perfect(), InverterSpec::lex(1), InverterSpec::lex(2)};

  std::uint64_t effective_runs() const { return runs ? runs : hoeffding_samples(tau, delta); }
};

/// key=value lines; '#' comments. Unknown keys are an error.
inline LabConfig parse_config(std::string_view text) {
  LabConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "config line " + std::to_string(line_no) + ": ";
    if (eq == std::string::npos) throw DomainError(where + "expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto as_u64 = [&]() -> std::uint64_t {
      std::size_t used = 0;
      std::uint64_t v = 0;
      try {
        v = std::stoull(value, &used);
      } catch (const std::exception &) {
        used = 0;
      }
      if (used != value.size() || value.empty() || value[0] == '-') throw DomainError(where + "bad integer for " + key);
      return v;
    };
    auto as_double = [&]() -> double {
      std::size_t used = 0;
      double v = 0;
      try {
        v = std::stod(value, &used);
      } catch (const std::exception &) {
        used = 0;
      }
      if (used != value.size() || value.empty()) throw DomainError(where + "bad number for " + key);
      return v;
    };
    if (key == "seed") {
      cfg.seed = as_u64();
    } else if (key == "delta") {
      cfg.delta = as_double();
    } else if (key == "tau") {
      cfg.tau = as_double();
    } else if (key == "epsilon_prime") {
      cfg.epsilon_prime = as_double();
    } else if (key == "image_cap") {
      cfg.image_cap = static_cast<unsigned>(as_u64());
    } else if (key == "exact_max_inputs") {
      cfg.exact_max_inputs = static_cast<unsigned>(as_u64());
    } else if (key == "mcsp_max_vars") {
      cfg.mcsp_max_vars = static_cast<unsigned>(as_u64());
    } else if (key == "mcsp_max_size") {
      cfg.mcsp_max_size = static_cast<unsigned>(as_u64());
    } else if (key == "runs") {
      cfg.runs = as_u64();
    } else if (key == "inverters") {
      cfg.inverters.clear();
      std::istringstream list(value);
      std::string item;
      while (std::getline(list, item, ',')) {
        item = trim(item);
        if (!item.empty()) cfg.inverters.push_back(InverterSpec::parse(item));
      }
      if (cfg.inverters.empty()) throw DomainError(where + "empty inverter list");
    } else {
      throw DomainError(where + "unknown key '" + key + "'");
    }
  }
  if (!(cfg.delta > 0 && cfg.delta < 1)) throw DomainError("config: delta must lie in (0,1)");
  if (!(cfg.tau > 0 && cfg.tau < 1)) throw DomainError("config: tau must lie in (0,1)");
  if (!(cfg.epsilon_prime > 0 && cfg.epsilon_prime < 1)) throw DomainError("config: epsilon_prime must lie in (0,1)");
  return cfg;
}

/// One CSV row. Fields that do not apply to an experiment are left empty.
struct CsvRow {
  std::string experiment;
  std::string circuit_id;
  unsigned n = 0;
  unsigned m = 0;
  std::string inverter;
  std::optional<double> epsilon;
  std::optional<std::uint64_t> t;
  std::uint64_t trials = 0;
  std::optional<std::uint64_t> found_valid;
  std::optional<std::uint64_t> found_invalid;
  std::optional<std::uint64_t> bottom;
  double error_rate = 0.0;
  double bound = 0.0;
  std::string holds;
  std::uint64_t seed = 0;
};

inline constexpr std::string_view kCsvHeader =
    "experiment,circuit_id,n,m,inverter,epsilon,t,trials,found_valid,found_invalid,bottom,error_rate,bound,holds,seed";

inline std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline void write_csv(std::ostream &out, const std::vector<CsvRow> &rows) {
  auto opt = [](const auto &v) -> std::string {
    if (!v) return "";
    if constexpr (std::is_same_v<std::decay_t<decltype(*v)>, double>) {
      return format_real(*v);
    } else {
      return std::to_string(*v);
    }
  };
  out << kCsvHeader << "\n";
  for (const auto &r : rows) {
    out << r.experiment << ',' << r.circuit_id << ',' << r.n << ',' << r.m << ',' << r.inverter << ','
        << opt(r.epsilon) << ',' << opt(r.t) << ',' << r.trials << ',' << opt(r.found_valid) << ','
        << opt(r.found_invalid) << ',' << opt(r.bottom) << ',' << format_real(r.error_rate) << ','
        << format_real(r.bound) << ',' << r.holds << ',' << r.seed << "\n";
  }
}

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

inline const std::vector<std::string_view> &experiment_names() {
  static const std::vector<std::string_view> names{"lemma-ratio", "lemma-conditional", "theorem-error",
                                                   "trivial-sampler", "soundness"};
  return names;
}

/*! \brief Runs one named experiment over the corpus.
 *
 * lemma-ratio        error_rate = Pr_y[I], bound = 2^{n-m} Pr_x[I]
 * lemma-conditional  error_rate = Pr[y not in Image | not I], bound = Pr_x[I]
 * theorem-error      solver error rate vs miss * t + 2^-t (+ half-width)
 * trivial-sampler    invalid-draw rate vs 2^{-(m-n)} (+ half-width)
 * soundness          perfect inverter; holds iff no invalid string is found
 */
inline std::vector<CsvRow> run_experiment(std::string_view name, const LabConfig &cfg) {
  if (!cfg.seed) throw DomainError("a seed is required (config key 'seed' or --seed)");
  const std::uint64_t seed = *cfg.seed;
  const auto corpus = generate_corpus(seed);
  std::vector<CsvRow> rows;

  auto base_row = [&](const CorpusEntry &e, const std::string &inverter) {
    CsvRow row;
    row.experiment = std::string(name);
    row.circuit_id = e.id;
    row.n = e.circuit.num_inputs();
    row.m = e.circuit.num_outputs();
    row.inverter = inverter;
    row.seed = seed;
    return row;
  };

  if (name == "lemma-ratio" || name == "lemma-conditional") {
    const bool ratio = name == "lemma-ratio";
    for (const auto &e : corpus) {
      for (const auto &spec : cfg.inverters) {
        auto row = base_row(e, spec.str());
        LemmaReport rep;
        if (spec.kind == InverterKind::Amplified) {
          const auto n = cfg.effective_runs();
          const auto s = derive_seed(seed, {0x6c656d6dull, rows.size()});
          rep = ratio ? verify_lemma_ratio_mc(spec, e.circuit, n, cfg.delta, s)
                      : verify_lemma_conditional_mc(spec, e.circuit, n, cfg.delta, s);
        } else {
          rep = ratio ? verify_lemma_ratio(spec, e.circuit, cfg.exact_max_inputs)
                      : verify_lemma_conditional(spec, e.circuit, cfg.exact_max_inputs);
        }
        row.trials = rep.lhs.samples + rep.rhs.samples;
        row.error_rate = rep.lhs.value;
        row.bound = rep.bound;
        row.holds = std::string(verdict_name(rep.verdict));
        rows.push_back(std::move(row));
      }
    }
  } else if (name == "theorem-error" || name == "soundness") {
    const bool soundness = name == "soundness";
    const std::vector<InverterSpec> specs = soundness ? std::vector<InverterSpec>{InverterSpec::perfect()} : cfg.inverters;
    for (std::size_t ci = 0; ci < corpus.size(); ++ci) {
      const auto &e = corpus[ci];
      for (std::size_t si = 0; si < specs.size(); ++si) {
        auto params = choose_params(cfg.epsilon_prime, e.circuit.num_inputs(), AvoidMode::theorem(),
                                    derive_seed(seed, {0x74686d00ull, ci, si}));
        const auto runs = soundness ? (cfg.runs ? cfg.runs : 1000) : cfg.effective_runs();
        const auto rep = measure_theorem_error(e.circuit, params, specs[si], runs, cfg.delta);
        auto row = base_row(e, specs[si].str());
        row.epsilon = params.epsilon;
        row.t = params.t;
        row.trials = runs;
        row.found_valid = rep.found_valid;
        row.found_invalid = rep.found_invalid;
        row.bottom = rep.bottom;
        row.error_rate = soundness ? rep.rate(rep.found_invalid) : rep.error_rate();
        row.bound = soundness ? 0.0 : rep.bound;
        row.holds = (soundness ? rep.found_invalid == 0 : rep.holds) ? "true" : "false";
        rows.push_back(std::move(row));
      }
    }
  } else if (name == "trivial-sampler") {
    const auto samples = cfg.effective_runs();
    for (std::size_t ci = 0; ci < corpus.size(); ++ci) {
      const auto &e = corpus[ci];
      const auto image = image_profile(e.circuit, cfg.image_cap);
      const auto cell = derive_seed(seed, {0x73616d70ull, ci});
      const auto valid = parallel_reduce<std::uint64_t>(
          samples, 0,
          [&](std::uint64_t i, std::uint64_t &acc) {
            Rng rng(derive_seed(cell, {i}));
            if (!image.contains(detail::random_bits(rng, e.circuit.num_outputs()))) ++acc;
          },
          [](std::uint64_t a, std::uint64_t b) { return a + b; });
      auto row = base_row(e, "");
      row.trials = samples;
      row.found_valid = valid;
      row.found_invalid = samples - valid;
      row.bottom = 0;
      row.error_rate = static_cast<double>(samples - valid) / static_cast<double>(samples);
      row.bound = std::ldexp(1.0, -static_cast<int>(e.circuit.stretch()));
      row.holds = row.error_rate <= row.bound + hoeffding_half_width(samples, cfg.delta) ? "true" : "false";
      rows.push_back(std::move(row));
    }
  } else {
    throw DomainError("unknown experiment '" + std::string(name) + "'");
  }
  return rows;
}

}  // namespace avoidlab
