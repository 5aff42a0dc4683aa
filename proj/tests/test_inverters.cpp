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

#include <gtest/gtest.h>

#include <cmath>

#include "avoidlab/inverters.hpp"
#include "support/reference.hpp"

namespace avoidlab {
namespace {

const double kEps = 0.1;

TEST(Invert, PerfectOnImagePoint) {
  const auto out = invert(InverterSpec::perfect(), duplicator(), BitString::parse("11"), kEps, 1);
  ASSERT_TRUE(out.success);
  EXPECT_EQ(out.candidate->str(), "1");
  EXPECT_EQ(out.tau, 1u);
}

TEST(Invert, PerfectNeverSucceedsOffImage) {
  for (std::uint64_t tau = 0; tau < 50; ++tau) {
    const auto out = invert(InverterSpec::perfect(), duplicator(), BitString::parse("01"), kEps, tau);
    EXPECT_FALSE(out.success);
    EXPECT_FALSE(out.candidate.has_value());
  }
}

TEST(Invert, LexOneOnDuplicator) {
  // Enumerate y in {0,1}^2 and x in {0,1}.
  const auto spec = InverterSpec::lex(1);
  int y_hits = 0, x_hits = 0;
  for (std::uint64_t r = 0; r < 4; ++r) {
    const auto y = BitString::from_lex_rank(r, 2);
    const bool ok = invert(spec, duplicator(), y, kEps, 0).success;
    EXPECT_EQ(ok, y.str() == "00");
    y_hits += ok;
  }
  for (std::uint64_t i = 0; i < 2; ++i) {
    x_hits += invert(spec, duplicator(), eval(duplicator(), BitString::from_index_lsb(i, 1)), kEps, 0).success;
  }
  EXPECT_EQ(y_hits, 1);  // Pr_y[I] = 1/4
  EXPECT_EQ(x_hits, 1);  // Pr_x[I] = 1/2
}

TEST(Invert, LexIgnoresTau) {
  const auto c = random_circuit(3, 4, 5, 11);
  for (std::uint64_t r = 0; r < 16; ++r) {
    const auto y = BitString::from_lex_rank(r, 4);
    const auto first = invert(InverterSpec::lex(3), c, y, kEps, 0);
    for (std::uint64_t tau = 1; tau < 10; ++tau) {
      auto again = invert(InverterSpec::lex(3), c, y, kEps, tau);
      again.tau = first.tau;
      ASSERT_EQ(again, first);
    }
  }
}

TEST(Invert, RejectsBadArguments) {
  EXPECT_THROW(invert(InverterSpec::perfect(), duplicator(), BitString::parse("1"), kEps, 0), DomainError);
  EXPECT_THROW(invert(InverterSpec::perfect(), duplicator(), BitString::parse("11"), 0.0, 0), DomainError);
  EXPECT_THROW(invert(InverterSpec::perfect(), duplicator(), BitString::parse("11"), 1.0, 0), DomainError);
  EXPECT_THROW(invert(InverterSpec::perfect(), duplicator(25), BitString(26), kEps, 0), CapacityError);
}

TEST(Invert, SoundForEverySpec) {
  const std::vector<InverterSpec> specs{InverterSpec::perfect(), InverterSpec::bounded(3), InverterSpec::lex(2),
                                        InverterSpec::amplified(InverterSpec::bounded(4), 2, 5),
                                        InverterSpec::amplified(InverterSpec::perfect(), 2, 1)};
  for (std::uint64_t s = 0; s < 30; ++s) {
    const unsigned n = 1 + s % 3;
    const auto c = random_circuit(n, n + 1, 4, s);
    const auto image = testing::image_set(c);
    for (const auto &spec : specs) {
      for (std::uint64_t r = 0; r < (2u << n); ++r) {
        const auto y = BitString::from_lex_rank(r, n + 1);
        const auto out = invert(spec, c, y, kEps, s * 131 + r);
        if (out.success) {
          ASSERT_TRUE(out.candidate.has_value());
          ASSERT_EQ(eval(c, *out.candidate), y);
        }
        if (!image.count(y.str())) {
          ASSERT_FALSE(out.success) << spec.str();
        }
      }
    }
  }
}

TEST(Invert, DeterministicInAllArguments) {
  const auto c = random_circuit(4, 5, 8, 3);
  const auto spec = InverterSpec::amplified(InverterSpec::bounded(2), 3, 10);
  for (std::uint64_t tau = 0; tau < 20; ++tau) {
    const auto y = eval(c, BitString::from_index_lsb(tau % 16, 4));
    EXPECT_EQ(invert(spec, c, y, kEps, tau), invert(spec, c, y, kEps, tau));
    EXPECT_EQ(invert(InverterSpec::bounded(3), c, y, kEps, tau), invert(InverterSpec::bounded(3), c, y, kEps, tau));
  }
}

// Exact check of the closed form by enumerating every probe sequence of a
// bounded(r) inverter, independent of the PRNG.
TEST(BoundedClosedForm, MatchesProbeSequenceEnumeration) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const unsigned n = 1 + s % 3;
    const auto c = random_circuit(n, n + 1, 3, s);
    for (const auto &y_str : testing::image_set(c)) {
      const auto y = BitString::parse(y_str);
      for (std::uint64_t r = 1; r <= 3; ++r) {
        const std::uint64_t domain = 1u << n;
        std::uint64_t sequences = 1;
        for (std::uint64_t k = 0; k < r; ++k) sequences *= domain;
        std::uint64_t hits = 0;
        for (std::uint64_t seq = 0; seq < sequences; ++seq) {
          bool hit = false;
          for (std::uint64_t k = 0, v = seq; k < r; ++k, v /= domain) {
            hit = hit || eval(c, BitString::from_index_lsb(v % domain, n)) == y;
          }
          hits += hit;
        }
        std::uint64_t pre = 0;
        for (std::uint64_t i = 0; i < domain; ++i) pre += eval(c, BitString::from_index_lsb(i, n)) == y;
        const double q = static_cast<double>(pre) / domain;
        ASSERT_NEAR(bounded_success(q, r), static_cast<double>(hits) / sequences, 1e-12);
      }
    }
  }
}

TEST(BoundedClosedForm, MatchesSimulatedInverter) {
  const auto c = random_circuit(3, 4, 5, 21);
  const auto profile = image_profile(c);
  const std::uint64_t samples = 6623;  // half-width 0.02 at delta = 0.01
  for (const auto &[rank, k] : profile.entries) {
    const auto y = BitString::from_lex_rank(rank, 4);
    std::uint64_t hits = 0;
    for (std::uint64_t tau = 0; tau < samples; ++tau) hits += invert(InverterSpec::bounded(2), c, y, kEps, tau).success;
    EXPECT_NEAR(static_cast<double>(hits) / samples, bounded_success(k / 8.0, 2), 0.02) << y.str();
  }
}

TEST(Amplify, PerfectInnerClassifiesExactly) {
  for (std::uint64_t s = 0; s < 15; ++s) {
    const auto c = random_circuit(2, 3, 4, s);
    const auto image = testing::image_set(c);
    for (std::uint64_t r = 0; r < 8; ++r) {
      const auto y = BitString::from_lex_rank(r, 3);
      const auto out = amplify_product(InverterSpec::perfect(), c, y, kEps, 3, 2, s + r);
      ASSERT_EQ(out.success, image.count(y.str()) == 1);
    }
  }
}

TEST(Amplify, PerfectInnerScalesToWideProducts) {
  const auto c = duplicator(8);
  const auto spec = InverterSpec::amplified(InverterSpec::perfect());
  EXPECT_TRUE(invert(spec, c, eval(c, BitString::parse("10110001")), kEps, 4).success);
  EXPECT_FALSE(invert(spec, c, BitString::parse("101100010"), kEps, 4).success);
}

TEST(Amplify, SingleCopySingleAttemptIsOneInnerCall) {
  const auto c = random_circuit(3, 4, 6, 8);
  for (std::uint64_t r = 0; r < 16; ++r) {
    const auto y = BitString::from_lex_rank(r, 4);
    for (const auto &inner : {InverterSpec::perfect(), InverterSpec::lex(3)}) {
      const auto direct = invert(inner, c, y, kEps, 5);
      const auto amp = amplify_product(inner, c, y, kEps, 1, 1, 5);
      ASSERT_EQ(amp.success, direct.success);
      ASSERT_EQ(amp.candidate, direct.candidate);
    }
  }
  // bounded: same success law.
  const auto y = eval(c, BitString::parse("101"));
  std::uint64_t a = 0, b = 0;
  for (std::uint64_t tau = 0; tau < 6623; ++tau) {
    a += invert(InverterSpec::bounded(2), c, y, kEps, tau).success;
    b += amplify_product(InverterSpec::bounded(2), c, y, kEps, 1, 1, tau).success;
  }
  EXPECT_NEAR(static_cast<double>(a) / 6623, static_cast<double>(b) / 6623, 0.04);
}

TEST(Amplify, MoreAttemptsNeverHurtWithMatchedSeeds) {
  const auto c = random_circuit(3, 4, 6, 9);
  for (std::uint64_t tau = 0; tau < 200; ++tau) {
    const auto y = eval(c, BitString::from_index_lsb(tau % 8, 3));
    bool prev = false;
    for (std::uint64_t attempts : {1, 2, 4, 8, 16}) {
      const bool ok = amplify_product(InverterSpec::bounded(1), c, y, kEps, 3, attempts, tau).success;
      ASSERT_TRUE(!prev || ok);
      prev = ok;
    }
  }
}

TEST(Amplify, RejectsNesting) {
  EXPECT_THROW(InverterSpec::amplified(InverterSpec::amplified(InverterSpec::perfect())), DomainError);
}

TEST(Defaults, RepetitionAndAttempts) {
  EXPECT_EQ(default_t_rep(4, 0.1), 160u);
  EXPECT_EQ(default_t_rep(1, 0.5), 8u);
  EXPECT_EQ(default_attempts(10, 0.3, 1.0), static_cast<std::uint64_t>(std::ceil(10 * std::log(10.0))));
  EXPECT_THROW(default_attempts(10, 0.1, 0.0), CapacityError);
  EXPECT_THROW(default_attempts(100000, 0.1, 1e-6), CapacityError);
}

TEST(ProductSuccess, ClosedFormMatchesSampling) {
  const auto c = random_circuit(2, 3, 3, 4);
  const unsigned t = 3;
  const auto closed = product_success(InverterSpec::bounded(4), c, t, kEps, 1);
  ASSERT_TRUE(closed.closed_form);
  const auto product = product_circuit(c, t);
  std::uint64_t hits = 0;
  Rng rng(77);
  for (std::uint64_t s = 0; s < 6623; ++s) {
    BitString x(product.num_inputs());
    for (std::size_t i = 0; i < x.size(); ++i) x.set(i, random_bit(rng));
    hits += invert(InverterSpec::bounded(4), product, eval(product, x), kEps, rng()).success;
  }
  EXPECT_NEAR(closed.p, static_cast<double>(hits) / 6623, 0.02);
  EXPECT_EQ(product_success(InverterSpec::perfect(), c, t, kEps, 1).p, 1.0);
  EXPECT_FALSE(product_success(InverterSpec::lex(2), c, t, kEps, 1).closed_form);
}

TEST(InverterSpecText, ParsesAndPrints) {
  for (const char *text : {"perfect", "bounded:8", "lex:1", "amplified:bounded:8:64:500", "amplified:perfect:3:10",
                           "amplified:lex:2", "amplified:bounded:2:auto:40"}) {
    EXPECT_EQ(InverterSpec::parse(text).str(), text);
  }
  const auto a = InverterSpec::parse("amplified:bounded:8:64:500");
  EXPECT_EQ(a.kind, InverterKind::Amplified);
  EXPECT_EQ(a.inner(), InverterSpec::bounded(8));
  EXPECT_EQ(a.t_rep, 64u);
  EXPECT_EQ(a.attempts, 500u);
  for (const char *bad : {"", "bounded", "bounded:0", "lex:x", "perfect:1", "amplified", "amplified:bounded:2:3",
                          "amplified:amplified:perfect", "amplified:perfect:0:1", "greedy"}) {
    EXPECT_THROW(InverterSpec::parse(bad), DomainError) << bad;
  }
}

}  // namespace
}  // namespace avoidlab
