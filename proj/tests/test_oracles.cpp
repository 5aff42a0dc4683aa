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

#include <atomic>
#include <thread>
#include <vector>

#include "avoidlab/oracles.hpp"
#include "support/reference.hpp"

namespace avoidlab {
namespace {

TruthTable tt(const char *bits) { return TruthTable::parse(bits); }

TEST(ImageContains, Duplicator) {
  EXPECT_TRUE(image_contains(duplicator(), BitString::parse("11")));
  EXPECT_TRUE(image_contains(duplicator(), BitString::parse("00")));
  EXPECT_FALSE(image_contains(duplicator(), BitString::parse("01")));
  EXPECT_THROW(image_contains(duplicator(), BitString::parse("011")), DomainError);
}

TEST(ImageContains, CapIsAHardError) {
  const auto c = duplicator(25);
  EXPECT_THROW(image_contains(c, BitString(26)), CapacityError);
  EXPECT_NO_THROW(image_contains(c, BitString(26), 25));
}

TEST(ImageContains, AgreesWithImageSet) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const unsigned n = 1 + s % 3, m = n + 1 + s % 2;
    const auto c = random_circuit(n, m, 5, s);
    const auto image = testing::image_set(c);
    const auto profile = image_profile(c);
    ASSERT_EQ(profile.size(), image.size());
    for (std::uint64_t r = 0; r < (1u << m); ++r) {
      const auto y = BitString::from_lex_rank(r, m);
      ASSERT_EQ(image_contains(c, y), image.count(y.str()) == 1);
      ASSERT_EQ(profile.contains(y), image.count(y.str()) == 1);
    }
  }
}

TEST(ImageContains, EveryEvaluationIsInTheImage) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const auto c = random_circuit(4, 5, 8, s);
    for (std::uint64_t i = 0; i < 16; ++i) ASSERT_TRUE(image_contains(c, eval(c, BitString::from_index_lsb(i, 4))));
  }
}

TEST(ImageProfile, PreimageCountsSumToDomain) {
  const auto c = random_circuit(5, 6, 10, 3);
  std::uint64_t total = 0;
  for (const auto &[rank, k] : image_profile(c).entries) total += k;
  EXPECT_EQ(total, 32u);
}

TEST(ExactAvoid, Duplicator) { EXPECT_EQ(exact_avoid(duplicator()).str(), "01"); }

TEST(ExactAvoid, SinglePointImage) {
  const Circuit zeros("z", 3, {}, std::vector<WireRef>(4, WireRef::constant(false)));
  EXPECT_EQ(exact_avoid(zeros).str(), "0001");
}

TEST(ExactAvoid, RejectsNonInstances) {
  const Circuit square("sq", 2, {}, {WireRef::input(0), WireRef::input(1)});
  EXPECT_THROW(exact_avoid(square), DomainError);
}

TEST(ExactAvoid, OutputIsOutsideImageAndSmallest) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const unsigned n = 1 + s % 3;
    const auto c = random_circuit(n, n + 1, 4, s);
    const auto y = exact_avoid(c);
    ASSERT_FALSE(image_contains(c, y));
    for (std::uint64_t r = 0; r < y.to_lex_rank(); ++r) ASSERT_TRUE(image_contains(c, BitString::from_lex_rank(r, n + 1)));
  }
}

TEST(MinCircuitSize, Examples) {
  EXPECT_EQ(min_circuit_size(tt("00")), 0u);
  EXPECT_EQ(min_circuit_size(tt("01")), 0u);
  EXPECT_EQ(min_circuit_size(tt("10")), 1u);
  EXPECT_EQ(min_circuit_size(tt("0001")), 1u);
  EXPECT_EQ(min_circuit_size(tt("0110"), Basis::AndOrNotXor), 1u);
}

TEST(MinCircuitSize, XorOverAndOrNot) {
  // Frozen from the straight-line-program enumeration oracle.
  const auto reference = testing::enumerate_min_sizes(2, Basis::AndOrNot, 5);
  ASSERT_EQ(reference[0b0110], 4);
  EXPECT_EQ(min_circuit_size(tt("0110"), Basis::AndOrNot), 4u);
}

TEST(McspDecide, Examples) {
  EXPECT_FALSE(mcsp_decide({tt("0001"), 0}));
  EXPECT_TRUE(mcsp_decide({tt("0001"), 1}));
  const bool expected[] = {false, false, false, false, true};
  for (std::uint64_t s = 0; s <= 4; ++s) {
    EXPECT_EQ(mcsp_decide({tt("0110"), s, Basis::AndOrNot}), expected[s]) << s;
  }
}

TEST(McspDecide, BeyondBudgetUsesUpperBound) {
  const auto and4 = tt("0000000000000001");
  EXPECT_FALSE(mcsp_decide({and4, 2}, {4, 2}));
  EXPECT_TRUE(mcsp_decide({and4, 3}, {4, 2}));
  EXPECT_TRUE(mcsp_decide({and4, 1000}, {4, 2}));  // clamped to 2^n
  EXPECT_THROW(mcsp_decide({tt("0110100110010110"), 20, Basis::AndOrNot}, {4, 3}), CapacityError);
}

TEST(McspDecide, MonotoneInSize) {
  for (std::uint64_t f = 0; f < 256; f += 7) {
    const auto table = TruthTable::from_word(3, f);
    bool seen_true = false;
    for (std::uint64_t s = 0; s <= 5; ++s) {
      const bool v = mcsp_decide({table, s, Basis::AndOrNot}, {4, 5});
      ASSERT_TRUE(!seen_true || v) << table.str() << " s=" << s;
      seen_true = seen_true || v;
    }
  }
}

TEST(MinCircuitSize, XorBasisNeverWorse) {
  for (std::uint64_t f = 0; f < 256; ++f) {
    const auto table = TruthTable::from_word(3, f);
    std::uint64_t aon = 99, xaon = 99;
    try {
      aon = min_circuit_size(table, Basis::AndOrNot, {}, {4, 4});
    } catch (const CapacityError &) {
    }
    try {
      xaon = min_circuit_size(table, Basis::AndOrNotXor, {}, {4, 4});
    } catch (const CapacityError &) {
    }
    ASSERT_LE(xaon, aon) << table.str();
  }
}

TEST(MinCircuitSize, OracleGatesDominate) {
  const auto maj = tt("00010111");
  const auto plain = min_circuit_size(maj, Basis::AndOrNot);
  EXPECT_EQ(min_circuit_size(maj, Basis::AndOrNot, {OracleFun(3, maj)}), 1u);
  EXPECT_LE(min_circuit_size(maj, Basis::AndOrNot, {OracleFun(2, tt("0110"))}), plain);
  // Oracle applied to a constant argument: B(x1, c1) = NOT x1.
  EXPECT_EQ(min_circuit_size(tt("10"), Basis::AndOrNot, {OracleFun(2, tt("1010"))}), 1u);
  for (std::uint64_t f = 0; f < 16; ++f) {
    const auto t = TruthTable::from_word(2, f);
    EXPECT_LE(min_circuit_size(t, Basis::AndOrNot, {OracleFun(2, t)}), 1u);
    EXPECT_LE(min_circuit_size(t, Basis::AndOrNot, {OracleFun(1, tt("10"))}), min_circuit_size(t, Basis::AndOrNot));
  }
}

TEST(MinCircuitSize, TwoVariableTablesMatchClosure) {
  for (auto basis : {Basis::AndOrNot, Basis::AndOrNotXor}) {
    const auto levels = testing::closure_levels(2, basis, 8);
    for (std::uint64_t f = 0; f < 16; ++f) {
      ASSERT_EQ(static_cast<int>(min_circuit_size(TruthTable::from_word(2, f), basis)), levels[f])
          << "f=" << f << " basis=" << basis_name(basis);
    }
  }
}

TEST(MinCircuitSize, BudgetExceededCarriesUpperBound) {
  const auto parity4 = tt("0110100110010110");
  try {
    min_circuit_size(parity4, Basis::AndOrNot, {}, {4, 3});
    FAIL() << "expected a capacity error";
  } catch (const CapacityError &e) {
    ASSERT_TRUE(e.best_upper_bound().has_value());
    EXPECT_GT(*e.best_upper_bound(), 3u);
  }
  EXPECT_THROW(min_circuit_size(TruthTable::parse("01101001100101100110100110010110")), CapacityError);
}

TEST(MinCircuitSize, FourVariablesWithinBudget) {
  EXPECT_EQ(min_circuit_size(tt("0110100110010110"), Basis::AndOrNotXor), 3u);
  EXPECT_EQ(min_circuit_size(tt("0000000000000001"), Basis::AndOrNot), 3u);
}

TEST(MinCircuitSize, CacheIsSafeUnderConcurrency) {
  std::vector<std::uint64_t> expected(256);
  for (std::uint64_t f = 0; f < 256; ++f) {
    expected[f] = testing::enumerate_min_sizes(3, Basis::AndOrNotXor, 3)[f];
  }
  std::vector<std::jthread> threads;
  std::atomic<int> mismatches{0};
  for (int w = 0; w < 4; ++w) {
    threads.emplace_back([&, w] {
      for (std::uint64_t f = 0; f < 256; ++f) {
        const auto t = TruthTable::from_word(3, (f + 64 * w) % 256);
        const bool v = mcsp_decide({t, 3, Basis::AndOrNotXor});
        const auto e = expected[(f + 64 * w) % 256];
        if (v != (static_cast<std::int64_t>(e) >= 0 && e <= 3)) ++mismatches;
      }
    });
  }
  threads.clear();
  EXPECT_EQ(mismatches.load(), 0);
}

TEST(OracleFile, Parses) {
  const auto funs = parse_oracle_funs("# comment\noraclefun 2 0110\n\noraclefun 1 10\n");
  ASSERT_EQ(funs.size(), 2u);
  EXPECT_EQ(funs[0].arity, 2u);
  EXPECT_EQ(funs[1].table.str(), "10");
  EXPECT_THROW(parse_oracle_funs("oraclefun 2 011\n"), DomainError);
  EXPECT_THROW(parse_oracle_funs("oracle 2 0110\n"), DomainError);
}

TEST(TruthTableParse, RejectsBadLengths) {
  EXPECT_THROW(TruthTable::parse("011"), DomainError);
  EXPECT_THROW(TruthTable::parse(""), DomainError);
  EXPECT_THROW(TruthTable::parse("01a1"), DomainError);
}

}  // namespace
}  // namespace avoidlab
