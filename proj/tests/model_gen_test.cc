// Copyright 2026 The privdist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "privdist/model_gen.h"

#include <algorithm>

#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace privdist {
namespace {

TEST(DiningTest, TwoCryptographersShape) {
  absl::StatusOr<DiningChain> chain =
      GenerateDining({.n = 2, .p = Rational(49, 100)});
  ASSERT_TRUE(chain.ok()) << chain.status();
  ASSERT_EQ(chain->start_states.size(), 2u);
  const Lmc& lmc = chain->lmc;
  for (StateId s : chain->start_states) EXPECT_EQ(lmc.label_name(s), "init");
  EXPECT_EQ(lmc.name(chain->start_states[0]), "start0");
  EXPECT_EQ(lmc.name(chain->start_states[1]), "start1");
  EXPECT_EQ(DiningHorizon(2), 5);
  // Every complete run ends in "done" after the announcements.
  const HorizonDistribution h = *ComputeHorizonDistribution(
      lmc, chain->start_states[0], DiningHorizon(2));
  const SymbolId done = *lmc.FindSymbol("done");
  for (const auto& [u, m] : h.mass) EXPECT_EQ(u.back(), done);
}

TEST(DiningTest, TextFormReparses) {
  const DiningChain chain = *GenerateDining({.n = 3, .p = Rational(1, 3)});
  const std::string text = FormatDining(chain);
  absl::StatusOr<Lmc> again = ParseLmc(text);
  ASSERT_TRUE(again.ok()) << again.status();
  EXPECT_EQ(FormatLmc(*again), FormatLmc(chain.lmc));
  EXPECT_NE(text.find("start2"), std::string::npos);
}

TEST(DiningTest, FairCoinIsPerfectlyPrivate) {
  for (int n : {2, 3}) {
    const DiningChain chain = *GenerateDining({.n = n, .p = Rational(1, 2)});
    const Partition p = BisimilarityPartition(chain.lmc);
    for (StateId s : chain.start_states) {
      EXPECT_TRUE(p.SameBlock(s, chain.start_states[0])) << "n=" << n;
    }
  }
}

TEST(DiningTest, BiasedCoinLeaks) {
  const DiningChain chain = *GenerateDining({.n = 2, .p = Rational(49, 100)});
  const Partition p = BisimilarityPartition(chain.lmc);
  EXPECT_FALSE(p.SameBlock(chain.start_states[0], chain.start_states[1]));
}

TEST(DiningTest, RejectsBadConfigs) {
  EXPECT_FALSE(GenerateDining({.n = 1, .p = Rational(1, 2)}).ok());
  EXPECT_FALSE(GenerateDining({.n = 2, .p = Rational(0)}).ok());
  EXPECT_FALSE(GenerateDining({.n = 2, .p = Rational(1)}).ok());
}

TEST(RandomChainTest, DeterministicPerSeed) {
  const Lmc a = *GenerateRandom(6, 3, Rational(1, 2), 42);
  const Lmc b = *GenerateRandom(6, 3, Rational(1, 2), 42);
  const Lmc c = *GenerateRandom(6, 3, Rational(1, 2), 43);
  EXPECT_EQ(FormatLmc(a), FormatLmc(b));
  EXPECT_NE(FormatLmc(a), FormatLmc(c));
}

TEST(RandomChainTest, RowsHaveRequestedSupport) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Lmc lmc = *GenerateRandom(7, 2, Rational(2, 5), seed);
    for (StateId s = 0; s < lmc.num_states(); ++s) {
      EXPECT_EQ(lmc.row(s).size(), 3u);  // ceil(2/5 * 7)
      Rational total;
      for (const Transition& t : lmc.row(s)) total += t.probability;
      EXPECT_EQ(total, Rational(1));
    }
  }
}

TEST(RandomChainTest, RejectsBadArguments) {
  EXPECT_FALSE(GenerateRandom(0, 2, Rational(1, 2), 1).ok());
  EXPECT_FALSE(GenerateRandom(3, 0, Rational(1, 2), 1).ok());
  EXPECT_FALSE(GenerateRandom(3, 27, Rational(1, 2), 1).ok());
  EXPECT_FALSE(GenerateRandom(3, 2, Rational(0), 1).ok());
  EXPECT_FALSE(GenerateRandom(3, 2, Rational(3, 2), 1).ok());
}

}  // namespace
}  // namespace privdist
