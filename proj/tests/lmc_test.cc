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

#include "privdist/lmc.h"

#include <string>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "oracles.h"

namespace privdist {
namespace {

using ::testing::HasSubstr;

constexpr char kSwappedOdds[] = R"(lmc v1
alphabet a b c
state s0 a
state s1 a
state s2 b
state s3 c
trans s0 s2 2/5
trans s0 s3 3/5
trans s1 s2 3/5
trans s1 s3 2/5
trans s2 s2 1
trans s3 s3 1
)";

std::string StatusText(const absl::Status& s) {
  return std::string(s.message());
}

TEST(LmcParseTest, ReadsTextFormat) {
  absl::StatusOr<Lmc> lmc = ParseLmc(kSwappedOdds);
  ASSERT_TRUE(lmc.ok()) << lmc.status();
  EXPECT_EQ(lmc->num_states(), 4);
  EXPECT_EQ(lmc->alphabet_size(), 3);
  EXPECT_EQ(lmc->label_name(2), "b");
  EXPECT_EQ(*lmc->FindState("s3"), 3);
  EXPECT_FALSE(lmc->FindState("s9").has_value());
  const std::vector<Rational> mu = lmc->Distribution(0);
  EXPECT_EQ(mu[2], Rational(2, 5));
  EXPECT_EQ(mu[3], Rational(3, 5));
  EXPECT_EQ(mu[0], Rational(0));
}

TEST(LmcParseTest, LoadsShippedFile) {
  absl::StatusOr<Lmc> lmc = LoadLmcFile(PRIVDIST_DATA_DIR "/swapped_odds.lmc");
  ASSERT_TRUE(lmc.ok()) << lmc.status();
  EXPECT_EQ(lmc->num_states(), 4);
}

TEST(LmcParseTest, RejectsBrokenChains) {
  const std::string base = "lmc v1\nalphabet a\nstate x a\n";
  EXPECT_THAT(StatusText(ParseLmc(base + "trans x x 1/2\n").status()),
              HasSubstr("sum"));
  EXPECT_THAT(StatusText(ParseLmc("lmc v1\nalphabet a\nstate x z\n"
                                  "trans x x 1\n")
                             .status()),
              HasSubstr("unknown label"));
  EXPECT_THAT(StatusText(ParseLmc(base + "trans x y 1\n").status()),
              HasSubstr("unknown state"));
  EXPECT_THAT(StatusText(ParseLmc(base + "state x a\ntrans x x 1\n").status()),
              HasSubstr("duplicate state"));
  EXPECT_FALSE(ParseLmc(base + "trans x x 3/2\n").ok());
  EXPECT_FALSE(ParseLmc("alphabet a\nstate x a\ntrans x x 1\n").ok());
}

TEST(LmcParseTest, ErrorsCarryLineNumbers) {
  absl::StatusOr<Lmc> lmc =
      ParseLmc("lmc v1\nalphabet a\nstate x a\ntrans x q 1\n");
  ASSERT_FALSE(lmc.ok());
  EXPECT_THAT(StatusText(lmc.status()), HasSubstr("4"));
}

TEST(LmcFormatTest, TextAndJsonRoundTrip) {
  const Lmc lmc = *ParseLmc(kSwappedOdds);
  const Lmc again = *ParseLmc(FormatLmc(lmc));
  EXPECT_EQ(FormatLmc(again), FormatLmc(lmc));
  const Lmc from_json = *ParseLmcJson(FormatLmcJson(lmc));
  EXPECT_EQ(FormatLmc(from_json), FormatLmc(lmc));
  for (const Lmc& chain : testing::RandomCorpus(5, 5, 100)) {
    EXPECT_EQ(FormatLmc(*ParseLmcJson(FormatLmcJson(chain))), FormatLmc(chain));
  }
}

TEST(LmcFormatTest, DotMentionsEveryState) {
  const std::string dot = FormatDot(*ParseLmc(kSwappedOdds));
  EXPECT_THAT(dot, HasSubstr("digraph"));
  EXPECT_THAT(dot, HasSubstr("s3"));
  EXPECT_THAT(dot, HasSubstr("2/5"));
}

TEST(LmcBuilderTest, AccumulatesRepeatedTransitions) {
  LmcBuilder b;
  b.AddSymbol("a");
  const StateId x = b.AddState("x", "a");
  b.AddTransition(x, x, Rational(1, 2));
  b.AddTransition(x, x, Rational(1, 2));
  absl::StatusOr<Lmc> lmc = b.Build();
  ASSERT_TRUE(lmc.ok()) << lmc.status();
  ASSERT_EQ(lmc->row(x).size(), 1u);
  EXPECT_EQ(lmc->row(x)[0].probability, Rational(1));
}

TEST(HorizonTest, MassesSumToOneAndExtendConsistently) {
  for (const Lmc& lmc : testing::RandomCorpus(4, 6, 200)) {
    for (StateId s = 0; s < lmc.num_states(); ++s) {
      HorizonDistribution prev = *ComputeHorizonDistribution(lmc, s, 0);
      for (int h = 1; h <= 5; ++h) {
        const HorizonDistribution cur = *ComputeHorizonDistribution(lmc, s, h);
        Rational total;
        std::map<Trace, Rational> collapsed;
        for (const auto& [u, m] : cur.mass) {
          EXPECT_EQ(static_cast<int>(u.size()), h);
          total += m;
          collapsed[Trace(u.begin(), u.end() - 1)] += m;
        }
        EXPECT_EQ(total, Rational(1));
        EXPECT_EQ(collapsed, prev.mass);
        prev = cur;
      }
    }
  }
}

TEST(HorizonTest, SwappedOddsCylinders) {
  const Lmc lmc = *ParseLmc(kSwappedOdds);
  const HorizonDistribution d = *ComputeHorizonDistribution(lmc, 0, 3);
  ASSERT_EQ(d.mass.size(), 2u);
  EXPECT_EQ(d.mass.at(Trace{0, 1, 1}), Rational(2, 5));
  EXPECT_EQ(d.mass.at(Trace{0, 2, 2}), Rational(3, 5));
  EXPECT_FALSE(ComputeHorizonDistribution(lmc, 0, -1).ok());
  EXPECT_FALSE(ComputeHorizonDistribution(lmc, 7, 1).ok());
}

TEST(HorizonTest, ExplosionLimit) {
  const Lmc lmc = testing::RandomCorpus(6, 1, 5)[0];
  HorizonOptions options;
  options.explosion_limit = 3;
  absl::StatusOr<HorizonDistribution> loose =
      ComputeHorizonDistribution(lmc, 0, 6, options);
  ASSERT_TRUE(loose.ok());
  EXPECT_TRUE(loose->limit_exceeded);
  options.strict = true;
  EXPECT_EQ(ComputeHorizonDistribution(lmc, 0, 6, options).status().code(),
            absl::StatusCode::kResourceExhausted);
}

TEST(BisimulationTest, SwappedOddsSeparatesTheTwoAStates) {
  const Partition p = BisimilarityPartition(*ParseLmc(kSwappedOdds));
  EXPECT_EQ(p.num_blocks, 4);
  EXPECT_FALSE(p.SameBlock(0, 1));
}

TEST(BisimulationTest, MergesStatesWithEqualBlockMass) {
  LmcBuilder b;
  b.AddSymbol("a");
  b.AddSymbol("b");
  const StateId x = b.AddState("x", "a");
  const StateId y = b.AddState("y", "a");
  const StateId u = b.AddState("u", "b");
  const StateId v = b.AddState("v", "b");
  b.AddTransition(x, u, Rational(1));
  b.AddTransition(y, u, Rational(1, 2));
  b.AddTransition(y, v, Rational(1, 2));
  b.AddTransition(u, u, Rational(1));
  b.AddTransition(v, v, Rational(1));
  const Partition p = BisimilarityPartition(*b.Build());
  EXPECT_TRUE(p.SameBlock(x, y));
  EXPECT_TRUE(p.SameBlock(u, v));
  EXPECT_EQ(p.num_blocks, 2);
  EXPECT_THAT(p.Blocks(), ::testing::ElementsAre(::testing::ElementsAre(0, 1),
                                                 ::testing::ElementsAre(2, 3)));
}

TEST(BisimulationTest, PartitionProperties) {
  for (const Lmc& lmc : testing::RandomCorpus(5, 20, 300)) {
    const Partition p = BisimilarityPartition(lmc);
    const Partition again = RefinePartition(lmc, p);
    EXPECT_EQ(again.num_blocks, p.num_blocks);
    const int n = lmc.num_states();
    for (StateId s = 0; s < n; ++s) {
      for (StateId t = 0; t < n; ++t) {
        EXPECT_EQ(again.SameBlock(s, t), p.SameBlock(s, t));
        if (p.SameBlock(s, t)) {
          EXPECT_EQ(lmc.label(s), lmc.label(t));
          for (int h = 1; h <= 4; ++h) {
            EXPECT_EQ(ComputeHorizonDistribution(lmc, s, h)->mass,
                      ComputeHorizonDistribution(lmc, t, h)->mass);
          }
        }
        if (lmc.label(s) == lmc.label(t) &&
            lmc.Distribution(s) == lmc.Distribution(t)) {
          EXPECT_TRUE(p.SameBlock(s, t));
        }
      }
    }
  }
}

}  // namespace
}  // namespace privdist
