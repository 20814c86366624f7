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

#include "privdist/rational.h"

#include <random>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "oracles.h"

namespace privdist {
namespace {

using ::testing::HasSubstr;

TEST(RationalTest, CanonicalForm) {
  Rational r(6, -8);
  EXPECT_EQ(r.ToString(), "-3/4");
  EXPECT_EQ(Rational(4, 2).ToString(), "2");
  EXPECT_TRUE(Rational(4, 2).is_integer());
  EXPECT_EQ(r.denominator(), 4);
}

TEST(RationalTest, Arithmetic) {
  const Rational a(1, 3), b(1, 6);
  EXPECT_EQ(a + b, Rational(1, 2));
  EXPECT_EQ(a - b, Rational(1, 6));
  EXPECT_EQ(a * b, Rational(1, 18));
  EXPECT_EQ(a / b, Rational(2));
  EXPECT_EQ(-a, Rational(-1, 3));
  EXPECT_LT(b, a);
  EXPECT_EQ(Max(a, b), a);
  EXPECT_EQ(Min(a, b), b);
}

TEST(RationalTest, CheckedDivision) {
  EXPECT_FALSE(Divide(Rational(1), Rational(0)).ok());
  EXPECT_EQ(*Divide(Rational(1), Rational(4)), Rational(1, 4));
}

TEST(RationalTest, FloorCeil) {
  EXPECT_EQ(Rational(-7, 2).floor(), -4);
  EXPECT_EQ(Rational(-7, 2).ceil(), -3);
  EXPECT_EQ(Rational(3).floor(), 3);
}

TEST(RationalTest, ParsesFractionsIntegersAndDecimals) {
  EXPECT_EQ(*ParseRational("49/100"), Rational(49, 100));
  EXPECT_EQ(*ParseRational(" -12 "), Rational(-12));
  EXPECT_EQ(*ParseRational("0.49"), Rational(49, 100));
  EXPECT_EQ(*ParseRational("1.0002"), Rational(10002, 10000));
  EXPECT_EQ(*ParseRational("-1.5e-3"), Rational(-3, 2000));
  EXPECT_EQ(*ParseRational("2e2"), Rational(200));
}

TEST(RationalTest, RejectsMalformedNumbers) {
  EXPECT_FALSE(ParseRational("").ok());
  EXPECT_FALSE(ParseRational("1/0").ok());
  EXPECT_FALSE(ParseRational("abc").ok());
  EXPECT_FALSE(ParseRational("1/2/3").ok());
  EXPECT_THAT(std::string(ParseRational("1/0").status().message()),
              HasSubstr("zero denominator"));
}

TEST(RationalTest, ToStringRoundTrips) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> num(-100000, 100000);
  std::uniform_int_distribution<std::int64_t> den(1, 100000);
  for (int k = 0; k < 200; ++k) {
    const Rational r(num(rng), den(rng));
    EXPECT_EQ(*ParseRational(r.ToString()), r);
  }
}

TEST(RationalTest, DecimalRendering) {
  EXPECT_EQ(Rational(1, 3).ToDecimal(4), "0.3333");
  EXPECT_EQ(Rational(-1, 8).ToDecimal(3), "-0.125");
}

TEST(BestRationalTest, KnownIntervals) {
  EXPECT_EQ(BestRationalInInterval(Rational(3, 10), Rational(4, 10)),
            Rational(1, 3));
  EXPECT_EQ(BestRationalInInterval(Rational(-1), Rational(1)), Rational(0));
  EXPECT_EQ(BestRationalInInterval(Rational(5, 2), Rational(5, 2)),
            Rational(5, 2));
  EXPECT_EQ(BestRationalInInterval(Rational(-2, 5), Rational(-3, 10)),
            Rational(-1, 3));
  EXPECT_EQ(BestRationalInInterval(Rational(7, 3), Rational(4)), Rational(3));
}

TEST(BestRationalTest, MatchesBruteForce) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::int64_t> num(-300, 300);
  std::uniform_int_distribution<std::int64_t> den(1, 60);
  for (int k = 0; k < 300; ++k) {
    Rational a(num(rng), den(rng)), b(num(rng), den(rng));
    if (b < a) std::swap(a, b);
    EXPECT_EQ(BestRationalInInterval(a, b),
              testing::BruteForceBestRational(a, b))
        << "[" << a << ", " << b << "]";
  }
}

TEST(BestRationalTest, RecoversFromNarrowInterval) {
  const Rational r(355, 113);
  const Rational eps(1, 1000000);
  EXPECT_EQ(BestRationalInInterval(r - eps, r + eps), r);
}

TEST(TaylorTest, LowerBoundsExp) {
  EXPECT_EQ(TaylorLowerBoundExp(Rational(1), 1), Rational(1));
  EXPECT_EQ(TaylorLowerBoundExp(Rational(1), 3), Rational(5, 2));
  EXPECT_EQ(TaylorLowerBoundExp(Rational(0), 5), Rational(1));
  const Rational e10 = TaylorLowerBoundExp(Rational(1), 10);
  EXPECT_LT(e10, Rational(2718282, 1000000));
  EXPECT_GT(e10, Rational(2718281, 1000000));
}

TEST(TaylorTest, DefaultTermsReachTolerance) {
  const Rational eps(1, 5);
  const int terms = DefaultExpTerms(eps);
  const Rational a = TaylorLowerBoundExp(eps, terms);
  const Rational b = TaylorLowerBoundExp(eps, terms + 20);
  EXPECT_LT(b - a, Rational(1, 1'000'000'000'000));
  EXPECT_EQ(DefaultExpTerms(Rational(0)), 1);
}

TEST(DyadicTest, RoundsInTheRequestedDirection) {
  const Rational third(1, 3);
  const Rational down = RoundDownDyadic(third, 8);
  const Rational up = RoundUpDyadic(third, 8);
  EXPECT_LE(down, third);
  EXPECT_GE(up, third);
  EXPECT_EQ(up - down, PowerOfTwo(-8));
  EXPECT_EQ(RoundDownDyadic(Rational(1, 4), 8), Rational(1, 4));
  EXPECT_EQ(PowerOfTwo(-3), Rational(1, 8));
  EXPECT_EQ(PowerOfTwo(4), Rational(16));
}

}  // namespace
}  // namespace privdist
