// Copyright 2026 The Oddball Authors.
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


#include "oddball/core.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "support/oracles.hpp"

namespace oddball {
namespace {

const GFunction kIdentity{GKind::identity};
const GFunction kSquare{GKind::square};
const GFunction kCube{GKind::cube};

std::vector<double> uniform(std::size_t n) {
  return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

TEST(GFunctionTest, EndpointsAndMonotonicity) {
  for (const auto g : {kIdentity, kSquare, kCube}) {
    EXPECT_EQ(g(0.0), 0.0) << g.name();
    EXPECT_EQ(g(1.0), 1.0) << g.name();
    double previous = 0.0;
    for (int i = 0; i <= 1000; ++i) {
      const double value = g(i / 1000.0);
      EXPECT_GE(value, previous) << g.name() << " at " << i;
      previous = value;
    }
  }
}

TEST(GFunctionTest, ParsesNames) {
  EXPECT_EQ(GFunction::parse("square"), kSquare);
  EXPECT_EQ(GFunction::parse("cube")->name(), "cube");
  EXPECT_FALSE(GFunction::parse("sqrt").has_value());
}

TEST(OddballnessTest, TwoPointDistribution) {
  const FullDistribution d1({0.01, 0.99});
  EXPECT_NEAR(oddballness(d1, 0.01), 0.98, 1e-12);
  EXPECT_EQ(oddballness(d1, 0.99), 0.0);
}

TEST(OddballnessTest, ThreePointDistribution) {
  const FullDistribution d3({0.7, 0.25, 0.05});
  EXPECT_EQ(oddballness(d3, 0.7), 0.0);
  EXPECT_NEAR(oddballness(d3, 0.25), 0.45, 1e-12);
  EXPECT_NEAR(oddballness(d3, 0.05), 0.85, 1e-12);
}

TEST(OddballnessTest, UniformDistributionIsNeverOdd) {
  const FullDistribution d2(uniform(100));
  EXPECT_EQ(oddballness(d2, d2.probs()[0]), 0.0);
  for (const auto g : {kSquare, kCube}) {
    EXPECT_EQ(oddballness(d2, d2.probs()[0], g), 0.0);
  }
}

TEST(OddballnessTest, ImpossibleEventIsMaximallyOdd) {
  const FullDistribution d3({0.7, 0.25, 0.05});
  EXPECT_NEAR(oddballness(d3, 0.0), 1.0, 1e-12);
  EXPECT_EQ(oddballness(d3, 0.0, kSquare), 1.0);
}

TEST(OddballnessTest, ProbabilityAboveEveryMemberScoresZero) {
  const FullDistribution d3({0.7, 0.25, 0.05});
  EXPECT_EQ(oddballness(d3, 0.9), 0.0);
}

TEST(OddballnessTest, GeneralFormulaMatchesOracle) {
  const std::vector<double> probs = {0.5, 0.2, 0.2, 0.1};
  const FullDistribution dist(probs);
  for (double p : {0.0, 0.1, 0.2, 0.5}) {
    EXPECT_NEAR(oddballness(dist, p, kSquare),
                testing::oracle_oddballness(probs, p,
                                            [](double x) { return x * x; }),
                1e-12);
    EXPECT_NEAR(oddballness(dist, p, kCube),
                testing::oracle_oddballness(
                    probs, p, [](double x) { return x * x * x; }),
                1e-12);
  }
}

TEST(OddballnessTest, AcceptsArbitraryTransforms) {
  const FullDistribution d3({0.7, 0.25, 0.05});
  const auto sqrt_g = [](double x) { return std::sqrt(x); };
  const double expected = std::sqrt(0.45) / (std::sqrt(0.7) + std::sqrt(0.25) +
                                             std::sqrt(0.05));
  EXPECT_NEAR(oddballness(d3, 0.25, sqrt_g), expected, 1e-12);
}

TEST(OddballnessTest, RenormalizesWithinTolerance) {
  const FullDistribution d({0.7005, 0.25, 0.05});
  double total = 0.0;
  for (double p : d.probs()) total += p;
  EXPECT_NEAR(total, 1.0, 1e-15);
  EXPECT_EQ(d.max(), 0.7005 / 1.0005);
}

TEST(OddballnessTest, SortsDescending) {
  const FullDistribution d({0.05, 0.7, 0.25});
  EXPECT_EQ(d.probs()[0], 0.7);
  EXPECT_EQ(d.probs()[2], 0.05);
}

TEST(OddballnessTest, RejectsBadInput) {
  EXPECT_THROW(FullDistribution({0.5, 0.6}), NormalizationError);
  EXPECT_THROW(FullDistribution({}), InvalidInputError);
  EXPECT_THROW(FullDistribution({0.5, std::nan("")}), InvalidInputError);
  EXPECT_THROW(FullDistribution({1.5, -0.5}), InvalidInputError);
  const FullDistribution d({0.5, 0.5});
  EXPECT_THROW(oddballness(d, std::numeric_limits<double>::infinity()),
               InvalidInputError);
  EXPECT_THROW(oddballness(d, -0.1), InvalidInputError);
  EXPECT_THROW(prob_of_prob(d, 1.1), InvalidInputError);
}

TEST(ProbOfProbTest, Examples) {
  const FullDistribution d3({0.7, 0.25, 0.05});
  EXPECT_NEAR(prob_of_prob(d3, 0.25), 0.55, 1e-12);
  EXPECT_NEAR(prob_of_prob(d3, 0.7), 1.0, 1e-12);
  const FullDistribution d1({0.01, 0.99});
  EXPECT_NEAR(prob_of_prob(d1, 0.01), 0.02, 1e-12);
}

TEST(BoundsTest, ZeroResidualIsExact) {
  const TruncatedDistribution d({0.7, 0.25, 0.05}, 0.0);
  const auto b = oddballness_bounds(d, 0.25);
  EXPECT_NEAR(b.lower, 0.45, 1e-12);
  EXPECT_EQ(b.lower, b.upper);
  EXPECT_TRUE(b.exact);
}

TEST(BoundsTest, ProbabilityAboveStoredHead) {
  const TruncatedDistribution d({0.5}, 0.5);
  const auto b = oddballness_bounds(d, 0.6);
  EXPECT_EQ(b, (OddballnessBounds{0.0, 0.0, true}));
}

TEST(BoundsTest, WorstCasePacking) {
  const TruncatedDistribution d({0.5, 0.3}, 0.2);
  const auto b = oddballness_bounds(d, 0.1);
  EXPECT_NEAR(b.lower, 0.6, 1e-12);
  EXPECT_NEAR(b.upper, 0.7, 1e-12);
  EXPECT_FALSE(b.exact);

  // Completions in steps of 0.01 reach both ends of the interval.
  const auto range = testing::enumerate_completions({0.5, 0.3}, 0.2, 0.1, 0.01);
  EXPECT_NEAR(range.lo, 0.6, 1e-12);
  EXPECT_NEAR(range.hi, 0.7, 1e-12);
}

TEST(BoundsTest, PackingWithSeveralFullOutcomes) {
  // Residual 0.45 packs into 0.2 + 0.2 + 0.05 below a smallest stored 0.2.
  const TruncatedDistribution d({0.35, 0.2}, 0.45);
  const auto b = oddballness_bounds(d, 0.04);
  const auto range =
      testing::enumerate_completions({0.35, 0.2}, 0.45, 0.04, 0.01);
  EXPECT_NEAR(b.lower, range.lo, 1e-12);
  EXPECT_NEAR(b.upper, range.hi, 1e-12);
}

TEST(BoundsTest, NonIdentityBoundsContainTruth) {
  const std::vector<double> full = {0.4, 0.3, 0.1, 0.1, 0.05, 0.05};
  const TruncatedDistribution head({0.4, 0.3, 0.1}, 0.2);
  const FullDistribution dist(full);
  for (const auto g : {kSquare, kCube}) {
    for (double p : full) {
      const auto b = oddballness_bounds(head, p, g);
      const double xi = oddballness(dist, p, g);
      EXPECT_LE(b.lower, xi + 1e-12) << g.name() << " p=" << p;
      EXPECT_GE(b.upper, xi - 1e-12) << g.name() << " p=" << p;
      EXPECT_FALSE(b.exact);
    }
  }
  const TruncatedDistribution whole(full, 0.0);
  const auto b = oddballness_bounds(whole, 0.1, kSquare);
  EXPECT_TRUE(b.exact);
  EXPECT_NEAR(b.lower, oddballness(dist, 0.1, kSquare), 1e-12);
}

TEST(BoundsTest, RejectsResidualBelowZeroHead) {
  EXPECT_THROW(TruncatedDistribution({1.0, 0.0}, 0.0001),
               InvalidTruncationError);
  EXPECT_NO_THROW(TruncatedDistribution({1.0, 0.0}, 0.0));
  EXPECT_THROW(TruncatedDistribution({0.2, 0.5}, 0.3), InvalidInputError);
  EXPECT_THROW(TruncatedDistribution({0.5, 0.3}, 0.7), NormalizationError);
  EXPECT_THROW(TruncatedDistribution({}, 1.0), InvalidInputError);
}

TEST(BoundsTest, KeepsInputMass) {
  const TruncatedDistribution d({0.5, 0.3}, 0.2008);
  EXPECT_DOUBLE_EQ(d.input_mass(), 1.0008);
  EXPECT_DOUBLE_EQ(d.top()[0], 0.5 / 1.0008);
}

TEST(RankTest, Examples) {
  const TruncatedDistribution d({0.7, 0.25, 0.05}, 0.0);
  EXPECT_EQ(rank_of(d, 0.25), Rank(2));
  EXPECT_EQ(rank_of(d, 0.7), Rank(1));
  EXPECT_TRUE(rank_of(d, 0.01).beyond_k());
  EXPECT_EQ(rank_of(d, 0.05), Rank(3));
  EXPECT_TRUE(std::isinf(Rank::beyond().as_score()));
}

TEST(RankTest, TiesCountOnlyStrictlyGreater) {
  const TruncatedDistribution d({0.4, 0.2, 0.2, 0.2}, 0.0);
  EXPECT_EQ(rank_of(d, 0.2), Rank(2));
}

}  // namespace
}  // namespace oddball
