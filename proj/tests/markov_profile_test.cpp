// Copyright 2026 The Shinohara RPS Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "shinohara/markov_profile.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "shinohara/game_core.hpp"

namespace shinohara {
namespace {

TEST(SymmetricSpeTest, UsesPhiPerSize) {
  const MarkovProfile profile = ProfileSymmetricSpe(5);
  EXPECT_NEAR(profile.PaperProbability(GameState({0, 1, 4}), PlayerId{4}), 0.5, 1e-12);
  EXPECT_NEAR(profile.PaperProbability(GameState({0, 1, 2, 4}), PlayerId{0}),
              (3 - std::sqrt(5.0)) / 2, 1e-12);
  EXPECT_NEAR(profile.PaperProbability(GameState::Full(5), PlayerId{3}), 1.0 / 3, 1e-12);
  EXPECT_TRUE(profile.IsTotallyMixed());
  EXPECT_EQ(ProfileSymmetricSpe(3).StateProbabilities(GameState::Full(3)).size(), 3u);
  EXPECT_THROW(ProfileSymmetricSpe(2), ContractViolation);
}

TEST(OnePaperTest, DesignatesLowestSurvivor) {
  const MarkovProfile profile = ProfileOnePaper(5);
  EXPECT_EQ(profile.StateProbabilities(GameState::Full(5)),
            (std::vector<double>{1, 0, 0, 0, 0}));
  EXPECT_EQ(profile.StateProbabilities(GameState({1, 3, 4})),
            (std::vector<double>{1, 0, 0}));
  EXPECT_FALSE(profile.IsTotallyMixed());
}

TEST(OnePaperTest, SelectionRulePermutesDesignation) {
  const MarkovProfile lowest = ProfileOnePaper(5, SelectionRule::LowestIndex());
  const MarkovProfile highest = ProfileOnePaper(5, SelectionRule::HighestIndex());
  for (std::uint64_t mask : EnumerateStateMasks(5)) {
    const GameState state = GameState::FromMask(mask);
    auto low = lowest.StateProbabilities(state);
    const auto high = highest.StateProbabilities(state);
    std::reverse(low.begin(), low.end());
    EXPECT_EQ(low, high) << state.Key();
  }
  const MarkovProfile priority = ProfileOnePaper(5, SelectionRule::Priority({3, 1}));
  EXPECT_EQ(priority.StateProbabilities(GameState::Full(5)),
            (std::vector<double>{0, 0, 0, 1, 0}));
  EXPECT_EQ(priority.StateProbabilities(GameState({0, 1, 2})),
            (std::vector<double>{0, 1, 0}));
  EXPECT_EQ(priority.StateProbabilities(GameState({0, 2, 4})),
            (std::vector<double>{1, 0, 0}));
}

TEST(TwoPaperTest, TwoDesignatedPlayers) {
  const MarkovProfile profile = ProfileTwoPaper(6);
  EXPECT_EQ(profile.StateProbabilities(GameState::Full(6)),
            (std::vector<double>{1, 1, 0, 0, 0, 0}));
  EXPECT_EQ(profile.StateProbabilities(GameState({2, 4, 5})),
            (std::vector<double>{1, 1, 0}));
}

TEST(ComboTest, EndpointsMatchPureFamilies) {
  for (int universe = 3; universe <= 8; ++universe) {
    EXPECT_EQ(ProfileCombo(universe, 0.0), ProfileOnePaper(universe));
    EXPECT_EQ(ProfileCombo(universe, 1.0), ProfileTwoPaper(universe));
    EXPECT_EQ(ProfileCombo(universe, 0.0, SelectionRule::HighestIndex()),
              ProfileOnePaper(universe, SelectionRule::HighestIndex()));
  }
}

TEST(ComboTest, PerSizeProbabilities) {
  const MarkovProfile profile = ProfileCombo(5, {{3, 0.2}, {4, 0.4}, {5, 0.6}});
  EXPECT_EQ(profile.StateProbabilities(GameState({1, 2, 3})),
            (std::vector<double>{1, 0.2, 0}));
  EXPECT_EQ(profile.StateProbabilities(GameState::Full(5)),
            (std::vector<double>{1, 0.6, 0, 0, 0}));
}

TEST(ComboTest, RejectsBadQ) {
  EXPECT_THROW(ProfileCombo(5, 1.5), std::domain_error);
  EXPECT_THROW(ProfileCombo(5, -0.1), std::domain_error);
  EXPECT_THROW(ProfileCombo(5, {{3, 0.2}, {4, 0.4}}), ContractViolation);
}

TEST(MarkovProfileTest, ValidatesRepresentations) {
  EXPECT_THROW(MarkovProfile(4, SizeSymmetric{{{3, 0.5}}}), ContractViolation);
  EXPECT_THROW(MarkovProfile(3, SizeSymmetric{{{3, 1.2}}}), std::domain_error);
  EXPECT_THROW(MarkovProfile(3, SizeSymmetric{{{3, 0.5}, {4, 0.5}}}), ContractViolation);
  RoleBased too_many;
  too_many.roles[3] = {1, 1, 1, 1};
  EXPECT_THROW(MarkovProfile(4, too_many), ContractViolation);
  Explicit partial;
  partial.paper[GameState::Full(3)] = {0.5, 0.5, 0.5};
  EXPECT_THROW(MarkovProfile(4, partial), ContractViolation);
  Explicit wrong_width;
  wrong_width.paper[GameState::Full(3)] = {0.5, 0.5};
  EXPECT_THROW(MarkovProfile(3, wrong_width), ContractViolation);
}

TEST(MarkovProfileTest, LookupErrors) {
  const MarkovProfile profile = ProfileSymmetricSpe(4);
  EXPECT_THROW(profile.StateProbabilities(GameState({0, 1})), ContractViolation);
  EXPECT_THROW(profile.StateProbabilities(GameState({0, 1, 5})), ContractViolation);
  EXPECT_THROW(profile.PaperProbability(GameState({0, 1, 2}), PlayerId{3}),
               ContractViolation);
}

TEST(MarkovProfileTest, ToExplicitPreservesProbabilities) {
  for (const MarkovProfile& profile :
       {ProfileSymmetricSpe(5), ProfileCombo(5, 0.3, SelectionRule::HighestIndex())}) {
    const MarkovProfile table = profile.ToExplicit();
    EXPECT_EQ(table.KindName(), "explicit");
    for (std::uint64_t mask : EnumerateStateMasks(5)) {
      const GameState state = GameState::FromMask(mask);
      EXPECT_EQ(table.StateProbabilities(state), profile.StateProbabilities(state));
    }
    EXPECT_EQ(table.IsTotallyMixed(), profile.IsTotallyMixed());
  }
}

TEST(MarkovProfileTest, EnumeratesStatesBySize) {
  const auto masks = EnumerateStateMasks(5);
  EXPECT_EQ(masks.size(), 10u + 5u + 1u);
  for (std::size_t k = 1; k < masks.size(); ++k) {
    EXPECT_LE(std::popcount(masks[k - 1]), std::popcount(masks[k]));
  }
  EXPECT_THROW(EnumerateStateMasks(13), CapacityError);
}

}  // namespace
}  // namespace shinohara
