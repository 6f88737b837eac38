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

#include "shinohara/markov_values.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "test_util.hpp"

namespace shinohara {
namespace {

using testing::RandomExplicitProfile;
using testing::ValueIterationOracle;

void ExpectConservation(const MarkovProfile& profile, const ValueTable& values) {
  for (std::uint64_t mask : EnumerateStateMasks(profile.universe())) {
    const GameState state = GameState::FromMask(mask);
    const auto rho = values.StateValues(state);
    EXPECT_NEAR(std::accumulate(rho.begin(), rho.end(), 0.0), 1.0, 1e-10)
        << state.Key();
  }
}

TEST(ComputeValuesTest, SymmetricSpeIsFair) {
  for (int universe = 3; universe <= 8; ++universe) {
    const ValueTable values = ComputeValues(ProfileSymmetricSpe(universe));
    for (std::uint64_t mask : EnumerateStateMasks(universe)) {
      const GameState state = GameState::FromMask(mask);
      for (double rho : values.StateValues(state)) {
        EXPECT_NEAR(rho, 1.0 / state.size(), 1e-10);
      }
    }
  }
}

TEST(ComputeValuesTest, AllRockPaysSharedPayoff) {
  const ValueTable values = ComputeValues(ProfileAllRock(4));
  for (double rho : values.StateValues(GameState::Full(4))) EXPECT_DOUBLE_EQ(rho, 0.25);
  const ValueTable explicit_values = ComputeValues(ProfileAllRock(4).ToExplicit());
  for (double rho : explicit_values.StateValues(GameState::Full(4))) {
    EXPECT_DOUBLE_EQ(rho, 0.25);
  }
}

TEST(ComputeValuesTest, OnePaperDesignatedPlayerWins) {
  const ValueTable values = ComputeValues(ProfileOnePaper(5));
  EXPECT_EQ(values.StateValues(GameState::Full(5)), (std::vector<double>{1, 0, 0, 0, 0}));
  EXPECT_EQ(values.StateValues(GameState({2, 3, 4})), (std::vector<double>{1, 0, 0}));
}

TEST(ComputeValuesTest, TwoPaperValues) {
  const ValueTable values = ComputeValues(ProfileTwoPaper(6));
  EXPECT_EQ(values.StateValues(GameState({0, 1, 2})), (std::vector<double>{0, 0, 1}));
  EXPECT_EQ(values.StateValues(GameState({0, 1, 2, 3})),
            (std::vector<double>{0, 0, 0.5, 0.5}));
  // Six players: {2,3,4,5} continue, where 2 and 3 are designated and 4, 5
  // split.
  EXPECT_EQ(values.StateValues(GameState::Full(6)),
            (std::vector<double>{0, 0, 0, 0, 0.5, 0.5}));
}

TEST(ComputeValuesTest, MatchesValueIterationOracle) {
  std::mt19937_64 gen(7);
  for (int universe = 3; universe <= 5; ++universe) {
    for (int trial = 0; trial < 3; ++trial) {
      const MarkovProfile profile = RandomExplicitProfile(universe, gen, 0.1, 0.9);
      const ValueTable values = ComputeValues(profile);
      for (const auto& [state, expected] : ValueIterationOracle(profile)) {
        const auto rho = values.StateValues(state);
        for (int k = 0; k < state.size(); ++k) {
          EXPECT_NEAR(rho[k], expected[k], 1e-12) << state.Key() << " #" << k;
        }
      }
    }
  }
}

TEST(ComputeValuesTest, RoleBasedMatchesOracle) {
  const MarkovProfile profile =
      ProfileCombo(5, {{3, 0.3}, {4, 0.6}, {5, 0.9}}, SelectionRule::HighestIndex());
  const ValueTable values = ComputeValues(profile);
  for (const auto& [state, expected] : ValueIterationOracle(profile)) {
    const auto rho = values.StateValues(state);
    for (int k = 0; k < state.size(); ++k) EXPECT_NEAR(rho[k], expected[k], 1e-12);
  }
}

TEST(ComputeValuesTest, SymmetricPathMatchesPerStatePath) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (int universe = 3; universe <= 8; ++universe) {
    SizeSymmetric sym;
    for (int n = 3; n <= universe; ++n) sym.paper[n] = dist(gen);
    const MarkovProfile profile(universe, sym);
    const ValueTable fast = ComputeValues(profile);
    const ValueTable slow = ComputeValues(profile.ToExplicit());
    EXPECT_TRUE(fast.by_size());
    EXPECT_FALSE(slow.by_size());
    for (std::uint64_t mask : EnumerateStateMasks(universe)) {
      const GameState state = GameState::FromMask(mask);
      const auto a = fast.StateValues(state);
      const auto b = slow.StateValues(state);
      for (int k = 0; k < state.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-12);
    }
  }
}

TEST(ComputeValuesTest, ConservationOnRandomProfiles) {
  std::mt19937_64 gen(3);
  for (int universe = 3; universe <= 7; ++universe) {
    const MarkovProfile profile = RandomExplicitProfile(universe, gen, 0.0, 1.0);
    ExpectConservation(profile, ComputeValues(profile));
  }
  for (double q : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const MarkovProfile profile = ProfileCombo(7, q);
    ExpectConservation(profile, ComputeValues(profile));
  }
}

TEST(ComputeValuesTest, PermutationEquivariance) {
  std::mt19937_64 gen(5);
  constexpr int kUniverse = 4;
  for (int trial = 0; trial < 10; ++trial) {
    const MarkovProfile profile = RandomExplicitProfile(kUniverse, gen);
    std::vector<int> sigma(kUniverse);
    std::iota(sigma.begin(), sigma.end(), 0);
    std::shuffle(sigma.begin(), sigma.end(), gen);

    // Player i of the original game is player sigma[i] of the relabeled one.
    auto relabel = [&](const GameState& state) {
      std::vector<int> ids;
      for (PlayerId p : state.survivors()) ids.push_back(sigma[p.value]);
      return GameState(ids);
    };
    Explicit permuted;
    for (const auto& [state, probs] : std::get<Explicit>(profile.representation()).paper) {
      const GameState image = relabel(state);
      std::vector<double> moved(state.size());
      for (int k = 0; k < state.size(); ++k) {
        moved[image.PositionOf(PlayerId{sigma[state.survivors()[k].value]})] = probs[k];
      }
      permuted.paper.emplace(image, moved);
    }
    const ValueTable original = ComputeValues(profile);
    const ValueTable image = ComputeValues(MarkovProfile(kUniverse, permuted));
    for (std::uint64_t mask : EnumerateStateMasks(kUniverse)) {
      const GameState state = GameState::FromMask(mask);
      for (PlayerId p : state.survivors()) {
        EXPECT_NEAR(original.Value(state, p),
                    image.Value(relabel(state), PlayerId{sigma[p.value]}), 1e-13);
      }
    }
  }
}

TEST(ComputeValuesTest, CapacityLimits) {
  EXPECT_THROW(ComputeValues(ProfileOnePaper(kMaxEnumeratedUniverse + 1)), CapacityError);
  EXPECT_THROW(ComputeValues(ProfileSymmetricSpe(kMaxStateSize + 1)), CapacityError);
  EXPECT_NO_THROW(ComputeValues(ProfileSymmetricSpe(kMaxStateSize)));
}

TEST(ValueTableTest, TwoPlayerStatesSplit) {
  const ValueTable values = ComputeValues(ProfileSymmetricSpe(4));
  EXPECT_DOUBLE_EQ(values.Value(GameState({1, 3}), PlayerId{3}), 0.5);
  EXPECT_THROW(values.Value(GameState({1, 3}), PlayerId{2}), ContractViolation);
}

TEST(VerifyOneShotTest, SymmetricSpeHasNoProfitableDeviation) {
  for (int universe = 3; universe <= 8; ++universe) {
    const DeviationReport report = VerifyOneShot(ProfileSymmetricSpe(universe));
    EXPECT_TRUE(report.Passed()) << universe;
    EXPECT_EQ(report.entries.size(), static_cast<std::size_t>(universe - 2));
    const DeviationReport per_state = VerifyOneShot(ProfileSymmetricSpe(universe).ToExplicit());
    EXPECT_TRUE(per_state.Passed()) << universe;
    EXPECT_LT(per_state.MaxGain(), 1e-12);
  }
}

TEST(VerifyOneShotTest, AllRockIsFlagged) {
  for (const MarkovProfile& profile : {ProfileAllRock(4), ProfileAllRock(4).ToExplicit()}) {
    const DeviationReport report = VerifyOneShot(profile);
    EXPECT_FALSE(report.Passed());
    const DeviationEntry* full = report.Find(GameState::Full(4), PlayerId{0});
    ASSERT_NE(full, nullptr);
    EXPECT_TRUE(full->flagged);
    EXPECT_NEAR(full->gain, 1.0 - 1.0 / 4, 1e-12);
    EXPECT_DOUBLE_EQ(full->value_paper, 1.0);
  }
}

TEST(VerifyOneShotTest, AsymmetricFamiliesPass) {
  for (int universe = 3; universe <= 8; ++universe) {
    EXPECT_TRUE(VerifyOneShot(ProfileOnePaper(universe)).Passed());
    EXPECT_TRUE(VerifyOneShot(ProfileTwoPaper(universe)).Passed());
    EXPECT_TRUE(VerifyOneShot(ProfileOnePaper(universe, SelectionRule::HighestIndex())).Passed());
  }
  EXPECT_TRUE(VerifyOneShot(ProfileCombo(6, 0.37)).Passed());
  EXPECT_TRUE(VerifyOneShot(ProfileCombo(6, {{3, 0.1}, {4, 0.9}, {5, 0.5}, {6, 0.0}})).Passed());
}

TEST(VerifyOneShotTest, ValueDecompositionAndNonNegativeGain) {
  std::mt19937_64 gen(13);
  std::vector<MarkovProfile> profiles = {ProfileCombo(6, 0.37), ProfileTwoPaper(5),
                                         ProfileAllRock(5), ProfileSymmetricSpe(6)};
  for (int universe = 3; universe <= 6; ++universe) {
    profiles.push_back(RandomExplicitProfile(universe, gen, 0.0, 1.0));
  }
  for (const MarkovProfile& profile : profiles) {
    const ValueTable values = ComputeValues(profile);
    const DeviationReport report = VerifyOneShot(profile);
    for (const auto& e : report.entries) {
      EXPECT_NEAR(e.profile_value,
                  e.paper_probability * e.value_paper +
                      (1 - e.paper_probability) * e.value_rock,
                  1e-10)
          << e.state.Key() << " player " << e.player.value;
      EXPECT_DOUBLE_EQ(e.profile_value, values.Value(e.state, e.player));
      EXPECT_GE(e.gain, -report.epsilon);
    }
  }
}

TEST(VerifyOneShotTest, BiasedSymmetricProfileIsFlagged) {
  SizeSymmetric sym = std::get<SizeSymmetric>(ProfileSymmetricSpe(5).representation());
  sym.paper[4] += 0.05;
  const DeviationReport report = VerifyOneShot(MarkovProfile(5, sym));
  EXPECT_FALSE(report.Passed());
}

}  // namespace
}  // namespace shinohara
