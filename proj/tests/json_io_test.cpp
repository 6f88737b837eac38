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

#include "shinohara/json_io.hpp"

#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"

namespace shinohara {
namespace {

TEST(ProfileJsonTest, RoundTripsEveryKind) {
  std::mt19937_64 gen(41);
  const std::vector<MarkovProfile> profiles = {
      ProfileSymmetricSpe(7),
      ProfileCombo(6, {{3, 0.1}, {4, 0.2}, {5, 0.3}, {6, 0.4}}, SelectionRule::Priority({4, 2})),
      ProfileTwoPaper(5, SelectionRule::HighestIndex()),
      testing::RandomExplicitProfile(5, gen)};
  for (const MarkovProfile& profile : profiles) {
    const Json encoded = ToJson(profile);
    EXPECT_EQ(ProfileFromJson(Json::parse(encoded.dump())), profile) << encoded.dump();
  }
}

TEST(ProfileJsonTest, ExplicitKeysAreCommaJoined) {
  const Json encoded = ToJson(ProfileConstant(4, 0.5).ToExplicit());
  EXPECT_EQ(encoded["kind"], "explicit");
  EXPECT_EQ(encoded["universe"], 4);
  EXPECT_TRUE(encoded["states"].contains("0,2,3"));
  EXPECT_TRUE(encoded["states"].contains("0,1,2,3"));
  EXPECT_EQ(encoded["states"]["1,2,3"], Json::array({0.5, 0.5, 0.5}));
}

TEST(ProfileJsonTest, ParsesHandWrittenDocuments) {
  const MarkovProfile sym = ProfileFromJson(Json::parse(
      R"({"universe": 4, "kind": "size_symmetric", "paper": {"3": 0.5, "4": 0.25}})"));
  EXPECT_EQ(sym.PaperProbability(GameState::Full(4), PlayerId{2}), 0.25);
  const MarkovProfile role = ProfileFromJson(Json::parse(
      R"({"universe": 4, "kind": "role_based", "selection": "highest_index",
          "roles": {"3": [1.0], "4": [1.0, 0.5]}})"));
  EXPECT_EQ(role.StateProbabilities(GameState::Full(4)),
            (std::vector<double>{0, 0, 0.5, 1}));
}

TEST(ProfileJsonTest, Diagnostics) {
  const char* bad[] = {
      R"([1, 2])",
      R"({"kind": "size_symmetric", "paper": {}})",
      R"({"universe": 4, "paper": {}})",
      R"({"universe": 4, "kind": "mystery"})",
      R"({"universe": 4, "kind": "size_symmetric", "paper": {"3": 0.5}})",
      R"({"universe": 3, "kind": "size_symmetric", "paper": {"3": "half"}})",
      R"({"universe": 3, "kind": "size_symmetric", "paper": {"x": 0.5}})",
      R"({"universe": 3, "kind": "size_symmetric", "paper": {"3": 1.5}})",
      R"({"universe": 3, "kind": "role_based", "selection": "random", "roles": {}})",
      R"({"universe": 3, "kind": "explicit", "states": {"0,1": [0.5, 0.5]}})",
      R"({"universe": 3, "kind": "explicit", "states": {"0;1;2": [0.5, 0.5, 0.5]}})",
      R"({"universe": 2, "kind": "size_symmetric", "paper": {}})",
  };
  for (const char* text : bad) {
    EXPECT_THROW(ProfileFromJson(Json::parse(text)), ParseError) << text;
  }
}

TEST(ResolutionJsonTest, Shapes) {
  EXPECT_EQ(ToJson(RoundResolution{Repeat{}, {}}).dump(),
            R"({"kind":"repeat","eliminated":[]})");
  EXPECT_EQ(ToJson(RoundResolution{Winner{PlayerId{3}}, {}}).dump(),
            R"({"kind":"winner","winner":3,"eliminated":[]})");
  EXPECT_EQ(ToJson(RoundResolution{SplitTwo{PlayerId{1}, PlayerId{4}},
                                   {PlayerId{0}, PlayerId{2}, PlayerId{3}}})
                .dump(),
            R"({"kind":"split_two","pair":[1,4],"eliminated":[0,2,3]})");
  EXPECT_EQ(ToJson(RoundResolution{Continue{GameState({2, 3, 5})}, {PlayerId{0}, PlayerId{1}}})
                .dump(),
            R"({"kind":"continue","survivors":[2,3,5],"eliminated":[0,1]})");
}

TEST(SimStatsJsonTest, ContainsAllFields) {
  const Json stats = ToJson(RunTrials(ProfileTwoPaper(4), 4, 10, 5));
  for (const char* field :
       {"trials", "master_seed", "universe", "max_rounds", "win_frequency", "mean_payoff",
        "round_count_histogram", "total_rounds", "repeat_count", "split_count",
        "truncation_count"}) {
    EXPECT_TRUE(stats.contains(field)) << field;
  }
  EXPECT_EQ(stats["round_count_histogram"]["1"], 10);
}

}  // namespace
}  // namespace shinohara
