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

#ifndef SHINOHARA_MARKOV_VALUES_HPP_
#define SHINOHARA_MARKOV_VALUES_HPP_

// Exact winning probabilities under a Markov profile, and the one-shot
// deviation check built on them.
//
// Values are computed state by state in ascending size. In a state N every
// action profile is enumerated; the mass of direct wins and of transitions
// into already-solved smaller states gives D_i, the mass of repeated rounds
// gives R, and rho_iN = D_i / (1 - R). A profile that repeats with
// certainty pays 1/|N| to each survivor.
//
// The verifier certifies that no player gains by changing their action in a
// single state while everybody (themselves included) follows the profile
// afterwards. It does not establish unimprovability against arbitrary
// multi-state deviations.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "shinohara/errors.hpp"
#include "shinohara/game_core.hpp"
#include "shinohara/markov_profile.hpp"

namespace shinohara {

class ValueTable {
 public:
  int universe() const { return universe_; }
  bool by_size() const { return !by_size_.empty(); }

  // rho for `player` in `state`; a two-player state is worth 1/2.
  double Value(const GameState& state, PlayerId player) const {
    const int position = state.PositionOf(player);
    if (position < 0) {
      throw ContractViolation("ValueTable: player " +
                              std::to_string(player.value) + " not in " +
                              state.Key());
    }
    return StateValues(state)[position];
  }

  std::vector<double> StateValues(const GameState& state) const {
    const int n = state.size();
    if (state.survivors().back().value >= universe_) {
      throw ContractViolation("ValueTable: state " + state.Key() +
                              " outside universe");
    }
    if (n == 1) return {1.0};
    if (n == 2) return {0.5, 0.5};
    if (by_size()) return std::vector<double>(n, by_size_[n]);
    return by_mask_[state.Mask()];
  }

 private:
  friend ValueTable ComputeValues(const MarkovProfile& profile);

  int universe_ = 0;
  std::vector<double> by_size_;                 // exchangeable profiles
  std::vector<std::vector<double>> by_mask_;    // everything else
};

namespace detail {

inline void CheckCapacity(const MarkovProfile& profile) {
  if (profile.IsSizeSymmetric()) {
    if (profile.universe() > kMaxStateSize) {
      throw CapacityError("size-symmetric profiles limited to universe <= " +
                          std::to_string(kMaxStateSize));
    }
  } else if (profile.universe() > kMaxEnumeratedUniverse) {
    throw CapacityError("state-dependent profiles limited to universe <= " +
                        std::to_string(kMaxEnumeratedUniverse));
  }
}

inline double BinomialCoefficient(int n, int k) {
  double result = 1.0;
  for (int j = 1; j <= k; ++j) result = result * (n - k + j) / j;
  return result;
}

// Payoff of the player at `position` from one round of `state` in which the
// survivors at the set bits of `papers` show paper. Repeated rounds are
// reported through `repeated` and contribute nothing.
inline double RoundPayoff(std::span<const PlayerId> survivors,
                          std::uint64_t papers, int position,
                          const ValueTable& values, bool& repeated) {
  const int n = static_cast<int>(survivors.size());
  const int paper_count = std::popcount(papers);
  const bool mine_paper = papers >> position & 1u;
  repeated = false;
  switch (ClassifyRound(n, paper_count)) {
    case ResolutionKind::kRepeat:
      repeated = true;
      return 0.0;
    case ResolutionKind::kWinner:
      return (paper_count == 1) == mine_paper ? 1.0 : 0.0;
    case ResolutionKind::kSplitTwo:
      return mine_paper ? 0.0 : 0.5;
    case ResolutionKind::kContinue: {
      if (mine_paper) return 0.0;
      std::vector<int> rocks;
      for (int k = 0; k < n; ++k) {
        if (!(papers >> k & 1u)) rocks.push_back(survivors[k].value);
      }
      return values.Value(GameState(std::move(rocks)), survivors[position]);
    }
  }
  return 0.0;
}

inline double PatternProbability(const std::vector<double>& probs,
                                 std::uint64_t papers) {
  double prob = 1.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    prob *= (papers >> k & 1u) ? probs[k] : 1.0 - probs[k];
  }
  return prob;
}

}  // namespace detail

inline ValueTable ComputeValues(const MarkovProfile& profile) {
  detail::CheckCapacity(profile);
  ValueTable table;
  table.universe_ = profile.universe();
  const int universe = profile.universe();

  if (profile.IsSizeSymmetric()) {
    // All survivors are exchangeable: enumerate by number of paper players
    // among the others, weighted binomially.
    const auto& paper = std::get<SizeSymmetric>(profile.representation()).paper;
    table.by_size_.assign(universe + 1, 0.0);
    table.by_size_[1] = 1.0;
    table.by_size_[2] = 0.5;
    for (int n = 3; n <= universe; ++n) {
      const double p = paper.at(n);
      const double repeat = std::pow(p, n) + std::pow(1.0 - p, n);
      double direct = p * std::pow(1.0 - p, n - 1) + (1.0 - p) * std::pow(p, n - 1);
      for (int s = 2; s <= n - 2; ++s) {
        direct += (1.0 - p) * detail::BinomialCoefficient(n - 1, s - 1) *
                  std::pow(1.0 - p, s - 1) * std::pow(p, n - s) *
                  table.by_size_[s];
      }
      table.by_size_[n] = repeat < 1.0 ? direct / (1.0 - repeat) : 1.0 / n;
    }
    return table;
  }

  table.by_mask_.assign(std::size_t{1} << universe, {});
  for (int a = 0; a < universe; ++a) {
    for (int b = a + 1; b < universe; ++b) {
      table.by_mask_[(std::uint64_t{1} << a) | (std::uint64_t{1} << b)] = {0.5, 0.5};
    }
  }
  for (std::uint64_t mask : EnumerateStateMasks(universe)) {
    const GameState state = GameState::FromMask(mask);
    const int n = state.size();
    const std::vector<double> probs = profile.StateProbabilities(state);
    std::vector<double> direct(n, 0.0);
    double repeat = 0.0;
    const std::uint64_t patterns = std::uint64_t{1} << n;
    for (std::uint64_t papers = 0; papers < patterns; ++papers) {
      const double prob = detail::PatternProbability(probs, papers);
      if (prob == 0.0) continue;
      for (int i = 0; i < n; ++i) {
        bool repeated = false;
        const double payoff =
            detail::RoundPayoff(state.survivors(), papers, i, table, repeated);
        if (repeated) {
          if (i == 0) repeat += prob;
        } else {
          direct[i] += prob * payoff;
        }
      }
    }
    std::vector<double>& rho = table.by_mask_[mask];
    rho.resize(n);
    for (int i = 0; i < n; ++i) {
      rho[i] = repeat < 1.0 ? direct[i] / (1.0 - repeat) : 1.0 / n;
    }
  }
  return table;
}

inline constexpr double kDefaultDeviationEpsilon = 1e-9;

struct DeviationEntry {
  GameState state;
  PlayerId player;
  double paper_probability = 0.0;
  // Winning probability when showing paper (rock) this round and following
  // the profile afterwards.
  double value_paper = 0.0;
  double value_rock = 0.0;
  double profile_value = 0.0;
  double gain = 0.0;
  bool flagged = false;
};

struct DeviationReport {
  double epsilon = kDefaultDeviationEpsilon;
  // For size-symmetric profiles, one entry per state size (state {0..n-1},
  // player 0); every other (state, player) pair of that size is identical.
  std::vector<DeviationEntry> entries;

  int FlagCount() const {
    return static_cast<int>(std::count_if(
        entries.begin(), entries.end(),
        [](const DeviationEntry& e) { return e.flagged; }));
  }
  bool Passed() const { return FlagCount() == 0; }
  double MaxGain() const {
    double best = -INFINITY;
    for (const auto& e : entries) best = std::max(best, e.gain);
    return best;
  }
  const DeviationEntry* Find(const GameState& state, PlayerId player) const {
    for (const auto& e : entries) {
      if (e.state == state && e.player == player) return &e;
    }
    return nullptr;
  }
};

inline DeviationReport VerifyOneShot(const MarkovProfile& profile,
                                     double epsilon = kDefaultDeviationEpsilon) {
  const ValueTable values = ComputeValues(profile);
  DeviationReport report;
  report.epsilon = epsilon;
  const int universe = profile.universe();

  auto finish = [&](DeviationEntry entry) {
    entry.gain = std::max(entry.value_paper, entry.value_rock) - entry.profile_value;
    entry.flagged = entry.gain > epsilon;
    report.entries.push_back(std::move(entry));
  };

  if (profile.IsSizeSymmetric()) {
    const auto& paper = std::get<SizeSymmetric>(profile.representation()).paper;
    for (int n = 3; n <= universe; ++n) {
      const double p = paper.at(n);
      const double rho = values.Value(GameState::Full(n), PlayerId{0});
      const double others_rock = std::pow(1.0 - p, n - 1);
      const double others_paper = std::pow(p, n - 1);
      DeviationEntry entry;
      entry.state = GameState::Full(n);
      entry.player = PlayerId{0};
      entry.paper_probability = p;
      entry.value_paper = others_rock + rho * others_paper;
      entry.value_rock = others_paper + rho * others_rock;
      for (int s = 2; s <= n - 2; ++s) {
        const double rho_s = s == 2 ? 0.5 : values.Value(GameState::Full(s), PlayerId{0});
        entry.value_rock += detail::BinomialCoefficient(n - 1, s - 1) *
                            std::pow(1.0 - p, s - 1) * std::pow(p, n - s) * rho_s;
      }
      entry.profile_value = rho;
      finish(std::move(entry));
    }
    return report;
  }

  for (std::uint64_t mask : EnumerateStateMasks(universe)) {
    const GameState state = GameState::FromMask(mask);
    const int n = state.size();
    const std::vector<double> probs = profile.StateProbabilities(state);
    const std::vector<double> rho = values.StateValues(state);
    for (int i = 0; i < n; ++i) {
      DeviationEntry entry;
      entry.state = state;
      entry.player = state.survivors()[i];
      entry.paper_probability = probs[i];
      entry.profile_value = rho[i];
      // Enumerate the others' actions with player i's bit forced.
      const std::uint64_t patterns = std::uint64_t{1} << n;
      const std::uint64_t mine = std::uint64_t{1} << i;
      for (std::uint64_t papers = 0; papers < patterns; ++papers) {
        if (papers & mine) continue;
        std::vector<double> others = probs;
        others[i] = 0.0;
        const double prob = detail::PatternProbability(others, papers);
        if (prob == 0.0) continue;
        bool repeated = false;
        double payoff =
            detail::RoundPayoff(state.survivors(), papers, i, values, repeated);
        entry.value_rock += prob * (repeated ? rho[i] : payoff);
        payoff = detail::RoundPayoff(state.survivors(), papers | mine, i, values,
                                     repeated);
        entry.value_paper += prob * (repeated ? rho[i] : payoff);
      }
      finish(std::move(entry));
    }
  }
  return report;
}

}  // namespace shinohara

#endif  // SHINOHARA_MARKOV_VALUES_HPP_
