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

#ifndef SHINOHARA_MONTECARLO_HPP_
#define SHINOHARA_MONTECARLO_HPP_

// Seeded simulation of complete games under a Markov profile.
//
// Trial t of a run draws from Rng(Mix64(master_seed, t)), so any trial can
// be replayed on its own and the aggregate does not depend on how trials
// are scheduled across threads.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <ostream>
#include <thread>
#include <vector>

#include "shinohara/errors.hpp"
#include "shinohara/game_core.hpp"
#include "shinohara/markov_profile.hpp"
#include "shinohara/random.hpp"

namespace shinohara {

inline constexpr int kDefaultMaxRounds = 10000;

struct TranscriptRound {
  GameState state;
  ActionProfile actions;
  RoundResolution resolution;
};

struct Transcript {
  std::vector<TranscriptRound> rounds;
  PayoffVector outcome{0};
  // Hit max_rounds before a terminal resolution; outcome is 1/|N| each.
  bool truncated = false;
};

namespace detail {

// Plays one game, reporting each round to `on_round(state, actions,
// resolution)`. Returns the outcome and whether it was truncated.
template <typename OnRound>
std::pair<PayoffVector, bool> PlayOut(const MarkovProfile& profile,
                                      int universe, Rng& rng, int max_rounds,
                                      OnRound&& on_round) {
  GameState state = GameState::Full(universe);
  std::vector<Action> actions;
  for (int round = 0; round < max_rounds; ++round) {
    const std::vector<double> probs = profile.StateProbabilities(state);
    actions.resize(probs.size());
    for (std::size_t k = 0; k < probs.size(); ++k) {
      actions[k] = rng.Bernoulli(probs[k]) ? Action::kPaper : Action::kRock;
    }
    RoundResolution resolution =
        ResolveRound(state, std::span<const Action>(actions));
    on_round(state, actions, resolution);
    if (auto payoffs = TerminalPayoffs(resolution, state, universe)) {
      return {std::move(*payoffs), false};
    }
    if (auto* next = std::get_if<Continue>(&resolution.outcome)) {
      state = std::move(next->next);
    }
  }
  return {SharedPayoffs(state, universe), true};
}

inline void CheckSimulationArgs(const MarkovProfile& profile, int universe) {
  if (universe < 3) {
    throw ContractViolation("simulation needs at least three players, got " +
                            std::to_string(universe));
  }
  if (profile.universe() != universe) {
    throw ContractViolation("profile universe " +
                            std::to_string(profile.universe()) +
                            " does not match " + std::to_string(universe));
  }
}

}  // namespace detail

inline Transcript PlayGame(const MarkovProfile& profile, int universe,
                           std::uint64_t seed,
                           int max_rounds = kDefaultMaxRounds) {
  detail::CheckSimulationArgs(profile, universe);
  if (max_rounds < 0) throw ContractViolation("max_rounds must be >= 0");
  Rng rng(seed);
  Transcript transcript;
  auto [outcome, truncated] = detail::PlayOut(
      profile, universe, rng, max_rounds,
      [&](const GameState& state, const std::vector<Action>& actions,
          const RoundResolution& resolution) {
        ActionProfile by_player;
        for (std::size_t k = 0; k < actions.size(); ++k) {
          by_player.emplace(state.survivors()[k], actions[k]);
        }
        transcript.rounds.push_back({state, std::move(by_player), resolution});
      });
  transcript.outcome = std::move(outcome);
  transcript.truncated = truncated;
  return transcript;
}

struct SimStats {
  std::int64_t trials = 0;
  std::uint64_t master_seed = 0;
  int universe = 0;
  int max_rounds = kDefaultMaxRounds;
  // Sole wins only; split and truncation shares show up in mean_payoff.
  std::vector<double> win_frequency;
  std::vector<double> mean_payoff;
  std::map<int, std::int64_t> round_count_histogram;  // rounds -> games
  std::int64_t total_rounds = 0;
  std::int64_t repeat_count = 0;
  std::int64_t split_count = 0;
  std::int64_t truncation_count = 0;

  double RepeatRate() const {
    return total_rounds ? static_cast<double>(repeat_count) / total_rounds : 0.0;
  }
  bool operator==(const SimStats&) const = default;
};

namespace detail {

struct Tally {
  std::vector<std::int64_t> wins;
  std::vector<double> payoff_sum;
  std::map<int, std::int64_t> histogram;
  std::int64_t total_rounds = 0;
  std::int64_t repeats = 0;
  std::int64_t splits = 0;
  std::int64_t truncations = 0;

  explicit Tally(int universe) : wins(universe, 0), payoff_sum(universe, 0.0) {}

  void Merge(const Tally& other) {
    for (std::size_t i = 0; i < wins.size(); ++i) {
      wins[i] += other.wins[i];
      payoff_sum[i] += other.payoff_sum[i];
    }
    for (const auto& [rounds, count] : other.histogram) histogram[rounds] += count;
    total_rounds += other.total_rounds;
    repeats += other.repeats;
    splits += other.splits;
    truncations += other.truncations;
  }
};

inline void RunTrialRange(const MarkovProfile& profile, int universe,
                          std::uint64_t master_seed, int max_rounds,
                          std::int64_t begin, std::int64_t end, Tally& tally) {
  for (std::int64_t t = begin; t < end; ++t) {
    Rng rng(Mix64(master_seed, static_cast<std::uint64_t>(t)));
    int rounds = 0;
    const PlayerId* winner = nullptr;
    PlayerId winner_slot;
    bool split = false;
    auto [outcome, truncated] = PlayOut(
        profile, universe, rng, max_rounds,
        [&](const GameState&, const std::vector<Action>&,
            const RoundResolution& resolution) {
          ++rounds;
          switch (resolution.kind()) {
            case ResolutionKind::kRepeat: ++tally.repeats; break;
            case ResolutionKind::kWinner:
              winner_slot = std::get<Winner>(resolution.outcome).player;
              winner = &winner_slot;
              break;
            case ResolutionKind::kSplitTwo: split = true; break;
            case ResolutionKind::kContinue: break;
          }
        });
    if (winner) ++tally.wins[winner->value];
    if (split) ++tally.splits;
    if (truncated) ++tally.truncations;
    for (int i = 0; i < universe; ++i) tally.payoff_sum[i] += outcome.values()[i];
    ++tally.histogram[rounds];
    tally.total_rounds += rounds;
  }
}

}  // namespace detail

// Trials are processed in fixed chunks whose partial sums are merged in
// chunk order, so the floating-point result is the same for any
// `threads` value.
inline SimStats RunTrials(const MarkovProfile& profile, int universe,
                          std::int64_t trials, std::uint64_t master_seed,
                          int max_rounds = kDefaultMaxRounds,
                          unsigned threads = 0) {
  detail::CheckSimulationArgs(profile, universe);
  if (trials < 1) throw ContractViolation("trials must be >= 1");
  if (max_rounds < 1) throw ContractViolation("max_rounds must be >= 1");
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

  constexpr std::int64_t kChunk = 4096;
  const std::int64_t chunks = (trials + kChunk - 1) / kChunk;
  std::vector<detail::Tally> partial(chunks, detail::Tally(universe));
  auto work = [&](unsigned worker) {
    for (std::int64_t c = worker; c < chunks; c += threads) {
      detail::RunTrialRange(profile, universe, master_seed, max_rounds,
                            c * kChunk, std::min(trials, (c + 1) * kChunk),
                            partial[c]);
    }
  };
  if (threads == 1 || chunks == 1) {
    work(0);
    threads = 1;
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }

  detail::Tally total(universe);
  for (const auto& tally : partial) total.Merge(tally);

  SimStats stats;
  stats.trials = trials;
  stats.master_seed = master_seed;
  stats.universe = universe;
  stats.max_rounds = max_rounds;
  stats.win_frequency.resize(universe);
  stats.mean_payoff.resize(universe);
  for (int i = 0; i < universe; ++i) {
    stats.win_frequency[i] = static_cast<double>(total.wins[i]) / trials;
    stats.mean_payoff[i] = total.payoff_sum[i] / trials;
  }
  stats.round_count_histogram = std::move(total.histogram);
  stats.total_rounds = total.total_rounds;
  stats.repeat_count = total.repeats;
  stats.split_count = total.splits;
  stats.truncation_count = total.truncations;
  return stats;
}

// One row per player: player,win_frequency,mean_payoff.
inline void WriteSimStatsCsv(const SimStats& stats, std::ostream& out) {
  out << "player,win_frequency,mean_payoff\n";
  out.precision(17);
  for (int i = 0; i < stats.universe; ++i) {
    out << i << ',' << stats.win_frequency[i] << ',' << stats.mean_payoff[i]
        << '\n';
  }
}

}  // namespace shinohara

#endif  // SHINOHARA_MONTECARLO_HPP_
