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

#ifndef SHINOHARA_GAME_CORE_HPP_
#define SHINOHARA_GAME_CORE_HPP_

// Rules of Shinohara rock-paper-scissors. The host always shows rock, so
// each surviving player picks rock or paper every round:
//
//   * exactly one paper        -> that player wins;
//   * exactly one rock         -> that player wins;
//   * everyone shows the same  -> the round is repeated;
//   * otherwise                -> paper players are eliminated.
//
// A state with two survivors is terminal and splits the prize 1/2 each.
// Everything in this header is a pure function of its inputs.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "shinohara/errors.hpp"

namespace shinohara {

struct PlayerId {
  int value = 0;
  auto operator<=>(const PlayerId&) const = default;
};

enum class Action { kRock, kPaper };

inline std::string_view ActionName(Action action) {
  return action == Action::kPaper ? "paper" : "rock";
}

inline std::optional<Action> ParseAction(std::string_view name) {
  if (name == "paper") return Action::kPaper;
  if (name == "rock") return Action::kRock;
  return std::nullopt;
}

// The set of surviving players, kept in ascending index order so that equal
// sets compare and hash identically.
class GameState {
 public:
  GameState() = default;

  explicit GameState(std::vector<int> indices) {
    std::sort(indices.begin(), indices.end());
    if (indices.empty()) {
      throw ContractViolation("GameState: survivor set must be non-empty");
    }
    if (indices.front() < 0) {
      throw ContractViolation("GameState: negative player index");
    }
    if (std::adjacent_find(indices.begin(), indices.end()) != indices.end()) {
      throw ContractViolation("GameState: duplicate player index");
    }
    survivors_.reserve(indices.size());
    for (int i : indices) survivors_.push_back(PlayerId{i});
  }

  static GameState Full(int universe) {
    if (universe < 1) throw ContractViolation("GameState: empty universe");
    std::vector<int> all(universe);
    std::iota(all.begin(), all.end(), 0);
    return GameState(std::move(all));
  }

  static GameState FromMask(std::uint64_t mask) {
    std::vector<int> indices;
    for (int i = 0; i < 64; ++i) {
      if (mask >> i & 1u) indices.push_back(i);
    }
    return GameState(std::move(indices));
  }

  // Parses the "0,2,3" form produced by Key().
  static GameState FromKey(std::string_view key) {
    std::vector<int> indices;
    std::size_t pos = 0;
    while (pos <= key.size()) {
      std::size_t comma = key.find(',', pos);
      if (comma == std::string_view::npos) comma = key.size();
      std::string_view token = key.substr(pos, comma - pos);
      if (token.empty() ||
          !std::all_of(token.begin(), token.end(),
                       [](char c) { return c >= '0' && c <= '9'; })) {
        throw ParseError("bad state key '" + std::string(key) + "'");
      }
      indices.push_back(std::stoi(std::string(token)));
      pos = comma + 1;
    }
    try {
      return GameState(std::move(indices));
    } catch (const ContractViolation& e) {
      throw ParseError("bad state key '" + std::string(key) + "': " + e.what());
    }
  }

  const std::vector<PlayerId>& survivors() const { return survivors_; }
  int size() const { return static_cast<int>(survivors_.size()); }
  bool IsTerminal() const { return size() <= 2; }

  bool Contains(PlayerId player) const {
    return std::binary_search(survivors_.begin(), survivors_.end(), player);
  }

  // Position of `player` within survivors(), or -1.
  int PositionOf(PlayerId player) const {
    auto it = std::lower_bound(survivors_.begin(), survivors_.end(), player);
    if (it == survivors_.end() || *it != player) return -1;
    return static_cast<int>(it - survivors_.begin());
  }

  std::uint64_t Mask() const {
    std::uint64_t mask = 0;
    for (PlayerId p : survivors_) {
      if (p.value >= 64) {
        throw CapacityError("GameState::Mask: player index >= 64");
      }
      mask |= std::uint64_t{1} << p.value;
    }
    return mask;
  }

  std::string Key() const {
    std::string key;
    for (std::size_t k = 0; k < survivors_.size(); ++k) {
      if (k) key += ',';
      key += std::to_string(survivors_[k].value);
    }
    return key;
  }

  auto operator<=>(const GameState&) const = default;

 private:
  std::vector<PlayerId> survivors_;
};

using ActionProfile = std::map<PlayerId, Action>;

struct Repeat {
  bool operator==(const Repeat&) const = default;
};
struct Winner {
  PlayerId player;
  bool operator==(const Winner&) const = default;
};
struct SplitTwo {
  PlayerId first;
  PlayerId second;
  bool operator==(const SplitTwo&) const = default;
};
struct Continue {
  GameState next;
  bool operator==(const Continue&) const = default;
};

// Order matches the alternatives of RoundResolution::outcome.
enum class ResolutionKind { kRepeat, kWinner, kSplitTwo, kContinue };

inline std::string_view ResolutionKindName(ResolutionKind kind) {
  switch (kind) {
    case ResolutionKind::kRepeat: return "repeat";
    case ResolutionKind::kWinner: return "winner";
    case ResolutionKind::kSplitTwo: return "split_two";
    case ResolutionKind::kContinue: return "continue";
  }
  return "unknown";
}

struct RoundResolution {
  std::variant<Repeat, Winner, SplitTwo, Continue> outcome;
  // Paper players removed by a Continue or SplitTwo; empty otherwise.
  std::vector<PlayerId> eliminated;

  ResolutionKind kind() const {
    return static_cast<ResolutionKind>(outcome.index());
  }
  bool IsTerminal() const {
    return kind() == ResolutionKind::kWinner ||
           kind() == ResolutionKind::kSplitTwo;
  }
  bool operator==(const RoundResolution&) const = default;
};

// Which case applies when `paper_count` of `n` survivors show paper.
// Requires n >= 3.
constexpr ResolutionKind ClassifyRound(int n, int paper_count) {
  if (paper_count == 0 || paper_count == n) return ResolutionKind::kRepeat;
  if (paper_count == 1 || paper_count == n - 1) return ResolutionKind::kWinner;
  return n - paper_count == 2 ? ResolutionKind::kSplitTwo
                              : ResolutionKind::kContinue;
}

// `actions[k]` is the action of state.survivors()[k].
inline RoundResolution ResolveRound(const GameState& state,
                                    std::span<const Action> actions) {
  const int n = state.size();
  if (n < 3) {
    throw ContractViolation("ResolveRound: state with " + std::to_string(n) +
                            " survivors is terminal");
  }
  if (static_cast<int>(actions.size()) != n) {
    throw ContractViolation("ResolveRound: expected " + std::to_string(n) +
                            " actions, got " + std::to_string(actions.size()));
  }
  const auto& survivors = state.survivors();
  const int papers = static_cast<int>(
      std::count(actions.begin(), actions.end(), Action::kPaper));

  RoundResolution result;
  switch (ClassifyRound(n, papers)) {
    case ResolutionKind::kRepeat:
      result.outcome = Repeat{};
      break;
    case ResolutionKind::kWinner: {
      const Action lone = papers == 1 ? Action::kPaper : Action::kRock;
      auto it = std::find(actions.begin(), actions.end(), lone);
      result.outcome = Winner{survivors[it - actions.begin()]};
      break;
    }
    case ResolutionKind::kSplitTwo:
    case ResolutionKind::kContinue: {
      std::vector<int> rocks;
      for (int k = 0; k < n; ++k) {
        if (actions[k] == Action::kRock) {
          rocks.push_back(survivors[k].value);
        } else {
          result.eliminated.push_back(survivors[k]);
        }
      }
      if (rocks.size() == 2) {
        result.outcome = SplitTwo{PlayerId{rocks[0]}, PlayerId{rocks[1]}};
      } else {
        result.outcome = Continue{GameState(std::move(rocks))};
      }
      break;
    }
  }
  return result;
}

inline RoundResolution ResolveRound(const GameState& state,
                                    const ActionProfile& actions) {
  if (static_cast<int>(actions.size()) != state.size()) {
    throw ContractViolation("ResolveRound: action map has " +
                            std::to_string(actions.size()) +
                            " entries for " + std::to_string(state.size()) +
                            " survivors");
  }
  std::vector<Action> aligned;
  aligned.reserve(actions.size());
  for (PlayerId p : state.survivors()) {
    auto it = actions.find(p);
    if (it == actions.end()) {
      throw ContractViolation("ResolveRound: no action for player " +
                              std::to_string(p.value));
    }
    aligned.push_back(it->second);
  }
  return ResolveRound(state, std::span<const Action>(aligned));
}

// Payoff per player of the universe; losers hold 0.
class PayoffVector {
 public:
  explicit PayoffVector(int universe) : values_(universe, 0.0) {}

  double operator[](PlayerId p) const { return values_.at(p.value); }
  double& operator[](PlayerId p) { return values_.at(p.value); }
  int universe() const { return static_cast<int>(values_.size()); }
  const std::vector<double>& values() const { return values_; }

  double Sum() const {
    return std::accumulate(values_.begin(), values_.end(), 0.0);
  }

  bool operator==(const PayoffVector&) const = default;

 private:
  std::vector<double> values_;
};

// Payoff of a play that never leaves `state`: 1/|N| to each survivor.
inline PayoffVector SharedPayoffs(const GameState& state, int universe) {
  PayoffVector payoffs(universe);
  for (PlayerId p : state.survivors()) payoffs[p] = 1.0 / state.size();
  return payoffs;
}

inline int ImpliedUniverse(const GameState& state) {
  return state.survivors().back().value + 1;
}

inline std::optional<PayoffVector> TerminalPayoffs(
    const RoundResolution& resolution, const GameState& state, int universe) {
  if (universe < ImpliedUniverse(state)) {
    throw ContractViolation("TerminalPayoffs: universe smaller than state");
  }
  PayoffVector payoffs(universe);
  if (const auto* w = std::get_if<Winner>(&resolution.outcome)) {
    if (!state.Contains(w->player)) {
      throw ContractViolation("TerminalPayoffs: winner not in state");
    }
    payoffs[w->player] = 1.0;
    return payoffs;
  }
  if (const auto* s = std::get_if<SplitTwo>(&resolution.outcome)) {
    if (!state.Contains(s->first) || !state.Contains(s->second)) {
      throw ContractViolation("TerminalPayoffs: split pair not in state");
    }
    payoffs[s->first] = 0.5;
    payoffs[s->second] = 0.5;
    return payoffs;
  }
  return std::nullopt;
}

inline std::optional<PayoffVector> TerminalPayoffs(
    const RoundResolution& resolution, const GameState& state) {
  return TerminalPayoffs(resolution, state, ImpliedUniverse(state));
}

}  // namespace shinohara

#endif  // SHINOHARA_GAME_CORE_HPP_
