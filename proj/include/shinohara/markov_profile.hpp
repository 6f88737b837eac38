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

#ifndef SHINOHARA_MARKOV_PROFILE_HPP_
#define SHINOHARA_MARKOV_PROFILE_HPP_

// Markov strategy profiles: the probability of paper for every surviving
// player in every state with at least three survivors.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "shinohara/equilibrium.hpp"
#include "shinohara/errors.hpp"
#include "shinohara/game_core.hpp"

namespace shinohara {

// Largest universe for which every state is enumerated explicitly.
inline constexpr int kMaxEnumeratedUniverse = 12;
// Largest state size for which all 2^n action profiles are enumerated.
inline constexpr int kMaxStateSize = 20;

// All states of `universe` with at least `min_size` survivors, ordered by
// size and then by bitmask.
inline std::vector<std::uint64_t> EnumerateStateMasks(int universe,
                                                      int min_size = 3) {
  if (universe > kMaxEnumeratedUniverse) {
    throw CapacityError("state enumeration limited to universe <= " +
                        std::to_string(kMaxEnumeratedUniverse) + ", got " +
                        std::to_string(universe));
  }
  std::vector<std::uint64_t> masks;
  const std::uint64_t limit = std::uint64_t{1} << universe;
  for (std::uint64_t m = 0; m < limit; ++m) {
    if (std::popcount(m) >= min_size) masks.push_back(m);
  }
  std::stable_sort(masks.begin(), masks.end(),
                   [](std::uint64_t a, std::uint64_t b) {
                     return std::popcount(a) < std::popcount(b);
                   });
  return masks;
}

// Decides which survivors take the designated roles of a role-based profile.
struct SelectionRule {
  enum class Kind { kLowestIndex, kHighestIndex, kPriority };

  Kind kind = Kind::kLowestIndex;
  // kPriority: listed players take roles first, in list order; unlisted
  // survivors follow in ascending index order.
  std::vector<int> priority;

  static SelectionRule LowestIndex() { return {}; }
  static SelectionRule HighestIndex() { return {Kind::kHighestIndex, {}}; }
  static SelectionRule Priority(std::vector<int> order) {
    return {Kind::kPriority, std::move(order)};
  }

  std::vector<PlayerId> Order(const GameState& state) const {
    std::vector<PlayerId> order = state.survivors();
    switch (kind) {
      case Kind::kLowestIndex:
        break;
      case Kind::kHighestIndex:
        std::reverse(order.begin(), order.end());
        break;
      case Kind::kPriority: {
        auto rank = [this](PlayerId p) {
          auto it = std::find(priority.begin(), priority.end(), p.value);
          return it == priority.end()
                     ? std::make_pair(1, p.value)
                     : std::make_pair(0, static_cast<int>(it - priority.begin()));
        };
        std::stable_sort(order.begin(), order.end(),
                         [&](PlayerId a, PlayerId b) { return rank(a) < rank(b); });
        break;
      }
    }
    return order;
  }

  bool operator==(const SelectionRule&) const = default;
};

// Every survivor of a state with n players shows paper with paper[n].
struct SizeSymmetric {
  std::map<int, double> paper;
  bool operator==(const SizeSymmetric&) const = default;
};

// In a state with n survivors the k-th player in selection order shows
// paper with roles[n][k]; everybody past the listed roles uses `others`.
struct RoleBased {
  SelectionRule selection;
  std::map<int, std::vector<double>> roles;
  double others = 0.0;
  bool operator==(const RoleBased&) const = default;
};

// Probabilities per state, aligned with GameState::survivors().
struct Explicit {
  std::map<GameState, std::vector<double>> paper;
  bool operator==(const Explicit&) const = default;
};

class MarkovProfile {
 public:
  using Representation = std::variant<SizeSymmetric, RoleBased, Explicit>;

  MarkovProfile(int universe, Representation representation)
      : universe_(universe), representation_(std::move(representation)) {
    Validate();
  }

  int universe() const { return universe_; }
  const Representation& representation() const { return representation_; }

  bool IsSizeSymmetric() const {
    return std::holds_alternative<SizeSymmetric>(representation_);
  }

  std::string_view KindName() const {
    switch (representation_.index()) {
      case 0: return "size_symmetric";
      case 1: return "role_based";
      default: return "explicit";
    }
  }

  // Paper probability of each survivor of `state`, in survivor order.
  std::vector<double> StateProbabilities(const GameState& state) const {
    const int n = state.size();
    if (n < 3) {
      throw ContractViolation("MarkovProfile: state " + state.Key() +
                              " is terminal");
    }
    if (state.survivors().back().value >= universe_) {
      throw ContractViolation("MarkovProfile: state " + state.Key() +
                              " outside universe " + std::to_string(universe_));
    }
    if (const auto* sym = std::get_if<SizeSymmetric>(&representation_)) {
      return std::vector<double>(n, sym->paper.at(n));
    }
    if (const auto* role = std::get_if<RoleBased>(&representation_)) {
      std::vector<double> probs(n, role->others);
      auto it = role->roles.find(n);
      if (it == role->roles.end()) return probs;
      const std::vector<PlayerId> order = role->selection.Order(state);
      for (std::size_t k = 0; k < it->second.size(); ++k) {
        probs[state.PositionOf(order[k])] = it->second[k];
      }
      return probs;
    }
    const auto& table = std::get<Explicit>(representation_).paper;
    auto it = table.find(state);
    if (it == table.end()) {
      throw ContractViolation("MarkovProfile: no entry for state " +
                              state.Key());
    }
    return it->second;
  }

  double PaperProbability(const GameState& state, PlayerId player) const {
    const int position = state.PositionOf(player);
    if (position < 0) {
      throw ContractViolation("MarkovProfile: player " +
                              std::to_string(player.value) +
                              " not in state " + state.Key());
    }
    return StateProbabilities(state)[position];
  }

  // True iff every probability the profile can produce lies in (0,1).
  bool IsTotallyMixed() const {
    auto interior = [](double p) { return p > 0.0 && p < 1.0; };
    if (const auto* sym = std::get_if<SizeSymmetric>(&representation_)) {
      return std::all_of(sym->paper.begin(), sym->paper.end(),
                         [&](const auto& kv) { return interior(kv.second); });
    }
    if (const auto* role = std::get_if<RoleBased>(&representation_)) {
      for (int n = 3; n <= universe_; ++n) {
        auto it = role->roles.find(n);
        const std::size_t listed = it == role->roles.end() ? 0 : it->second.size();
        if (listed < static_cast<std::size_t>(n) && !interior(role->others)) {
          return false;
        }
        if (listed &&
            !std::all_of(it->second.begin(), it->second.end(), interior)) {
          return false;
        }
      }
      return true;
    }
    for (const auto& [state, probs] : std::get<Explicit>(representation_).paper) {
      if (!std::all_of(probs.begin(), probs.end(), interior)) return false;
    }
    return true;
  }

  MarkovProfile ToExplicit() const {
    Explicit table;
    for (std::uint64_t mask : EnumerateStateMasks(universe_)) {
      GameState state = GameState::FromMask(mask);
      table.paper.emplace(state, StateProbabilities(state));
    }
    return MarkovProfile(universe_, std::move(table));
  }

  bool operator==(const MarkovProfile&) const = default;

 private:
  static void CheckProbability(double p, const std::string& where) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::domain_error("MarkovProfile: probability " +
                              std::to_string(p) + " outside [0,1] at " + where);
    }
  }

  void Validate() {
    if (universe_ < 3) {
      throw ContractViolation("MarkovProfile: universe must be >= 3, got " +
                              std::to_string(universe_));
    }
    if (auto* sym = std::get_if<SizeSymmetric>(&representation_)) {
      for (int n = 3; n <= universe_; ++n) {
        auto it = sym->paper.find(n);
        if (it == sym->paper.end()) {
          throw ContractViolation("MarkovProfile: missing probability for size " +
                                  std::to_string(n));
        }
        CheckProbability(it->second, "size " + std::to_string(n));
      }
      if (sym->paper.size() != static_cast<std::size_t>(universe_ - 2)) {
        throw ContractViolation("MarkovProfile: sizes outside 3.." +
                                std::to_string(universe_));
      }
    } else if (auto* role = std::get_if<RoleBased>(&representation_)) {
      CheckProbability(role->others, "others");
      for (auto& [n, probs] : role->roles) {
        if (n < 3 || n > universe_) {
          throw ContractViolation("MarkovProfile: role size " +
                                  std::to_string(n) + " outside 3.." +
                                  std::to_string(universe_));
        }
        if (probs.size() > static_cast<std::size_t>(n)) {
          throw ContractViolation("MarkovProfile: more roles than players at size " +
                                  std::to_string(n));
        }
        for (double p : probs) CheckProbability(p, "role size " + std::to_string(n));
        // Canonical form: roles equal to `others` at the tail are implicit.
        while (!probs.empty() && probs.back() == role->others) probs.pop_back();
      }
      std::erase_if(role->roles, [](const auto& kv) { return kv.second.empty(); });
    } else {
      const auto& table = std::get<Explicit>(representation_).paper;
      if (universe_ > kMaxEnumeratedUniverse) {
        throw CapacityError("MarkovProfile: explicit profiles limited to universe <= " +
                            std::to_string(kMaxEnumeratedUniverse));
      }
      std::size_t expected = 0;
      for (int n = 3; n <= universe_; ++n) expected += Binomial(universe_, n);
      for (const auto& [state, probs] : table) {
        if (state.size() < 3 || state.survivors().back().value >= universe_) {
          throw ContractViolation("MarkovProfile: invalid state " + state.Key());
        }
        if (probs.size() != static_cast<std::size_t>(state.size())) {
          throw ContractViolation("MarkovProfile: state " + state.Key() +
                                  " needs " + std::to_string(state.size()) +
                                  " probabilities");
        }
        for (double p : probs) CheckProbability(p, "state " + state.Key());
      }
      if (table.size() != expected) {
        throw ContractViolation("MarkovProfile: explicit profile covers " +
                                std::to_string(table.size()) + " of " +
                                std::to_string(expected) + " states");
      }
    }
  }

  static std::size_t Binomial(int n, int k) {
    std::size_t result = 1;
    for (int j = 1; j <= k; ++j) result = result * (n - k + j) / j;
    return result;
  }

  int universe_;
  Representation representation_;
};

// The symmetric equilibrium: paper with phi_n at every state size n.
inline MarkovProfile ProfileSymmetricSpe(int universe) {
  if (universe < 3) {
    throw ContractViolation("ProfileSymmetricSpe: universe must be >= 3");
  }
  SizeSymmetric sym;
  for (int n = 3; n <= universe; ++n) sym.paper[n] = SolvePhi(n).phi;
  return MarkovProfile(universe, std::move(sym));
}

// Every survivor shows paper with the same probability `p` in every state.
inline MarkovProfile ProfileConstant(int universe, double p) {
  SizeSymmetric sym;
  for (int n = 3; n <= universe; ++n) sym.paper[n] = p;
  return MarkovProfile(universe, std::move(sym));
}

inline MarkovProfile ProfileAllRock(int universe) {
  return ProfileConstant(universe, 0.0);
}

namespace detail {
inline MarkovProfile RoleProfile(int universe,
                                 const std::map<int, double>& second_role,
                                 SelectionRule selection) {
  RoleBased role;
  role.selection = std::move(selection);
  for (int n = 3; n <= universe; ++n) {
    auto it = second_role.find(n);
    if (it == second_role.end()) {
      role.roles[n] = {1.0};
    } else {
      role.roles[n] = {1.0, it->second};
    }
  }
  return MarkovProfile(universe, std::move(role));
}
}  // namespace detail

// One designated player always shows paper, the rest always rock.
inline MarkovProfile ProfileOnePaper(
    int universe, SelectionRule selection = SelectionRule::LowestIndex()) {
  return detail::RoleProfile(universe, {}, std::move(selection));
}

// Two designated players always show paper, the rest always rock.
inline MarkovProfile ProfileTwoPaper(
    int universe, SelectionRule selection = SelectionRule::LowestIndex()) {
  std::map<int, double> second;
  for (int n = 3; n <= universe; ++n) second[n] = 1.0;
  return detail::RoleProfile(universe, second, std::move(selection));
}

// One player always shows paper, a second shows paper with q[n] in states of
// size n, the rest always rock. q needs an entry for every size 3..universe.
inline MarkovProfile ProfileCombo(
    int universe, const std::map<int, double>& q,
    SelectionRule selection = SelectionRule::LowestIndex()) {
  for (int n = 3; n <= universe; ++n) {
    auto it = q.find(n);
    if (it == q.end()) {
      throw ContractViolation("ProfileCombo: missing q for size " +
                              std::to_string(n));
    }
    if (!(it->second >= 0.0 && it->second <= 1.0)) {
      throw std::domain_error("ProfileCombo: q outside [0,1] at size " +
                              std::to_string(n));
    }
  }
  return detail::RoleProfile(universe, q, std::move(selection));
}

inline MarkovProfile ProfileCombo(
    int universe, double q,
    SelectionRule selection = SelectionRule::LowestIndex()) {
  std::map<int, double> by_size;
  for (int n = 3; n <= universe; ++n) by_size[n] = q;
  return ProfileCombo(universe, by_size, std::move(selection));
}

}  // namespace shinohara

#endif  // SHINOHARA_MARKOV_PROFILE_HPP_
