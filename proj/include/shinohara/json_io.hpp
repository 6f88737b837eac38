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

#ifndef SHINOHARA_JSON_IO_HPP_
#define SHINOHARA_JSON_IO_HPP_

// JSON encodings shared by the CLI and the HTTP service.
//
// Profiles:
//   {"universe": 5, "kind": "size_symmetric", "paper": {"3": 0.5, ...}}
//   {"universe": 6, "kind": "role_based",
//    "selection": "lowest_index" | "highest_index" | {"priority": [...]},
//    "roles": {"3": [1.0, 0.37], ...}, "others": 0.0}
//   {"universe": 4, "kind": "explicit",
//    "states": {"0,1,2": [0.5, 0.5, 0.5], ...}}
// Explicit probabilities are listed in ascending player order.

#include <string>

#include "json.hpp"
#include "shinohara/errors.hpp"
#include "shinohara/game_core.hpp"
#include "shinohara/markov_profile.hpp"
#include "shinohara/markov_values.hpp"
#include "shinohara/montecarlo.hpp"
#include "shinohara/residual_system.hpp"

namespace shinohara {

using Json = nlohmann::ordered_json;

inline Json PlayersToJson(const std::vector<PlayerId>& players) {
  Json out = Json::array();
  for (PlayerId p : players) out.push_back(p.value);
  return out;
}

inline Json ToJson(const RoundResolution& resolution) {
  Json out;
  out["kind"] = ResolutionKindName(resolution.kind());
  std::visit(
      [&](const auto& outcome) {
        using T = std::decay_t<decltype(outcome)>;
        if constexpr (std::is_same_v<T, Winner>) {
          out["winner"] = outcome.player.value;
        } else if constexpr (std::is_same_v<T, SplitTwo>) {
          out["pair"] = {outcome.first.value, outcome.second.value};
        } else if constexpr (std::is_same_v<T, Continue>) {
          out["survivors"] = PlayersToJson(outcome.next.survivors());
        }
      },
      resolution.outcome);
  out["eliminated"] = PlayersToJson(resolution.eliminated);
  return out;
}

inline Json ToJson(const ActionProfile& actions) {
  Json out = Json::object();
  for (const auto& [player, action] : actions) {
    out[std::to_string(player.value)] = ActionName(action);
  }
  return out;
}

inline Json ToJson(const SelectionRule& rule) {
  switch (rule.kind) {
    case SelectionRule::Kind::kLowestIndex: return "lowest_index";
    case SelectionRule::Kind::kHighestIndex: return "highest_index";
    case SelectionRule::Kind::kPriority: return Json{{"priority", rule.priority}};
  }
  return nullptr;
}

inline Json ToJson(const MarkovProfile& profile) {
  Json out;
  out["universe"] = profile.universe();
  out["kind"] = profile.KindName();
  std::visit(
      [&](const auto& rep) {
        using T = std::decay_t<decltype(rep)>;
        if constexpr (std::is_same_v<T, SizeSymmetric>) {
          Json paper = Json::object();
          for (const auto& [n, p] : rep.paper) paper[std::to_string(n)] = p;
          out["paper"] = std::move(paper);
        } else if constexpr (std::is_same_v<T, RoleBased>) {
          out["selection"] = ToJson(rep.selection);
          Json roles = Json::object();
          for (const auto& [n, probs] : rep.roles) roles[std::to_string(n)] = probs;
          out["roles"] = std::move(roles);
          out["others"] = rep.others;
        } else {
          Json states = Json::object();
          for (const auto& [state, probs] : rep.paper) states[state.Key()] = probs;
          out["states"] = std::move(states);
        }
      },
      profile.representation());
  return out;
}

namespace detail {

inline int ParseSizeKey(const std::string& key) {
  if (key.empty() || key.size() > 4 ||
      !std::all_of(key.begin(), key.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw ParseError("state size key '" + key + "' is not an integer");
  }
  return std::stoi(key);
}

inline const Json& Field(const Json& object, const char* name) {
  auto it = object.find(name);
  if (it == object.end()) {
    throw ParseError(std::string("missing field '") + name + "'");
  }
  return *it;
}

inline double Probability(const Json& value, const std::string& where) {
  if (!value.is_number()) throw ParseError(where + ": expected a number");
  return value.get<double>();
}

}  // namespace detail

// Throws ParseError on malformed input; range and completeness violations
// surface as ParseError too, with the underlying message.
inline MarkovProfile ProfileFromJson(const Json& in) {
  using detail::Field;
  if (!in.is_object()) throw ParseError("profile must be a JSON object");
  const Json& universe_field = Field(in, "universe");
  if (!universe_field.is_number_integer()) {
    throw ParseError("'universe' must be an integer");
  }
  const int universe = universe_field.get<int>();
  const Json& kind_field = Field(in, "kind");
  if (!kind_field.is_string()) throw ParseError("'kind' must be a string");
  const std::string kind = kind_field.get<std::string>();

  try {
    if (kind == "size_symmetric") {
      const Json& paper = Field(in, "paper");
      if (!paper.is_object()) throw ParseError("'paper' must be an object");
      SizeSymmetric sym;
      for (const auto& [key, value] : paper.items()) {
        sym.paper[detail::ParseSizeKey(key)] =
            detail::Probability(value, "paper[" + key + "]");
      }
      return MarkovProfile(universe, std::move(sym));
    }
    if (kind == "role_based") {
      RoleBased role;
      if (auto it = in.find("selection"); it != in.end()) {
        if (*it == "lowest_index") {
          role.selection = SelectionRule::LowestIndex();
        } else if (*it == "highest_index") {
          role.selection = SelectionRule::HighestIndex();
        } else if (it->is_object() && it->contains("priority") &&
                   (*it)["priority"].is_array()) {
          std::vector<int> order;
          for (const Json& v : (*it)["priority"]) {
            if (!v.is_number_integer()) throw ParseError("priority entries must be integers");
            order.push_back(v.get<int>());
          }
          role.selection = SelectionRule::Priority(std::move(order));
        } else {
          throw ParseError("unknown selection rule " + it->dump());
        }
      }
      if (auto it = in.find("others"); it != in.end()) {
        role.others = detail::Probability(*it, "others");
      }
      const Json& roles = Field(in, "roles");
      if (!roles.is_object()) throw ParseError("'roles' must be an object");
      for (const auto& [key, value] : roles.items()) {
        if (!value.is_array()) throw ParseError("roles[" + key + "] must be an array");
        std::vector<double> probs;
        for (const Json& p : value) probs.push_back(detail::Probability(p, "roles[" + key + "]"));
        role.roles[detail::ParseSizeKey(key)] = std::move(probs);
      }
      return MarkovProfile(universe, std::move(role));
    }
    if (kind == "explicit") {
      const Json& states = Field(in, "states");
      if (!states.is_object()) throw ParseError("'states' must be an object");
      Explicit table;
      for (const auto& [key, value] : states.items()) {
        if (!value.is_array()) throw ParseError("states[" + key + "] must be an array");
        std::vector<double> probs;
        for (const Json& p : value) probs.push_back(detail::Probability(p, "states[" + key + "]"));
        table.paper[GameState::FromKey(key)] = std::move(probs);
      }
      return MarkovProfile(universe, std::move(table));
    }
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(e.what());
  }
  throw ParseError("unknown profile kind '" + kind + "'");
}

inline Json ToJson(const SimStats& stats) {
  Json out;
  out["trials"] = stats.trials;
  out["master_seed"] = stats.master_seed;
  out["universe"] = stats.universe;
  out["max_rounds"] = stats.max_rounds;
  out["win_frequency"] = stats.win_frequency;
  out["mean_payoff"] = stats.mean_payoff;
  Json histogram = Json::object();
  for (const auto& [rounds, games] : stats.round_count_histogram) {
    histogram[std::to_string(rounds)] = games;
  }
  out["round_count_histogram"] = std::move(histogram);
  out["total_rounds"] = stats.total_rounds;
  out["repeat_count"] = stats.repeat_count;
  out["split_count"] = stats.split_count;
  out["truncation_count"] = stats.truncation_count;
  return out;
}

inline Json ToJson(const DeviationReport& report) {
  Json out;
  out["epsilon"] = report.epsilon;
  out["flags"] = report.FlagCount();
  out["max_gain"] = report.MaxGain();
  Json entries = Json::array();
  for (const auto& e : report.entries) {
    entries.push_back({{"state", e.state.Key()},
                       {"player", e.player.value},
                       {"paper_probability", e.paper_probability},
                       {"value_paper", e.value_paper},
                       {"value_rock", e.value_rock},
                       {"profile_value", e.profile_value},
                       {"gain", e.gain},
                       {"flagged", e.flagged}});
  }
  out["entries"] = std::move(entries);
  return out;
}

inline Json ToJson(const ResidualReport& report) {
  Json out;
  out["max_abs_residual"] = report.MaxAbsResidual();
  Json entries = Json::array();
  for (const auto& e : report.entries) {
    entries.push_back({{"state", e.state.Key()},
                       {"player", e.player.value},
                       {"lhs", e.lhs},
                       {"rhs", e.rhs},
                       {"residual", e.residual},
                       {"lambda", e.lambda}});
  }
  out["entries"] = std::move(entries);
  return out;
}

inline Json ToJson(const SearchResult& result) {
  Json out;
  Json solutions = Json::array();
  for (const auto& s : result.solutions) {
    solutions.push_back({{"residual_norm", s.residual_norm},
                         {"first_start", s.first_start},
                         {"hits", s.hits},
                         {"profile", ToJson(s.profile)}});
  }
  Json starts = Json::array();
  for (const auto& s : result.starts) {
    starts.push_back({{"start", s.index},
                      {"converged", s.converged},
                      {"residual_norm", s.residual_norm},
                      {"iterations", s.iterations},
                      {"solution", s.solution}});
  }
  out["solutions"] = std::move(solutions);
  out["starts"] = std::move(starts);
  return out;
}

}  // namespace shinohara

#endif  // SHINOHARA_JSON_IO_HPP_
