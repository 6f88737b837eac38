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

#ifndef SHINOHARA_SERVICE_HPP_
#define SHINOHARA_SERVICE_HPP_

// Interactive human-vs-bots sessions served as JSON over HTTP.
//
//   POST   /games              {players, bot_profile, seed?}     -> 201
//   POST   /games/{id}/action  {action: "rock" | "paper"}        -> 200
//   GET    /games/{id}                                          -> 200
//   DELETE /games/{id}                                          -> 204
//   GET    /phi?n=N                                             -> 200
//
// Errors: 404 unknown session, 409 action on a finished session, 422 bad
// body. The human is always player 0. Once the human is eliminated the
// remaining bots play the game out so the final payoffs are known.

#include <cstdint>
#include <cstdio>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <string>
#include <vector>

#include "json.hpp"
#include "shinohara/equilibrium.hpp"
#include "shinohara/game_core.hpp"
#include "shinohara/json_io.hpp"
#include "shinohara/markov_profile.hpp"
#include "shinohara/montecarlo.hpp"
#include "shinohara/random.hpp"

// After the Eigen-based headers: <resolv.h>, pulled in by httplib, defines a
// `_res` macro that collides with Eigen parameter names.
#include "httplib.h"

namespace shinohara {

inline constexpr int kSessionRoundCap = 10000;
inline constexpr int kMaxSessionPlayers = 1000;
inline constexpr PlayerId kHuman{0};

struct ServiceResponse {
  int status = 200;
  Json body;
};

struct SessionRound {
  GameState state;
  ActionProfile actions;
  RoundResolution resolution;
  bool human_played = false;
};

class GameSession {
 public:
  GameSession(std::string id, MarkovProfile bot_profile, std::uint64_t seed)
      : id_(std::move(id)),
        bot_profile_(std::move(bot_profile)),
        state_(GameState::Full(bot_profile_.universe())),
        seed_(seed),
        rng_(seed) {}

  // Plays one round with the human's `action`; returns the response body.
  // Callers must hold mutex().
  Json Play(Action action) {
    const std::size_t first_new = history_.size();
    PlayRound(action);
    while (!finished_ && !state_.Contains(kHuman)) PlayRound(std::nullopt);

    Json body;
    body["round"] = RoundToJson(history_[first_new]);
    Json automatic = Json::array();
    for (std::size_t k = first_new + 1; k < history_.size(); ++k) {
      automatic.push_back(RoundToJson(history_[k]));
    }
    body["auto_rounds"] = std::move(automatic);
    body["state"] = StateJson();
    body["status"] = finished_ ? "finished" : "ongoing";
    if (payoffs_) body["payoffs"] = payoffs_->values();
    return body;
  }

  Json View() const {
    Json body;
    body["session_id"] = id_;
    body["universe"] = bot_profile_.universe();
    body["human_id"] = kHuman.value;
    body["seed"] = seed_;
    body["status"] = finished_ ? "finished" : "ongoing";
    body["state"] = StateJson();
    body["phi"] = state_.size() >= 3 ? Json(SolvePhi(state_.size()).phi) : Json(nullptr);
    Json history = Json::array();
    for (const auto& round : history_) history.push_back(RoundToJson(round));
    body["history"] = std::move(history);
    if (payoffs_) body["payoffs"] = payoffs_->values();
    body["bot_profile"] = ToJson(bot_profile_);
    return body;
  }

  Json StateJson() const {
    return Json{{"survivors", PlayersToJson(state_.survivors())},
                {"human_id", kHuman.value}};
  }

  bool finished() const { return finished_; }
  std::mutex& mutex() const { return mutex_; }

 private:
  static Json RoundToJson(const SessionRound& round) {
    return Json{{"state", PlayersToJson(round.state.survivors())},
                {"actions", ToJson(round.actions)},
                {"resolution", ToJson(round.resolution)},
                {"eliminated", PlayersToJson(round.resolution.eliminated)},
                {"human_played", round.human_played}};
  }

  void PlayRound(std::optional<Action> human_action) {
    const std::vector<double> probs = bot_profile_.StateProbabilities(state_);
    std::vector<Action> actions(probs.size());
    ActionProfile by_player;
    for (std::size_t k = 0; k < probs.size(); ++k) {
      // Every survivor consumes one draw, so bot streams do not depend on
      // what the human chooses.
      actions[k] = rng_.Bernoulli(probs[k]) ? Action::kPaper : Action::kRock;
      if (state_.survivors()[k] == kHuman && human_action) actions[k] = *human_action;
      by_player.emplace(state_.survivors()[k], actions[k]);
    }
    RoundResolution resolution = ResolveRound(state_, by_player);
    history_.push_back({state_, std::move(by_player), resolution,
                        human_action.has_value()});
    const int universe = bot_profile_.universe();
    if (auto payoffs = TerminalPayoffs(resolution, state_, universe)) {
      payoffs_ = std::move(payoffs);
      finished_ = true;
      return;
    }
    if (auto* next = std::get_if<Continue>(&resolution.outcome)) state_ = next->next;
    if (static_cast<int>(history_.size()) >= kSessionRoundCap) {
      payoffs_ = SharedPayoffs(state_, universe);
      finished_ = true;
    }
  }

  std::string id_;
  MarkovProfile bot_profile_;
  GameState state_;
  std::uint64_t seed_;
  Rng rng_;
  std::vector<SessionRound> history_;
  bool finished_ = false;
  std::optional<PayoffVector> payoffs_;
  mutable std::mutex mutex_;
};

// Bots take designated roles before the human does.
inline SelectionRule BotsFirst(int players) {
  std::vector<int> order;
  for (int i = 1; i < players; ++i) order.push_back(i);
  order.push_back(kHuman.value);
  return SelectionRule::Priority(std::move(order));
}

class SessionStore {
 public:
  SessionStore() : salt_(std::random_device{}()) {}
  explicit SessionStore(std::uint64_t salt) : salt_(salt) {}

  ServiceResponse Create(const Json& body) {
    if (!body.is_object()) return Error(422, "body must be a JSON object");
    auto players_it = body.find("players");
    if (players_it == body.end() || !players_it->is_number_integer()) {
      return Error(422, "'players' must be an integer");
    }
    const int players = players_it->get<int>();
    if (players < 3 || players > kMaxSessionPlayers) {
      return Error(422, "'players' must lie in 3.." + std::to_string(kMaxSessionPlayers));
    }
    std::optional<MarkovProfile> profile;
    const Json bot = body.value("bot_profile", Json("symmetric"));
    try {
      if (bot == "symmetric") {
        profile = ProfileSymmetricSpe(players);
      } else if (bot == "one-paper") {
        profile = ProfileOnePaper(players, BotsFirst(players));
      } else if (bot == "two-paper") {
        profile = ProfileTwoPaper(players, BotsFirst(players));
      } else if (bot.is_object()) {
        profile = ProfileFromJson(bot);
        if (profile->universe() != players) {
          return Error(422, "bot_profile universe does not match players");
        }
      } else {
        return Error(422, "unknown bot_profile " + bot.dump());
      }
    } catch (const std::exception& e) {
      return Error(422, std::string("bad bot_profile: ") + e.what());
    }

    std::uint64_t seed = 0;
    if (auto it = body.find("seed"); it != body.end() && !it->is_null()) {
      if (!it->is_number_integer()) return Error(422, "'seed' must be an integer");
      seed = it->is_number_unsigned() ? it->get<std::uint64_t>()
                                      : static_cast<std::uint64_t>(it->get<std::int64_t>());
    } else {
      std::random_device device;
      seed = (std::uint64_t{device()} << 32) | device();
    }

    std::unique_lock lock(mutex_);
    const std::string id = NextId();
    auto session = std::make_shared<GameSession>(id, std::move(*profile), seed);
    ServiceResponse response{201, {{"session_id", id}, {"state", session->StateJson()}}};
    sessions_.emplace(id, std::move(session));
    return response;
  }

  ServiceResponse Act(const std::string& id, const Json& body) {
    auto session = Find(id);
    if (!session) return Error(404, "unknown session " + id);
    std::optional<Action> action;
    if (body.is_object()) {
      if (auto it = body.find("action"); it != body.end() && it->is_string()) {
        action = ParseAction(it->get<std::string>());
      }
    }
    std::lock_guard lock(session->mutex());
    if (session->finished()) return Error(409, "session " + id + " is finished");
    if (!action) return Error(422, "'action' must be \"rock\" or \"paper\"");
    return {200, session->Play(*action)};
  }

  ServiceResponse Get(const std::string& id) const {
    auto session = Find(id);
    if (!session) return Error(404, "unknown session " + id);
    std::lock_guard lock(session->mutex());
    return {200, session->View()};
  }

  ServiceResponse Delete(const std::string& id) {
    std::unique_lock lock(mutex_);
    if (sessions_.erase(id) == 0) return Error(404, "unknown session " + id);
    return {204, nullptr};
  }

  static ServiceResponse Phi(const std::string& n_param) {
    int n = 0;
    try {
      std::size_t used = 0;
      n = std::stoi(n_param, &used);
      if (used != n_param.size()) throw std::invalid_argument(n_param);
    } catch (const std::exception&) {
      return Error(422, "'n' must be an integer");
    }
    if (n < 3 || n > 100000) return Error(422, "'n' must lie in 3..100000");
    return {200, {{"n", n}, {"phi", SolvePhi(n).phi}}};
  }

  std::size_t Size() const {
    std::shared_lock lock(mutex_);
    return sessions_.size();
  }

 private:
  static ServiceResponse Error(int status, const std::string& message) {
    return {status, {{"error", message}}};
  }

  std::shared_ptr<GameSession> Find(const std::string& id) const {
    std::shared_lock lock(mutex_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
  }

  std::string NextId() {
    char buffer[24];
    std::snprintf(buffer, sizeof(buffer), "g%016llx",
                  static_cast<unsigned long long>(Mix64(salt_, counter_++)));
    return buffer;
  }

  std::uint64_t salt_;
  std::uint64_t counter_ = 0;
  std::map<std::string, std::shared_ptr<GameSession>> sessions_;
  mutable std::shared_mutex mutex_;
};

namespace detail {

inline void Reply(httplib::Response& res, const ServiceResponse& response) {
  res.status = response.status;
  res.set_header("Access-Control-Allow-Origin", "*");
  if (response.status != 204) {
    res.set_content(response.body.dump(), "application/json; charset=utf-8");
  }
}

inline std::optional<Json> ParseBody(const httplib::Request& req) {
  Json body = Json::parse(req.body, nullptr, /*allow_exceptions=*/false);
  if (body.is_discarded()) return std::nullopt;
  return body;
}

}  // namespace detail

inline void MountRoutes(httplib::Server& server, SessionStore& store) {
  using httplib::Request;
  using httplib::Response;
  const ServiceResponse bad_json{422, {{"error", "body is not valid JSON"}}};

  server.Post("/games", [&store, bad_json](const Request& req, Response& res) {
    auto body = detail::ParseBody(req);
    detail::Reply(res, body ? store.Create(*body) : bad_json);
  });
  server.Post(R"(/games/([^/]+)/action)",
              [&store, bad_json](const Request& req, Response& res) {
                auto body = detail::ParseBody(req);
                if (!body) {
                  // Unknown sessions still take precedence over bad bodies.
                  auto view = store.Get(req.matches[1]);
                  detail::Reply(res, view.status == 404 ? view : bad_json);
                  return;
                }
                detail::Reply(res, store.Act(req.matches[1], *body));
              });
  server.Get(R"(/games/([^/]+))", [&store](const Request& req, Response& res) {
    detail::Reply(res, store.Get(req.matches[1]));
  });
  server.Delete(R"(/games/([^/]+))", [&store](const Request& req, Response& res) {
    detail::Reply(res, store.Delete(req.matches[1]));
  });
  server.Get("/phi", [](const Request& req, Response& res) {
    detail::Reply(res, SessionStore::Phi(req.get_param_value("n")));
  });
  server.Options(R"(/.*)", [](const Request&, Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
}

}  // namespace shinohara

#endif  // SHINOHARA_SERVICE_HPP_
