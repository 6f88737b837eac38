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

#ifndef SHINOHARA_CLI_HPP_
#define SHINOHARA_CLI_HPP_

// `shinohara` command line: phi, simulate, verify, search, serve.
//
// Exit codes: 0 success, 1 verify found a profitable deviation, 2 usage,
// domain, parse or capacity error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "shinohara/equilibrium.hpp"
#include "shinohara/errors.hpp"
#include "shinohara/json_io.hpp"
#include "shinohara/markov_profile.hpp"
#include "shinohara/markov_values.hpp"
#include "shinohara/montecarlo.hpp"
#include "shinohara/residual_system.hpp"
#include "shinohara/service.hpp"

namespace shinohara {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDeviation = 1;
inline constexpr int kExitUsage = 2;

// Named family (symmetric, one-paper, two-paper, combo:<q>, all-rock) or a
// path to a profile JSON file. Named families need `players`.
inline MarkovProfile ResolveProfileSpec(const std::string& spec,
                                        std::optional<int> players) {
  auto need_players = [&]() {
    if (!players) throw ParseError("profile '" + spec + "' needs --players");
    if (*players < 3) {
      throw ParseError("at least three players are required, got " +
                       std::to_string(*players));
    }
    return *players;
  };
  if (spec == "symmetric") return ProfileSymmetricSpe(need_players());
  if (spec == "one-paper") return ProfileOnePaper(need_players());
  if (spec == "two-paper") return ProfileTwoPaper(need_players());
  if (spec == "all-rock") return ProfileAllRock(need_players());
  if (spec.rfind("combo:", 0) == 0) {
    const std::string q_text = spec.substr(6);
    double q = 0.0;
    try {
      std::size_t used = 0;
      q = std::stod(q_text, &used);
      if (used != q_text.size()) throw std::invalid_argument(q_text);
    } catch (const std::exception&) {
      throw ParseError("combo probability '" + q_text + "' is not a number");
    }
    if (!(q >= 0.0 && q <= 1.0)) throw ParseError("combo probability outside [0,1]");
    return ProfileCombo(need_players(), q);
  }

  std::ifstream file(spec);
  if (!file) {
    throw ParseError("unknown profile '" + spec +
                     "' (not a named family and not a readable file)");
  }
  Json doc = Json::parse(file, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) throw ParseError(spec + ": invalid JSON");
  MarkovProfile profile = [&] {
    try {
      return ProfileFromJson(doc);
    } catch (const ParseError& e) {
      throw ParseError(spec + ": " + e.what());
    }
  }();
  if (players && *players != profile.universe()) {
    throw ParseError(spec + ": universe " + std::to_string(profile.universe()) +
                     " does not match --players " + std::to_string(*players));
  }
  return profile;
}

namespace detail {

inline int CommandPhi(std::optional<int> n, const std::string& range,
                      const std::string& format, std::ostream& out,
                      std::ostream& err) {
  int lo = 0;
  int hi = 0;
  if (n && !range.empty()) {
    err << "phi: use either --n or --range\n";
    return kExitUsage;
  }
  if (n) {
    lo = hi = *n;
  } else if (!range.empty()) {
    const auto colon = range.find(':');
    try {
      if (colon == std::string::npos) throw std::invalid_argument(range);
      std::size_t used_lo = 0;
      std::size_t used_hi = 0;
      const std::string a = range.substr(0, colon);
      const std::string b = range.substr(colon + 1);
      lo = std::stoi(a, &used_lo);
      hi = std::stoi(b, &used_hi);
      if (used_lo != a.size() || used_hi != b.size()) throw std::invalid_argument(range);
    } catch (const std::exception&) {
      err << "phi: --range must look like 3:50\n";
      return kExitUsage;
    }
  } else {
    lo = 3;
    hi = 50;
  }
  if (lo < 3 || hi < lo) {
    err << "phi: n must be >= 3 (got " << lo << (hi != lo ? ":" + std::to_string(hi) : "")
        << ")\n";
    return kExitUsage;
  }
  const auto rows = PhiTable(lo, hi);
  if (format == "csv") {
    WritePhiCsv(rows, out);
  } else {
    WritePhiText(rows, out);
  }
  return kExitOk;
}

}  // namespace detail

// Runs the command line and returns the process exit code.
inline int RunCli(int argc, const char* const* argv, std::ostream& out = std::cout,
                  std::ostream& err = std::cerr) {
  CLI::App app{"Shinohara rock-paper-scissors toolkit", "shinohara"};
  app.require_subcommand(1);

  auto* phi = app.add_subcommand("phi", "Symmetric equilibrium paper probability");
  std::optional<int> phi_n;
  std::string phi_range;
  std::string phi_format = "text";
  phi->add_option("--n", phi_n, "Number of remaining players");
  phi->add_option("--range", phi_range, "Inclusive range lo:hi");
  phi->add_option("--format", phi_format)->check(CLI::IsMember({"text", "csv"}));

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo games under a profile");
  int sim_players = 0;
  std::string sim_profile = "symmetric";
  std::int64_t sim_trials = 10000;
  std::uint64_t sim_seed = 0;
  int sim_max_rounds = kDefaultMaxRounds;
  std::string sim_out;
  std::string sim_format = "json";
  unsigned sim_threads = 0;
  simulate->add_option("--players", sim_players)->required();
  simulate->add_option("--profile", sim_profile, "Named family or JSON file");
  simulate->add_option("--trials", sim_trials);
  simulate->add_option("--seed", sim_seed);
  simulate->add_option("--max-rounds", sim_max_rounds);
  simulate->add_option("--out", sim_out, "Output file (default stdout)");
  simulate->add_option("--format", sim_format)->check(CLI::IsMember({"json", "csv"}));
  simulate->add_option("--threads", sim_threads, "Worker threads (0 = all cores)");

  auto* verify = app.add_subcommand("verify", "One-shot deviation check of a profile");
  std::optional<int> verify_players;
  std::string verify_profile = "symmetric";
  double verify_epsilon = kDefaultDeviationEpsilon;
  verify->add_option("--players", verify_players);
  verify->add_option("--profile", verify_profile, "Named family or JSON file");
  verify->add_option("--epsilon", verify_epsilon);

  auto* search = app.add_subcommand("search", "Newton search for totally mixed equilibria");
  int search_universe = 0;
  int search_starts = 20;
  std::uint64_t search_seed = 0;
  search->add_option("--universe", search_universe)->required();
  search->add_option("--starts", search_starts);
  search->add_option("--seed", search_seed);

  auto* serve = app.add_subcommand("serve", "HTTP session service for the web client");
  std::optional<int> serve_port;
  std::string serve_host = "0.0.0.0";
  serve->add_option("--port", serve_port, "Port (default $SHINOHARA_PORT or 8080)");
  serve->add_option("--host", serve_host);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*phi) {
      return detail::CommandPhi(phi_n, phi_range, phi_format, out, err);
    }
    if (*simulate) {
      if (sim_players < 3) {
        err << "simulate: at least three players are required\n";
        return kExitUsage;
      }
      if (sim_trials < 1 || sim_max_rounds < 1) {
        err << "simulate: --trials and --max-rounds must be >= 1\n";
        return kExitUsage;
      }
      const MarkovProfile profile = ResolveProfileSpec(sim_profile, sim_players);
      const SimStats stats =
          RunTrials(profile, sim_players, sim_trials, sim_seed, sim_max_rounds, sim_threads);
      std::ostringstream text;
      if (sim_format == "csv") {
        WriteSimStatsCsv(stats, text);
      } else {
        text << ToJson(stats).dump(2) << '\n';
      }
      if (sim_out.empty()) {
        out << text.str();
      } else {
        std::ofstream file(sim_out);
        if (!file) {
          err << "simulate: cannot write " << sim_out << '\n';
          return kExitUsage;
        }
        file << text.str();
      }
      return kExitOk;
    }
    if (*verify) {
      const MarkovProfile profile = ResolveProfileSpec(verify_profile, verify_players);
      const DeviationReport report = VerifyOneShot(profile, verify_epsilon);
      out << ToJson(report).dump(2) << '\n';
      return report.Passed() ? kExitOk : kExitDeviation;
    }
    if (*search) {
      if (search_starts < 0) {
        err << "search: --starts must be >= 0\n";
        return kExitUsage;
      }
      const SearchResult result =
          SearchTotallyMixed(search_universe, search_starts, search_seed);
      out << ToJson(result).dump(2) << '\n';
      return kExitOk;
    }
    if (*serve) {
      int port = 8080;
      if (serve_port) {
        port = *serve_port;
      } else if (const char* env = std::getenv("SHINOHARA_PORT")) {
        port = std::atoi(env);
      }
      if (port <= 0 || port > 65535) {
        err << "serve: invalid port " << port << '\n';
        return kExitUsage;
      }
      SessionStore store;
      httplib::Server server;
      MountRoutes(server, store);
      out << "listening on " << serve_host << ':' << port << std::endl;
      if (!server.listen(serve_host, port)) {
        err << "serve: cannot bind " << serve_host << ':' << port << '\n';
        return kExitUsage;
      }
      return kExitOk;
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CapacityError& e) {
    err << "capacity exceeded: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::logic_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace shinohara

#endif  // SHINOHARA_CLI_HPP_
