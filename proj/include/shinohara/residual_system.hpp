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

#ifndef SHINOHARA_RESIDUAL_SYSTEM_HPP_
#define SHINOHARA_RESIDUAL_SYSTEM_HPP_

// Indifference system for totally mixed Markov profiles and a numerical
// search for its solutions.
//
// For a state N, a player i in N and the others O = N \ {i}, indifference
// between paper and rock holds iff
//
//            prod_O (1 - pi_jN)            prod_O pi_jN + Lambda_iN
//       ---------------------------  =  -----------------------------
//         1 - prod_O pi_jN               1 - prod_O (1 - pi_jN)
//
// where Lambda_iN sums, over rock sets S containing i with
// 2 <= |S| <= |N| - 2, the probability that exactly S shows rock times
// rho_iS. In the sum rho_iS is 1/2 for |S| = 2 and otherwise the value the
// left-hand side takes at state S:
//
//       rho_iS = prod_{S\{i}} (1 - pi_jS) / (1 - prod_{S\{i}} pi_jS).
//
// Residuals at N depend on the probabilities at N and at proper subsets of
// size <= |N| - 2 only, so the Jacobian is block lower triangular in state
// size.

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "shinohara/errors.hpp"
#include "shinohara/game_core.hpp"
#include "shinohara/markov_profile.hpp"
#include "shinohara/random.hpp"

namespace shinohara {

inline constexpr int kMaxSearchUniverse = 8;

// Flat coordinates pi_iN for every state with at least three survivors,
// ordered by state size, state mask, then player.
class MixedLayout {
 public:
  explicit MixedLayout(int universe)
      : universe_(universe), masks_(EnumerateStateMasks(universe)) {
    if (universe < 3) {
      throw ContractViolation("MixedLayout: universe must be >= 3");
    }
    index_of_.assign(std::size_t{1} << universe, -1);
    int offset = 0;
    for (std::size_t s = 0; s < masks_.size(); ++s) {
      index_of_[masks_[s]] = static_cast<int>(s);
      offsets_.push_back(offset);
      offset += std::popcount(masks_[s]);
    }
    dimension_ = offset;
    dependents_.resize(masks_.size());
    for (std::size_t s = 0; s < masks_.size(); ++s) {
      dependents_[s].push_back(static_cast<int>(s));
      for (std::size_t t = 0; t < masks_.size(); ++t) {
        if ((masks_[t] & masks_[s]) == masks_[s] &&
            std::popcount(masks_[t]) >= std::popcount(masks_[s]) + 2) {
          dependents_[s].push_back(static_cast<int>(t));
        }
      }
    }
  }

  int universe() const { return universe_; }
  int dimension() const { return dimension_; }
  int state_count() const { return static_cast<int>(masks_.size()); }
  std::uint64_t mask(int s) const { return masks_[s]; }
  int offset(int s) const { return offsets_[s]; }
  int size(int s) const { return std::popcount(masks_[s]); }
  int StateIndex(std::uint64_t mask) const { return index_of_[mask]; }

  // States whose residuals move when the probabilities at `s` move.
  const std::vector<int>& Dependents(int s) const { return dependents_[s]; }

  std::vector<double> Flatten(const MarkovProfile& profile) const {
    if (profile.universe() != universe_) {
      throw ContractViolation("MixedLayout: universe mismatch");
    }
    std::vector<double> x(dimension_);
    for (int s = 0; s < state_count(); ++s) {
      const auto probs = profile.StateProbabilities(GameState::FromMask(masks_[s]));
      std::copy(probs.begin(), probs.end(), x.begin() + offsets_[s]);
    }
    return x;
  }

  MarkovProfile Unflatten(std::span<const double> x) const {
    Explicit table;
    for (int s = 0; s < state_count(); ++s) {
      table.paper.emplace(GameState::FromMask(masks_[s]),
                          std::vector<double>(x.begin() + offsets_[s],
                                              x.begin() + offsets_[s] + size(s)));
    }
    return MarkovProfile(universe_, std::move(table));
  }

 private:
  int universe_;
  std::vector<std::uint64_t> masks_;
  std::vector<int> offsets_;
  std::vector<int> index_of_;
  std::vector<std::vector<int>> dependents_;
  int dimension_ = 0;
};

namespace detail {

// rho_iS closed form for every player of state s.
inline void IndifferenceValues(const MixedLayout& layout, int s,
                               std::span<const double> x,
                               std::span<double> closed_rho) {
  const int n = layout.size(s);
  const int base = layout.offset(s);
  for (int a = 0; a < n; ++a) {
    double others_rock = 1.0;
    double others_paper = 1.0;
    for (int b = 0; b < n; ++b) {
      if (b == a) continue;
      others_rock *= 1.0 - x[base + b];
      others_paper *= x[base + b];
    }
    closed_rho[base + a] = others_rock / (1.0 - others_paper);
  }
}

struct ResidualRow {
  double lhs = 0.0;
  double rhs = 0.0;
  double lambda = 0.0;
};

inline void StateResiduals(const MixedLayout& layout, int s,
                           std::span<const double> x,
                           std::span<const double> closed_rho,
                           std::span<ResidualRow> rows) {
  const int n = layout.size(s);
  const int base = layout.offset(s);
  const std::uint64_t mask = layout.mask(s);
  std::vector<int> players;
  for (int bit = 0; bit < 64; ++bit) {
    if (mask >> bit & 1u) players.push_back(bit);
  }
  const std::uint64_t patterns = std::uint64_t{1} << n;
  for (int a = 0; a < n; ++a) {
    double others_rock = 1.0;
    double others_paper = 1.0;
    for (int b = 0; b < n; ++b) {
      if (b == a) continue;
      others_rock *= 1.0 - x[base + b];
      others_paper *= x[base + b];
    }
    // Rock sets S = {a} + rocks, with rocks a set of other positions of
    // size 1..n-3.
    double lambda = 0.0;
    const std::uint64_t mine = std::uint64_t{1} << a;
    for (std::uint64_t rocks = 1; rocks < patterns; ++rocks) {
      if (rocks & mine) continue;
      const int rock_count = std::popcount(rocks);
      if (rock_count > n - 3) continue;
      double weight = 1.0;
      std::uint64_t sub_mask = std::uint64_t{1} << players[a];
      for (int b = 0; b < n; ++b) {
        if (b == a) continue;
        if (rocks >> b & 1u) {
          weight *= 1.0 - x[base + b];
          sub_mask |= std::uint64_t{1} << players[b];
        } else {
          weight *= x[base + b];
        }
      }
      double rho_sub = 0.5;
      if (rock_count + 1 >= 3) {
        const int sub = layout.StateIndex(sub_mask);
        const int position =
            std::popcount(sub_mask & ((std::uint64_t{1} << players[a]) - 1));
        rho_sub = closed_rho[layout.offset(sub) + position];
      }
      lambda += weight * rho_sub;
    }
    rows[a].lhs = others_rock / (1.0 - others_paper);
    rows[a].rhs = (others_paper + lambda) / (1.0 - others_rock);
    rows[a].lambda = lambda;
  }
}

inline std::vector<double> AllIndifferenceValues(const MixedLayout& layout,
                                                 std::span<const double> x) {
  std::vector<double> closed_rho(layout.dimension());
  for (int s = 0; s < layout.state_count(); ++s) {
    IndifferenceValues(layout, s, x, closed_rho);
  }
  return closed_rho;
}

inline std::vector<ResidualRow> AllResidualRows(const MixedLayout& layout,
                                                std::span<const double> x) {
  const std::vector<double> closed_rho = AllIndifferenceValues(layout, x);
  std::vector<ResidualRow> rows(layout.dimension());
  for (int s = 0; s < layout.state_count(); ++s) {
    StateResiduals(layout, s, x, closed_rho,
                   std::span<ResidualRow>(rows).subspan(layout.offset(s),
                                                        layout.size(s)));
  }
  return rows;
}

}  // namespace detail

// lhs - rhs for every coordinate of the layout.
inline Eigen::VectorXd ResidualVector(const MixedLayout& layout,
                                      std::span<const double> x) {
  const auto rows = detail::AllResidualRows(layout, x);
  Eigen::VectorXd f(layout.dimension());
  for (int r = 0; r < layout.dimension(); ++r) f[r] = rows[r].lhs - rows[r].rhs;
  return f;
}

// Central finite differences with step `h`. Only states that depend on the
// perturbed coordinate are re-evaluated; every other entry is exactly zero.
inline Eigen::MatrixXd ResidualJacobian(const MixedLayout& layout,
                                        std::vector<double> x, double h) {
  const int dim = layout.dimension();
  Eigen::MatrixXd jacobian = Eigen::MatrixXd::Zero(dim, dim);
  std::vector<double> closed_rho = detail::AllIndifferenceValues(layout, x);
  std::vector<detail::ResidualRow> plus(dim), minus(dim);
  for (int s = 0; s < layout.state_count(); ++s) {
    const int base = layout.offset(s);
    const std::vector<double> saved_rho(closed_rho.begin() + base,
                                        closed_rho.begin() + base + layout.size(s));
    for (int c = base; c < base + layout.size(s); ++c) {
      const double original = x[c];
      for (int sign : {+1, -1}) {
        x[c] = original + sign * h;
        detail::IndifferenceValues(layout, s, x, closed_rho);
        auto& rows = sign > 0 ? plus : minus;
        for (int d : layout.Dependents(s)) {
          detail::StateResiduals(
              layout, d, x, closed_rho,
              std::span<detail::ResidualRow>(rows).subspan(layout.offset(d),
                                                           layout.size(d)));
        }
      }
      x[c] = original;
      for (int d : layout.Dependents(s)) {
        for (int r = layout.offset(d); r < layout.offset(d) + layout.size(d); ++r) {
          jacobian(r, c) = ((plus[r].lhs - plus[r].rhs) -
                            (minus[r].lhs - minus[r].rhs)) /
                           (2.0 * h);
        }
      }
    }
    std::copy(saved_rho.begin(), saved_rho.end(), closed_rho.begin() + base);
  }
  return jacobian;
}

struct ResidualEntry {
  GameState state;
  PlayerId player;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  // Depends on the player as well as the state: the sum only runs over rock
  // sets containing the player.
  double lambda = 0.0;
};

struct ResidualReport {
  std::vector<ResidualEntry> entries;

  double MaxAbsResidual() const {
    double worst = 0.0;
    for (const auto& e : entries) worst = std::max(worst, std::abs(e.residual));
    return worst;
  }
  double Norm() const {
    double sum = 0.0;
    for (const auto& e : entries) sum += e.residual * e.residual;
    return std::sqrt(sum);
  }
};

inline ResidualReport ResidualSystem(const MarkovProfile& profile) {
  if (!profile.IsTotallyMixed()) {
    throw std::domain_error(
        "ResidualSystem: profile must be totally mixed (all probabilities in (0,1))");
  }
  const MixedLayout layout(profile.universe());
  const std::vector<double> x = layout.Flatten(profile);
  const auto rows = detail::AllResidualRows(layout, x);
  ResidualReport report;
  report.entries.reserve(rows.size());
  for (int s = 0; s < layout.state_count(); ++s) {
    const GameState state = GameState::FromMask(layout.mask(s));
    for (int a = 0; a < layout.size(s); ++a) {
      const auto& row = rows[layout.offset(s) + a];
      report.entries.push_back(ResidualEntry{state, state.survivors()[a], row.lhs,
                                             row.rhs, row.lhs - row.rhs,
                                             row.lambda});
    }
  }
  return report;
}

struct NewtonOptions {
  int max_iterations = 100;
  double tolerance = 1e-9;     // on the Euclidean residual norm
  double fd_step = 1e-6;
  double lower = 1e-6;
  double upper = 1.0 - 1e-6;
  int max_backtracks = 30;
};

struct NewtonOutcome {
  std::vector<double> x;
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Damped Newton with backtracking on the residual norm; iterates are clamped
// into [lower, upper].
inline NewtonOutcome SolveResidualSystem(const MixedLayout& layout,
                                         std::vector<double> x,
                                         const NewtonOptions& options = {}) {
  auto project = [&](std::vector<double>& v) {
    for (double& value : v) value = std::clamp(value, options.lower, options.upper);
  };
  project(x);
  NewtonOutcome outcome;
  double norm = ResidualVector(layout, x).norm();
  int iteration = 0;
  for (; iteration < options.max_iterations && !(norm < options.tolerance);
       ++iteration) {
    const Eigen::VectorXd f = ResidualVector(layout, x);
    const Eigen::MatrixXd jacobian = ResidualJacobian(layout, x, options.fd_step);
    const Eigen::VectorXd step = jacobian.partialPivLu().solve(-f);
    if (!step.allFinite()) break;
    double t = 1.0;
    bool accepted = false;
    for (int k = 0; k <= options.max_backtracks; ++k, t *= 0.5) {
      std::vector<double> trial(x);
      for (int c = 0; c < layout.dimension(); ++c) trial[c] += t * step[c];
      project(trial);
      const double trial_norm = ResidualVector(layout, trial).norm();
      if (trial_norm < (1.0 - 1e-4 * t) * norm) {
        x = std::move(trial);
        norm = trial_norm;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  outcome.x = std::move(x);
  outcome.residual_norm = norm;
  outcome.iterations = iteration;
  outcome.converged = norm < options.tolerance;
  return outcome;
}

struct SearchStart {
  int index = 0;
  bool converged = false;
  double residual_norm = 0.0;
  int iterations = 0;
  int solution = -1;  // index into SearchResult::solutions when converged
};

struct SearchSolution {
  MarkovProfile profile;
  double residual_norm = 0.0;
  int first_start = 0;
  int hits = 0;
};

struct SearchResult {
  std::vector<SearchSolution> solutions;
  std::vector<SearchStart> starts;
};

inline void CheckSearchUniverse(int universe) {
  if (universe < 3 || universe > kMaxSearchUniverse) {
    throw CapacityError("search universe must lie in 3.." +
                        std::to_string(kMaxSearchUniverse) + ", got " +
                        std::to_string(universe));
  }
}

// Newton from `starts` seeded interior points (coordinates uniform in
// [0.05, 0.95], start k seeded with Mix64(seed, k)). Converged points that
// agree within `dedup_tolerance` in every coordinate are merged, keeping
// the first start in index order.
inline SearchResult SearchTotallyMixed(int universe, int starts,
                                       std::uint64_t seed,
                                       const NewtonOptions& options = {},
                                       double dedup_tolerance = 1e-6) {
  CheckSearchUniverse(universe);
  const MixedLayout layout(universe);
  SearchResult result;
  std::vector<std::vector<double>> found;
  for (int k = 0; k < starts; ++k) {
    Rng rng(Mix64(seed, static_cast<std::uint64_t>(k)));
    std::vector<double> x0(layout.dimension());
    for (double& value : x0) value = rng.Uniform(0.05, 0.95);
    const NewtonOutcome outcome = SolveResidualSystem(layout, std::move(x0), options);

    SearchStart start{k, outcome.converged, outcome.residual_norm,
                      outcome.iterations, -1};
    if (outcome.converged) {
      for (std::size_t j = 0; j < found.size(); ++j) {
        bool same = true;
        for (int c = 0; c < layout.dimension() && same; ++c) {
          same = std::abs(found[j][c] - outcome.x[c]) <= dedup_tolerance;
        }
        if (same) {
          start.solution = static_cast<int>(j);
          ++result.solutions[j].hits;
          break;
        }
      }
      if (start.solution < 0) {
        start.solution = static_cast<int>(found.size());
        found.push_back(outcome.x);
        result.solutions.push_back(SearchSolution{
            layout.Unflatten(outcome.x), outcome.residual_norm, k, 1});
      }
    }
    result.starts.push_back(start);
  }
  return result;
}

// Runs Newton from an existing totally mixed profile.
inline std::pair<MarkovProfile, NewtonOutcome> RefineTotallyMixed(
    const MarkovProfile& start, const NewtonOptions& options = {}) {
  CheckSearchUniverse(start.universe());
  const MixedLayout layout(start.universe());
  NewtonOutcome outcome = SolveResidualSystem(layout, layout.Flatten(start), options);
  return {layout.Unflatten(outcome.x), std::move(outcome)};
}

}  // namespace shinohara

#endif  // SHINOHARA_RESIDUAL_SYSTEM_HPP_
