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

#ifndef SHINOHARA_EQUILIBRIUM_HPP_
#define SHINOHARA_EQUILIBRIUM_HPP_

// Symmetric equilibrium: with n survivors every player shows paper with the
// probability phi_n solving (1-p)^(n-1) + p^(n-1)/n = 1/n on (0,1).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace shinohara {

struct PhiSolution {
  int n = 0;
  double phi = 0.0;
  // Indifference residual (1-phi)^(n-1) + phi^(n-1)/n - 1/n at phi.
  double residual = 0.0;
  int iterations = 0;
};

namespace detail {
inline void RequireAtLeastThree(int n, const char* who) {
  if (n < 3) {
    throw std::domain_error(std::string(who) + ": n must be >= 3, got " +
                            std::to_string(n));
  }
}
}  // namespace detail

// Winning probability of a paper player minus 1/n. Has a spurious root at
// p = 1 in addition to phi_n.
inline double Eq1Residual(double p, int n) {
  detail::RequireAtLeastThree(n, "Eq1Residual");
  return std::pow(1.0 - p, n - 1) + std::pow(p, n - 1) / n - 1.0 / n;
}

// (1-p)^(n-2) / (1 + p + ... + p^(n-2)): the residual form above divided
// by (1-p). Strictly decreasing from 1 at p = 0 towards 0 as p -> 1.
inline double Eq2Lhs(double p, int n) {
  detail::RequireAtLeastThree(n, "Eq2Lhs");
  if (!(p >= 0.0 && p < 1.0)) {
    throw std::domain_error("Eq2Lhs: p must lie in [0, 1), got " +
                            std::to_string(p));
  }
  double series = 1.0;
  double power = 1.0;
  for (int k = 1; k <= n - 2; ++k) {
    power *= p;
    series += power;
  }
  return std::pow(1.0 - p, n - 2) / series;
}

inline constexpr double kPhiBracketTolerance = 1e-14;
inline constexpr int kPhiMaxIterations = 200;

inline PhiSolution SolvePhi(int n) {
  detail::RequireAtLeastThree(n, "SolvePhi");
  const double target = 1.0 / n;
  // Eq2Lhs - 1/n is 1 - 1/n > 0 at 0 and tends to -1/n at 1.
  double lo = 0.0;
  double hi = 1.0;
  int iterations = 0;
  while (hi - lo > kPhiBracketTolerance && iterations < kPhiMaxIterations) {
    const double mid = 0.5 * (lo + hi);
    if (Eq2Lhs(mid, n) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
    ++iterations;
  }
  PhiSolution solution;
  solution.n = n;
  solution.phi = 0.5 * (lo + hi);
  solution.residual = Eq1Residual(solution.phi, n);
  solution.iterations = iterations;
  return solution;
}

inline std::vector<PhiSolution> PhiTable(int n_min, int n_max) {
  detail::RequireAtLeastThree(n_min, "PhiTable");
  if (n_max < n_min) {
    throw std::domain_error("PhiTable: n_max must be >= n_min");
  }
  std::vector<PhiSolution> rows;
  rows.reserve(n_max - n_min + 1);
  for (int n = n_min; n <= n_max; ++n) rows.push_back(SolvePhi(n));
  return rows;
}

inline std::string FormatFixed(double value, int decimals) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, value);
  return buffer;
}

// Header `n,phi`, phi with 6 decimals.
inline void WritePhiCsv(const std::vector<PhiSolution>& rows,
                        std::ostream& out) {
  out << "n,phi\n";
  for (const auto& row : rows) {
    out << row.n << ',' << FormatFixed(row.phi, 6) << '\n';
  }
}

// Human-readable table with 3 decimals, ten columns per block.
inline void WritePhiText(const std::vector<PhiSolution>& rows,
                         std::ostream& out) {
  if (rows.size() == 1) {
    out << FormatFixed(rows.front().phi, 3) << '\n';
    return;
  }
  constexpr std::size_t kColumns = 10;
  for (std::size_t start = 0; start < rows.size(); start += kColumns) {
    const std::size_t end = std::min(rows.size(), start + kColumns);
    std::string n_line = "n    ";
    std::string phi_line = "phi  ";
    for (std::size_t k = start; k < end; ++k) {
      char cell[16];
      std::snprintf(cell, sizeof(cell), "%7d", rows[k].n);
      n_line += cell;
      std::snprintf(cell, sizeof(cell), "%7.3f", rows[k].phi);
      phi_line += cell;
    }
    out << n_line << '\n' << phi_line << '\n';
  }
}

}  // namespace shinohara

#endif  // SHINOHARA_EQUILIBRIUM_HPP_
