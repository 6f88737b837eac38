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

#ifndef SHINOHARA_RANDOM_HPP_
#define SHINOHARA_RANDOM_HPP_

#include <cstdint>
#include <random>

namespace shinohara {

// splitmix64 finalizer.
constexpr std::uint64_t Avalanche64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

// Derives an independent stream seed from (master seed, stream index).
constexpr std::uint64_t Mix64(std::uint64_t master, std::uint64_t index) {
  return Avalanche64(master ^ Avalanche64(index + 0x9e3779b97f4a7c15ULL));
}

// std::mt19937_64 is fully specified by the standard; the distributions in
// <random> are not, so uniforms are built from the top 53 bits directly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  bool Bernoulli(double p) { return Uniform() < p; }
  std::uint64_t Next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace shinohara

#endif  // SHINOHARA_RANDOM_HPP_
