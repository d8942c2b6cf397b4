// Copyright 2026 The flexopf Authors
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

#ifndef FLEXOPF_TESTS_SUPPORT_TEST_RNG_HPP_
#define FLEXOPF_TESTS_SUPPORT_TEST_RNG_HPP_

#include <cstdint>

namespace flexopf::testing {

// splitmix64: tiny, seedable, and stable across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform integer in [lo, hi].
  int uniform(int lo, int hi) {
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  // Uniform double in [0, 1).
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Value on a 0.25 grid in [-scale, scale]; grids keep the oracle's tight
  // tolerance honest by avoiding near-ties from continuous data.
  double grid(double scale) { return uniform(static_cast<int>(-4 * scale), static_cast<int>(4 * scale)) / 4.0; }

 private:
  std::uint64_t state_;
};

}  // namespace flexopf::testing

#endif  // FLEXOPF_TESTS_SUPPORT_TEST_RNG_HPP_
