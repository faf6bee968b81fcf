// Copyright 2026 The drivescope Authors
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

#pragma once

// Deterministic pseudorandom streams.
//
// Engine: std::mt19937_64, whose output sequence is fixed by the C++ standard.
// uniform() maps the top 53 bits of one draw to [0, 1); normal() is
// Box-Muller on two uniforms (the second variate is discarded, so every
// normal consumes exactly two engine draws). Seeds for derived streams are
// produced with SplitMix64.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>

namespace drivescope {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seed for item (a, b) of a batch: splitmix64(splitmix64(base) ^ splitmix64(a << 32 | b)).
// Depends only on (base, a, b), never on generation order.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint32_t a, std::uint32_t b) {
  return splitmix64(splitmix64(base) ^ splitmix64((static_cast<std::uint64_t>(a) << 32) | b));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform index in [0, n).
  std::size_t index(std::size_t n) {
    auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return i < n ? i : n - 1;
  }

  double normal() {
    constexpr double kTwoPi = 6.283185307179586476925;
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace drivescope
