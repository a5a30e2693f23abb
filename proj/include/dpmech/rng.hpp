// Copyright 2026 The dpmech Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>

namespace dpmech {

// Deterministic 64-bit generator (splitmix64). Monte Carlo loops derive one
// stream per trial from the master seed so that results do not depend on how
// the trials are scheduled across threads.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on (0, 1), never exactly 0 or 1.
  double next_unit() {
    const std::uint64_t bits = next_u64() >> 11;  // 53 random bits
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  // Uniform on [lo, hi).
  double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_unit();
  }

  // Mean-zero Laplace with density exp(-|x|/scale)/(2*scale), variance
  // 2*scale^2, drawn by inverse CDF on one 64-bit uniform.
  double next_laplace(double scale) {
    const double u = next_unit() - 0.5;
    const double sign = u < 0 ? -1.0 : 1.0;
    return -scale * sign * std::log(1.0 - 2.0 * std::fabs(u));
  }

 private:
  std::uint64_t state_;
};

// Stateless stream derivation: mixes the master seed with per-use indices.
// f(master, a, b) is injective enough for independent-looking streams and is
// scheduling-invariant by construction.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0) {
  SplitMix64 mix(master ^ (a * 0x9e3779b97f4a7c15ULL) ^
                 (b * 0xda942042e4dd58b5ULL));
  mix.next_u64();
  return mix.next_u64();
}

}  // namespace dpmech
