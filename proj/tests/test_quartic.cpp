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

#include "dpmech/quartic.hpp"

#include <algorithm>
#include <cmath>
#include <doctest.h>

#include "dpmech/rng.hpp"

using dpmech::RealRoots;
using dpmech::solve_cubic_monic;
using dpmech::solve_quadratic;
using dpmech::solve_quartic;

namespace {

double eval4(double c4, double c3, double c2, double c1, double c0,
             double x) {
  return (((c4 * x + c3) * x + c2) * x + c1) * x + c0;
}

}  // namespace

TEST_CASE("quadratic roots") {
  RealRoots r = solve_quadratic(1.0, -3.0, 2.0);
  REQUIRE(r.count == 2);
  CHECK(r.r[0] == doctest::Approx(1.0));
  CHECK(r.r[1] == doctest::Approx(2.0));
  CHECK(solve_quadratic(1.0, 0.0, 1.0).count == 0);
  r = solve_quadratic(0.0, 2.0, -4.0);  // degenerates to linear
  REQUIRE(r.count == 1);
  CHECK(r.r[0] == doctest::Approx(2.0));
}

TEST_CASE("cubic roots") {
  // (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6
  RealRoots r = solve_cubic_monic(-6.0, 11.0, -6.0);
  REQUIRE(r.count == 3);
  CHECK(r.r[0] == doctest::Approx(1.0));
  CHECK(r.r[1] == doctest::Approx(2.0));
  CHECK(r.r[2] == doctest::Approx(3.0));
  // single real root
  r = solve_cubic_monic(0.0, 0.0, -8.0);
  REQUIRE(r.count == 1);
  CHECK(r.r[0] == doctest::Approx(2.0));
}

TEST_CASE("quartic recovers planted real roots") {
  dpmech::SplitMix64 rng(42);
  for (int trial = 0; trial < 500; ++trial) {
    double roots[4];
    for (double& x : roots) x = rng.next_uniform(-5.0, 5.0);
    std::sort(roots, roots + 4);
    // expand (x-r0)(x-r1)(x-r2)(x-r3)
    const double e1 = roots[0] + roots[1] + roots[2] + roots[3];
    const double e2 = roots[0] * roots[1] + roots[0] * roots[2] +
                      roots[0] * roots[3] + roots[1] * roots[2] +
                      roots[1] * roots[3] + roots[2] * roots[3];
    const double e3 = roots[0] * roots[1] * roots[2] +
                      roots[0] * roots[1] * roots[3] +
                      roots[0] * roots[2] * roots[3] +
                      roots[1] * roots[2] * roots[3];
    const double e4 = roots[0] * roots[1] * roots[2] * roots[3];
    RealRoots r = solve_quartic(1.0, -e1, e2, -e3, e4);
    REQUIRE(r.count == 4);
    for (int k = 0; k < 4; ++k) {
      CHECK(r.r[k] == doctest::Approx(roots[k]).epsilon(1e-6));
      CHECK(std::fabs(eval4(1.0, -e1, e2, -e3, e4, r.r[k])) < 1e-9);
    }
  }
}

TEST_CASE("quartic with two real and two complex roots") {
  // (x^2+1)(x-1)(x-4) = x^4 -5x^3 +5x^2 -5x +4
  RealRoots r = solve_quartic(1.0, -5.0, 5.0, -5.0, 4.0);
  REQUIRE(r.count == 2);
  CHECK(r.r[0] == doctest::Approx(1.0));
  CHECK(r.r[1] == doctest::Approx(4.0));
}

TEST_CASE("quartic polish hits tight residuals") {
  dpmech::SplitMix64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const double c4 = rng.next_uniform(0.2, 3.0);
    const double c3 = rng.next_uniform(-3.0, 3.0);
    const double c2 = rng.next_uniform(-3.0, 3.0);
    const double c1 = rng.next_uniform(-3.0, 3.0);
    const double c0 = rng.next_uniform(-3.0, 3.0);
    RealRoots r = solve_quartic(c4, c3, c2, c1, c0);
    for (int k = 0; k < r.count; ++k) {
      const double scale = std::max(1.0, std::pow(std::fabs(r.r[k]), 4.0));
      CHECK(std::fabs(eval4(c4, c3, c2, c1, c0, r.r[k])) < 1e-10 * scale);
    }
  }
}
