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

#include "dpmech/oracle.hpp"

#include <cmath>
#include <doctest.h>
#include <vector>

#include "dpmech/central_solver.hpp"
#include "dpmech/errors.hpp"
#include "dpmech/local_solver.hpp"
#include "dpmech/rng.hpp"

using namespace dpmech;

namespace {

OracleConfig tight() {
  OracleConfig cfg;
  cfg.grid_points_per_dim = 16;
  cfg.refine_rounds = 6;
  return cfg;
}

}  // namespace

TEST_CASE("oracle single-user instances") {
  const std::vector<double> psi = {1.0};
  const OracleResult c = brute_force_central(psi, 0.25, 1, tight());
  CHECK(c.y[0] == doctest::Approx(2.0).epsilon(2e-3));
  CHECK(c.objective == doctest::Approx(3.5).epsilon(1e-4));
  const OracleResult l = brute_force_local(psi, 0.25, 1, tight());
  CHECK(l.y[0] == doctest::Approx(2.0).epsilon(2e-3));
  CHECK(l.objective == doctest::Approx(3.5).epsilon(1e-4));
}

TEST_CASE("oracle symmetric two-user instances") {
  const std::vector<double> psi = {1.0, 1.0};
  const OracleResult c = brute_force_central(psi, 0.25, 2, tight());
  CHECK(c.objective == doctest::Approx(3.8091437).epsilon(1e-4));
  // The local optimum at var = 1/4 sits on the face y = (12^{1/3}, 0); the
  // interior symmetric stationary point (objective 4.70175) is not optimal.
  const OracleResult l = brute_force_local(psi, 0.25, 2, tight());
  CHECK(l.objective == doctest::Approx(4.1841427).epsilon(1e-4));
  CHECK(c.objective <= l.objective);
}

TEST_CASE("oracle finds the zero face") {
  const std::vector<double> psi = {1.0, 12.0};
  const OracleResult c = brute_force_central(psi, 0.25, 2, tight());
  CHECK(c.y[1] == 0.0);
  CHECK(c.y[0] == doctest::Approx(std::cbrt(12.0)).epsilon(1e-3));
}

TEST_CASE("oracle self-consistency under grid refinement") {
  SplitMix64 rng(1414);
  for (int t = 0; t < 10; ++t) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 4);
    std::vector<double> psi(n);
    for (double& p : psi) p = rng.next_uniform(0.5, 5.0);
    OracleConfig coarse;
    coarse.grid_points_per_dim = 12;
    coarse.refine_rounds = 5;
    OracleConfig fine = coarse;
    fine.grid_points_per_dim = 24;
    const OracleResult a = brute_force_central(psi, 0.25, n, coarse);
    const OracleResult b = brute_force_central(psi, 0.25, n, fine);
    CHECK(std::fabs(a.objective - b.objective) <=
          1e-4 * std::fabs(b.objective));
  }
}

TEST_CASE("oracle brackets the solvers") {
  SplitMix64 rng(1515);
  OracleConfig cfg;
  cfg.grid_points_per_dim = 14;
  cfg.refine_rounds = 5;
  for (int t = 0; t < 20; ++t) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 5);
    std::vector<double> psi(n);
    for (double& p : psi) p = rng.next_uniform(0.5, 5.0);
    const double var = (rng.next_u64() & 1) ? 0.25 : 0.05;
    const OracleResult oc = brute_force_central(psi, var, n, cfg);
    const CentralSolution sc = solve_central_psi(psi, var);
    // Never below the solver by more than 1e-6, never above beyond its own
    // grid resolution.
    CHECK(oc.objective >= sc.objective - 1e-6);
    CHECK(oc.objective <= sc.objective + 1e-4 * sc.objective);
    const OracleResult ol = brute_force_local(psi, var, n, cfg);
    const LocalSolution sl = solve_local_psi(psi, var, 0.01);
    CHECK(ol.objective >= sl.objective - 1e-6);
    CHECK(ol.objective <= 1.01 * sl.objective);
  }
}

TEST_CASE("oracle rejects large dimensions") {
  const std::vector<double> psi(7, 1.0);
  CHECK_THROWS_AS(brute_force_central(psi, 0.25, 7, OracleConfig{}),
                  DimensionTooLargeError);
}

TEST_CASE("oracle is parallelism independent") {
  const std::vector<double> psi = {0.8, 1.9, 3.4};
  OracleConfig par = tight(), ser = tight();
  ser.parallel = false;
  const OracleResult a = brute_force_central(psi, 0.25, 3, par);
  const OracleResult b = brute_force_central(psi, 0.25, 3, ser);
  CHECK(a.objective == b.objective);
  CHECK(a.y == b.y);
}
