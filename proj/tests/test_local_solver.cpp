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

#include "dpmech/local_solver.hpp"

#include <cmath>
#include <doctest.h>
#include <vector>

#include "dpmech/central_solver.hpp"
#include "dpmech/errors.hpp"
#include "dpmech/oracle.hpp"
#include "dpmech/rng.hpp"
#include "oracles.hpp"

using namespace dpmech;

namespace {

double g_curve(double z, double var) {
  const double t = var * z * z + 2.0;
  return 4.0 * z / (t * t);
}

std::vector<double> random_psi(SplitMix64& rng, int n) {
  std::vector<double> psi(n);
  for (double& p : psi) p = rng.next_uniform(0.5, 5.0);
  return psi;
}

}  // namespace

TEST_CASE("objective_local hand values") {
  const std::vector<double> psi1 = {1.0};
  CHECK(objective_local(std::vector<double>{2.0}, psi1, 0.25, 1) ==
        doctest::Approx(3.5).epsilon(1e-12));

  const double y = std::cbrt(3.0);
  const std::vector<double> psi2 = {1.0, 1.0};
  CHECK(objective_local(std::vector<double>{y, y}, psi2, 0.25, 2) ==
        doctest::Approx(4.7017475).epsilon(1e-6));

  const std::vector<double> psi3 = {1.0, 5.0};
  CHECK(objective_local(std::vector<double>{1.0, 0.0}, psi3, 0.25, 2) ==
        doctest::Approx(7.75).epsilon(1e-12));

  CHECK_THROWS_AS(
      objective_local(std::vector<double>{0.0, 0.0}, psi2, 0.25, 2),
      AllZeroError);
}

TEST_CASE("branch_roots at the peak level yields the double root") {
  const double var = 0.25;
  const double peak = 3.0 * std::sqrt(3.0) / (8.0 * std::sqrt(2.0 * var));
  CHECK(peak == doctest::Approx(0.91855865).epsilon(1e-8));  // var = 1/4
  // choose lambda so that (psi/(n+1)) lambda^2 equals the peak exactly
  const double lambda = std::sqrt(3.0 * peak);
  const BranchRoots br = branch_roots(1.0, lambda, var, 2);
  REQUIRE(br.count == 1);
  CHECK(br.low == doctest::Approx(std::sqrt(8.0 / 3.0)).epsilon(1e-9));
  CHECK(br.high == br.low);
}

TEST_CASE("branch_roots above the peak has no solution") {
  const double var = 0.25;
  const double peak = 3.0 * std::sqrt(3.0) / (8.0 * std::sqrt(2.0 * var));
  const double lambda = std::sqrt(3.0 * peak * 1.05);
  CHECK(branch_roots(1.0, lambda, var, 2).count == 0);
}

TEST_CASE("branch_roots straddle the fold and satisfy the equation") {
  const double var = 0.25;
  const double level = 0.3;
  const double lambda = std::sqrt(3.0 * level);  // psi=1, n=2
  const BranchRoots br = branch_roots(1.0, lambda, var, 2);
  REQUIRE(br.count == 2);
  const double fold = std::sqrt(8.0 / 3.0);
  CHECK(br.low < fold);
  CHECK(br.high > fold);
  CHECK(std::fabs(g_curve(br.low, var) - level) < 1e-10);
  CHECK(std::fabs(g_curve(br.high, var) - level) < 1e-10);
  // independent bisection oracle on each monotone branch
  const auto bisect = [&](double lo, double hi, bool rising) {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if ((g_curve(mid, var) < level) == rising)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  };
  CHECK(br.low == doctest::Approx(bisect(0.0, fold, true)).epsilon(1e-9));
  CHECK(br.high == doctest::Approx(bisect(fold, 50.0, false)).epsilon(1e-9));
}

TEST_CASE("lambda_bounds contain the stationary multiplier") {
  // Symmetric n=2 instance: the full-active-set multiplier fixed point is
  // lambda = 2/(0.25 + 2/3^{2/3}).
  const std::vector<double> psi = {1.0, 1.0};
  const LambdaBounds b = lambda_bounds(2, psi, 0.25, 2);
  const double lam = 2.0 / (0.25 + 2.0 / std::pow(3.0, 2.0 / 3.0));
  CHECK(lam == doctest::Approx(1.6508).epsilon(1e-3));
  CHECK(b.lo <= lam);
  CHECK(b.hi >= lam);
}

TEST_CASE("lambda_bounds closed-form lower bound at n=1") {
  const std::vector<double> psi = {1.0};
  const LambdaBounds b = lambda_bounds(1, psi, 0.25, 1);
  const double expect =
      1.0 / (0.25 + std::pow(std::sqrt(2.0) * 1.0 * 1.0 / 2.0, 2.0 / 3.0));
  CHECK(b.lo == doctest::Approx(expect).epsilon(1e-12));
  // lambda* = 1/(0.25 + 2/4) at the optimum y = 2.
  CHECK(4.0 / 3.0 >= b.lo);
  CHECK(4.0 / 3.0 <= b.hi);
}

TEST_CASE("lambda_bounds are ordered on random instances") {
  SplitMix64 rng(606);
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 6);
    std::vector<double> psi = random_psi(rng, n);
    std::sort(psi.begin(), psi.end());
    const double var = (rng.next_u64() & 1) ? 0.25 : 0.05;
    for (int i = 1; i <= n; ++i) {
      const LambdaBounds b = lambda_bounds(i, psi, var, n);
      CHECK(b.hi >= b.lo);
    }
  }
}

TEST_CASE("solve_local single user closed form") {
  const std::vector<double> psi = {1.0};
  const LocalSolution s = solve_local_psi(psi, 0.25, 0.01);
  CHECK(s.y[0] == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(s.objective <= 3.5 * 1.01);
  CHECK(s.objective >= 3.5 - 1e-9);
}

TEST_CASE("solve_local symmetric two users prefers the face at var=1/4") {
  // The symmetric stationary point y = 3^{1/3} (objective 4.70175) is beaten
  // by the face allocation y = (12^{1/3}, 0) with objective 4.18414; the
  // PTAS must return the face. (The symmetric point is optimal at var = 1.)
  const std::vector<double> psi = {1.0, 1.0};
  const LocalSolution s = solve_local_psi(psi, 0.25, 0.01);
  CHECK(s.objective == doctest::Approx(4.1841427).epsilon(1e-4));
  CHECK(s.active_count == 1);
  CHECK(s.objective <= 4.7018 * 1.01);  // below the interior point's value
  OracleConfig ocfg;
  ocfg.grid_points_per_dim = 24;
  ocfg.refine_rounds = 6;
  const OracleResult o = brute_force_local(psi, 0.25, 2, ocfg);
  CHECK(s.objective <= 1.01 * o.objective);
}

TEST_CASE("solve_local symmetric two users is interior at var=1") {
  const std::vector<double> psi = {1.0, 1.0};
  const LocalSolution s = solve_local_psi(psi, 1.0, 0.01);
  CHECK(s.y[0] == doctest::Approx(std::cbrt(3.0)).epsilon(1e-6));
  CHECK(s.y[1] == doctest::Approx(std::cbrt(3.0)).epsilon(1e-6));
  CHECK(s.active_count == 2);
  CHECK(s.objective == doctest::Approx(5.8267486).epsilon(1e-4));
}

TEST_CASE("solve_local drops the expensive user") {
  const std::vector<double> psi = {1.0, 40.0};
  const LocalSolution s = solve_local_psi(psi, 0.25, 0.01);
  CHECK(s.y[1] == 0.0);
  // Reduced single-active problem: minimize 3(0.25 + 2/y^2) + y.
  const auto f = [](double y) { return 3.0 * (0.25 + 2.0 / (y * y)) + y; };
  const double y_star = testing::golden_min(f, 0.05, 20.0);
  CHECK(y_star == doctest::Approx(std::cbrt(12.0)).epsilon(1e-6));
  CHECK(s.y[0] == doctest::Approx(y_star).epsilon(1e-6));
  CHECK(s.objective <= 1.01 * f(y_star));
}

TEST_CASE("solve_local meets the PTAS factor against the oracle") {
  SplitMix64 rng(707);
  OracleConfig ocfg;
  ocfg.grid_points_per_dim = 14;
  ocfg.refine_rounds = 5;
  for (int t = 0; t < 40; ++t) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 5);
    const double var = (rng.next_u64() & 1) ? 0.25 : 0.05;
    const std::vector<double> psi = random_psi(rng, n);
    const LocalSolution s = solve_local_psi(psi, var, 0.01);
    const OracleResult o = brute_force_local(psi, var, n, ocfg);
    CHECK(s.objective <= 1.01 * o.objective);
  }
}

TEST_CASE("solve_local stationarity at the recomputed multiplier") {
  SplitMix64 rng(808);
  for (int t = 0; t < 50; ++t) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 5);
    const double var = (rng.next_u64() & 1) ? 0.25 : 0.05;
    const std::vector<double> psi = random_psi(rng, n);
    const LocalSolution s = solve_local_psi(psi, var, 0.01);
    double lambda = 0.0;
    for (int i = 0; i < n; ++i)
      if (s.y[i] > 0.0) lambda += 1.0 / (var + 2.0 / (s.y[i] * s.y[i]));
    CHECK(lambda == doctest::Approx(s.lambda).epsilon(1e-12));
    for (int i = 0; i < n; ++i) {
      if (s.y[i] <= 0.0) continue;
      const double t2 = 2.0 + var * s.y[i] * s.y[i];
      const double lhs = 4.0 * s.y[i] / (psi[i] * t2 * t2);
      const double rhs = lambda * lambda / (n + 1);
      CHECK(std::fabs(lhs - rhs) <= 1e-6 * rhs);
    }
  }
}

TEST_CASE("solve_local low branch is confined to the top cost block") {
  SplitMix64 rng(909);
  for (int t = 0; t < 60; ++t) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 6);
    const double var = (rng.next_u64() & 1) ? 0.25 : 0.05;
    std::vector<double> psi = random_psi(rng, n);
    if (t % 3 == 0 && n >= 2) psi[1] = psi[0];  // exercise tie blocks
    const LocalSolution s = solve_local_psi(psi, var, 0.01);
    double max_active_psi = 0.0;
    for (int i = 0; i < n; ++i)
      if (s.y[i] > 0.0) max_active_psi = std::max(max_active_psi, psi[i]);
    int low_count = 0;
    for (int i = 0; i < n; ++i) {
      if (s.branch_flags[i] != BranchFlag::kLow) continue;
      ++low_count;
      // Low-branch users only in the top tied block of the active set.
      CHECK(s.y[i] > 0.0);
      CHECK(psi[i] == doctest::Approx(max_active_psi).epsilon(1e-9));
    }
    // With a strictly separated top cost, at most one user rides low.
    int top_ties = 0;
    for (int i = 0; i < n; ++i)
      if (s.y[i] > 0.0 &&
          std::fabs(psi[i] - max_active_psi) <= 1e-12 * max_active_psi)
        ++top_ties;
    if (top_ties == 1) CHECK(low_count <= 1);
  }
}

TEST_CASE("solve_local allocation is monotone in the virtual cost") {
  SplitMix64 rng(1010);
  for (int t = 0; t < 60; ++t) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 5);
    const std::vector<double> psi = random_psi(rng, n);
    const LocalSolution s = solve_local_psi(psi, 0.25, 0.01);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (psi[i] < psi[j]) CHECK(s.y[i] >= s.y[j] - 1e-9);
  }
}

TEST_CASE("local objective dominates the central objective") {
  SplitMix64 rng(1111);
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 5);
    const double var = (rng.next_u64() & 1) ? 0.25 : 0.05;
    const std::vector<double> psi = random_psi(rng, n);
    const LocalSolution l = solve_local_psi(psi, var, 0.01);
    const CentralSolution c = solve_central_psi(psi, var);
    CHECK(l.objective >= c.objective - 1e-9);
  }
}

TEST_CASE("central and local coincide for a single user") {
  SplitMix64 rng(1212);
  for (int t = 0; t < 20; ++t) {
    const std::vector<double> psi = {rng.next_uniform(0.5, 5.0)};
    const double var = rng.next_uniform(0.02, 0.25);
    const CentralSolution c = solve_central_psi(psi, var);
    const LocalSolution l = solve_local_psi(psi, var, 0.01);
    const double expect = std::cbrt(8.0 / psi[0]);
    CHECK(c.y[0] == doctest::Approx(expect).epsilon(1e-9));
    CHECK(l.y[0] == doctest::Approx(expect).epsilon(1e-7));
    CHECK(l.objective == doctest::Approx(c.objective).epsilon(1e-9));
  }
}

TEST_CASE("optimal_local_weights") {
  const std::vector<double> sym = {1.0, 1.0};
  const auto w1 = optimal_local_weights(sym, 0.25);
  CHECK(w1[0] == doctest::Approx(0.5));
  const std::vector<double> inactive = {1.0, 0.0};
  const auto w2 = optimal_local_weights(inactive, 0.8);
  CHECK(w2[0] == doctest::Approx(1.0));
  CHECK(w2[1] == 0.0);
  const std::vector<double> mix = {1.0, 2.0};
  const auto w3 = optimal_local_weights(mix, 0.25);
  CHECK(w3[0] == doctest::Approx(0.25));
  CHECK(w3[1] == doctest::Approx(0.75));
  CHECK_THROWS_AS(optimal_local_weights(std::vector<double>{0.0}, 0.25),
                  AllZeroError);
}

TEST_CASE("solve_local is deterministic and parallelism independent") {
  SplitMix64 rng(1313);
  const std::vector<double> psi = random_psi(rng, 12);
  SolverConfig par, ser;
  par.parallel = true;
  ser.parallel = false;
  const LocalSolution a = solve_local_psi(psi, 0.25, 0.01, par);
  const LocalSolution b = solve_local_psi(psi, 0.25, 0.01, ser);
  CHECK(a.y == b.y);
  CHECK(a.objective == b.objective);
  CHECK(a.lambda == b.lambda);
}

TEST_CASE("solve_local handles full and partial tie-block activation") {
  OracleConfig ocfg;
  ocfg.grid_points_per_dim = 16;
  ocfg.refine_rounds = 6;
  // At var=1/4 fully tied instances single-source; at var=1 they keep most
  // of the block active. Both must match brute force.
  for (double var : {0.25, 1.0}) {
    for (int n : {3, 4}) {
      const std::vector<double> psi(n, 1.0);
      const LocalSolution s = solve_local_psi(psi, var, 0.01);
      const OracleResult o = brute_force_local(psi, var, n, ocfg);
      CHECK(s.objective <= 1.001 * o.objective);
      CHECK(s.objective >= o.objective - 1e-6);
    }
  }
  const LocalSolution s43 = solve_local_psi(std::vector<double>(4, 1.0), 1.0,
                                            0.01);
  CHECK(s43.active_count == 3);  // partial block activation
  const std::vector<double> midtie = {0.6, 1.3, 1.3, 1.3};
  const LocalSolution sm = solve_local_psi(midtie, 0.25, 0.01);
  const OracleResult om = brute_force_local(midtie, 0.25, 4, ocfg);
  CHECK(sm.objective <= 1.001 * om.objective);
}
