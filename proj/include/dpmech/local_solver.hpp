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

#include <span>
#include <vector>

#include "dpmech/config.hpp"
#include "dpmech/sensitivity.hpp"

namespace dpmech {

// Which root of 4z/(var z^2 + 2)^2 = psi_i lambda^2/(n+1) an active user
// takes: kLow is the branch rising toward the fold point sqrt(2/(3 var)),
// kHigh the branch falling past it. Inactive users carry kNone.
enum class BranchFlag { kNone, kHigh, kLow };

// Positive solutions of 4z/(var z^2 + 2)^2 = level. none above the peak,
// a double root exactly at it, two roots straddling sqrt(2/(3 var)) below.
struct BranchRoots {
  int count = 0;
  double low = 0.0;
  double high = 0.0;
};

struct LambdaBounds {
  double lo = 0.0;
  double hi = 0.0;
};

// (1+eps)-approximate solution of the local pointwise program
//   min_{y >= 0} (n+1) / sum_i 1/(var + 2/y_i^2) + sum psi_i y_i.
struct LocalSolution {
  std::vector<double> y;           // caller's user order
  double lambda = 0.0;             // aggregate sum 1/(var + 2/y_j^2)
  int active_count = 0;
  std::vector<BranchFlag> branch_flags;  // caller's user order
  double objective = 0.0;
  double ptas_eps = 0.0;
};

// Objective value; users with y_i = 0 contribute nothing to the harmonic
// aggregate. Throws AllZeroError when every y_i is zero.
double objective_local(std::span<const double> y, std::span<const double> psi,
                       double var, int n);

// Roots of user i's stationarity equation at multiplier lambda.
BranchRoots branch_roots(double psi_i, double lambda, double var, int n);

// Largest lambda for which the stationarity equation of a user with virtual
// cost psi still has a solution.
double lambda_feasibility_limit(double psi, double var, int n);

// Closed-form search bounds on lambda for candidate active-set size i
// (1-based): lo = n/(var + (sqrt2 n sum_psi/(n+1))^{2/3}); hi = the
// feasibility-limit lambda at psi_{i-1} (psi_1 when i = 1).
LambdaBounds lambda_bounds(int i, std::span<const double> psi_sorted,
                           double var, int n);

LocalSolution solve_local_psi(std::span<const double> psi, double var,
                              double ptas_eps, const SolverConfig& cfg = {});
LocalSolution solve_local_virtual(const VirtualProfile& vp, double var,
                                  double ptas_eps, const SolverConfig& cfg = {});
LocalSolution solve_local(const CostProfile& profile, const Priors& priors,
                          double ptas_eps, const SolverConfig& cfg = {});

// w_i proportional to 1/(var + 2/y_i^2) for y_i > 0, zero otherwise,
// normalized to sum 1. Throws AllZeroError when every y_i is zero.
std::vector<double> optimal_local_weights(std::span<const double> y,
                                          double var);

}  // namespace dpmech
