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

// Exact solution of the central pointwise program
//   min_{y >= 0} (n+1) (2 + var * sum y_i^2) / (sum y_i)^2 + sum psi_i y_i.
// y holds the per-user privacy losses in the caller's user order; the
// estimator is weights = y / sum(y) with noise-scale inverse eta = sum(y).
struct CentralSolution {
  std::vector<double> y;
  double lambda_star = 0.0;
  int active_count = 0;
  double objective = 0.0;
  std::vector<double> weights;
  double eta = 0.0;
};

// Objective value of the central program. Throws AllZeroError when every
// y_i is zero (the objective diverges).
double objective_central(std::span<const double> y,
                         std::span<const double> psi, double var, int n);

// Real stationary points of OBJ_i(lambda) inside [lo, hi] with
// lambda*A - B > 0, plus both endpoints (deduplicated, at most 6 values).
// A, B, Btilde are the prefix aggregates of the sorted virtual costs:
//   A = i/(2(n+1)var), B = sum psi_j/(2(n+1)var), Btilde = sum psi_j^2/(...).
std::vector<double> interior_lambda_candidates(double A, double B,
                                               double Btilde, int n, double lo,
                                               double hi);

// Score sweep over candidate active-set sizes; O(n log n) including the sort.
// psi may be unsorted; the solution comes back aligned with psi's order.
CentralSolution solve_central_psi(std::span<const double> psi, double var,
                                  const SolverConfig& cfg = {});

// Same on a pre-sorted virtual profile; solution in original user order.
CentralSolution solve_central_virtual(const VirtualProfile& vp, double var,
                                      const SolverConfig& cfg = {});

// Full pipeline: virtual costs from the priors (regularity-checked), then the
// score sweep. Throws NonRegularPriorError / NumericalFailureError.
CentralSolution solve_central(const CostProfile& profile, const Priors& priors,
                              const SolverConfig& cfg = {});

}  // namespace dpmech
