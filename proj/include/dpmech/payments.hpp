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

#include <cstdint>
#include <vector>

#include "dpmech/config.hpp"
#include "dpmech/sensitivity.hpp"

namespace dpmech {

enum class MechanismKind { kCentral, kLocal };

// Interim quantities of one user: expectations over the other users' types,
// as a function of the user's own report z, tabulated on a support grid.
// Monte Carlo draws of the others are shared across all z (common random
// numbers), so eps_bar inherits the pointwise monotonicity of the solver.
struct InterimCurve {
  int user = 0;
  std::vector<double> grid;
  std::vector<double> eps_bar;
  std::vector<double> mse_bar;
  std::vector<double> eps_se;  // Monte Carlo standard errors
  std::vector<double> mse_se;
};

// Transfer to one user at report c_i, decomposed per the payment identity:
//   t = interim_mse - var + c_i * eps_bar(c_i) + integral_{c_i}^{c_hi} eps_bar
// with the free constant pinned to zero.
struct PaymentComponents {
  double t = 0.0;
  double interim_mse = 0.0;
  double var_outside = 0.0;
  double direct_term = 0.0;
  double info_rent = 0.0;
};

struct IcIrReport {
  double max_ic_violation = 0.0;  // max over (c, c') of COST(c,c)-COST(c',c)
  double max_ir_violation = 0.0;  // max over c of COST(c,c) - var
  double mc_se_scale = 0.0;       // worst-case MC standard error on a COST
  double objective_scale = 1.0;   // typical COST magnitude, for tolerances
};

InterimCurve interim_curve(MechanismKind kind, int user, const Priors& priors,
                           int n, double var, int grid_size, int mc_samples,
                           std::uint64_t seed, const SolverConfig& cfg = {});

// Payment at report c_i from a tabulated curve (trapezoidal info rent).
PaymentComponents payment(const InterimCurve& curve, double c_i, double var);

// Numerical check of incentive compatibility and individual rationality on a
// type grid, using the same interim curves the payments are built from.
IcIrReport audit_ic_ir(MechanismKind kind, const Priors& priors, int n,
                       double var, int type_grid, int mc_samples,
                       std::uint64_t seed, const SolverConfig& cfg = {});

}  // namespace dpmech
