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
#include <string>
#include <vector>

#include "dpmech/config.hpp"
#include "dpmech/sensitivity.hpp"

namespace dpmech {

struct RunConfig {
  std::string mode;  // solve-central solve-local oracle-central oracle-local
                     // payments audit-ic audit-dp surface threshold-sweep bench
  std::string input_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  double ptas_eps = 0.01;
  int grid = 0;  // mode-specific grid override (0 = default)
  long mc = 0;   // Monte Carlo samples / audit trials override (0 = default)
  bool parallel = true;
};

// Parsed problem instance from the input JSON
//   {n, var, sensitivities:[...], prior:{...} | priors:[{...}]}.
struct ProblemInput {
  CostProfile profile;
  Priors priors;
};

ProblemInput parse_problem(const std::string& path);

// One cell of the two-user reproduction surface.
struct SurfaceCell {
  double c1 = 0.0, c2 = 0.0;
  double central_mse = 0.0, local_mse = 0.0;
  double central_objective = 0.0, local_objective = 0.0;
  double eps1_central = 0.0, eps1_local = 0.0;
  double max_weight_central = 0.0, max_weight_local = 0.0;
};

// Pointwise central and local solutions over a grid x grid lattice of
// realized sensitivity pairs (c1, c2) on the prior's support.
std::vector<SurfaceCell> compute_surface(const SensitivityDistribution& prior,
                                         double var, int grid,
                                         const SolverConfig& cfg);

struct ThresholdRow {
  double psi_n = 0.0;
  double central_yn = 0.0, local_yn = 0.0;
  bool central_zero = false, local_zero = false;
};

struct ThresholdSweep {
  std::vector<ThresholdRow> rows;
  double eq52_bound = 0.0;  // psi_1 + var * cbrt(2 psi_1 (n+1)^2)/(n-1)
  // First grid psi_n with y_n == 0 in each setting (+inf if never).
  double central_zero_threshold = 0.0;
  double local_zero_threshold = 0.0;
  bool central_positive_below_bound = true;  // corner-bound contrapositive
};

ThresholdSweep threshold_sweep(int n, double psi1, double var,
                               const std::vector<double>& psi_n_grid,
                               const SolverConfig& cfg);

// Executes one mode end to end; returns the process exit code and writes the
// mode's output files under cfg.out_dir. Errors are reported as a JSON record
// on stderr with the matching nonzero code.
int run(const RunConfig& cfg);

}  // namespace dpmech
