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

namespace dpmech {

// Knobs shared by the solvers, payment machinery and harness.
struct SolverConfig {
  // PTAS accuracy parameter for the local solver.
  double ptas_eps = 0.01;

  // Grid used by the regularity check of each prior.
  int regularity_grid = 1001;

  // Density floor below which virtual-cost evaluation refuses to divide.
  double density_floor = 1e-12;

  // Allocations below zero_snap * max(y) are snapped to exactly 0 so the
  // active set is well defined downstream.
  double zero_snap = 1e-14;

  // Upper cap on the number of lambda grid points per candidate active-set
  // size in the local PTAS sweep (fold points and fixed-point refinements are
  // added on top of the uniform grid).
  int max_lambda_grid = 4096;

  // Interim-curve / payment quadrature grid and Monte Carlo replication.
  int payment_grid = 101;
  int mc_samples = 2000;

  std::uint64_t seed = 0;

  // Run data-parallel kernels with OpenMP. Results are identical either way.
  bool parallel = true;
};

}  // namespace dpmech
