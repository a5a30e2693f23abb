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

namespace dpmech {

// Brute-force ground truth for small instances. Multi-round refined grid
// search over [0, y_max]^n; each round shrinks the box around the incumbent
// by 5x. Exact-zero faces are covered by enumerating active subsets (n <= 4)
// and by keeping 0 as a grid point whenever a box edge touches it.
struct OracleConfig {
  int grid_points_per_dim = 60;
  int refine_rounds = 4;
  double y_max = 0.0;  // 0: use 4 * (8 / min psi)^(1/3)
  bool parallel = true;
};

struct OracleResult {
  std::vector<double> y;
  double objective = 0.0;
};

OracleResult brute_force_central(std::span<const double> psi, double var,
                                 int n, const OracleConfig& cfg = {});
OracleResult brute_force_local(std::span<const double> psi, double var, int n,
                               const OracleConfig& cfg = {});

}  // namespace dpmech
