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

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "dpmech/errors.hpp"

namespace dpmech {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double eval_central(std::span<const double> psi, double var, int n,
                    const double* y) {
  double s = 0.0, s2 = 0.0, lin = 0.0;
  for (int j = 0; j < n; ++j) {
    s += y[j];
    s2 += y[j] * y[j];
    lin += psi[j] * y[j];
  }
  if (!(s > 0.0)) return kInf;
  return (n + 1) * (2.0 + var * s2) / (s * s) + lin;
}

double eval_local(std::span<const double> psi, double var, int n,
                  const double* y) {
  double harm = 0.0, lin = 0.0;
  for (int j = 0; j < n; ++j) {
    if (y[j] <= 0.0) continue;
    harm += 1.0 / (var + 2.0 / (y[j] * y[j]));
    lin += psi[j] * y[j];
  }
  if (!(harm > 0.0)) return kInf;
  return (n + 1) / harm + lin;
}

using Objective = std::function<double(const double*)>;

struct Incumbent {
  double obj = kInf;
  long flat = 0;
  std::vector<double> y;
};

// One grid pass over the box spanned by the free dims; fixed dims stay 0.
void grid_pass(const std::vector<int>& dims, const std::vector<double>& lo,
               const std::vector<double>& hi, int g, const Objective& f,
               int n, bool parallel, Incumbent& inc) {
  const int d = static_cast<int>(dims.size());
  long total = 1;
  for (int k = 0; k < d; ++k) total *= g;

  Incumbent best = inc;
#pragma omp parallel if (parallel && total > 4096)
  {
    Incumbent local;
    std::vector<double> y(n, 0.0);
#pragma omp for schedule(static) nowait
    for (long flat = 0; flat < total; ++flat) {
      long rem = flat;
      for (int k = 0; k < d; ++k) {
        const int idx = static_cast<int>(rem % g);
        rem /= g;
        y[dims[k]] =
            lo[k] + (hi[k] - lo[k]) * static_cast<double>(idx) / (g - 1);
      }
      const double obj = f(y.data());
      if (obj < local.obj || (obj == local.obj && flat < local.flat)) {
        local.obj = obj;
        local.flat = flat;
        local.y = y;
      }
    }
#pragma omp critical
    if (local.obj < best.obj ||
        (local.obj == best.obj && local.flat < best.flat))
      best = local;
  }
  inc = best;
}

void refine_search(const std::vector<int>& dims, double y_max, int g,
                   int rounds, const Objective& f, int n, bool parallel,
                   Incumbent& inc) {
  const int d = static_cast<int>(dims.size());
  std::vector<double> lo(d, 0.0), hi(d, y_max);
  for (int r = 0; r < rounds; ++r) {
    grid_pass(dims, lo, hi, g, f, n, parallel, inc);
    if (!std::isfinite(inc.obj)) return;
    for (int k = 0; k < d; ++k) {
      // 5x shrink around the incumbent, but never below 1.5 grid cells so
      // the next pass always brackets the current minimizer.
      const double spacing = (hi[k] - lo[k]) / (g - 1);
      const double half = std::max((hi[k] - lo[k]) / 10.0, 1.5 * spacing);
      const double c = inc.y[dims[k]];
      lo[k] = std::max(0.0, c - half);
      hi[k] = std::min(y_max, c + half);
      if (lo[k] < half * 1e-9) lo[k] = 0.0;  // keep the face reachable
    }
  }
}

OracleResult brute_force(std::span<const double> psi, int n,
                         const OracleConfig& cfg, const Objective& f) {
  if (n < 1) throw EmptyInputError("oracle");
  if (n > 6) throw DimensionTooLargeError("oracle supports n <= 6");
  if (cfg.grid_points_per_dim < 10 || cfg.refine_rounds < 1)
    throw ParseError("oracle config below minimums");

  double min_psi = kInf;
  for (double p : psi) min_psi = std::min(min_psi, p);
  const double y_max =
      cfg.y_max > 0.0 ? cfg.y_max : 4.0 * std::cbrt(8.0 / min_psi);

  Incumbent inc;
  std::vector<int> all(n);
  for (int k = 0; k < n; ++k) all[k] = k;
  refine_search(all, y_max, cfg.grid_points_per_dim, cfg.refine_rounds, f, n,
                cfg.parallel, inc);

  if (n <= 4) {
    // Exact-zero faces: every proper nonempty active subset.
    for (int mask = 1; mask < (1 << n) - 1; ++mask) {
      std::vector<int> dims;
      for (int k = 0; k < n; ++k)
        if (mask & (1 << k)) dims.push_back(k);
      Incumbent sub;
      refine_search(dims, y_max, cfg.grid_points_per_dim, cfg.refine_rounds,
                    f, n, cfg.parallel, sub);
      if (sub.obj < inc.obj) inc = sub;
    }
  }
  if (!std::isfinite(inc.obj))
    throw NumericalFailureError("oracle found no finite point");
  return OracleResult{inc.y, inc.obj};
}

}  // namespace

OracleResult brute_force_central(std::span<const double> psi, double var,
                                 int n, const OracleConfig& cfg) {
  return brute_force(psi, n, cfg, [psi, var, n](const double* y) {
    return eval_central(psi, var, n, y);
  });
}

OracleResult brute_force_local(std::span<const double> psi, double var, int n,
                               const OracleConfig& cfg) {
  return brute_force(psi, n, cfg, [psi, var, n](const double* y) {
    return eval_local(psi, var, n, y);
  });
}

}  // namespace dpmech
