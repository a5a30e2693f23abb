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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "dpmech/config.hpp"

namespace dpmech {

enum class DistKind { kUniform, kExponential, kTruncatedNormal };

// A privacy-sensitivity prior F with closed-form density, CDF and quantile on
// a closed support [c_lo, c_hi]. Unbounded kinds carry an explicit truncation
// bound and the CDF is renormalized over the truncated support.
struct SensitivityDistribution {
  DistKind kind = DistKind::kUniform;
  // uniform: a, b. exponential: rate, truncate. truncated_normal: mean, sd,
  // lo, hi. Unused params stay 0.
  double p1 = 1.0;
  double p2 = 2.0;
  double p3 = 0.0;
  double p4 = 0.0;

  static SensitivityDistribution uniform(double a, double b);
  static SensitivityDistribution exponential(double rate, double truncate);
  static SensitivityDistribution truncated_normal(double mean, double sd,
                                                  double lo, double hi);

  double support_lo() const;
  double support_hi() const;
  bool in_support(double c) const;

  // Renormalized CDF/PDF over the (truncated) support.
  double cdf(double c) const;
  double pdf(double c) const;
  // Inverse CDF for u in [0, 1].
  double quantile(double u) const;

  // Analytic mean of the truncated distribution (used by sampling tests).
  double mean() const;
};

// A population instance: n users, reported sensitivities c (cost per unit
// privacy loss) and the common data-noise variance.
struct CostProfile {
  int n = 0;
  std::vector<double> c;
  double var = 0.25;

  void validate() const;  // throws on violated invariants
};

// One prior per user, or a single shared prior for the homogeneous case.
struct Priors {
  std::vector<SensitivityDistribution> dists;

  static Priors homogeneous(const SensitivityDistribution& d) {
    return Priors{{d}};
  }
  const SensitivityDistribution& for_user(std::size_t i) const {
    return dists.size() == 1 ? dists[0] : dists[i];
  }
  std::size_t size() const { return dists.size(); }
};

// Virtual costs sorted ascending plus the permutation back to user order:
// psi[k] belongs to original user perm[k].
struct VirtualProfile {
  std::vector<double> psi;
  std::vector<int> perm;
};

// Myerson virtual cost psi(c) = c + F(c)/f(c).
double virtual_cost(const SensitivityDistribution& dist, double c,
                    double density_floor = 1e-12);

// Grid check that a scalar function is strictly increasing on [lo, hi].
bool strictly_increasing_on_grid(const std::function<double(double)>& fn,
                                 double lo, double hi, int grid_size);

// True iff the virtual cost is strictly increasing across a uniform grid on
// the support (the regularity the solvers require).
bool check_regularity(const SensitivityDistribution& dist, int grid_size);

// n i.i.d. inverse-CDF draws; deterministic given the seed.
CostProfile sample_profile(const SensitivityDistribution& dist, int n,
                           std::uint64_t seed, double var = 0.25);

// Evaluates every user's virtual cost and sorts ascending. Throws
// NonRegularPriorError if any prior fails the regularity check.
VirtualProfile make_virtual_profile(const CostProfile& profile,
                                    const Priors& priors,
                                    const SolverConfig& cfg = {});

}  // namespace dpmech
