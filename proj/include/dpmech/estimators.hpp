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
#include <span>
#include <vector>

namespace dpmech {

// Linear estimator with one central Laplace noise draw of scale 1/eta:
//   theta_hat = sum_i w_i x_i + Laplace(1/eta).
// User i's central privacy loss is w_i * eta.
struct CentralEstimator {
  std::vector<double> weights;
  double eta = 1.0;
};

// Each user shares x_i + Laplace(1/eps_i); the platform averages:
//   theta_hat = sum_i w_i xhat_i.
struct LocalEstimator {
  std::vector<double> weights;
  std::vector<double> epsilons;
};

enum class DataLaw { kTwoPoint, kUniformBounded };

// Data generator X_i = theta + Z_i with |Z_i| <= 1/2. var is determined by
// the law: 1/4 for the two-point law, 1/12 for the bounded uniform law.
struct SimulationScenario {
  double theta = 0.0;
  DataLaw law = DataLaw::kTwoPoint;
  double var() const { return law == DataLaw::kTwoPoint ? 0.25 : 1.0 / 12.0; }
  double draw(std::uint64_t seed) const;
};

struct MonteCarloMse {
  double mean = 0.0;
  double std_error = 0.0;
  long trials = 0;
};

struct AuditReport {
  double claimed_eps = 0.0;
  double max_log_ratio = 0.0;  // max |log| frequency ratio over kept bins
  double slack = 0.0;          // sampling-error allowance
  bool within_claim() const { return max_log_ratio <= claimed_eps + slack; }
};

double central_estimate(const CentralEstimator& est,
                        std::span<const double> data, std::uint64_t seed);
double central_mse(const CentralEstimator& est, double var);

double local_privatize(double x, double epsilon, std::uint64_t seed);
double local_mse(const LocalEstimator& est, double var);

// Privacy loss delivered to each user by a central estimator: (w_i * eta)_i.
std::vector<double> privacy_losses_central(const CentralEstimator& est);

// Near-minimax construction for privacy losses in (0, 1]: caps the weight of
// the k*+1 least-private users at 1/sqrt(k*+1) where k* is the largest k with
// eps_{n-k} > 1/sqrt(k+1) in sorted order; otherwise weights proportional to
// eps. Input may be unsorted; weights come back in the input order. Always
// satisfies w_i * eta <= eps_i.
CentralEstimator near_minimax_central(std::span<const double> epsilons);

// All-binding estimator (weights proportional to eps, eta = sum eps); the
// suboptimal baseline the rate tests compare against.
CentralEstimator all_binding_central(std::span<const double> epsilons);

// Minimax local weights w_i = eps_i^2 / sum_j eps_j^2.
LocalEstimator minimax_local(std::span<const double> epsilons);

// Central estimator with the same weights and eta = min_i eps_i / w_i over
// positive-weight users: componentwise privacy no worse, MSE no larger.
CentralEstimator dominating_central_from_local(const LocalEstimator& est);

// Monte Carlo mean-squared error of an estimator under a scenario,
// parallelism-invariant given the seed.
MonteCarloMse mc_mse(const CentralEstimator& est, const SimulationScenario& sc,
                     int n, long trials, std::uint64_t seed,
                     bool parallel = true);
MonteCarloMse mc_mse(const LocalEstimator& est, const SimulationScenario& sc,
                     int n, long trials, std::uint64_t seed,
                     bool parallel = true);

// Frequency-ratio audit of the central estimator against user `user`'s claimed
// privacy loss, over the extreme data pair x_user in {theta +- 1/2}. Histogram
// uses 64 equal-probability bins of the analytic output law; bins with fewer
// than 100 samples on either side are discarded.
AuditReport empirical_privacy_audit(const CentralEstimator& est, int user,
                                    double claimed_eps, long trials,
                                    std::uint64_t seed);

// Same audit for a single local channel x -> x + Laplace(1/epsilon).
AuditReport empirical_privacy_audit_local(double epsilon, double claimed_eps,
                                          long trials, std::uint64_t seed);

}  // namespace dpmech
