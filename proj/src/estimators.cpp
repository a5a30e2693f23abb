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

#include "dpmech/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dpmech/errors.hpp"
#include "dpmech/rng.hpp"

namespace dpmech {
namespace {

constexpr int kAuditBins = 64;
constexpr long kAuditMinBinCount = 100;

double laplace_cdf(double x, double scale) {
  return x < 0.0 ? 0.5 * std::exp(x / scale)
                 : 1.0 - 0.5 * std::exp(-x / scale);
}

// Order-independent Monte Carlo accumulation: fixed blocks are each summed in
// index order by whichever thread owns them, then combined serially.
template <typename PerTrial>
MonteCarloMse mc_accumulate(long trials, bool parallel, PerTrial&& fn) {
  constexpr long kBlock = 4096;
  const long nblocks = (trials + kBlock - 1) / kBlock;
  std::vector<double> sum(nblocks, 0.0), sumsq(nblocks, 0.0);
#pragma omp parallel for schedule(static) if (parallel)
  for (long b = 0; b < nblocks; ++b) {
    const long lo = b * kBlock, hi = std::min(trials, lo + kBlock);
    double s = 0.0, s2 = 0.0;
    for (long t = lo; t < hi; ++t) {
      const double v = fn(t);
      s += v;
      s2 += v * v;
    }
    sum[b] = s;
    sumsq[b] = s2;
  }
  double s = 0.0, s2 = 0.0;
  for (long b = 0; b < nblocks; ++b) {
    s += sum[b];
    s2 += sumsq[b];
  }
  MonteCarloMse out;
  out.trials = trials;
  out.mean = s / trials;
  const double var = std::max(0.0, s2 / trials - out.mean * out.mean);
  out.std_error = std::sqrt(var / trials);
  return out;
}

// Shared audit core: `draw(dataset, trial)` samples the mechanism output,
// `cdf(x)` is the analytic output CDF for dataset 0 used to define the
// equal-probability bins.
template <typename Draw, typename Cdf>
AuditReport audit_core(double claimed_eps, long trials, Draw&& draw,
                       Cdf&& cdf) {
  if (trials < 10000)
    throw InsufficientTrialsError("audit needs >= 1e4 trials, got " +
                                  std::to_string(trials));
  long counts[2][kAuditBins] = {};
  for (int ds = 0; ds < 2; ++ds) {
    for (long t = 0; t < trials; ++t) {
      const double x = draw(ds, t);
      int bin = static_cast<int>(cdf(x) * kAuditBins);
      bin = std::clamp(bin, 0, kAuditBins - 1);
      ++counts[ds][bin];
    }
  }
  AuditReport rep;
  rep.claimed_eps = claimed_eps;
  // The audit statistic is a max over up to 64 bins, several of which sit
  // exactly at the true ratio bound, so the slack must cover the maximum of
  // that many sampling errors: z = 4.5 keeps the union false-alarm rate
  // below ~5e-4.
  for (int b = 0; b < kAuditBins; ++b) {
    const long c0 = counts[0][b], c1 = counts[1][b];
    if (c0 < kAuditMinBinCount || c1 < kAuditMinBinCount) continue;
    const double lr = std::fabs(std::log(static_cast<double>(c0) / c1));
    const double se = 4.5 * std::sqrt(1.0 / c0 + 1.0 / c1);
    rep.max_log_ratio = std::max(rep.max_log_ratio, lr);
    rep.slack = std::max(rep.slack, se);
  }
  return rep;
}

}  // namespace

double SimulationScenario::draw(std::uint64_t seed) const {
  SplitMix64 rng(seed);
  if (law == DataLaw::kTwoPoint)
    return theta + (rng.next_u64() & 1 ? 0.5 : -0.5);
  return theta + rng.next_uniform(-0.5, 0.5);
}

double central_estimate(const CentralEstimator& est,
                        std::span<const double> data, std::uint64_t seed) {
  if (data.size() != est.weights.size())
    throw LengthMismatchError("data length != weights length");
  if (!(est.eta > 0.0)) throw NonPositiveEpsilonError("eta must be positive");
  double acc = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i)
    acc += est.weights[i] * data[i];
  SplitMix64 rng(derive_seed(seed, 0x117));
  return acc + rng.next_laplace(1.0 / est.eta);
}

double central_mse(const CentralEstimator& est, double var) {
  double w2 = 0.0;
  for (double w : est.weights) w2 += w * w;
  return 2.0 / (est.eta * est.eta) + var * w2;
}

double local_privatize(double x, double epsilon, std::uint64_t seed) {
  if (!(epsilon > 0.0))
    throw NonPositiveEpsilonError("epsilon=" + std::to_string(epsilon));
  SplitMix64 rng(derive_seed(seed, 0x10ca1));
  return x + rng.next_laplace(1.0 / epsilon);
}

double local_mse(const LocalEstimator& est, double var) {
  if (est.weights.size() != est.epsilons.size())
    throw LengthMismatchError("weights length != epsilons length");
  double acc = 0.0;
  for (std::size_t i = 0; i < est.weights.size(); ++i) {
    if (est.weights[i] == 0.0) continue;  // zero-weight user contributes 0
    const double e = est.epsilons[i];
    acc += est.weights[i] * est.weights[i] * (var + 2.0 / (e * e));
  }
  return acc;
}

std::vector<double> privacy_losses_central(const CentralEstimator& est) {
  std::vector<double> out(est.weights.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = est.weights[i] * est.eta;
  return out;
}

CentralEstimator near_minimax_central(std::span<const double> epsilons) {
  const int n = static_cast<int>(epsilons.size());
  if (n == 0) throw EmptyInputError("near_minimax_central");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&epsilons](int a, int b) {
    if (epsilons[a] != epsilons[b]) return epsilons[a] < epsilons[b];
    return a < b;
  });
  std::vector<double> eps(n);
  for (int k = 0; k < n; ++k) eps[k] = epsilons[order[k]];
  for (double e : eps)
    if (!(e > 0.0)) throw NonPositiveEpsilonError("privacy losses must be > 0");

  // Largest k in {0..n-1} with eps_{n-k} > 1/sqrt(k+1) (strict, 1-based).
  int k_star = -1;
  for (int k = 0; k < n; ++k)
    if (eps[n - k - 1] > 1.0 / std::sqrt(static_cast<double>(k + 1)))
      k_star = k;

  CentralEstimator est;
  est.weights.assign(n, 0.0);
  std::vector<double> w_sorted(n);
  if (k_star < 0) {
    const double total = std::accumulate(eps.begin(), eps.end(), 0.0);
    est.eta = total;
    for (int k = 0; k < n; ++k) w_sorted[k] = eps[k] / total;
  } else {
    const double cap = 1.0 / std::sqrt(static_cast<double>(k_star + 1));
    double eta = std::sqrt(static_cast<double>(k_star + 1));
    for (int k = 0; k < n - k_star - 1; ++k) eta += eps[k];
    est.eta = eta;
    for (int k = 0; k < n; ++k)
      w_sorted[k] = (k < n - k_star - 1 ? eps[k] : cap) / eta;
  }
  for (int k = 0; k < n; ++k) est.weights[order[k]] = w_sorted[k];
  return est;
}

CentralEstimator all_binding_central(std::span<const double> epsilons) {
  if (epsilons.empty()) throw EmptyInputError("all_binding_central");
  const double total =
      std::accumulate(epsilons.begin(), epsilons.end(), 0.0);
  CentralEstimator est;
  est.eta = total;
  est.weights.resize(epsilons.size());
  for (std::size_t i = 0; i < epsilons.size(); ++i)
    est.weights[i] = epsilons[i] / total;
  return est;
}

LocalEstimator minimax_local(std::span<const double> epsilons) {
  if (epsilons.empty()) throw EmptyInputError("minimax_local");
  double total = 0.0;
  for (double e : epsilons) {
    if (!(e > 0.0)) throw NonPositiveEpsilonError("privacy losses must be > 0");
    total += e * e;
  }
  LocalEstimator est;
  est.epsilons.assign(epsilons.begin(), epsilons.end());
  est.weights.resize(epsilons.size());
  for (std::size_t i = 0; i < epsilons.size(); ++i)
    est.weights[i] = epsilons[i] * epsilons[i] / total;
  return est;
}

CentralEstimator dominating_central_from_local(const LocalEstimator& est) {
  if (est.weights.size() != est.epsilons.size())
    throw LengthMismatchError("weights length != epsilons length");
  double eta = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < est.weights.size(); ++i)
    if (est.weights[i] > 0.0)
      eta = std::min(eta, est.epsilons[i] / est.weights[i]);
  if (!std::isfinite(eta))
    throw AllZeroWeightsError("no positive-weight user");
  return CentralEstimator{est.weights, eta};
}

MonteCarloMse mc_mse(const CentralEstimator& est, const SimulationScenario& sc,
                     int n, long trials, std::uint64_t seed, bool parallel) {
  if (static_cast<std::size_t>(n) != est.weights.size())
    throw LengthMismatchError("n != weights length");
  return mc_accumulate(trials, parallel, [&](long t) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
      acc += est.weights[i] * sc.draw(derive_seed(seed, t, i + 1));
    SplitMix64 rng(derive_seed(seed, t, 0));
    const double out = acc + rng.next_laplace(1.0 / est.eta);
    const double err = out - sc.theta;
    return err * err;
  });
}

MonteCarloMse mc_mse(const LocalEstimator& est, const SimulationScenario& sc,
                     int n, long trials, std::uint64_t seed, bool parallel) {
  if (static_cast<std::size_t>(n) != est.weights.size())
    throw LengthMismatchError("n != weights length");
  return mc_accumulate(trials, parallel, [&](long t) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = sc.draw(derive_seed(seed, t, i + 1));
      SplitMix64 rng(derive_seed(seed, t, 1000 + i));
      acc += est.weights[i] * (x + rng.next_laplace(1.0 / est.epsilons[i]));
    }
    const double err = acc - sc.theta;
    return err * err;
  });
}

AuditReport empirical_privacy_audit(const CentralEstimator& est, int user,
                                    double claimed_eps, long trials,
                                    std::uint64_t seed) {
  if (user < 0 || static_cast<std::size_t>(user) >= est.weights.size())
    throw LengthMismatchError("audit user index out of range");
  // Neighboring datasets: everyone at 0 except the audited user at -+1/2.
  const double w = est.weights[user];
  const double mean0 = -0.5 * w, mean1 = 0.5 * w;
  const double scale = 1.0 / est.eta;
  return audit_core(
      claimed_eps, trials,
      [&](int ds, long t) {
        SplitMix64 rng(derive_seed(seed, t, ds));
        return (ds == 0 ? mean0 : mean1) + rng.next_laplace(scale);
      },
      [&](double x) { return laplace_cdf(x - mean0, scale); });
}

AuditReport empirical_privacy_audit_local(double epsilon, double claimed_eps,
                                          long trials, std::uint64_t seed) {
  if (!(epsilon > 0.0)) throw NonPositiveEpsilonError("audit epsilon");
  const double scale = 1.0 / epsilon;
  return audit_core(
      claimed_eps, trials,
      [&](int ds, long t) {
        SplitMix64 rng(derive_seed(seed, t, ds));
        return (ds == 0 ? -0.5 : 0.5) + rng.next_laplace(scale);
      },
      [&](double x) { return laplace_cdf(x + 0.5, scale); });
}

}  // namespace dpmech
