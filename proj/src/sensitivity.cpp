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

#include "dpmech/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dpmech/errors.hpp"
#include "dpmech/rng.hpp"

namespace dpmech {
namespace {

constexpr double kSqrt2 = 1.4142135623730951;

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double std_normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / 2.5066282746310002;  // sqrt(2*pi)
}

// Acklam's rational approximation of the standard normal quantile, polished
// with one Halley step; accurate to ~1e-15 on (0,1).
double std_normal_quantile(double p) {
  if (p <= 0.0) return -1e308;
  if (p >= 1.0) return 1e308;
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = std_normal_cdf(x) - p;
  const double u = e / std_normal_pdf(x);
  return x - u / (1.0 + 0.5 * x * u);
}

}  // namespace

SensitivityDistribution SensitivityDistribution::uniform(double a, double b) {
  if (!(a < b) || a < 0.0)
    throw ParseError("uniform prior requires 0 <= a < b");
  SensitivityDistribution d;
  d.kind = DistKind::kUniform;
  d.p1 = a;
  d.p2 = b;
  return d;
}

SensitivityDistribution SensitivityDistribution::exponential(double rate,
                                                             double truncate) {
  if (!(rate > 0.0) || !(truncate > 0.0))
    throw ParseError("exponential prior requires rate > 0, truncate > 0");
  SensitivityDistribution d;
  d.kind = DistKind::kExponential;
  d.p1 = rate;
  d.p2 = truncate;
  return d;
}

SensitivityDistribution SensitivityDistribution::truncated_normal(double mean,
                                                                  double sd,
                                                                  double lo,
                                                                  double hi) {
  if (!(sd > 0.0) || !(lo < hi) || lo < 0.0)
    throw ParseError("truncated_normal prior requires sd > 0, 0 <= lo < hi");
  SensitivityDistribution d;
  d.kind = DistKind::kTruncatedNormal;
  d.p1 = mean;
  d.p2 = sd;
  d.p3 = lo;
  d.p4 = hi;
  return d;
}

double SensitivityDistribution::support_lo() const {
  switch (kind) {
    case DistKind::kUniform:
      return p1;
    case DistKind::kExponential:
      return 0.0;
    case DistKind::kTruncatedNormal:
      return p3;
  }
  return 0.0;
}

double SensitivityDistribution::support_hi() const {
  switch (kind) {
    case DistKind::kUniform:
      return p2;
    case DistKind::kExponential:
      return p2;
    case DistKind::kTruncatedNormal:
      return p4;
  }
  return 0.0;
}

bool SensitivityDistribution::in_support(double c) const {
  return c >= support_lo() && c <= support_hi();
}

double SensitivityDistribution::cdf(double c) const {
  if (c <= support_lo()) return 0.0;
  if (c >= support_hi()) return 1.0;
  switch (kind) {
    case DistKind::kUniform:
      return (c - p1) / (p2 - p1);
    case DistKind::kExponential: {
      const double mass = -std::expm1(-p1 * p2);  // 1 - e^{-rate*truncate}
      return -std::expm1(-p1 * c) / mass;
    }
    case DistKind::kTruncatedNormal: {
      const double zlo = std_normal_cdf((p3 - p1) / p2);
      const double zhi = std_normal_cdf((p4 - p1) / p2);
      return (std_normal_cdf((c - p1) / p2) - zlo) / (zhi - zlo);
    }
  }
  return 0.0;
}

double SensitivityDistribution::pdf(double c) const {
  if (!in_support(c)) return 0.0;
  switch (kind) {
    case DistKind::kUniform:
      return 1.0 / (p2 - p1);
    case DistKind::kExponential: {
      const double mass = -std::expm1(-p1 * p2);
      return p1 * std::exp(-p1 * c) / mass;
    }
    case DistKind::kTruncatedNormal: {
      const double zlo = std_normal_cdf((p3 - p1) / p2);
      const double zhi = std_normal_cdf((p4 - p1) / p2);
      return std_normal_pdf((c - p1) / p2) / (p2 * (zhi - zlo));
    }
  }
  return 0.0;
}

double SensitivityDistribution::quantile(double u) const {
  u = std::clamp(u, 0.0, 1.0);
  switch (kind) {
    case DistKind::kUniform:
      return p1 + u * (p2 - p1);
    case DistKind::kExponential: {
      const double mass = -std::expm1(-p1 * p2);
      return -std::log1p(-u * mass) / p1;
    }
    case DistKind::kTruncatedNormal: {
      const double zlo = std_normal_cdf((p3 - p1) / p2);
      const double zhi = std_normal_cdf((p4 - p1) / p2);
      const double x = std_normal_quantile(zlo + u * (zhi - zlo));
      return std::clamp(p1 + p2 * x, p3, p4);
    }
  }
  return 0.0;
}

double SensitivityDistribution::mean() const {
  switch (kind) {
    case DistKind::kUniform:
      return 0.5 * (p1 + p2);
    case DistKind::kExponential: {
      // E[X | X <= T] for Exp(rate): (1/rate) - T e^{-rate T}/(1 - e^{-rate T})
      const double mass = -std::expm1(-p1 * p2);
      return 1.0 / p1 - p2 * std::exp(-p1 * p2) / mass;
    }
    case DistKind::kTruncatedNormal: {
      const double alpha = (p3 - p1) / p2, beta = (p4 - p1) / p2;
      const double z = std_normal_cdf(beta) - std_normal_cdf(alpha);
      return p1 + p2 * (std_normal_pdf(alpha) - std_normal_pdf(beta)) / z;
    }
  }
  return 0.0;
}

void CostProfile::validate() const {
  if (n < 1) throw ParseError("profile needs n >= 1");
  if (static_cast<int>(c.size()) != n)
    throw LengthMismatchError("profile has " + std::to_string(c.size()) +
                              " sensitivities for n=" + std::to_string(n));
  if (!(var > 0.0) || var > 0.25)
    throw ParseError("var must lie in (0, 0.25]");
  for (double ci : c)
    if (!(ci >= 0.0)) throw ParseError("sensitivities must be nonnegative");
}

double virtual_cost(const SensitivityDistribution& dist, double c,
                    double density_floor) {
  if (!dist.in_support(c))
    throw OutOfSupportError("c=" + std::to_string(c) + " outside [" +
                            std::to_string(dist.support_lo()) + ", " +
                            std::to_string(dist.support_hi()) + "]");
  const double f = dist.pdf(c);
  if (f < density_floor)
    throw DegenerateDensityError("f(c) below floor at c=" + std::to_string(c));
  return c + dist.cdf(c) / f;
}

bool strictly_increasing_on_grid(const std::function<double(double)>& fn,
                                 double lo, double hi, int grid_size) {
  if (grid_size < 2) throw ParseError("grid_size must be >= 2");
  double prev = fn(lo);
  for (int k = 1; k < grid_size; ++k) {
    const double c = lo + (hi - lo) * static_cast<double>(k) / (grid_size - 1);
    const double cur = fn(c);
    if (!(cur > prev)) return false;
    prev = cur;
  }
  return true;
}

bool check_regularity(const SensitivityDistribution& dist, int grid_size) {
  try {
    return strictly_increasing_on_grid(
        [&dist](double c) { return virtual_cost(dist, c); }, dist.support_lo(),
        dist.support_hi(), grid_size);
  } catch (const Error&) {
    // Degenerate density anywhere on the grid: monotone virtual cost cannot
    // be certified.
    return false;
  }
}

CostProfile sample_profile(const SensitivityDistribution& dist, int n,
                           std::uint64_t seed, double var) {
  if (n < 1) throw ParseError("sample_profile needs n >= 1");
  CostProfile p;
  p.n = n;
  p.var = var;
  p.c.resize(n);
  SplitMix64 rng(derive_seed(seed, 0));
  for (int i = 0; i < n; ++i) p.c[i] = dist.quantile(rng.next_unit());
  return p;
}

VirtualProfile make_virtual_profile(const CostProfile& profile,
                                    const Priors& priors,
                                    const SolverConfig& cfg) {
  profile.validate();
  if (priors.size() != 1 && priors.size() != static_cast<std::size_t>(profile.n))
    throw LengthMismatchError("need one prior or one prior per user");
  for (std::size_t k = 0; k < priors.size(); ++k)
    if (!check_regularity(priors.dists[k], cfg.regularity_grid))
      throw NonRegularPriorError("prior " + std::to_string(k) +
                                 " has non-increasing virtual cost");
  VirtualProfile vp;
  vp.psi.resize(profile.n);
  vp.perm.resize(profile.n);
  for (int i = 0; i < profile.n; ++i) {
    vp.psi[i] = virtual_cost(priors.for_user(i), profile.c[i],
                             cfg.density_floor);
    vp.perm[i] = i;
  }
  std::sort(vp.perm.begin(), vp.perm.end(), [&vp](int a, int b) {
    if (vp.psi[a] != vp.psi[b]) return vp.psi[a] < vp.psi[b];
    return a < b;
  });
  std::vector<double> sorted(profile.n);
  for (int k = 0; k < profile.n; ++k) sorted[k] = vp.psi[vp.perm[k]];
  vp.psi = std::move(sorted);
  return vp;
}

}  // namespace dpmech
