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

#include "dpmech/payments.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dpmech/central_solver.hpp"
#include "dpmech/errors.hpp"
#include "dpmech/local_solver.hpp"
#include "dpmech/rng.hpp"

namespace dpmech {
namespace {

// Privacy loss of `user` and mechanism MSE for one realized profile.
struct PointSolution {
  double eps;
  double mse;
};

PointSolution solve_point(MechanismKind kind, const CostProfile& profile,
                          const Priors& priors, int user,
                          const SolverConfig& cfg) {
  if (kind == MechanismKind::kCentral) {
    const CentralSolution s = solve_central(profile, priors, cfg);
    double w2 = 0.0;
    for (double w : s.weights) w2 += w * w;
    return {s.y[user], 2.0 / (s.eta * s.eta) + profile.var * w2};
  }
  const LocalSolution s =
      solve_local(profile, priors, cfg.ptas_eps, cfg);
  const std::vector<double> w = optimal_local_weights(s.y, profile.var);
  double mse = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (w[j] == 0.0) continue;
    mse += w[j] * w[j] * (profile.var + 2.0 / (s.y[j] * s.y[j]));
  }
  return {s.y[user], mse};
}

}  // namespace

InterimCurve interim_curve(MechanismKind kind, int user, const Priors& priors,
                           int n, double var, int grid_size, int mc_samples,
                           std::uint64_t seed, const SolverConfig& cfg) {
  if (grid_size < 3) throw ParseError("interim_curve: grid_size >= 3");
  if (mc_samples < 100) throw ParseError("interim_curve: mc_samples >= 100");
  if (user < 0 || user >= n) throw ParseError("interim_curve: user index");

  const SensitivityDistribution& own = priors.for_user(user);
  InterimCurve curve;
  curve.user = user;
  curve.grid.resize(grid_size);
  for (int k = 0; k < grid_size; ++k)
    curve.grid[k] = own.support_lo() + (own.support_hi() - own.support_lo()) *
                                           static_cast<double>(k) /
                                           (grid_size - 1);

  // Others' types drawn once and reused for every report z (common random
  // numbers across reports).
  const int samples = n == 1 ? 1 : mc_samples;
  std::vector<std::vector<double>> others(samples,
                                          std::vector<double>(n, 0.0));
  for (int s = 0; s < samples; ++s) {
    SplitMix64 rng(derive_seed(seed, user, s));
    for (int j = 0; j < n; ++j) {
      if (j == user) continue;
      others[s][j] = priors.for_user(j).quantile(rng.next_unit());
    }
  }

  curve.eps_bar.assign(grid_size, 0.0);
  curve.mse_bar.assign(grid_size, 0.0);
  curve.eps_se.assign(grid_size, 0.0);
  curve.mse_se.assign(grid_size, 0.0);

  const long total = static_cast<long>(grid_size) * samples;
  std::vector<double> eps_flat(total), mse_flat(total);
#pragma omp parallel for schedule(dynamic, 8) if (cfg.parallel)
  for (long idx = 0; idx < total; ++idx) {
    const int k = static_cast<int>(idx / samples);
    const int s = static_cast<int>(idx % samples);
    CostProfile p;
    p.n = n;
    p.var = var;
    p.c = others[s];
    p.c[user] = curve.grid[k];
    const PointSolution ps = solve_point(kind, p, priors, user, cfg);
    eps_flat[idx] = ps.eps;
    mse_flat[idx] = ps.mse;
  }
  for (int k = 0; k < grid_size; ++k) {
    double se = 0.0, sm = 0.0, se2 = 0.0, sm2 = 0.0;
    for (int s = 0; s < samples; ++s) {
      const long idx = static_cast<long>(k) * samples + s;
      se += eps_flat[idx];
      sm += mse_flat[idx];
      se2 += eps_flat[idx] * eps_flat[idx];
      sm2 += mse_flat[idx] * mse_flat[idx];
    }
    curve.eps_bar[k] = se / samples;
    curve.mse_bar[k] = sm / samples;
    if (samples > 1) {
      const double ve = std::max(0.0, se2 / samples - curve.eps_bar[k] * curve.eps_bar[k]);
      const double vm = std::max(0.0, sm2 / samples - curve.mse_bar[k] * curve.mse_bar[k]);
      curve.eps_se[k] = std::sqrt(ve / samples);
      curve.mse_se[k] = std::sqrt(vm / samples);
    }
  }
  return curve;
}

namespace {

double interp(const std::vector<double>& grid, const std::vector<double>& val,
              double x) {
  const auto it = std::upper_bound(grid.begin(), grid.end(), x);
  if (it == grid.begin()) return val.front();
  if (it == grid.end()) return val.back();
  const std::size_t hi = it - grid.begin();
  const std::size_t lo = hi - 1;
  const double t = (x - grid[lo]) / (grid[hi] - grid[lo]);
  return val[lo] + t * (val[hi] - val[lo]);
}

// Trapezoidal integral of eps_bar from c to the top of the grid.
double info_rent_from(const InterimCurve& curve, double c) {
  const std::vector<double>& g = curve.grid;
  const std::vector<double>& e = curve.eps_bar;
  if (c >= g.back()) return 0.0;
  double acc = 0.0;
  std::size_t k = 0;
  while (k + 1 < g.size() && g[k + 1] <= c) ++k;
  // Partial first segment [c, g[k+1]].
  const double ec = interp(g, e, c);
  acc += 0.5 * (ec + e[k + 1]) * (g[k + 1] - c);
  for (std::size_t j = k + 1; j + 1 < g.size(); ++j)
    acc += 0.5 * (e[j] + e[j + 1]) * (g[j + 1] - g[j]);
  return acc;
}

}  // namespace

PaymentComponents payment(const InterimCurve& curve, double c_i, double var) {
  if (c_i < curve.grid.front() - 1e-12 || c_i > curve.grid.back() + 1e-12)
    throw OutOfSupportError("payment report c=" + std::to_string(c_i));
  c_i = std::clamp(c_i, curve.grid.front(), curve.grid.back());
  PaymentComponents pc;
  pc.interim_mse = interp(curve.grid, curve.mse_bar, c_i);
  pc.var_outside = var;
  pc.direct_term = c_i * interp(curve.grid, curve.eps_bar, c_i);
  pc.info_rent = info_rent_from(curve, c_i);
  pc.t = pc.interim_mse - pc.var_outside + pc.direct_term + pc.info_rent;
  return pc;
}

IcIrReport audit_ic_ir(MechanismKind kind, const Priors& priors, int n,
                       double var, int type_grid, int mc_samples,
                       std::uint64_t seed, const SolverConfig& cfg) {
  IcIrReport rep;
  double scale = 0.0;
  for (int user = 0; user < n; ++user) {
    const InterimCurve curve = interim_curve(kind, user, priors, n, var,
                                             type_grid, mc_samples, seed, cfg);
    const int m = static_cast<int>(curve.grid.size());
    std::vector<double> t(m);
    for (int k = 0; k < m; ++k)
      t[k] = payment(curve, curve.grid[k], var).t;
    // COST(c', c) = mse_bar(c') + c * eps_bar(c') - t(c').
    for (int kc = 0; kc < m; ++kc) {
      const double c = curve.grid[kc];
      const double truthful = curve.mse_bar[kc] + c * curve.eps_bar[kc] - t[kc];
      rep.max_ir_violation =
          std::max(rep.max_ir_violation, truthful - var);
      for (int kr = 0; kr < m; ++kr) {
        const double misreport =
            curve.mse_bar[kr] + c * curve.eps_bar[kr] - t[kr];
        rep.max_ic_violation =
            std::max(rep.max_ic_violation, truthful - misreport);
      }
      scale = std::max(scale, std::fabs(truthful) + std::fabs(t[kc]));
      rep.mc_se_scale = std::max(
          rep.mc_se_scale, curve.mse_se[kc] + curve.grid.back() * curve.eps_se[kc]);
    }
  }
  rep.objective_scale = std::max(scale, 1.0);
  return rep;
}

}  // namespace dpmech
