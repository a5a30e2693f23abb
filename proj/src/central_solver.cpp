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

#include "dpmech/central_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dpmech/errors.hpp"
#include "dpmech/quartic.hpp"

namespace dpmech {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// OBJ_i(lambda) = 2(n+1)(lambda A - B)^2 + (A lambda^2 - Btilde) /
//                 (2 (lambda A - B)^2), defined for lambda A - B > 0.
inline double score_objective(double lambda, double A, double B, double Bt,
                              int n) {
  const double d = lambda * A - B;
  if (!(d > 0.0)) return kInf;
  const double d2 = d * d;
  return 2.0 * (n + 1) * d2 + (A * lambda * lambda - Bt) / (2.0 * d2);
}

struct BestCandidate {
  double obj = kInf;
  int i = 0;         // active-set size (1-based)
  double lambda = 0.0;

  bool better_than(const BestCandidate& o) const {
    if (obj != o.obj) return obj < o.obj;
    if (i != o.i) return i < o.i;
    return lambda < o.lambda;
  }
};

}  // namespace

double objective_central(std::span<const double> y,
                         std::span<const double> psi, double var, int n) {
  if (y.size() != psi.size())
    throw LengthMismatchError("objective_central: y vs psi");
  double s = 0.0, s2 = 0.0, lin = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) {
    s += y[j];
    s2 += y[j] * y[j];
    lin += psi[j] * y[j];
  }
  if (!(s > 0.0)) throw AllZeroError("objective_central: all y are zero");
  return (n + 1) * (2.0 + var * s2) / (s * s) + lin;
}

std::vector<double> interior_lambda_candidates(double A, double B,
                                               double Btilde, int n, double lo,
                                               double hi) {
  std::vector<double> out;
  out.reserve(6);
  out.push_back(lo);
  if (hi > lo) out.push_back(hi);
  // d/dlambda OBJ vanishes where 4(n+1)(A lambda - B)^4 - B lambda + Btilde
  // does; a degree-4 polynomial in lambda.
  const double K = 4.0 * (n + 1);
  const double A2 = A * A;
  const RealRoots roots =
      solve_quartic(K * A2 * A2, -4.0 * K * A2 * A * B, 6.0 * K * A2 * B * B,
                    -4.0 * K * A * B * B * B - B, K * B * B * B * B + Btilde);
  for (int r = 0; r < roots.count; ++r) {
    const double lam = roots.r[r];
    if (!(lam >= lo && lam <= hi)) continue;
    if (!(lam * A - B > 0.0)) continue;
    if (std::find(out.begin(), out.end(), lam) == out.end())
      out.push_back(lam);
  }
  return out;
}

static CentralSolution solve_sorted(const std::vector<double>& psi, double var,
                                    const SolverConfig& cfg) {
  const int n = static_cast<int>(psi.size());
  const double inv = 1.0 / (2.0 * (n + 1) * var);

  std::vector<double> B(n + 1, 0.0), Bt(n + 1, 0.0);
  for (int i = 1; i <= n; ++i) {
    B[i] = B[i - 1] + psi[i - 1] * inv;
    Bt[i] = Bt[i - 1] + psi[i - 1] * psi[i - 1] * inv;
  }

  double cap = psi[n - 1] +
               10.0 * std::sqrt(2.0 * (n + 1)) * std::max(1.0, psi[n - 1]);
  BestCandidate best;
  for (int attempt = 0; attempt < 64; ++attempt) {
    best = BestCandidate{};
#pragma omp parallel if (cfg.parallel && n > 2048)
    {
      BestCandidate local;
#pragma omp for schedule(static) nowait
      for (int i = 1; i <= n; ++i) {
        const double A = i * inv;
        const double lo = psi[i - 1];
        const double hi = i < n ? psi[i] : cap;
        if (hi < lo) continue;
        for (double lam :
             interior_lambda_candidates(A, B[i], Bt[i], n, lo, hi)) {
          const double obj = score_objective(lam, A, B[i], Bt[i], n);
          BestCandidate cand{obj, i, lam};
          if (cand.better_than(local)) local = cand;
        }
      }
#pragma omp critical
      if (local.better_than(best)) best = local;
    }
    if (!(best.i == n && best.lambda >= cap * (1.0 - 1e-9))) break;
    cap *= 2.0;  // boundary candidate selected at the cap: widen and re-solve
  }
  if (!std::isfinite(best.obj))
    throw NumericalFailureError("no finite score candidate");

  CentralSolution sol;
  sol.lambda_star = best.lambda;
  sol.y.assign(n, 0.0);
  const double A = best.i * inv;
  const double d = best.lambda * A - B[best.i];
  const double denom = 2.0 * (n + 1) * var * d * d;
  double ymax = 0.0;
  for (int j = 0; j < best.i; ++j) {
    sol.y[j] = std::max(0.0, (best.lambda - psi[j]) / denom);
    ymax = std::max(ymax, sol.y[j]);
  }
  double total = 0.0;
  sol.active_count = 0;
  for (int j = 0; j < n; ++j) {
    if (sol.y[j] < cfg.zero_snap * ymax) sol.y[j] = 0.0;
    if (sol.y[j] > 0.0) ++sol.active_count;
    total += sol.y[j];
  }
  if (!(total > 0.0)) throw NumericalFailureError("degenerate allocation");
  sol.eta = total;
  sol.weights.resize(n);
  for (int j = 0; j < n; ++j) sol.weights[j] = sol.y[j] / total;
  sol.objective = objective_central(sol.y, psi, var, n);
  return sol;
}

CentralSolution solve_central_virtual(const VirtualProfile& vp, double var,
                                      const SolverConfig& cfg) {
  CentralSolution sorted = solve_sorted(vp.psi, var, cfg);
  CentralSolution out = sorted;
  const int n = static_cast<int>(vp.psi.size());
  for (int k = 0; k < n; ++k) {
    out.y[vp.perm[k]] = sorted.y[k];
    out.weights[vp.perm[k]] = sorted.weights[k];
  }
  return out;
}

CentralSolution solve_central_psi(std::span<const double> psi, double var,
                                  const SolverConfig& cfg) {
  if (psi.empty()) throw EmptyInputError("solve_central_psi");
  const int n = static_cast<int>(psi.size());
  VirtualProfile vp;
  vp.psi.assign(psi.begin(), psi.end());
  vp.perm.resize(n);
  for (int i = 0; i < n; ++i) vp.perm[i] = i;
  std::sort(vp.perm.begin(), vp.perm.end(), [&psi](int a, int b) {
    if (psi[a] != psi[b]) return psi[a] < psi[b];
    return a < b;
  });
  std::vector<double> sorted(n);
  for (int k = 0; k < n; ++k) sorted[k] = psi[vp.perm[k]];
  vp.psi = std::move(sorted);
  return solve_central_virtual(vp, var, cfg);
}

CentralSolution solve_central(const CostProfile& profile, const Priors& priors,
                              const SolverConfig& cfg) {
  const VirtualProfile vp = make_virtual_profile(profile, priors, cfg);
  return solve_central_virtual(vp, profile.var, cfg);
}

}  // namespace dpmech
