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

#include "dpmech/local_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dpmech/errors.hpp"
#include "dpmech/quartic.hpp"

namespace dpmech {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double g_of(double z, double var) {
  const double t = var * z * z + 2.0;
  return 4.0 * z / (t * t);
}

inline double fold_point(double var) { return std::sqrt(2.0 / (3.0 * var)); }

inline double peak_level(double var) {
  return 3.0 * std::sqrt(3.0) / (8.0 * std::sqrt(2.0 * var));
}

inline double harm_term(double y, double var) {
  return 1.0 / (var + 2.0 / (y * y));
}

// Bisection-safeguarded Newton on the monotone branch of g(.) = level.
double refine_branch(double z, double level, double var, double lo,
                     double hi) {
  for (int it = 0; it < 60; ++it) {
    const double t = var * z * z + 2.0;
    const double f = 4.0 * z / (t * t) - level;
    if (std::fabs(f) <= 1e-13 * level) break;
    const double df = 4.0 * (2.0 - 3.0 * var * z * z) / (t * t * t);
    double next = std::fabs(df) > 0.0 ? z - f / df : z;
    if (!(next > lo && next < hi)) {
      // Newton left the bracket: bisect on the sign of f.
      const bool increasing = g_of(hi, var) > g_of(lo, var);
      if ((f > 0.0) == increasing)
        hi = z;
      else
        lo = z;
      next = 0.5 * (lo + hi);
    }
    if (next == z) break;
    z = next;
  }
  return z;
}

struct Candidate {
  double obj = kInf;
  int i = 0;       // active-set size
  int m = 0;       // low-branch members in the top tied block
  double lambda = 0.0;

  bool better_than(const Candidate& o) const {
    if (obj != o.obj) return obj < o.obj;
    if (i != o.i) return i < o.i;
    if (m != o.m) return m < o.m;
    return lambda < o.lambda;
  }
};

// Distinct virtual-cost groups of the active prefix 1..i (sorted psi).
struct Group {
  double psi;
  int count;
};

std::vector<Group> group_prefix(const std::vector<double>& psi, int i) {
  std::vector<Group> g;
  for (int j = 0; j < i; ++j) {
    if (!g.empty() && psi[j] <= g.back().psi * (1.0 + 1e-12))
      ++g.back().count;
    else
      g.push_back({psi[j], 1});
  }
  return g;
}

// Per-lambda evaluation state: the high root of every group plus the low
// root of the top block.
struct Roots {
  bool feasible = false;
  std::vector<double> high;  // per group
  double top_low = 0.0;
};

Roots roots_at(const std::vector<Group>& groups, double lambda, double var,
               int n) {
  Roots r;
  r.high.resize(groups.size());
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const BranchRoots br = branch_roots(groups[gi].psi, lambda, var, n);
    if (br.count == 0) return r;  // infeasible at this lambda
    r.high[gi] = br.high;
    if (gi + 1 == groups.size()) r.top_low = br.low;
  }
  r.feasible = true;
  return r;
}

// Objective and multiplier-consistency residual (harmonic aggregate minus
// lambda) for m low-branch members of the top block.
struct Eval {
  double obj;
  double residual;  // harmonic aggregate minus lambda
};

Eval evaluate(const std::vector<Group>& groups, const Roots& r, int m,
              double lambda, double var, int n) {
  double lin = 0.0, harm = 0.0;
  const std::size_t top = groups.size() - 1;
  for (std::size_t gi = 0; gi < top; ++gi) {
    lin += groups[gi].count * groups[gi].psi * r.high[gi];
    harm += groups[gi].count * harm_term(r.high[gi], var);
  }
  const int bac = groups[top].count;
  const double yh = r.high[top], yl = r.top_low;
  lin += groups[top].psi * ((bac - m) * yh + m * yl);
  harm += (bac - m) * harm_term(yh, var) + m * harm_term(yl, var);
  return {(n + 1) / harm + lin, harm - lambda};
}

}  // namespace

double objective_local(std::span<const double> y, std::span<const double> psi,
                       double var, int n) {
  if (y.size() != psi.size())
    throw LengthMismatchError("objective_local: y vs psi");
  double lin = 0.0, harm = 0.0;
  bool any = false;
  for (std::size_t j = 0; j < y.size(); ++j) {
    if (y[j] <= 0.0) continue;
    any = true;
    lin += psi[j] * y[j];
    harm += harm_term(y[j], var);
  }
  if (!any) throw AllZeroError("objective_local: all y are zero");
  return (n + 1) / harm + lin;
}

BranchRoots branch_roots(double psi_i, double lambda, double var, int n) {
  BranchRoots out;
  const double level = psi_i * lambda * lambda / (n + 1);
  const double peak = peak_level(var);
  const double zp = fold_point(var);
  if (level > peak * (1.0 + 1e-12)) return out;
  if (level >= peak * (1.0 - 1e-12)) {
    out.count = 1;
    out.low = out.high = zp;
    return out;
  }
  // level (var z^2 + 2)^2 - 4z = 0, one root on each monotone branch.
  const RealRoots rr = solve_quartic(level * var * var, 0.0, 4.0 * level * var,
                                     -4.0, 4.0 * level);
  double low = -1.0, high = -1.0;
  for (int k = 0; k < rr.count; ++k) {
    const double z = rr.r[k];
    if (!(z > 0.0)) continue;
    if (z <= zp)
      low = low < 0.0 ? z : std::min(low, z);
    else
      high = std::max(high, z);
  }
  // Closed form can lose a root to rounding near the fold; recover by
  // bisection on the affected branch.
  double zmax = std::max(2.0 * zp, std::cbrt(4.0 / (var * var * level)));
  while (g_of(zmax, var) > level) zmax *= 2.0;
  if (low < 0.0) low = 0.5 * zp;
  if (high < 0.0) high = 0.5 * (zp + zmax);
  out.low = refine_branch(low, level, var, 0.0, zp);
  out.high = refine_branch(high, level, var, zp, zmax);
  out.count = 2;
  return out;
}

double lambda_feasibility_limit(double psi, double var, int n) {
  return std::sqrt((n + 1) * peak_level(var) / psi);
}

LambdaBounds lambda_bounds(int i, std::span<const double> psi_sorted,
                           double var, int n) {
  if (i < 1 || i > n) throw ParseError("lambda_bounds: i out of range");
  double sum_psi = 0.0;
  for (double p : psi_sorted) sum_psi += p;
  LambdaBounds b;
  b.lo = n / (var + std::pow(std::sqrt(2.0) * n * sum_psi / (n + 1),
                             2.0 / 3.0));
  const double psi_ref = psi_sorted[std::max(i - 2, 0)];
  b.hi = lambda_feasibility_limit(psi_ref, var, n);
  return b;
}

namespace {

// Provable lower bound on the optimal lambda: (n+1) divided by the value of
// the objective at the best symmetric allocation (valid upper bound on OPT).
double certified_lambda_lo(std::span<const double> psi, double var, int n) {
  double sum_psi = 0.0;
  for (double p : psi) sum_psi += p;
  const double y = std::cbrt(4.0 * (n + 1) / (n * sum_psi));
  const double obj =
      (n + 1) * (var + 2.0 / (y * y)) / n + sum_psi * y;
  return (n + 1) / obj;
}

// Max |derivative| of (n+1)/lambda and of the root branches over [lo, hi],
// sampled away from fold neighborhoods; capped.
double lipschitz_sample(const std::vector<Group>& groups, double lo, double hi,
                        double var, int n, int samples) {
  constexpr double kFoldWidth = 1e-4;
  constexpr double kCap = 1e8;
  double delta = (n + 1) / (lo * lo);  // analytic for (n+1)/lambda
  const double h = (hi - lo) / (samples + 1) * 0.25;
  if (!(h > 0.0)) return std::min(delta, kCap);
  for (int s = 1; s <= samples; ++s) {
    const double lam = lo + (hi - lo) * s / (samples + 1);
    bool near_fold = false;
    for (const Group& g : groups) {
      const double lf = lambda_feasibility_limit(g.psi, var, n);
      if (std::fabs(lam - lf) < kFoldWidth * lf) near_fold = true;
    }
    if (near_fold) continue;
    const Roots a = roots_at(groups, lam - h, var, n);
    const Roots b = roots_at(groups, lam + h, var, n);
    if (!a.feasible || !b.feasible) continue;
    for (std::size_t gi = 0; gi < groups.size(); ++gi)
      delta = std::max(delta, std::fabs(b.high[gi] - a.high[gi]) / (2 * h));
    delta = std::max(delta, std::fabs(b.top_low - a.top_low) / (2 * h));
  }
  return std::min(delta, kCap);
}

// The full 1024-point estimate only matters when the implied grid is finer
// than the cap; a coarse probe decides which regime we are in.
double lipschitz_estimate(const std::vector<Group>& groups, double lo,
                          double hi, double var, int n, double ptas_eps,
                          long max_grid) {
  const double coarse = lipschitz_sample(groups, lo, hi, var, n, 64);
  const double implied = (hi - lo) * coarse / ptas_eps;
  if (implied >= static_cast<double>(max_grid)) return coarse;
  return lipschitz_sample(groups, lo, hi, var, n, 1024);
}

LocalSolution solve_sorted_local(const std::vector<double>& psi, double var,
                                 double ptas_eps, const SolverConfig& cfg) {
  const int n = static_cast<int>(psi.size());
  if (!(ptas_eps > 0.0)) throw ParseError("ptas_eps must be positive");

  const double lo_cert = certified_lambda_lo(psi, var, n);
  Candidate best;

#pragma omp parallel if (cfg.parallel && n > 8)
  {
    Candidate local_best;
#pragma omp for schedule(dynamic) nowait
    for (int i = 1; i <= n; ++i) {
      const std::vector<Group> groups = group_prefix(psi, i);
      const int bac = groups.back().count;

      const LambdaBounds pb = lambda_bounds(i, psi, var, n);
      const double lo = std::min(pb.lo, lo_cert);
      // Every active user must admit a root, so intersect with the top
      // block's own feasibility limit as well.
      const double hi =
          std::min(pb.hi, lambda_feasibility_limit(groups.back().psi, var, n));
      if (!(hi > lo)) continue;

      const double delta = lipschitz_estimate(groups, lo, hi, var, n,
                                              ptas_eps, cfg.max_lambda_grid);
      const double step = ptas_eps / delta;
      long npts = static_cast<long>(std::ceil((hi - lo) / step)) + 1;
      npts = std::clamp<long>(npts, 9, cfg.max_lambda_grid);

      std::vector<double> grid;
      grid.reserve(npts + groups.size());
      for (long k = 0; k < npts; ++k)
        grid.push_back(lo + (hi - lo) * static_cast<double>(k) / (npts - 1));
      for (const Group& g : groups) {
        const double lf = lambda_feasibility_limit(g.psi, var, n);
        if (lf > lo && lf < hi) grid.push_back(lf);
      }
      std::sort(grid.begin(), grid.end());
      grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

      // Sweep the grid, tracking the best value and the sign changes of the
      // multiplier-consistency residual per low-branch count m.
      std::vector<double> prev_res(bac + 1, 0.0);
      std::vector<char> prev_ok(bac + 1, 0);
      double prev_lam = 0.0;
      std::vector<std::vector<std::pair<double, double>>> per_m(bac + 1);
      for (double lam : grid) {
        const Roots r = roots_at(groups, lam, var, n);
        if (!r.feasible) {
          std::fill(prev_ok.begin(), prev_ok.end(), 0);
          continue;
        }
        for (int m = 0; m <= bac; ++m) {
          const Eval e = evaluate(groups, r, m, lam, var, n);
          Candidate cand{e.obj, i, m, lam};
          if (cand.better_than(local_best)) local_best = cand;
          if (prev_ok[m] && prev_res[m] * e.residual < 0.0)
            per_m[m].push_back({prev_lam, lam});
          prev_res[m] = e.residual;
          prev_ok[m] = 1;
        }
        prev_lam = lam;
      }

      // Polish each bracketed fixed point of lambda = sum 1/(var + 2/y_j^2).
      for (int m = 0; m <= bac; ++m) {
        for (auto [la, lb] : per_m[m]) {
          double fa = evaluate(groups, roots_at(groups, la, var, n), m, la,
                               var, n)
                          .residual;
          for (int it = 0; it < 90 && lb - la > 1e-15 * lb; ++it) {
            const double mid = 0.5 * (la + lb);
            const Roots r = roots_at(groups, mid, var, n);
            if (!r.feasible) break;
            const double fm = evaluate(groups, r, m, mid, var, n).residual;
            if ((fm < 0.0) == (fa < 0.0)) {
              la = mid;
              fa = fm;
            } else {
              lb = mid;
            }
          }
          const double lam = 0.5 * (la + lb);
          const Roots r = roots_at(groups, lam, var, n);
          if (!r.feasible) continue;
          const Eval e = evaluate(groups, r, m, lam, var, n);
          Candidate cand{e.obj, i, m, lam};
          if (cand.better_than(local_best)) local_best = cand;
        }
      }
    }
#pragma omp critical
    if (local_best.better_than(best)) best = local_best;
  }

  if (!std::isfinite(best.obj))
    throw NumericalFailureError("no feasible (i, lambda) candidate");

  // Reconstruct the winning allocation.
  LocalSolution sol;
  sol.ptas_eps = ptas_eps;
  sol.y.assign(n, 0.0);
  sol.branch_flags.assign(n, BranchFlag::kNone);
  const std::vector<Group> groups = group_prefix(psi, best.i);
  const Roots r = roots_at(groups, best.lambda, var, n);
  if (!r.feasible) throw NumericalFailureError("winner became infeasible");
  int j = 0;
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const bool top = gi + 1 == groups.size();
    int high_count = groups[gi].count - (top ? best.m : 0);
    for (int k = 0; k < groups[gi].count; ++k, ++j) {
      const bool is_high = k < high_count;
      sol.y[j] = is_high ? r.high[gi] : r.top_low;
      sol.branch_flags[j] = is_high ? BranchFlag::kHigh : BranchFlag::kLow;
    }
  }
  double ymax = 0.0;
  for (double v : sol.y) ymax = std::max(ymax, v);
  double harm = 0.0;
  sol.active_count = 0;
  for (int k = 0; k < n; ++k) {
    if (sol.y[k] < cfg.zero_snap * ymax) {
      sol.y[k] = 0.0;
      sol.branch_flags[k] = BranchFlag::kNone;
    }
    if (sol.y[k] > 0.0) {
      ++sol.active_count;
      harm += harm_term(sol.y[k], var);
    }
  }
  sol.lambda = harm;
  sol.objective = objective_local(sol.y, psi, var, n);
  return sol;
}

}  // namespace

LocalSolution solve_local_virtual(const VirtualProfile& vp, double var,
                                  double ptas_eps, const SolverConfig& cfg) {
  LocalSolution sorted = solve_sorted_local(vp.psi, var, ptas_eps, cfg);
  LocalSolution out = sorted;
  for (std::size_t k = 0; k < vp.psi.size(); ++k) {
    out.y[vp.perm[k]] = sorted.y[k];
    out.branch_flags[vp.perm[k]] = sorted.branch_flags[k];
  }
  return out;
}

LocalSolution solve_local_psi(std::span<const double> psi, double var,
                              double ptas_eps, const SolverConfig& cfg) {
  if (psi.empty()) throw EmptyInputError("solve_local_psi");
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
  return solve_local_virtual(vp, var, ptas_eps, cfg);
}

LocalSolution solve_local(const CostProfile& profile, const Priors& priors,
                          double ptas_eps, const SolverConfig& cfg) {
  const VirtualProfile vp = make_virtual_profile(profile, priors, cfg);
  return solve_local_virtual(vp, profile.var, ptas_eps, cfg);
}

std::vector<double> optimal_local_weights(std::span<const double> y,
                                          double var) {
  std::vector<double> w(y.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] > 0.0) {
      w[i] = harm_term(y[i], var);
      total += w[i];
    }
  }
  if (!(total > 0.0)) throw AllZeroError("optimal_local_weights: all y zero");
  for (double& v : w) v /= total;
  return w;
}

}  // namespace dpmech
