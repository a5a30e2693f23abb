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

#include "dpmech/quartic.hpp"

#include <algorithm>
#include <cmath>

namespace dpmech {
namespace {

constexpr double kTiny = 1e-300;

// One or two Newton steps against the original (possibly non-monic)
// coefficients; bails out if the derivative vanishes.
double polish(double x, double c4, double c3, double c2, double c1,
              double c0) {
  for (int it = 0; it < 2; ++it) {
    const double f = (((c4 * x + c3) * x + c2) * x + c1) * x + c0;
    const double df = ((4.0 * c4 * x + 3.0 * c3) * x + 2.0 * c2) * x + c1;
    if (std::fabs(df) < kTiny) break;
    const double step = f / df;
    if (!std::isfinite(step)) break;
    x -= step;
  }
  return x;
}

}  // namespace

RealRoots solve_quadratic(double a, double b, double c) {
  RealRoots out;
  if (std::fabs(a) < kTiny) {
    if (std::fabs(b) >= kTiny) out.push(-c / b);
    return out;
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return out;
  // Citardauq for the small root to avoid cancellation.
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (b + (b >= 0 ? sq : -sq));
  double x1 = q / a;
  double x2 = std::fabs(q) >= kTiny ? c / q : x1;
  if (x1 > x2) std::swap(x1, x2);
  out.push(x1);
  if (disc > 0.0) out.push(x2);
  return out;
}

RealRoots solve_cubic_monic(double a, double b, double c) {
  RealRoots out;
  const double a2 = a * a;
  const double q = (a2 - 3.0 * b) / 9.0;
  const double r = (a * (2.0 * a2 - 9.0 * b) + 27.0 * c) / 54.0;
  const double r2 = r * r, q3 = q * q * q;
  if (r2 <= q3) {
    double t = q3 > 0 ? r / std::sqrt(q3) : 0.0;
    t = std::clamp(t, -1.0, 1.0);
    t = std::acos(t);
    const double m = -2.0 * std::sqrt(std::max(q, 0.0));
    const double s = a / 3.0;
    double roots[3] = {m * std::cos(t / 3.0) - s,
                       m * std::cos((t + 2.0 * M_PI) / 3.0) - s,
                       m * std::cos((t - 2.0 * M_PI) / 3.0) - s};
    std::sort(roots, roots + 3);
    for (double x : roots) out.push(polish(x, 0.0, 1.0, a, b, c));
    return out;
  }
  double big = -std::cbrt(std::fabs(r) + std::sqrt(r2 - q3));
  if (r < 0) big = -big;
  const double small = big == 0.0 ? 0.0 : q / big;
  out.push(polish(big + small - a / 3.0, 0.0, 1.0, a, b, c));
  return out;
}

RealRoots solve_quartic(double c4, double c3, double c2, double c1,
                        double c0) {
  // Scale-normalize so the degenerate-leading test is scale invariant.
  const double scale = std::max({std::fabs(c4), std::fabs(c3), std::fabs(c2),
                                 std::fabs(c1), std::fabs(c0)});
  if (scale > 0.0) {
    c4 /= scale;
    c3 /= scale;
    c2 /= scale;
    c1 /= scale;
    c0 /= scale;
  }
  if (std::fabs(c4) < 1e-14) {
    if (std::fabs(c3) < 1e-14) return solve_quadratic(c2, c1, c0);
    RealRoots out = solve_cubic_monic(c2 / c3, c1 / c3, c0 / c3);
    for (int i = 0; i < out.count; ++i)
      out.r[i] = polish(out.r[i], 0.0, c3, c2, c1, c0);
    std::sort(out.r.begin(), out.r.begin() + out.count);
    return out;
  }

  // Monic depressed form y^4 + p y^2 + q y + r with x = y - a/4.
  const double a = c3 / c4, b = c2 / c4, cc = c1 / c4, d = c0 / c4;
  const double a2 = a * a;
  const double p = b - 3.0 * a2 / 8.0;
  const double q = cc + a * (a2 / 8.0 - b / 2.0);
  const double r = d - a * cc / 4.0 + a2 * b / 16.0 - 3.0 * a2 * a2 / 256.0;
  const double shift = a / 4.0;

  RealRoots out;
  if (std::fabs(q) < 1e-14 * (1.0 + std::fabs(p) + std::fabs(r))) {
    // Biquadratic: y^4 + p y^2 + r = 0.
    RealRoots z = solve_quadratic(1.0, p, r);
    for (int i = 0; i < z.count; ++i) {
      if (z.r[i] < 0.0) continue;
      const double s = std::sqrt(z.r[i]);
      out.push(-s - shift);
      if (s > 0.0) out.push(s - shift);
    }
  } else {
    // Ferrari: pick a positive root m of the resolvent cubic
    //   m^3 + 2 p m^2 + (p^2 - 4 r) m - q^2 = 0,
    // then factor into two quadratics.
    RealRoots res = solve_cubic_monic(2.0 * p, p * p - 4.0 * r, -q * q);
    double m = -1.0;
    for (int i = 0; i < res.count; ++i) m = std::max(m, res.r[i]);
    if (m > 0.0) {
      const double sm = std::sqrt(m);
      const double t = (p + m) / 2.0;
      const double u = q / (2.0 * sm);
      RealRoots q1 = solve_quadratic(1.0, sm, t - u);
      RealRoots q2 = solve_quadratic(1.0, -sm, t + u);
      for (int i = 0; i < q1.count; ++i) out.push(q1.r[i] - shift);
      for (int i = 0; i < q2.count; ++i) out.push(q2.r[i] - shift);
    }
  }
  for (int i = 0; i < out.count; ++i)
    out.r[i] = polish(out.r[i], c4, c3, c2, c1, c0);
  std::sort(out.r.begin(), out.r.begin() + out.count);
  return out;
}

}  // namespace dpmech
