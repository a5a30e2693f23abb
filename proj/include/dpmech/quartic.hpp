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

#include <array>
#include <cstddef>

namespace dpmech {

// Real roots of low-degree polynomials, closed form (Cardano / Ferrari via the
// resolvent cubic) with a Newton polish per root. Roots are returned sorted
// ascending; multiple roots may coincide.
struct RealRoots {
  std::array<double, 4> r{};
  int count = 0;
  void push(double x) { r[count++] = x; }
};

// a*x^2 + b*x + c = 0
RealRoots solve_quadratic(double a, double b, double c);

// x^3 + a*x^2 + b*x + c = 0 (monic)
RealRoots solve_cubic_monic(double a, double b, double c);

// c4*x^4 + c3*x^3 + c2*x^2 + c1*x + c0 = 0. Degenerate leading coefficients
// fall back to the lower-degree solvers.
RealRoots solve_quartic(double c4, double c3, double c2, double c1, double c0);

}  // namespace dpmech
