// Copyright 2026 The commudyn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <cmath>
#include <complex>
#include <vector>

namespace commudyn {

template <class T>
struct QuadratureResult {
  T value{};
  double error = 0.0;
  bool converged = true;
};

namespace detail {

template <class F, class T>
void simpson_step(const F& f, double a, double b, T fa, T fm, T fb, T whole, double tol, int depth,
                  QuadratureResult<T>& out) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const T flm = f(lm);
  const T frm = f(rm);
  const double h = b - a;
  const T left = (h / 12.0) * (fa + 4.0 * flm + fm);
  const T right = (h / 12.0) * (fm + 4.0 * frm + fb);
  const T delta = left + right - whole;
  const double err = std::abs(delta) / 15.0;
  if (depth <= 0 || err <= tol || h < 1e-14 * (std::abs(a) + std::abs(b) + 1.0)) {
    if (depth <= 0 && err > tol) out.converged = false;
    out.value += left + right + delta / 15.0;
    out.error += err;
    return;
  }
  simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, out);
  simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, out);
}

}  // namespace detail

// Adaptive Simpson with Richardson correction. Works for real or complex
// integrands; tol is an absolute error target over [a, b].
template <class F>
auto adaptive_simpson(const F& f, double a, double b, double tol = 1e-10, int max_depth = 40)
    -> QuadratureResult<decltype(f(a))> {
  using T = decltype(f(a));
  QuadratureResult<T> out;
  if (a == b) return out;
  const T fa = f(a);
  const T fb = f(b);
  const T fm = f(0.5 * (a + b));
  const T whole = ((b - a) / 6.0) * (fa + 4.0 * fm + fb);
  detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth, out);
  return out;
}

// Splits [a, b] into panels of at most panel_width before adapting. Avoids
// the classic failure where the first Simpson estimate misses a narrow feature.
template <class F>
auto panelled_simpson(const F& f, double a, double b, double tol, double panel_width = 1.0)
    -> QuadratureResult<decltype(f(a))> {
  using T = decltype(f(a));
  QuadratureResult<T> out;
  if (a == b) return out;
  const int panels = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) / panel_width)));
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double hi = (p + 1 == panels) ? b : lo + h;
    const auto part = adaptive_simpson(f, lo, hi, tol / panels);
    out.value += part.value;
    out.error += part.error;
    out.converged = out.converged && part.converged;
  }
  return out;
}

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule, exact for polynomials of degree 2n - 1.
GaussLegendreRule gauss_legendre(int n);

}  // namespace commudyn
