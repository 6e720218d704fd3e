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

// Per-mode memory-kernel correspondence. A mode is described by
// c(t) = exp(int_0^t a~), f(t) = c'(t), and its kernel satisfies
// c'(t) = int_0^t K(t - u) c(u) du, i.e. K^(s) = s f^(s) / (1 + f^(s)).

#include <optional>
#include <vector>

#include "commudyn/timefn.hpp"
#include "commudyn/types.hpp"

namespace commudyn::kernel {

// c(t) = sum_i w_i exp(r_i t)
struct ExponentialSum {
  std::vector<cplx> weights;
  std::vector<cplx> rates;
};

class ModeSignal {
 public:
  // c(t) = exp(int_0^t rate).
  static ModeSignal from_rate(ComplexTimeFunction rate);
  // Requires sum of weights = 1 so that c(0) = 1.
  static ModeSignal from_exponentials(std::vector<cplx> weights, std::vector<cplx> rates, double tol = kDefaultTol);

  cplx c(double t) const;
  cplx f(double t) const;
  // f / c
  cplx rate(double t) const;
  // Upper bound on the asymptotic exponential growth rate of |c|.
  double growth_bound() const;
  // Present for constant rates and for explicit exponential sums.
  const std::optional<ExponentialSum>& exponentials() const { return exponentials_; }

 private:
  std::optional<ComplexTimeFunction> rate_;
  std::optional<ExponentialSum> exponentials_;
};

ModeSignal mode_signal(const ComplexTimeFunction& rate);

struct LaplaceOptions {
  bool force_numeric = false;
  // Truncate at T with |x(T)| e^{-sT} below this.
  double truncation = 1e-14;
  double tol = 1e-13;
  double max_horizon = 1e5;
};

struct LaplaceResult {
  cplx value = 0.0;
  // Quadrature error plus tail bound (0 for the analytic path).
  double error = 0.0;
  bool analytic = false;
  double horizon = 0.0;
};

enum class Transformed { f, c };

// Throws DivergentTransform when s <= growth_bound().
LaplaceResult laplace(const ModeSignal& signal, double s, Transformed which = Transformed::f,
                      const LaplaceOptions& options = {});

inline constexpr double kPoleFloor = 1e-10;

// s f / (1 + f); PoleEncountered when |1 + f| < floor.
cplx kernel_hat(cplx f_hat, double s, double floor = kPoleFloor);

struct LaplaceSample {
  double s = 0.0;
  cplx f_hat = 0.0;
  cplx k_hat = 0.0;
  // (1 + f^) / s
  cplx c_hat = 0.0;
  double error = 0.0;
  // |s c^ - 1 - K^ c^|
  double identity_residual() const;
};

LaplaceSample sample(const ModeSignal& signal, double s, const LaplaceOptions& options = {});
std::vector<LaplaceSample> sample(const ModeSignal& signal, const std::vector<double>& s_grid,
                                  const LaplaceOptions& options = {});

// K(t) = delta_weight * delta(t) + sum_i weights_i exp(rates_i t)
struct MemoryKernel {
  cplx delta_weight = 0.0;
  std::vector<cplx> weights;
  std::vector<cplx> rates;

  cplx regular(double t) const;
  cplx laplace(double s) const;
};

// Partial fractions of K^ = s - 1/c^ for exponential-sum signals; throws
// PreconditionFailed otherwise.
MemoryKernel memory_kernel(const ModeSignal& signal);

struct VolterraReport {
  std::size_t steps = 0;
  double step = 0.0;
  // sup |y - c| / sup |c|
  double max_relative_residual = 0.0;
  double max_abs_residual = 0.0;
  // Same, after Richardson extrapolation against a run at step / 2.
  double richardson_residual = 0.0;
  std::vector<double> times;
  std::vector<cplx> solution;
};

// Trapezoidal solution of y' = int_0^t K(t - u) y(u) du, y(0) = 1, compared
// with signal.c on [0, horizon]. The delta part contributes delta_weight * y(t).
VolterraReport volterra_check(const MemoryKernel& kernel, const ModeSignal& signal, double horizon, double step,
                              bool richardson = true);

}  // namespace commudyn::kernel
