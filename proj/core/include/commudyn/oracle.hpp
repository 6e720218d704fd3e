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

// Brute-force references: dense matrix exponential and a midpoint
// exponential-product integrator for time-ordered propagators.

#include <functional>
#include <vector>

#include "commudyn/superop.hpp"
#include "commudyn/types.hpp"

namespace commudyn::oracle {

inline constexpr int kDefaultStepsPerUnit = 4096;

// Pade(13) scaling-and-squaring. Throws NonFiniteValue on non-finite input and
// OverflowError when the result does not fit in double precision.
ComplexMatrix expm(const ComplexMatrix& m);
superop::SuperOperator expm(const superop::SuperOperator& m);

using MatrixFn = std::function<ComplexMatrix(double)>;
using GeneratorFn = std::function<superop::SuperOperator(double)>;

template <class Op>
struct SteppedPropagation {
  int steps = 0;
  double step = 0.0;
  // Richardson estimate of the global error of propagator (max-abs norm).
  double error_estimate = 0.0;
  // error_estimate / steps
  double local_error = 0.0;
  Op propagator;
};

int default_steps(double t0, double t, int steps_per_unit = kDefaultStepsPerUnit);

// prod_j expm(h L(t0 + (j + 1/2) h)), later factors on the left. With
// estimate_error a second run at ceil(steps/2) supplies the error estimate.
SteppedPropagation<ComplexMatrix> ordered_exp(const MatrixFn& lfun, double t0, double t, int steps,
                                              bool estimate_error = true);
SteppedPropagation<superop::SuperOperator> ordered_exp(const GeneratorFn& lfun, double t0, double t, int steps,
                                                       bool estimate_error = true);

// Homogeneous variant: the generator at time u is lfun(u - t0).
SteppedPropagation<superop::SuperOperator> ordered_exp_homogeneous(const GeneratorFn& lfun, double t0, double t,
                                                                   int steps, bool estimate_error = true);

struct Trajectory {
  std::vector<double> times;
  std::vector<ComplexMatrix> states;
  // max_j |tr(rho_j) - tr(rho_0)|
  double trace_drift = 0.0;
};

// rho(times[j]) obtained by propagating cumulatively from times[0]; each
// segment uses ceil(steps_per_unit * length) midpoint steps.
Trajectory evolve_state(const GeneratorFn& lfun, const ComplexMatrix& rho0, const std::vector<double>& times,
                        int steps_per_unit = kDefaultStepsPerUnit);

}  // namespace commudyn::oracle
