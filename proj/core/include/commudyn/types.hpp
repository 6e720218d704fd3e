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

#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace commudyn {

using cplx = std::complex<double>;

// Dense operator on C^D (states, Weyl unitaries, basis elements).
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;

// Multi-index into Z_d^N. Entries are reduced mod d wherever they are consumed.
using MultiIndex = std::vector<int>;

inline constexpr double kDefaultTol = 1e-10;
inline constexpr int kDefaultGridPoints = 201;
inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

// Markov: generator evaluated at absolute time, integrals over [t0, t].
// NonMarkov: generator keyed on elapsed time, integrals over [0, t - t0].
enum class Mode { markov, nonmarkov };

inline const char* to_string(Mode mode) {
  return mode == Mode::markov ? "markov" : "nonmarkov";
}

// Integration window a propagation in the given mode draws its rates from.
struct Window {
  double begin;
  double end;
};

inline Window integration_window(Mode mode, double t0, double t) {
  if (mode == Mode::markov) return {t0, t};
  return {0.0, t - t0};
}

}  // namespace commudyn
