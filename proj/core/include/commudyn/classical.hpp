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

#include <optional>
#include <string>
#include <vector>

#include "commudyn/errors.hpp"
#include "commudyn/lattice.hpp"
#include "commudyn/timefn.hpp"
#include "commudyn/types.hpp"

namespace commudyn::classical {

// out(n) = sum_k x(n - k) y(k), componentwise mod d.
LatticeField convolve(const LatticeField& x, const LatticeField& y);

// x~(m) = sum_k lambda^{m.k} x(k), lambda = exp(2 pi i / d). Direct O(d^{2N})
// evaluation, done one axis at a time.
LatticeField dft(const LatticeField& x);
// Inverse of dft: sign -m.k and a factor d^{-N}.
LatticeField idft(const LatticeField& x);

// Real coefficient a_t(m) per lattice site.
class CirculantGenerator {
 public:
  CirculantGenerator() = default;
  CirculantGenerator(int d, int axes);
  CirculantGenerator(int d, int axes, std::vector<TimeFunction> coefficients);

  static CirculantGenerator constant(int d, int axes, const std::vector<double>& values);

  int d() const { return d_; }
  int axes() const { return axes_; }
  std::size_t size() const { return coefficients_.size(); }

  const TimeFunction& coefficient(std::size_t flat) const { return coefficients_.at(flat); }
  const TimeFunction& coefficient(std::span<const int> multi) const;
  void set(std::size_t flat, TimeFunction f);
  void set(std::span<const int> multi, TimeFunction f);
  // a(0) := -sum_{m != 0} a(m), making the generator conservative.
  void complete_diagonal();

  const std::vector<TimeFunction>& coefficients() const { return coefficients_; }
  bool is_homogeneous() const;

  LatticeField at_time(double t) const;
  // int_a^b a_u du, per site.
  LatticeField integrated(double a, double b) const;
  LatticeField integrated(Window w) const { return integrated(w.begin, w.end); }

  std::size_t flat_index(std::span<const int> multi) const;
  MultiIndex multi_index(std::size_t flat) const;

 private:
  int d_ = 0;
  int axes_ = 0;
  std::vector<TimeFunction> coefficients_;
};

// b(m) = a(-m).
CirculantGenerator reflect(const CirculantGenerator& g);
LatticeField reflect(const LatticeField& x);

// L(m, n) = a_t(m - n).
RealMatrix circulant_matrix(const CirculantGenerator& g, double t);
ComplexMatrix circulant_matrix(const LatticeField& a);

// Eigenvalues l_m = dft(a_t)(m).
LatticeField circulant_spectrum(const CirculantGenerator& g, double t);
// Unit eigenvector belonging to l_m: psi(n) = lambda^{-m.n} / sqrt(d^N). The vector lambda^{+m.n}
// carries l_{-m} instead.
ComplexVector circulant_eigenvector(int d, int axes, std::size_t m);

std::vector<double> uniform_grid(double a, double b, int points = kDefaultGridPoints);

struct KolmogorovReport {
  bool passed = true;
  bool positivity = true;
  bool conservation = true;
  bool diagonal = true;
  std::size_t points_checked = 0;
  double min_offdiagonal = 0.0;
  double max_conservation_residual = 0.0;
  std::optional<Witness> first_violation;
};

// Pointwise: a_t(m) >= -tol (m != 0), a_t(0) <= tol, |sum_m a_t(m)| <= tol.
KolmogorovReport kolmogorov_check_markov(const CirculantGenerator& g, const std::vector<double>& grid,
                                         double tol = kDefaultTol);
// The same conditions applied to int_0^tau a_u du at each grid tau.
KolmogorovReport kolmogorov_check_nonmarkov(const CirculantGenerator& g, const std::vector<double>& tau_grid,
                                            double tol = kDefaultTol);
// Checks the relevant window: [t0, t] for markov, [0, t - t0] for nonmarkov.
KolmogorovReport kolmogorov_check(const CirculantGenerator& g, double t0, double t, Mode mode,
                                  double tol = kDefaultTol, int grid_points = kDefaultGridPoints);

struct PropagateOptions {
  double tol = kDefaultTol;
  int grid_points = kDefaultGridPoints;
  bool check_preconditions = true;
  bool check_result = true;
};

// P(m) = d^{-N} sum_k lambda^{-m.k} exp(int a~(k)) over the mode's window.
LatticeField propagate(const CirculantGenerator& g, double t0, double t, Mode mode,
                       const PropagateOptions& options = {});
// P_{t,t0} * p0.
LatticeField propagate(const CirculantGenerator& g, double t0, double t, Mode mode, const LatticeField& p0,
                       const PropagateOptions& options = {});

struct CompositionReport {
  Mode mode = Mode::markov;
  // ||P_{t,s} * P_{s,u} - P_{t,u}||_max
  double composition_residual = 0.0;
  // ||P_{t+h,u+h} - P_{t,u}||_max
  double homogeneity_residual = 0.0;
  double shift = 0.0;
};

CompositionReport composition_check(const CirculantGenerator& g, double t, double s, double u, Mode mode,
                                    double shift = 0.5);

}  // namespace commudyn::classical
