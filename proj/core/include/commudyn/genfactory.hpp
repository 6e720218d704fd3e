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

#include <functional>
#include <optional>
#include <vector>

#include "commudyn/superop.hpp"
#include "commudyn/timefn.hpp"
#include "commudyn/types.hpp"

namespace commudyn::genfactory {

using superop::SpectralDecomposition;
using superop::SuperOperator;

// Mutually commuting trace-annihilating generators sharing one damping basis.
class CommutingGeneratorSet {
 public:
  // Throws InvalidGeneratorSet when the generators do not commute, do not
  // annihilate the trace, or are not simultaneously diagonal in one basis.
  explicit CommutingGeneratorSet(std::vector<SuperOperator> generators, double tol = kDefaultTol);

  std::size_t size() const { return generators_.size(); }
  std::size_t modes() const { return basis_.size(); }
  int dim() const { return basis_.dim(); }
  const std::vector<SuperOperator>& generators() const { return generators_; }
  const SuperOperator& generator(std::size_t k) const { return generators_.at(k); }
  // Right vectors g and left vectors h; basis().eigenvalues() belong to an
  // internal generic combination and carry no meaning of their own.
  const SpectralDecomposition& basis() const { return basis_; }
  // lambda_alpha^{(k)}
  cplx eigenvalue(std::size_t alpha, std::size_t k) const { return eigenvalues_(static_cast<Eigen::Index>(alpha), static_cast<Eigen::Index>(k)); }
  const ComplexMatrix& eigenvalues() const { return eigenvalues_; }
  double max_commutator() const { return max_commutator_; }
  // Largest off-diagonal element of any generator in the shared basis.
  double diagonality_residual() const { return diagonality_residual_; }

 private:
  std::vector<SuperOperator> generators_;
  SpectralDecomposition basis_;
  ComplexMatrix eigenvalues_;  // modes x generators
  double max_commutator_ = 0.0;
  double diagonality_residual_ = 0.0;
};

struct MixtureSpec {
  std::vector<TimeFunction> weights;
  CommutingGeneratorSet generators;
};

// Throws InvalidWeights unless p_k(tau) >= -tol and sum_k p_k(tau) = 1 +- tol
// on a uniform grid over [0, horizon].
void check_weights(const MixtureSpec& spec, double horizon, double tol = kDefaultTol,
                   int grid_points = kDefaultGridPoints);

struct MixtureOptions {
  double tol = kDefaultTol;
  int grid_points = kDefaultGridPoints;
  bool check_weights = true;
};

// sum_k p_k(t - t0) exp((t - t0) L_k)
SuperOperator mixture_map(const MixtureSpec& spec, double t0, double t, const MixtureOptions& options = {});
// sum_alpha c_alpha(t - t0) g_alpha tr(h_alpha* .)
SuperOperator mixture_map_spectral(const MixtureSpec& spec, double t0, double t);

// c_alpha(tau) = sum_k p_k(tau) exp(lambda_alpha^{(k)} tau), and its derivative.
std::vector<cplx> mode_weights(const MixtureSpec& spec, double tau);
std::vector<cplx> mode_weight_derivatives(const MixtureSpec& spec, double tau);

struct MuOptions {
  double floor = 1e-12;
  // Drop the p_k' terms (reproduces the formula that ignores weight drift).
  bool literal = false;
};

// mu_alpha(tau) = c_alpha'(tau) / c_alpha(tau). Throws SingularEigenvalue if
// |c_alpha(tau)| < floor.
std::vector<cplx> mixture_generator_eigenvalues(const MixtureSpec& spec, double tau, const MuOptions& options = {});

struct SingularityScan {
  bool singular = false;
  std::size_t mode = 0;
  double time = 0.0;
  double modulus = 0.0;
};

// Minimises |c_alpha| on [0, horizon] (grid search plus golden-section
// refinement) and reports the first mode whose minimum drops below floor.
SingularityScan scan_singularities(const MixtureSpec& spec, double horizon, double floor = 1e-12,
                                   int grid_points = 4 * kDefaultGridPoints);

struct MixtureSolution {
  SuperOperator map;
  // exp(int_0^tau mu_alpha) per mode
  std::vector<cplx> factors;
  double quadrature_error = 0.0;
};

// sum_alpha exp(int_0^tau mu_alpha) g_alpha tr(h_alpha* .); throws
// SingularEigenvalue if some c_alpha vanishes on [0, tau].
MixtureSolution mixture_solution(const MixtureSpec& spec, double tau, double quad_tol = 1e-12);

// s^{k+1} (s - L)^{-(k+1)} via k + 1 solves with one LU factorisation.
struct ResolventOptions {
  double tol = kDefaultTol;
  double rcond_floor = 1e-14;
  // Require L I = 0 and dual(L) I = 0 within tol * max(1, ||L||).
  bool check_generator = true;
};

SuperOperator resolvent_channel(const SuperOperator& l, double s, int k, const ResolventOptions& options = {});
// resolvent_channel - id
SuperOperator resolvent_generator(const SuperOperator& l, double s, int k, const ResolventOptions& options = {});

struct WeightTerm {
  int k = 0;
  std::function<double(double t, double s)> f;
};

struct WeightedOptions {
  double s_min = 1e-3;
  double s_max = 1e3;
  int nodes = 64;
  // Accept when doubling the node count changes the result by at most
  // tol * max(1, ||result||).
  double tol = 1e-8;
  // Integrate in u = log s (ds = s du).
  bool log_scale = true;
};

struct WeightedGenerator {
  SuperOperator value;
  // Max-abs change when doubling the node count.
  double change = 0.0;
  int nodes = 0;
};

// sum_k int f_k(t, s) L^{(k)}_s ds by Gauss-Legendre on [s_min, s_max].
WeightedGenerator weighted_generator(const std::vector<WeightTerm>& weights, const SuperOperator& l, double t,
                                     const WeightedOptions& options = {});

}  // namespace commudyn::genfactory
