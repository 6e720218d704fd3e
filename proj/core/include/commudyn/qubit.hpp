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

// Commutative two-level dynamics with pumping, dephasing-type dissipation and
// a sigma_3 Hamiltonian. Matrix conventions: sigma+ = e_10 = |1><0|,
// sigma- = e_01, pi_0 = e_00, pi_1 = e_11, sigma_3 = pi_1 - pi_0.

#include <array>
#include <optional>
#include <vector>

#include "commudyn/errors.hpp"
#include "commudyn/superop.hpp"
#include "commudyn/timefn.hpp"
#include "commudyn/types.hpp"

namespace commudyn::qubit {

using superop::SuperOperator;

struct Operators {
  ComplexMatrix sigma_plus;
  ComplexMatrix sigma_minus;
  ComplexMatrix pi0;
  ComplexMatrix pi1;
  ComplexMatrix sigma3;
  ComplexMatrix identity;
};

const Operators& operators();

struct QubitSpec {
  TimeFunction epsilon;
  TimeFunction gamma;
  TimeFunction c00;
  TimeFunction c11;
  TimeFunction c10_re;
  TimeFunction c10_im;
  double mu = 0.5;

  // c(t) = [[c00, conj(c10)], [c10, c11]]; Hermitian by construction.
  ComplexMatrix c(double t) const;
  ComplexMatrix c_integral(double a, double b) const;
  cplx c10(double t) const { return {c10_re.eval(t), c10_im.eval(t)}; }
  bool c10_real() const { return c10_im.is_zero(); }
};

// Throws PreconditionFailed when mu is outside [0, 1].
void validate_spec(const QubitSpec& spec);

// Real 2x2 matrix over any field S (used for exact checks).
template <class S>
struct Mat2 {
  S a00{}, a01{}, a10{}, a11{};
};

template <class S>
S hs_pairing(const Mat2<S>& g, const Mat2<S>& h) {
  return g.a00 * h.a00 + g.a01 * h.a01 + g.a10 * h.a10 + g.a11 * h.a11;
}

// g = (omega, sigma+, sigma-, sigma_3), h = (I, sigma+, sigma-, sigma) with
// omega = mu pi_1 + (1 - mu) pi_0 and sigma = (1 - mu) pi_1 - mu pi_0.
template <class S>
struct DampingBasisT {
  std::array<Mat2<S>, 4> g;
  std::array<Mat2<S>, 4> h;

  static DampingBasisT make(const S& mu) {
    const S zero(0), one(1);
    DampingBasisT b;
    b.g[0] = {one - mu, zero, zero, mu};
    b.g[1] = {zero, zero, one, zero};
    b.g[2] = {zero, one, zero, zero};
    b.g[3] = {-one, zero, zero, one};
    b.h[0] = {one, zero, zero, one};
    b.h[1] = b.g[1];
    b.h[2] = b.g[2];
    b.h[3] = {-mu, zero, zero, one - mu};
    return b;
  }

  // tr(g_a* h_b)
  S pairing(std::size_t a, std::size_t b) const { return hs_pairing(g[a], h[b]); }
};

struct DampingBasis {
  std::array<ComplexMatrix, 4> g;
  std::array<ComplexMatrix, 4> h;
};

DampingBasis damping_basis(double mu);

SuperOperator build_generator(const QubitSpec& spec, double t);

// -(gamma + c00 + c11 - 2 c10 + 2 i epsilon) / 2
cplx gamma_eigenvalue(const QubitSpec& spec, double t);

struct GammaReport {
  cplx formula = 0.0;
  // tr(sigma+* L sigma+)
  cplx numerical = 0.0;
  // ||L sigma+ - numerical sigma+||_max
  double eigenvector_residual = 0.0;
  double discrepancy = 0.0;
  bool flagged = false;
};

GammaReport gamma_report(const QubitSpec& spec, double t, double flag_tol = 1e-9);

// (0, Gamma, conj Gamma, -gamma)
std::array<cplx, 4> eigenvalues(const QubitSpec& spec, double t);
// Integrals of the four eigenvalues over [a, b].
std::array<cplx, 4> integrated_eigenvalues(const QubitSpec& spec, double a, double b);

struct PropagateOptions {
  double tol = kDefaultTol;
  int grid_points = kDefaultGridPoints;
  bool check_preconditions = true;
};

// sum_alpha exp(int lambda_alpha) g_alpha tr(h_alpha* .) over the mode's window.
SuperOperator propagate(const QubitSpec& spec, double t0, double t, Mode mode, const PropagateOptions& options = {});

struct VMaps {
  SuperOperator v;
  SuperOperator v_inv;
  SuperOperator v_inv_dual;
  // f = (e_11, sigma+, sigma-, e_00)
  std::array<ComplexMatrix, 4> f;
};

// V = sum g_a tr(f_a* .), V^{-1} = sum f_a tr(h_a* .), dual(V^{-1}) = sum h_a tr(f_a* .).
VMaps v_conjugation(double mu);
// P_a rho = f_a tr(f_a* rho)
SuperOperator f_projector(const VMaps& v, std::size_t alpha);

struct Classification {
  bool markovian = true;
  bool nonmarkovian_valid = true;
  std::optional<Witness> markov_violation;
  std::optional<Witness> nonmarkov_violation;
};

// Pointwise (gamma >= -tol, c PSD) and integrated (int_0^t gamma >= -tol,
// int_0^t c PSD) conditions on [0, horizon]; violation times are refined by
// bisection between grid points.
Classification classify(const QubitSpec& spec, double horizon, double tol = kDefaultTol,
                        int grid_points = kDefaultGridPoints);

struct ConditionReport {
  bool passed = true;
  std::optional<Witness> first_violation;
};

ConditionReport check_markov(const QubitSpec& spec, double t0, double t, double tol = kDefaultTol,
                             int grid_points = kDefaultGridPoints);
ConditionReport check_nonmarkov(const QubitSpec& spec, double horizon, double tol = kDefaultTol,
                                int grid_points = kDefaultGridPoints);

}  // namespace commudyn::qubit
