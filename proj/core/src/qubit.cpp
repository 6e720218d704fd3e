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
#include "commudyn/qubit.hpp"

#include <cmath>
#include <functional>

namespace commudyn::qubit {
namespace {

ComplexMatrix unit(int i, int j) {
  ComplexMatrix e = ComplexMatrix::Zero(2, 2);
  e(i, j) = 1.0;
  return e;
}

template <class Mat>
ComplexMatrix to_complex(const Mat& m) {
  ComplexMatrix out(2, 2);
  out << m.a00, m.a01, m.a10, m.a11;
  return out;
}

double min_eig_hermitian2(const ComplexMatrix& c) {
  const double a = c(0, 0).real();
  const double d = c(1, 1).real();
  const double off = std::abs(c(1, 0));
  return 0.5 * (a + d) - std::sqrt(0.25 * (a - d) * (a - d) + off * off);
}

// Returns the violated condition (empty if none) at time t.
using Probe = std::function<std::optional<Witness>(double)>;

Probe markov_probe(const QubitSpec& spec, double tol) {
  return [&spec, tol](double t) -> std::optional<Witness> {
    const double g = spec.gamma.eval(t);
    if (g < -tol) return Witness{"gamma is negative", t, {}, g};
    const double m = min_eig_hermitian2(spec.c(t));
    if (m < -tol) return Witness{"c is not positive semidefinite", t, {}, m};
    return std::nullopt;
  };
}

Probe nonmarkov_probe(const QubitSpec& spec, double tol) {
  return [&spec, tol](double t) -> std::optional<Witness> {
    const double g = spec.gamma.integral(0.0, t);
    if (g < -tol) return Witness{"integrated gamma is negative", t, {}, g};
    const double m = min_eig_hermitian2(spec.c_integral(0.0, t));
    if (m < -tol) return Witness{"integrated c is not positive semidefinite", t, {}, m};
    return std::nullopt;
  };
}

ConditionReport scan(const Probe& probe, double a, double b, int points, bool refine) {
  ConditionReport report;
  const int n = std::max(points, 2);
  double last_good = a;
  for (int i = 0; i < n; ++i) {
    const double t = (i + 1 == n) ? b : a + (b - a) * i / (n - 1);
    auto w = probe(t);
    if (!w) {
      last_good = t;
      continue;
    }
    report.passed = false;
    if (refine && i > 0) {
      double lo = last_good;
      double hi = t;
      for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        auto wm = probe(mid);
        if (wm) {
          hi = mid;
          w = wm;
        } else {
          lo = mid;
        }
      }
    }
    report.first_violation = w;
    return report;
  }
  return report;
}

}  // namespace

const Operators& operators() {
  static const Operators ops = [] {
    Operators o;
    o.sigma_plus = unit(1, 0);
    o.sigma_minus = unit(0, 1);
    o.pi0 = unit(0, 0);
    o.pi1 = unit(1, 1);
    o.sigma3 = o.pi1 - o.pi0;
    o.identity = ComplexMatrix::Identity(2, 2);
    return o;
  }();
  return ops;
}

ComplexMatrix QubitSpec::c(double t) const {
  const cplx off = c10(t);
  ComplexMatrix m(2, 2);
  m << c00.eval(t), std::conj(off), off, c11.eval(t);
  return m;
}

ComplexMatrix QubitSpec::c_integral(double a, double b) const {
  const cplx off{c10_re.integral(a, b), c10_im.integral(a, b)};
  ComplexMatrix m(2, 2);
  m << c00.integral(a, b), std::conj(off), off, c11.integral(a, b);
  return m;
}

void validate_spec(const QubitSpec& spec) {
  if (!(spec.mu >= 0.0 && spec.mu <= 1.0)) throw PreconditionFailed(Witness::of("mu must lie in [0, 1]", spec.mu));
}

DampingBasis damping_basis(double mu) {
  const auto exact = DampingBasisT<double>::make(mu);
  DampingBasis b;
  for (std::size_t a = 0; a < 4; ++a) {
    b.g[a] = to_complex(exact.g[a]);
    b.h[a] = to_complex(exact.h[a]);
  }
  return b;
}

SuperOperator build_generator(const QubitSpec& spec, double t) {
  validate_spec(spec);
  const auto& o = operators();
  SuperOperator l = SuperOperator::hamiltonian(0.5 * spec.epsilon.eval(t) * o.sigma3);
  const double g = spec.gamma.eval(t);
  if (g != 0.0) {
    l += SuperOperator::dissipator(o.sigma_plus, g * spec.mu);
    l += SuperOperator::dissipator(o.sigma_minus, g * (1.0 - spec.mu));
  }
  const ComplexMatrix c = spec.c(t);
  const std::array<const ComplexMatrix*, 2> pi{&o.pi0, &o.pi1};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const cplx cab = c(a, b);
      if (cab == cplx(0.0)) continue;
      // [pi_a, rho pi_b] + [pi_a rho, pi_b] = 2 pi_a rho pi_b - rho pi_b pi_a - pi_b pi_a rho
      const ComplexMatrix ba = (*pi[b]) * (*pi[a]);
      SuperOperator term = SuperOperator::sandwich(*pi[a], *pi[b]) * cplx(2.0) -
                           SuperOperator::sandwich(o.identity, ba) - SuperOperator::sandwich(ba, o.identity);
      l += term * (0.5 * cab);
    }
  return l;
}

cplx gamma_eigenvalue(const QubitSpec& spec, double t) {
  const cplx inner = spec.gamma.eval(t) + spec.c00.eval(t) + spec.c11.eval(t) - 2.0 * spec.c10(t) +
                     2.0 * kI * spec.epsilon.eval(t);
  return -0.5 * inner;
}

GammaReport gamma_report(const QubitSpec& spec, double t, double flag_tol) {
  GammaReport r;
  const auto& o = operators();
  const ComplexMatrix image = build_generator(spec, t).apply(o.sigma_plus);
  r.formula = gamma_eigenvalue(spec, t);
  r.numerical = superop::hs_inner(o.sigma_plus, image);
  r.eigenvector_residual = (image - r.numerical * o.sigma_plus).cwiseAbs().maxCoeff();
  r.discrepancy = std::abs(r.formula - r.numerical);
  r.flagged = r.discrepancy > flag_tol || r.eigenvector_residual > flag_tol;
  return r;
}

std::array<cplx, 4> eigenvalues(const QubitSpec& spec, double t) {
  const cplx g = gamma_eigenvalue(spec, t);
  return {0.0, g, std::conj(g), -spec.gamma.eval(t)};
}

std::array<cplx, 4> integrated_eigenvalues(const QubitSpec& spec, double a, double b) {
  const double ig = spec.gamma.integral(a, b);
  const cplx ic10{spec.c10_re.integral(a, b), spec.c10_im.integral(a, b)};
  const cplx g = -0.5 * (ig + spec.c00.integral(a, b) + spec.c11.integral(a, b) - 2.0 * ic10 +
                         2.0 * kI * spec.epsilon.integral(a, b));
  return {0.0, g, std::conj(g), -ig};
}

ConditionReport check_markov(const QubitSpec& spec, double t0, double t, double tol, int grid_points) {
  return scan(markov_probe(spec, tol), t0, t, grid_points, true);
}

ConditionReport check_nonmarkov(const QubitSpec& spec, double horizon, double tol, int grid_points) {
  return scan(nonmarkov_probe(spec, tol), 0.0, horizon, grid_points, true);
}

SuperOperator propagate(const QubitSpec& spec, double t0, double t, Mode mode, const PropagateOptions& options) {
  validate_spec(spec);
  if (t < t0) throw PreconditionFailed(Witness{"propagation requires t >= t0", t, {}, t - t0});
  if (options.check_preconditions) {
    const auto report = mode == Mode::markov ? check_markov(spec, t0, t, options.tol, options.grid_points)
                                             : check_nonmarkov(spec, t - t0, options.tol, options.grid_points);
    if (!report.passed) throw PreconditionFailed(*report.first_violation);
  }
  const Window w = integration_window(mode, t0, t);
  const auto lam = integrated_eigenvalues(spec, w.begin, w.end);
  const auto basis = damping_basis(spec.mu);
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  for (std::size_t a = 0; a < 4; ++a)
    m += std::exp(lam[a]) * superop::vec(basis.g[a]) * superop::vec(basis.h[a]).adjoint();
  return SuperOperator(2, std::move(m));
}

VMaps v_conjugation(double mu) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw PreconditionFailed(Witness::of("mu must lie in [0, 1]", mu));
  const auto& o = operators();
  const auto basis = damping_basis(mu);
  VMaps out;
  out.f = {o.pi1, o.sigma_plus, o.sigma_minus, o.pi0};
  ComplexMatrix v = ComplexMatrix::Zero(4, 4);
  ComplexMatrix vi = ComplexMatrix::Zero(4, 4);
  for (std::size_t a = 0; a < 4; ++a) {
    const ComplexVector f = superop::vec(out.f[a]);
    v += superop::vec(basis.g[a]) * f.adjoint();
    vi += f * superop::vec(basis.h[a]).adjoint();
  }
  out.v = SuperOperator(2, v);
  out.v_inv = SuperOperator(2, vi);
  out.v_inv_dual = superop::dual(out.v_inv);
  return out;
}

SuperOperator f_projector(const VMaps& v, std::size_t alpha) {
  const ComplexVector f = superop::vec(v.f.at(alpha));
  return SuperOperator(2, f * f.adjoint());
}

Classification classify(const QubitSpec& spec, double horizon, double tol, int grid_points) {
  Classification c;
  const auto markov = check_markov(spec, 0.0, horizon, tol, grid_points);
  const auto nonmarkov = check_nonmarkov(spec, horizon, tol, grid_points);
  c.markovian = markov.passed;
  c.markov_violation = markov.first_violation;
  c.nonmarkovian_valid = nonmarkov.passed;
  c.nonmarkov_violation = nonmarkov.first_violation;
  return c;
}

}  // namespace commudyn::qubit
