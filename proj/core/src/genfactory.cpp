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
#include "commudyn/genfactory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/LU>

#include "commudyn/errors.hpp"
#include "commudyn/oracle.hpp"
#include "commudyn/quadrature.hpp"

namespace commudyn::genfactory {
namespace {

ComplexVector vec_identity(int dim) { return superop::vec(ComplexMatrix::Identity(dim, dim)); }

void check_generator(const SuperOperator& l, double tol) {
  const ComplexVector id = vec_identity(l.dim());
  const double scale = tol * std::max(1.0, l.max_abs());
  const double unital = (l.matrix() * id).cwiseAbs().maxCoeff();
  if (unital > scale) throw PreconditionFailed(Witness::of("generator does not annihilate the identity", unital));
  const double trace = (l.matrix().adjoint() * id).cwiseAbs().maxCoeff();
  if (trace > scale) throw PreconditionFailed(Witness::of("generator does not annihilate the trace", trace));
}

// Phi^{(k)}_s for k = 0..kmax.
std::vector<ComplexMatrix> resolvent_powers(const SuperOperator& l, double s, int kmax, double rcond_floor) {
  if (!(s > 0.0)) throw PreconditionFailed(Witness::of("resolvent requires s > 0", s));
  if (kmax < 0) throw PreconditionFailed(Witness::of("resolvent order must be >= 0", static_cast<double>(kmax)));
  const auto n = l.matrix().rows();
  const ComplexMatrix shifted = s * ComplexMatrix::Identity(n, n) - l.matrix();
  Eigen::PartialPivLU<ComplexMatrix> lu(shifted);
  const double rcond = lu.rcond();
  if (!(rcond >= rcond_floor))
    throw SingularResolvent("s - L is numerically singular at s = " + std::to_string(s) +
                            " (rcond " + std::to_string(rcond) + ")");
  std::vector<ComplexMatrix> out;
  out.reserve(static_cast<std::size_t>(kmax) + 1);
  ComplexMatrix x = ComplexMatrix::Identity(n, n);
  for (int k = 0; k <= kmax; ++k) {
    x = s * lu.solve(x);
    out.push_back(x);
  }
  return out;
}

cplx generic_weight(std::size_t k) {
  const double kk = static_cast<double>(k);
  return std::polar(1.0 + 0.6180339887498949 * kk, 0.9 + 1.3247179572447460 * kk);
}

}  // namespace

CommutingGeneratorSet::CommutingGeneratorSet(std::vector<SuperOperator> generators, double tol)
    : generators_(std::move(generators)) {
  if (generators_.empty()) throw InvalidGeneratorSet("generator set is empty");
  const int dim = generators_.front().dim();
  for (const auto& l : generators_)
    if (l.dim() != dim) throw InvalidGeneratorSet("generators act on different dimensions");

  for (std::size_t j = 0; j < generators_.size(); ++j) {
    const auto& l = generators_[j];
    const double trace = (l.matrix().adjoint() * vec_identity(dim)).cwiseAbs().maxCoeff();
    if (trace > tol * std::max(1.0, l.max_abs()))
      throw InvalidGeneratorSet("generator " + std::to_string(j) + " does not annihilate the trace (residual " +
                                std::to_string(trace) + ")");
    for (std::size_t k = j + 1; k < generators_.size(); ++k) {
      const double c = superop::commutator_norm(l, generators_[k]);
      max_commutator_ = std::max(max_commutator_, c);
      if (c > tol * std::max(1.0, l.norm() * generators_[k].norm()))
        throw InvalidGeneratorSet("generators " + std::to_string(j) + " and " + std::to_string(k) +
                                  " do not commute (residual " + std::to_string(c) + ")");
    }
  }

  SuperOperator mix(dim);
  for (std::size_t k = 0; k < generators_.size(); ++k) mix += generators_[k] * generic_weight(k);
  try {
    basis_ = superop::diagonalize(mix, {tol, 1e8});
  } catch (const DefectiveMap& e) {
    throw InvalidGeneratorSet(std::string("generators have no common damping basis: ") + e.what());
  }

  const auto modes = static_cast<Eigen::Index>(basis_.size());
  eigenvalues_.resize(modes, static_cast<Eigen::Index>(generators_.size()));
  const double diag_tol = std::max(tol, 1e-9);
  for (std::size_t k = 0; k < generators_.size(); ++k) {
    const ComplexMatrix rep = basis_.left().adjoint() * generators_[k].matrix() * basis_.right();
    eigenvalues_.col(static_cast<Eigen::Index>(k)) = rep.diagonal();
    ComplexMatrix off = rep;
    off.diagonal().setZero();
    const double resid = off.cwiseAbs().maxCoeff();
    diagonality_residual_ = std::max(diagonality_residual_, resid);
    if (resid > diag_tol * std::max(1.0, generators_[k].max_abs()))
      throw InvalidGeneratorSet("generator " + std::to_string(k) +
                                " is not diagonal in the common damping basis (residual " + std::to_string(resid) +
                                ")");
  }
}

void check_weights(const MixtureSpec& spec, double horizon, double tol, int grid_points) {
  if (spec.weights.size() != spec.generators.size())
    throw InvalidWeights(Witness::of("number of weights differs from number of generators",
                                     static_cast<double>(spec.weights.size())));
  const int points = std::max(grid_points, 2);
  for (int i = 0; i < points; ++i) {
    const double tau = horizon * i / (points - 1);
    double total = 0.0;
    for (std::size_t k = 0; k < spec.weights.size(); ++k) {
      const double p = spec.weights[k].eval(tau);
      total += p;
      if (!(p >= -tol)) throw InvalidWeights(Witness{"negative weight", tau, {static_cast<int>(k)}, p});
    }
    if (!(std::abs(total - 1.0) <= tol)) throw InvalidWeights(Witness{"weights do not sum to one", tau, {}, total});
  }
}

SuperOperator mixture_map(const MixtureSpec& spec, double t0, double t, const MixtureOptions& options) {
  const double tau = t - t0;
  if (tau < 0.0) throw PreconditionFailed(Witness{"propagation requires t >= t0", t, {}, tau});
  if (options.check_weights) check_weights(spec, tau, options.tol, options.grid_points);
  SuperOperator out(spec.generators.dim());
  for (std::size_t k = 0; k < spec.generators.size(); ++k) {
    const double p = spec.weights[k].eval(tau);
    if (p == 0.0) continue;
    out += oracle::expm(spec.generators.generator(k) * cplx(tau)) * cplx(p);
  }
  return out;
}

std::vector<cplx> mode_weights(const MixtureSpec& spec, double tau) {
  const auto& set = spec.generators;
  std::vector<cplx> c(set.modes(), 0.0);
  for (std::size_t k = 0; k < set.size(); ++k) {
    const double p = spec.weights.at(k).eval(tau);
    for (std::size_t a = 0; a < set.modes(); ++a) c[a] += p * std::exp(set.eigenvalue(a, k) * tau);
  }
  return c;
}

std::vector<cplx> mode_weight_derivatives(const MixtureSpec& spec, double tau) {
  const auto& set = spec.generators;
  std::vector<cplx> c(set.modes(), 0.0);
  for (std::size_t k = 0; k < set.size(); ++k) {
    const double p = spec.weights.at(k).eval(tau);
    const double dp = spec.weights.at(k).derivative(tau);
    for (std::size_t a = 0; a < set.modes(); ++a) {
      const cplx lam = set.eigenvalue(a, k);
      c[a] += (dp + p * lam) * std::exp(lam * tau);
    }
  }
  return c;
}

SuperOperator mixture_map_spectral(const MixtureSpec& spec, double t0, double t) {
  const auto c = mode_weights(spec, t - t0);
  const auto& b = spec.generators.basis();
  const ComplexVector cv = Eigen::Map<const ComplexVector>(c.data(), static_cast<Eigen::Index>(c.size()));
  return SuperOperator(b.dim(), b.right() * cv.asDiagonal() * b.left().adjoint());
}

std::vector<cplx> mixture_generator_eigenvalues(const MixtureSpec& spec, double tau, const MuOptions& options) {
  const auto c = mode_weights(spec, tau);
  std::vector<cplx> num;
  if (options.literal) {
    const auto& set = spec.generators;
    num.assign(set.modes(), 0.0);
    for (std::size_t k = 0; k < set.size(); ++k) {
      const double p = spec.weights.at(k).eval(tau);
      for (std::size_t a = 0; a < set.modes(); ++a) {
        const cplx lam = set.eigenvalue(a, k);
        num[a] += p * lam * std::exp(lam * tau);
      }
    }
  } else {
    num = mode_weight_derivatives(spec, tau);
  }
  std::vector<cplx> mu(c.size());
  for (std::size_t a = 0; a < c.size(); ++a) {
    if (std::abs(c[a]) < options.floor) throw SingularEigenvalue(a, tau, std::abs(c[a]));
    mu[a] = num[a] / c[a];
  }
  return mu;
}

SingularityScan scan_singularities(const MixtureSpec& spec, double horizon, double floor, int grid_points) {
  SingularityScan best;
  best.time = std::numeric_limits<double>::infinity();
  const int points = std::max(grid_points, 3);
  const double h = horizon / (points - 1);
  std::vector<std::vector<double>> mod(points);
  for (int i = 0; i < points; ++i) {
    const auto c = mode_weights(spec, h * i);
    mod[i].resize(c.size());
    for (std::size_t a = 0; a < c.size(); ++a) mod[i][a] = std::abs(c[a]);
  }
  const std::size_t modes = spec.generators.modes();
  for (std::size_t a = 0; a < modes; ++a) {
    for (int i = 0; i < points; ++i) {
      const double here = mod[i][a];
      const bool local_min = (i == 0 || mod[i - 1][a] >= here) && (i + 1 == points || mod[i + 1][a] >= here);
      if (!local_min) continue;
      // Golden-section refinement of |c_a| on the bracketing cells.
      double lo = std::max(0.0, h * (i - 1));
      double hi = std::min(horizon, h * (i + 1));
      auto f = [&](double x) { return std::abs(mode_weights(spec, x)[a]); };
      const double g = 0.6180339887498949;
      double x1 = hi - g * (hi - lo);
      double x2 = lo + g * (hi - lo);
      double f1 = f(x1);
      double f2 = f(x2);
      for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
        if (f1 < f2) {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - g * (hi - lo);
          f1 = f(x1);
        } else {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + g * (hi - lo);
          f2 = f(x2);
        }
      }
      double tmin = 0.5 * (lo + hi);
      double fmin = f(tmin);
      if (here < fmin) {
        tmin = h * i;
        fmin = here;
      }
      if (fmin < floor && tmin < best.time) {
        best.singular = true;
        best.mode = a;
        best.time = tmin;
        best.modulus = fmin;
      }
      if (fmin < floor) break;
    }
  }
  if (!best.singular) best.time = 0.0;
  return best;
}

MixtureSolution mixture_solution(const MixtureSpec& spec, double tau, double quad_tol) {
  const auto scan = scan_singularities(spec, tau);
  if (scan.singular) throw SingularEigenvalue(scan.mode, scan.time, scan.modulus);
  MixtureSolution out;
  const std::size_t modes = spec.generators.modes();
  out.factors.resize(modes);
  for (std::size_t a = 0; a < modes; ++a) {
    auto mu = [&](double u) { return mixture_generator_eigenvalues(spec, u, {0.0, false})[a]; };
    const auto q = adaptive_simpson(mu, 0.0, tau, quad_tol);
    out.factors[a] = std::exp(q.value);
    out.quadrature_error = std::max(out.quadrature_error, q.error);
  }
  const auto& b = spec.generators.basis();
  const ComplexVector cv = Eigen::Map<const ComplexVector>(out.factors.data(), static_cast<Eigen::Index>(modes));
  out.map = SuperOperator(b.dim(), b.right() * cv.asDiagonal() * b.left().adjoint());
  return out;
}

SuperOperator resolvent_channel(const SuperOperator& l, double s, int k, const ResolventOptions& options) {
  if (options.check_generator) check_generator(l, options.tol);
  auto powers = resolvent_powers(l, s, k, options.rcond_floor);
  return SuperOperator(l.dim(), std::move(powers.back()));
}

SuperOperator resolvent_generator(const SuperOperator& l, double s, int k, const ResolventOptions& options) {
  return resolvent_channel(l, s, k, options) - SuperOperator::identity(l.dim());
}

WeightedGenerator weighted_generator(const std::vector<WeightTerm>& weights, const SuperOperator& l, double t,
                                     const WeightedOptions& options) {
  if (!(options.s_min > 0.0) || !(options.s_max > options.s_min))
    throw PreconditionFailed(Witness{"weighted generator needs 0 < s_min < s_max", t, {}, options.s_min});
  if (options.nodes < 1) throw PreconditionFailed(Witness{"weighted generator needs nodes >= 1", t, {}, 0.0});
  int kmax = -1;
  for (const auto& w : weights) {
    if (w.k < 0) throw PreconditionFailed(Witness{"resolvent order must be >= 0", t, {w.k}, static_cast<double>(w.k)});
    kmax = std::max(kmax, w.k);
  }
  WeightedGenerator out{SuperOperator(l.dim()), 0.0, options.nodes};
  if (kmax < 0) return out;
  check_generator(l, kDefaultTol);

  const auto n = l.matrix().rows();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  auto integrate = [&](int nodes) {
    const auto rule = gauss_legendre(nodes);
    const double lo = options.log_scale ? std::log(options.s_min) : options.s_min;
    const double hi = options.log_scale ? std::log(options.s_max) : options.s_max;
    const double half = 0.5 * (hi - lo);
    ComplexMatrix acc = ComplexMatrix::Zero(n, n);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double x = lo + half * (rule.nodes[i] + 1.0);
      const double s = options.log_scale ? std::exp(x) : x;
      const double jac = half * rule.weights[i] * (options.log_scale ? s : 1.0);
      std::vector<double> fv(weights.size());
      bool any = false;
      for (std::size_t j = 0; j < weights.size(); ++j) {
        fv[j] = weights[j].f(t, s);
        if (!std::isfinite(fv[j])) throw NonFiniteValue("weighted generator: weight is not finite at s = " + std::to_string(s));
        any = any || fv[j] != 0.0;
      }
      if (!any) continue;
      const auto powers = resolvent_powers(l, s, kmax, 1e-14);
      for (std::size_t j = 0; j < weights.size(); ++j)
        if (fv[j] != 0.0) acc += (jac * fv[j]) * (powers[static_cast<std::size_t>(weights[j].k)] - id);
    }
    return acc;
  };

  const ComplexMatrix coarse = integrate(options.nodes);
  const ComplexMatrix fine = integrate(2 * options.nodes);
  out.change = (fine - coarse).cwiseAbs().maxCoeff();
  out.nodes = 2 * options.nodes;
  out.value = SuperOperator(l.dim(), fine);
  const double scale = std::max(1.0, fine.cwiseAbs().maxCoeff());
  if (out.change > options.tol * scale)
    throw QuadratureNotConverged("weighted generator: doubling Gauss-Legendre nodes changed the result by " +
                                     std::to_string(out.change),
                                 out.change);
  return out;
}

}  // namespace commudyn::genfactory
