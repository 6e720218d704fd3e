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
#include "commudyn/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "commudyn/errors.hpp"

namespace commudyn::weyl {
namespace {

using superop::SuperOperator;

void require_pair_field(const WeylFamily& fam, const LatticeField& a) {
  if (a.d() != fam.d() || a.axes() != 2 * fam.parties())
    throw DimensionMismatch("Weyl coefficient field must have d = " + std::to_string(fam.d()) + " and " +
                            std::to_string(2 * fam.parties()) + " axes");
}

int parties_of(const LatticeField& a) {
  if (a.axes() % 2 != 0) throw DimensionMismatch("Weyl coefficient field needs an even number of axes");
  return a.axes() / 2;
}

// M += c * (conj(u) (x) u)
void add_conjugation(ComplexMatrix& m, const Monomial& u, cplx c) {
  const std::size_t dim = u.target.size();
  for (std::size_t l = 0; l < dim; ++l) {
    const cplx cl = c * std::conj(u.phase[l]);
    const std::size_t tl = u.target[l];
    for (std::size_t k = 0; k < dim; ++k)
      m(static_cast<Eigen::Index>(u.target[k] + dim * tl), static_cast<Eigen::Index>(k + dim * l)) += cl * u.phase[k];
  }
}

// M += c * vec(u) vec(u)^H
void add_projector(ComplexMatrix& m, const Monomial& u, cplx c) {
  const std::size_t dim = u.target.size();
  for (std::size_t j = 0; j < dim; ++j) {
    const auto row = static_cast<Eigen::Index>(u.target[j] + dim * j);
    for (std::size_t k = 0; k < dim; ++k) {
      const auto col = static_cast<Eigen::Index>(u.target[k] + dim * k);
      m(row, col) += c * u.phase[j] * std::conj(u.phase[k]);
    }
  }
}

}  // namespace

ComplexMatrix Monomial::dense() const {
  const auto n = static_cast<Eigen::Index>(target.size());
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) out(static_cast<Eigen::Index>(target[k]), k) = phase[k];
  return out;
}

WeylFamily::WeylFamily(int d, int parties)
    : d_(d), parties_(parties), dim_(static_cast<int>(lattice_size(d, parties))), roots_(roots_of_unity(d)) {
  if (static_cast<std::size_t>(dim_) <= kCacheLimit) {
    cache_.reserve(count());
    for (std::size_t m = 0; m < static_cast<std::size_t>(dim_); ++m)
      for (std::size_t n = 0; n < static_cast<std::size_t>(dim_); ++n) cache_.push_back(build(m, n));
  }
}

std::size_t WeylFamily::flat(std::span<const int> multi) const {
  if (static_cast<int>(multi.size()) != parties_) throw DimensionMismatch("Weyl index has wrong number of parties");
  std::size_t f = 0;
  for (int v : multi) f = f * static_cast<std::size_t>(d_) + static_cast<std::size_t>(((v % d_) + d_) % d_);
  return f;
}

MultiIndex WeylFamily::multi(std::size_t f) const {
  MultiIndex out(parties_);
  for (int a = parties_ - 1; a >= 0; --a) {
    out[a] = static_cast<int>(f % static_cast<std::size_t>(d_));
    f /= static_cast<std::size_t>(d_);
  }
  return out;
}

std::size_t WeylFamily::add(std::size_t a, std::size_t b) const {
  const auto ma = multi(a);
  auto mb = multi(b);
  for (int j = 0; j < parties_; ++j) mb[j] = (ma[j] + mb[j]) % d_;
  return flat(mb);
}

std::size_t WeylFamily::negate(std::size_t a) const {
  auto ma = multi(a);
  for (auto& v : ma) v = (d_ - v) % d_;
  return flat(ma);
}

cplx WeylFamily::phase(std::size_t m, std::size_t n) const {
  const auto mm = multi(m);
  const auto nn = multi(n);
  int e = 0;
  for (int j = 0; j < parties_; ++j) e = (e + mm[j] * nn[j]) % d_;
  return roots_[e];
}

Monomial WeylFamily::build(std::size_t m, std::size_t n) const {
  Monomial u;
  const auto ud = static_cast<std::size_t>(dim_);
  u.target.resize(ud);
  u.phase.resize(ud);
  for (std::size_t k = 0; k < ud; ++k) {
    u.target[k] = add(n, k);
    u.phase[k] = phase(m, k);
  }
  return u;
}

Monomial WeylFamily::monomial(std::size_t m, std::size_t n) const {
  const auto ud = static_cast<std::size_t>(dim_);
  if (m >= ud || n >= ud) throw DimensionMismatch("Weyl index out of range");
  if (!cache_.empty()) return cache_[m * ud + n];
  return build(m, n);
}

ComplexMatrix WeylFamily::u(std::span<const int> m, std::span<const int> n) const { return u(flat(m), flat(n)); }

ComplexMatrix weyl(std::span<const int> m, std::span<const int> n, int d) {
  if (m.size() != n.size() || m.empty()) throw DimensionMismatch("weyl: index lengths differ or are empty");
  ComplexMatrix out = ComplexMatrix::Ones(1, 1);
  for (std::size_t j = 0; j < m.size(); ++j) {
    const ComplexMatrix f = weyl(m[j], n[j], d);
    ComplexMatrix next(out.rows() * d, out.cols() * d);
    for (Eigen::Index r = 0; r < out.rows(); ++r)
      for (Eigen::Index c = 0; c < out.cols(); ++c) next.block(r * d, c * d, d, d) = out(r, c) * f;
    out = std::move(next);
  }
  return out;
}

ComplexMatrix weyl(int m, int n, int d) {
  if (d < 2) throw DimensionMismatch("weyl: d must be >= 2");
  const auto roots = roots_of_unity(d);
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  const int mm = ((m % d) + d) % d;
  const int nn = ((n % d) + d) % d;
  for (int k = 0; k < d; ++k) out((nn + k) % d, k) = roots[(mm * k) % d];
  return out;
}

double RelationsReport::max_residual() const {
  return std::max({product_residual, adjoint_residual, orthogonality_residual});
}

RelationsReport relations_check(const WeylFamily& fam) {
  RelationsReport report;
  const auto dim = static_cast<std::size_t>(fam.dim());
  std::vector<ComplexMatrix> dense(fam.count());
  for (std::size_t m = 0; m < dim; ++m)
    for (std::size_t n = 0; n < dim; ++n) dense[m * dim + n] = fam.u(m, n);
  auto at = [&](std::size_t m, std::size_t n) -> const ComplexMatrix& { return dense[m * dim + n]; };
  const double D = static_cast<double>(dim);
  for (std::size_t m = 0; m < dim; ++m)
    for (std::size_t n = 0; n < dim; ++n) {
      const ComplexMatrix& u = at(m, n);
      report.adjoint_residual = std::max(
          report.adjoint_residual,
          (u.adjoint() - fam.phase(m, n) * at(fam.negate(m), fam.negate(n))).cwiseAbs().maxCoeff());
      for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t s = 0; s < dim; ++s) {
          const ComplexMatrix& v = at(r, s);
          const ComplexMatrix prod = u * v - fam.phase(m, s) * at(fam.add(m, r), fam.add(n, s));
          report.product_residual = std::max(report.product_residual, prod.cwiseAbs().maxCoeff());
          const cplx tr = (u.adjoint() * v).trace();
          const double expect = (m == r && n == s) ? D : 0.0;
          report.orthogonality_residual = std::max(report.orthogonality_residual, std::abs(tr - expect));
          ++report.pairs_checked;
        }
    }
  return report;
}

SuperOperator map_from_coeffs(const WeylFamily& fam, const LatticeField& a) {
  require_pair_field(fam, a);
  const auto dim = static_cast<std::size_t>(fam.dim());
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim * dim), static_cast<Eigen::Index>(dim * dim));
  for (std::size_t mi = 0; mi < dim; ++mi)
    for (std::size_t ni = 0; ni < dim; ++ni) {
      const cplx c = a[fam.pair_index(mi, ni)];
      if (c == cplx(0.0)) continue;
      add_conjugation(m, fam.monomial(ni, fam.negate(mi)), c);
    }
  return SuperOperator(fam.dim(), std::move(m));
}

SuperOperator map_from_coeffs(const WeylFamily& fam, const classical::CirculantGenerator& a, double t) {
  return map_from_coeffs(fam, a.at_time(t));
}

SuperOperator projector(const WeylFamily& fam, std::size_t k, std::size_t l) {
  const auto dim = static_cast<Eigen::Index>(fam.dim());
  ComplexMatrix m = ComplexMatrix::Zero(dim * dim, dim * dim);
  add_projector(m, fam.monomial(k, l), 1.0 / static_cast<double>(dim));
  return SuperOperator(fam.dim(), std::move(m));
}

SuperOperator spectral_map(const WeylFamily& fam, const LatticeField& values) {
  require_pair_field(fam, values);
  const auto dim = static_cast<std::size_t>(fam.dim());
  const double scale = 1.0 / static_cast<double>(dim);
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim * dim), static_cast<Eigen::Index>(dim * dim));
  for (std::size_t k = 0; k < dim; ++k)
    for (std::size_t l = 0; l < dim; ++l) add_projector(m, fam.monomial(k, l), scale * values[fam.pair_index(k, l)]);
  return SuperOperator(fam.dim(), std::move(m));
}

WeylSpectrum map_spectrum(const LatticeField& a) {
  parties_of(a);
  return WeylSpectrum{classical::dft(a)};
}

WeylSpectrum map_spectrum(const classical::CirculantGenerator& a, double t) { return map_spectrum(a.at_time(t)); }

LindbladData lindblad_decomposition(const WeylFamily& fam, const LatticeField& a, double tol) {
  require_pair_field(fam, a);
  const cplx total = a.sum();
  if (std::abs(total) > tol)
    throw NormalizationError("Weyl generator coefficients must sum to zero (sum = " + std::to_string(std::abs(total)) +
                             ")");
  LindbladData data;
  data.dim = fam.dim();
  const auto dim = static_cast<std::size_t>(fam.dim());
  cplx rest = 0.0;
  for (std::size_t mi = 0; mi < dim; ++mi)
    for (std::size_t ni = 0; ni < dim; ++ni) {
      if (mi == 0 && ni == 0) continue;
      const cplx rate = a[fam.pair_index(mi, ni)];
      if (rate == cplx(0.0)) continue;
      rest += rate;
      if (rate.real() < -tol || std::abs(rate.imag()) > tol) data.markovian = false;
      data.jumps.push_back(Jump{fam.multi(mi), fam.multi(ni), fam.u(ni, fam.negate(mi)), rate});
    }
  data.sink_rate = -rest;
  return data;
}

LindbladData lindblad_decomposition(const WeylFamily& fam, const classical::CirculantGenerator& a, double t,
                                    double tol) {
  return lindblad_decomposition(fam, a.at_time(t), tol);
}

SuperOperator lindblad_generator(const LindbladData& data) {
  SuperOperator out(data.dim);
  for (const auto& j : data.jumps) out += SuperOperator::dissipator(j.op, j.rate);
  return out;
}

SuperOperator evolve(const WeylFamily& fam, const classical::CirculantGenerator& a, double t0, double t, Mode mode,
                     const EvolveOptions& options) {
  if (a.d() != fam.d() || a.axes() != 2 * fam.parties())
    throw DimensionMismatch("Weyl generator shape does not match the family");
  if (t < t0) throw PreconditionFailed(Witness{"propagation requires t >= t0", t, {}, t - t0});
  if (options.check_preconditions) {
    const auto report = classical::kolmogorov_check(a, t0, t, mode, options.tol, options.grid_points);
    if (!report.passed) throw PreconditionFailed(*report.first_violation);
  }
  LatticeField phase = classical::dft(a.integrated(integration_window(mode, t0, t)));
  for (auto& v : phase.values()) v = std::exp(v);
  return spectral_map(fam, phase);
}

classical::CirculantGenerator diagonal_action(const classical::CirculantGenerator& a) {
  if (a.axes() % 2 != 0) throw DimensionMismatch("Weyl coefficient field needs an even number of axes");
  const int parties = a.axes() / 2;
  classical::CirculantGenerator b(a.d(), parties);
  const std::size_t dim = b.size();
  for (std::size_t m = 0; m < dim; ++m) {
    TimeFunction total;
    for (std::size_t n = 0; n < dim; ++n) total += a.coefficient(m * dim + n);
    b.set(m, std::move(total));
  }
  return b;
}

LatticeField diagonal_action(const LatticeField& a) {
  const int parties = parties_of(a);
  LatticeField b(a.d(), parties);
  const std::size_t dim = b.size();
  for (std::size_t m = 0; m < dim; ++m)
    for (std::size_t n = 0; n < dim; ++n) b[m] += a[m * dim + n];
  return b;
}

classical::CirculantGenerator population_generator(const classical::CirculantGenerator& a) {
  return classical::reflect(diagonal_action(a));
}

ComplexMatrix diagonal_state(const LatticeField& p) {
  const auto n = static_cast<Eigen::Index>(p.size());
  ComplexMatrix rho = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) rho(i, i) = p[static_cast<std::size_t>(i)];
  return rho;
}

LatticeField populations(const ComplexMatrix& rho, int d, int parties) {
  LatticeField p(d, parties);
  if (rho.rows() != static_cast<Eigen::Index>(p.size()) || rho.cols() != rho.rows())
    throw DimensionMismatch("populations: state has wrong dimension");
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
  return p;
}

ComplexMatrix embed_stochastic(const RealMatrix& t, const ComplexMatrix& rho) {
  if (t.rows() != t.cols() || rho.rows() != t.rows() || rho.cols() != t.cols())
    throw DimensionMismatch("embed_stochastic: dimension mismatch");
  const auto n = t.rows();
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  // e_{mn} rho e_{nm} = rho(n, n) e_{mm}
  for (Eigen::Index m = 0; m < n; ++m)
    for (Eigen::Index k = 0; k < n; ++k) out(m, m) += t(m, k) * rho(k, k);
  return out;
}

}  // namespace commudyn::weyl
