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

// Weyl operators u_{m,n} e_k = lambda^{m.k} e_{n+k} on (C^d)^{(x)N} and the
// covariant maps built from coefficient fields a(m, n) on Z_d^N x Z_d^N.
//
// Coefficient fields are LatticeFields (or CirculantGenerators) with 2N axes
// ordered (m_1..m_N, n_1..n_N), so flat = flat(m) * d^N + flat(n).

#include <vector>

#include "commudyn/classical.hpp"
#include "commudyn/lattice.hpp"
#include "commudyn/superop.hpp"
#include "commudyn/types.hpp"

namespace commudyn::weyl {

// u e_k = phase[k] e_{target[k]}
struct Monomial {
  std::vector<std::size_t> target;
  std::vector<cplx> phase;
  ComplexMatrix dense() const;
};

class WeylFamily {
 public:
  static constexpr std::size_t kCacheLimit = 64;

  WeylFamily(int d, int parties);

  int d() const { return d_; }
  int parties() const { return parties_; }
  // Hilbert space dimension d^N.
  int dim() const { return dim_; }
  // Number of index pairs d^{2N}.
  std::size_t count() const { return static_cast<std::size_t>(dim_) * static_cast<std::size_t>(dim_); }
  bool cached() const { return !cache_.empty(); }

  // m, n are flat indices into Z_d^N.
  Monomial monomial(std::size_t m, std::size_t n) const;
  ComplexMatrix u(std::size_t m, std::size_t n) const { return monomial(m, n).dense(); }
  ComplexMatrix u(std::span<const int> m, std::span<const int> n) const;

  std::size_t flat(std::span<const int> multi) const;
  MultiIndex multi(std::size_t flat) const;
  std::size_t add(std::size_t a, std::size_t b) const;
  std::size_t negate(std::size_t a) const;
  // lambda^{m.n}
  cplx phase(std::size_t m, std::size_t n) const;

  // Flat index into the 2N-axis coefficient field.
  std::size_t pair_index(std::size_t m, std::size_t n) const { return m * static_cast<std::size_t>(dim_) + n; }

 private:
  Monomial build(std::size_t m, std::size_t n) const;

  int d_;
  int parties_;
  int dim_;
  std::vector<cplx> roots_;
  std::vector<Monomial> cache_;
};

// Tensor product of single-party Weyl matrices, party 1 slowest.
ComplexMatrix weyl(std::span<const int> m, std::span<const int> n, int d);
ComplexMatrix weyl(int m, int n, int d);

struct RelationsReport {
  // max ||u_{m,n} u_{r,s} - lambda^{m.s} u_{m+r,n+s}||_max
  double product_residual = 0.0;
  // max ||u_{m,n}* - lambda^{m.n} u_{-m,-n}||_max
  double adjoint_residual = 0.0;
  // max |tr(u_{m,n}* u_{k,l}) - d^N delta|
  double orthogonality_residual = 0.0;
  std::size_t pairs_checked = 0;
  double max_residual() const;
};

RelationsReport relations_check(const WeylFamily& fam);

// A x = sum a(m, n) u_{n,-m} x u_{n,-m}*
superop::SuperOperator map_from_coeffs(const WeylFamily& fam, const LatticeField& a);
superop::SuperOperator map_from_coeffs(const WeylFamily& fam, const classical::CirculantGenerator& a, double t);

// P_{k,l} x = d^{-N} u_{k,l} tr(u_{k,l}* x)
superop::SuperOperator projector(const WeylFamily& fam, std::size_t k, std::size_t l);
// sum_{k,l} values(k, l) P_{k,l}
superop::SuperOperator spectral_map(const WeylFamily& fam, const LatticeField& values);

struct WeylSpectrum {
  // a~(k, l) = sum a(m, n) lambda^{k.m + l.n}, with A u_{k,l} = a~(k, l) u_{k,l}.
  LatticeField eigenvalues;
  superop::SuperOperator projector(const WeylFamily& fam, std::size_t k, std::size_t l) const {
    return weyl::projector(fam, k, l);
  }
};

WeylSpectrum map_spectrum(const LatticeField& a);
WeylSpectrum map_spectrum(const classical::CirculantGenerator& a, double t);

struct Jump {
  MultiIndex m;
  MultiIndex n;
  ComplexMatrix op;  // u_{n,-m}
  cplx rate;
};

struct LindbladData {
  int dim = 0;
  // No Hamiltonian part: this generator family is purely dissipative.
  std::vector<Jump> jumps;
  // a(0, 0) = -sum' a(m, n)
  cplx sink_rate = 0.0;
  bool markovian = true;
};

// Requires |sum a| <= tol (NormalizationError otherwise).
LindbladData lindblad_decomposition(const WeylFamily& fam, const LatticeField& a, double tol = kDefaultTol);
LindbladData lindblad_decomposition(const WeylFamily& fam, const classical::CirculantGenerator& a, double t,
                                    double tol = kDefaultTol);
// sum_j rate_j (u_j x u_j* - x)
superop::SuperOperator lindblad_generator(const LindbladData& data);

struct EvolveOptions {
  double tol = kDefaultTol;
  int grid_points = kDefaultGridPoints;
  bool check_preconditions = true;
};

// sum exp(int a~(k, l)) P_{k,l} over the mode's window.
superop::SuperOperator evolve(const WeylFamily& fam, const classical::CirculantGenerator& a, double t0, double t,
                              Mode mode, const EvolveOptions& options = {});

// b(m) = sum_n a(m, n); A e_ii = sum_m b(m) e_{i-m,i-m}.
classical::CirculantGenerator diagonal_action(const classical::CirculantGenerator& a);
LatticeField diagonal_action(const LatticeField& a);
// The classical circulant generator (convolution convention) that governs
// populations: reflect(diagonal_action(a)).
classical::CirculantGenerator population_generator(const classical::CirculantGenerator& a);

ComplexMatrix diagonal_state(const LatticeField& p);
LatticeField populations(const ComplexMatrix& rho, int d, int parties);

// rho -> sum_{m,n} T(m, n) e_{mn} rho e_{nm}; on diagonal rho this applies the
// stochastic matrix T to the populations.
ComplexMatrix embed_stochastic(const RealMatrix& t, const ComplexMatrix& rho);

}  // namespace commudyn::weyl
