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
#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

#include "doctest.h"
#include "test_support.hpp"

using namespace commudyn;
using namespace commudyn::testing;
using namespace commudyn::weyl;
using superop::SuperOperator;

namespace {

// Generator-normalized field on 2N axes with random nonnegative rates.
classical::CirculantGenerator random_rates(Rng& rng, int d, int parties, double scale = 0.5) {
  return random_kolmogorov_generator(rng, d, 2 * parties, scale);
}

// Brute-force map: sum of conjugations by explicitly built Kronecker products.
SuperOperator brute_map(const WeylFamily& fam, const LatticeField& a) {
  const int dim = fam.dim();
  SuperOperator out(dim);
  for (std::size_t m = 0; m < static_cast<std::size_t>(dim); ++m)
    for (std::size_t n = 0; n < static_cast<std::size_t>(dim); ++n) {
      const auto mm = fam.multi(m), nn = fam.multi(n);
      MultiIndex neg(mm.size());
      for (std::size_t j = 0; j < mm.size(); ++j) neg[j] = -mm[j];
      const ComplexMatrix u = weyl::weyl(nn, neg, fam.d());
      out += SuperOperator::conjugation(u) * a[fam.pair_index(m, n)];
    }
  return out;
}

double sorted_multiset_distance(std::vector<cplx> a, std::vector<cplx> b) {
  auto key = [](const cplx& x, const cplx& y) {
    if (std::abs(x.real() - y.real()) > 1e-7) return x.real() < y.real();
    return x.imag() < y.imag();
  };
  std::sort(a.begin(), a.end(), key);
  std::sort(b.begin(), b.end(), key);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace

TEST_CASE("qubit Weyl operators are shift and phase") {
  ComplexMatrix shift(2, 2), phase(2, 2);
  shift << 0, 1, 1, 0;
  phase << 1, 0, 0, -1;
  CHECK(max_abs(weyl::weyl(0, 1, 2) - shift) == 0.0);
  CHECK(max_abs(weyl::weyl(1, 0, 2) - phase) < 1e-16);
  CHECK(max_abs(weyl::weyl(1, 1, 2) * weyl::weyl(1, 1, 2) + ComplexMatrix::Identity(2, 2)) < 1e-15);
}

TEST_CASE("defining action u_{mn} e_k = lambda^{mk} e_{n+k}") {
  for (int d : {3, 4, 5}) {
    const auto lam = roots_of_unity(d);
    for (int m = 0; m < d; ++m)
      for (int n = 0; n < d; ++n) {
        const ComplexMatrix u = weyl::weyl(m, n, d);
        for (int k = 0; k < d; ++k) {
          ComplexVector expect = ComplexVector::Zero(d);
          expect((n + k) % d) = lam[(m * k) % d];
          CHECK(max_abs(u.col(k) - expect) < 1e-15);
        }
      }
  }
}

TEST_CASE("d=3 trace orthogonality examples") {
  const ComplexMatrix a = weyl::weyl(1, 2, 3), b = weyl::weyl(2, 1, 3);
  CHECK(std::abs((a.adjoint() * a).trace() - cplx(3.0)) < 1e-14);
  CHECK(std::abs((a.adjoint() * b).trace()) < 1e-14);
}

TEST_CASE("tensor structure places party one slowest") {
  const int m[] = {1, 0}, n[] = {0, 1};
  const ComplexMatrix u = weyl::weyl(m, n, 3);
  const ComplexMatrix k = Eigen::kroneckerProduct(weyl::weyl(1, 0, 3), weyl::weyl(0, 1, 3));
  CHECK(max_abs(u - k) < 1e-15);
}

TEST_CASE("relations hold exhaustively for small families") {
  for (int d : {2, 3, 4, 5})
    for (int parties : {1, 2}) {
      if (parties == 2 && d * d > 9) continue;
      const WeylFamily fam(d, parties);
      const auto r = relations_check(fam);
      CHECK(r.max_residual() < 1e-12);
      CHECK(r.pairs_checked == fam.count() * fam.count());
    }
}

TEST_CASE("family caching follows the dimension limit") {
  CHECK(WeylFamily(4, 3).cached());
  CHECK_FALSE(WeylFamily(5, 3).cached());
  const WeylFamily big(5, 3);
  const int m[] = {1, 2, 3}, n[] = {4, 0, 1};
  CHECK(max_abs(big.u(big.flat(m), big.flat(n)) - weyl::weyl(m, n, 5)) < 1e-14);
}

TEST_CASE("map_from_coeffs: identity, full depolarizer, brute-force agreement") {
  const WeylFamily q(2, 1);
  CHECK(map_from_coeffs(q, LatticeField::unit(2, 2)).max_abs_diff(SuperOperator::identity(2)) < 1e-15);

  const LatticeField uniform4(2, 2, std::vector<cplx>(4, cplx(0.25)));
  const auto dep = map_from_coeffs(q, uniform4);
  auto rng = make_rng(301);
  const ComplexMatrix x = random_matrix(rng, 2, 2);
  CHECK(max_abs(dep.apply(x) - x.trace() * ComplexMatrix::Identity(2, 2) / 2.0) < 1e-15);

  for (auto [d, parties] : {std::pair{3, 1}, std::pair{2, 2}, std::pair{5, 1}}) {
    const WeylFamily fam(d, parties);
    const auto a = random_complex_field(rng, d, 2 * parties);
    CHECK(map_from_coeffs(fam, a).max_abs_diff(brute_map(fam, a)) < 1e-13);
  }
}

TEST_CASE("probability coefficients give CPTP unital self-adjoint maps") {
  auto rng = make_rng(302);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 3, parties = (d == 2 && trial % 2) ? 2 : 1;
    const WeylFamily fam(d, parties);
    const auto a = random_probability_field(rng, d, 2 * parties);
    const auto map = map_from_coeffs(fam, a);
    const auto rep = superop::validate_channel(map);
    CHECK(rep.cp);
    CHECK(rep.tp);
    CHECK(rep.unital);
    CHECK(rep.choi_min_eigenvalue >= -1e-10);
    const ComplexMatrix x = random_matrix(rng, fam.dim(), fam.dim());
    CHECK(max_abs(map.apply(x.adjoint()) - map.apply(x).adjoint()) < 1e-13);
  }
}

TEST_CASE("Weyl matrices are eigenvectors with the 2N-axis DFT eigenvalues") {
  auto rng = make_rng(303);
  for (auto [d, parties] : {std::pair{2, 1}, std::pair{3, 1}, std::pair{5, 1}, std::pair{2, 2}, std::pair{3, 2}}) {
    const WeylFamily fam(d, parties);
    const auto a = random_complex_field(rng, d, 2 * parties);
    const auto map = map_from_coeffs(fam, a);
    const auto spec = map_spectrum(a);
    double worst = 0.0;
    for (std::size_t k = 0; k < static_cast<std::size_t>(fam.dim()); ++k)
      for (std::size_t l = 0; l < static_cast<std::size_t>(fam.dim()); ++l) {
        const ComplexMatrix u = fam.u(k, l);
        worst = std::max(worst, max_abs(map.apply(u) - spec.eigenvalues[fam.pair_index(k, l)] * u));
      }
    CHECK(worst < 1e-11);
  }
  const auto ones = map_spectrum(LatticeField::unit(3, 2));
  for (const auto& v : ones.eigenvalues.values()) CHECK(std::abs(v - cplx(1.0)) < 1e-15);
}

TEST_CASE("dual map has Weyl adjoints as eigenvectors with the conjugate-field eigenvalues") {
  auto rng = make_rng(312);
  const WeylFamily fam(3, 1);
  const auto a = random_complex_field(rng, 3, 2);
  LatticeField abar(3, 2);
  for (std::size_t i = 0; i < a.size(); ++i) abar[i] = std::conj(a[i]);
  const auto dual = superop::dual(map_from_coeffs(fam, a));
  const auto spec = map_spectrum(abar);
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t l = 0; l < 3; ++l) {
      const ComplexMatrix us = fam.u(k, l).adjoint();
      CHECK(max_abs(dual.apply(us) - spec.eigenvalues[fam.pair_index(k, l)] * us) < 1e-12);
    }
}

TEST_CASE("spectral projectors are orthogonal and complete") {
  const WeylFamily fam(3, 1);
  SuperOperator total(3);
  std::vector<SuperOperator> ps;
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t l = 0; l < 3; ++l) ps.push_back(projector(fam, k, l));
  double worst = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    total += ps[i];
    for (std::size_t j = 0; j < ps.size(); ++j) {
      const auto prod = ps[i] * ps[j];
      worst = std::max(worst, i == j ? prod.max_abs_diff(ps[i]) : prod.max_abs());
    }
  }
  CHECK(worst < 1e-11);
  CHECK(total.max_abs_diff(SuperOperator::identity(3)) < 1e-11);

  auto rng = make_rng(304);
  const auto a = random_complex_field(rng, 3, 2);
  CHECK(spectral_map(fam, map_spectrum(a).eigenvalues).max_abs_diff(map_from_coeffs(fam, a)) < 1e-12);
}

TEST_CASE("dense diagonalization reproduces the Weyl spectrum") {
  auto rng = make_rng(305);
  for (auto [d, parties] : {std::pair{2, 1}, std::pair{3, 1}, std::pair{2, 2}}) {
    const WeylFamily fam(d, parties);
    const auto a = random_probability_field(rng, d, 2 * parties);
    const auto dec = superop::diagonalize(map_from_coeffs(fam, a));
    const auto spec = map_spectrum(a);
    std::vector<cplx> x(dec.eigenvalues().data(), dec.eigenvalues().data() + dec.eigenvalues().size());
    std::vector<cplx> y(spec.eigenvalues.values().begin(), spec.eigenvalues.values().end());
    CHECK(sorted_multiset_distance(x, y) < 1e-9);
  }
}

TEST_CASE("maps from coefficient fields commute and compose by convolution") {
  auto rng = make_rng(306);
  for (auto [d, parties] : {std::pair{2, 1}, std::pair{4, 1}, std::pair{2, 2}}) {
    const WeylFamily fam(d, parties);
    const auto a = random_complex_field(rng, d, 2 * parties);
    const auto b = random_complex_field(rng, d, 2 * parties);
    const auto ma = map_from_coeffs(fam, a), mb = map_from_coeffs(fam, b);
    CHECK(superop::commutator_norm(ma, mb) < 1e-11);
    CHECK((ma * mb).max_abs_diff(map_from_coeffs(fam, classical::convolve(a, b))) < 1e-11);
  }
}

TEST_CASE("Lindblad decomposition: dephasing example and reconstruction") {
  const WeylFamily q(2, 1);
  const double g = 0.35;
  LatticeField a(2, 2);
  a[q.pair_index(0, 1)] = g;
  a[0] = -g;
  const auto data = lindblad_decomposition(q, a);
  REQUIRE(data.jumps.size() == 1);
  CHECK(max_abs(data.jumps[0].op - weyl::weyl(1, 0, 2)) < 1e-15);
  CHECK(std::abs(data.jumps[0].rate - cplx(g)) < 1e-15);
  CHECK(data.markovian);
  ComplexMatrix z(2, 2);
  z << 1, 0, 0, -1;
  CHECK(lindblad_generator(data).max_abs_diff(SuperOperator::dissipator(z, g)) < 1e-15);
  CHECK(lindblad_generator(data).max_abs_diff(map_from_coeffs(q, a)) < 1e-15);

  const auto zero = lindblad_decomposition(q, LatticeField(2, 2));
  CHECK(lindblad_generator(zero).max_abs() == 0.0);

  LatticeField bad(2, 2);
  bad[1] = 0.2;
  CHECK_THROWS_AS(lindblad_decomposition(q, bad), NormalizationError);
}

TEST_CASE("random normalized rates: reconstruction, trace and unit preservation") {
  auto rng = make_rng(307);
  for (auto [d, parties] : {std::pair{3, 1}, std::pair{2, 2}, std::pair{4, 1}}) {
    const WeylFamily fam(d, parties);
    const auto gen = random_rates(rng, d, parties);
    const auto a = gen.at_time(0.0);
    const auto data = lindblad_decomposition(fam, a);
    const auto l = map_from_coeffs(fam, a);
    CHECK(lindblad_generator(data).max_abs_diff(l) < 1e-12);
    const ComplexMatrix id = ComplexMatrix::Identity(fam.dim(), fam.dim());
    CHECK(max_abs(l.apply(id)) < 1e-12);
    CHECK(max_abs(superop::dual(l).apply(id)) < 1e-12);
    for (double t : {0.2, 1.0, 3.0}) {
      const auto rep = superop::validate_channel(oracle::expm(l * cplx(t)));
      CHECK(rep.cptp());
      CHECK(rep.unital);
    }
  }
}

TEST_CASE("negative rates clear the Markovian flag") {
  const WeylFamily q(2, 1);
  LatticeField a(2, 2);
  a[1] = 0.5;
  a[2] = -0.2;
  a[0] = -0.3;
  CHECK_FALSE(lindblad_decomposition(q, a).markovian);
}

TEST_CASE("evolve: initial condition, constant rates, unitality") {
  auto rng = make_rng(308);
  for (auto [d, parties] : {std::pair{2, 1}, std::pair{3, 1}, std::pair{2, 2}}) {
    const WeylFamily fam(d, parties);
    const auto gen = random_rates(rng, d, parties);
    CHECK(evolve(fam, gen, 0.7, 0.7, Mode::markov).max_abs_diff(SuperOperator::identity(fam.dim())) < 1e-14);
    const auto l = map_from_coeffs(fam, gen, 0.0);
    const auto a = evolve(fam, gen, 0.2, 1.5, Mode::markov);
    CHECK(a.max_abs_diff(oracle::expm(l * cplx(1.3))) < 1e-9);
    const ComplexMatrix id = ComplexMatrix::Identity(fam.dim(), fam.dim());
    CHECK(max_abs(a.apply(id) - id) < 1e-14);
    const auto rep = superop::validate_channel(a);
    CHECK(rep.cptp());
    CHECK(rep.unital);
  }
}

TEST_CASE("evolve with time-dependent rates matches the time-ordered product") {
  const WeylFamily fam(3, 1);
  classical::CirculantGenerator gen(3, 2);
  gen.set(fam.pair_index(0, 1), TimeFunction::constant(0.3) + TimeFunction::sine(0.25, 2.0));
  gen.set(fam.pair_index(1, 2), TimeFunction::polynomial({0.1, 0.2}));
  gen.set(fam.pair_index(2, 0), TimeFunction::damped_trig(0.4, 0.5, 0.0, 0.0));
  gen.complete_diagonal();
  const auto closed = evolve(fam, gen, 0.0, 1.0, Mode::markov);
  const auto ordered =
      oracle::ordered_exp([&](double t) { return map_from_coeffs(fam, gen, t); }, 0.0, 1.0, oracle::default_steps(0, 1));
  CHECK(closed.max_abs_diff(ordered.propagator) < 1e-7);

  const auto nm = evolve(fam, gen, 2.0, 3.0, Mode::nonmarkov);
  CHECK(nm.max_abs_diff(closed) < 1e-12);
}

TEST_CASE("evolve rejects rates violating the Kolmogorov conditions") {
  const WeylFamily q(2, 1);
  classical::CirculantGenerator gen(2, 2);
  gen.set(1, TimeFunction::cosine(1.0, 1.0));
  gen.complete_diagonal();
  CHECK_THROWS_AS((void)evolve(q, gen, 0.0, 2.0, Mode::markov), PreconditionFailed);
  const auto a = evolve(q, gen, 0.0, 2.0, Mode::nonmarkov);
  CHECK(superop::validate_channel(a).cptp());
}

TEST_CASE("diagonal action sums over the shift index") {
  const auto e = diagonal_action(LatticeField::unit(3, 2));
  CHECK(e.max_abs_diff(LatticeField::unit(3, 1)) == 0.0);
  auto rng = make_rng(309);
  const WeylFamily fam(3, 1);
  const auto a = random_complex_field(rng, 3, 2);
  const auto b = diagonal_action(a);
  for (std::size_t m = 0; m < 3; ++m) {
    cplx s = 0.0;
    for (std::size_t n = 0; n < 3; ++n) s += a[fam.pair_index(m, n)];
    CHECK(std::abs(b[m] - s) < 1e-15);
  }
  // A e_ii = sum_{m,n} a(m,n) e_{i-m,i-m}
  const auto map = map_from_coeffs(fam, a);
  for (int i = 0; i < 3; ++i) {
    ComplexMatrix eii = ComplexMatrix::Zero(3, 3);
    eii(i, i) = 1.0;
    ComplexMatrix expect = ComplexMatrix::Zero(3, 3);
    for (int m = 0; m < 3; ++m) expect(((i - m) % 3 + 3) % 3, ((i - m) % 3 + 3) % 3) += b[m];
    CHECK(max_abs(map.apply(eii) - expect) < 1e-14);
  }
}

TEST_CASE("diagonal states evolve like classical populations") {
  auto rng = make_rng(310);
  for (auto [d, parties] : {std::pair{2, 1}, std::pair{3, 1}, std::pair{2, 2}, std::pair{3, 2}}) {
    const WeylFamily fam(d, parties);
    auto gen = random_rates(rng, d, parties);
    gen.set(fam.pair_index(1, 0), TimeFunction::constant(0.2) + TimeFunction::cosine(0.1, 3.0));
    gen.complete_diagonal();
    const auto p0 = random_probability_field(rng, d, parties);
    const ComplexMatrix rho = diagonal_state(p0);
    const auto a = evolve(fam, gen, 0.0, 1.2, Mode::markov);
    const auto quantum = populations(a.apply(rho), d, parties);
    const auto classical_p = classical::propagate(population_generator(gen), 0.0, 1.2, Mode::markov, p0);
    CHECK(quantum.max_abs_diff(classical_p) < 1e-10);
    // Coherences stay zero.
    const ComplexMatrix out = a.apply(rho);
    CHECK(max_abs(out - ComplexMatrix(out.diagonal().asDiagonal())) < 1e-13);
  }
}

TEST_CASE("stochastic matrices embed as quantum channels on diagonal states") {
  auto rng = make_rng(311);
  const auto gen = random_kolmogorov_generator(rng, 4, 1);
  const RealMatrix t = oracle::expm(ComplexMatrix(circulant_matrix(gen, 0.0).cast<cplx>() * 0.8)).real();
  const auto p = random_probability(rng, 4);
  const auto pf = LatticeField::from_real(4, 1, p);
  const ComplexMatrix out = embed_stochastic(t, diagonal_state(pf));
  const Eigen::VectorXd tp = t * Eigen::Map<const Eigen::VectorXd>(p.data(), 4);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(out(i, i) - cplx(tp(i))) < 1e-14);

  // Sandwiching by e_mm and e_nn instead only keeps the diagonal of T.
  ComplexMatrix literal = ComplexMatrix::Zero(4, 4);
  const ComplexMatrix rho = diagonal_state(pf);
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) {
      ComplexMatrix emm = ComplexMatrix::Zero(4, 4), enn = ComplexMatrix::Zero(4, 4);
      emm(m, m) = 1.0;
      enn(n, n) = 1.0;
      literal += t(m, n) * emm * rho * enn;
    }
  CHECK(max_abs(literal - out) > 1e-2);

  // The embedded map is CPTP whenever T is column-stochastic.
  const auto map = SuperOperator::from_action(4, [&](const ComplexMatrix& x) { return embed_stochastic(t, x); });
  CHECK(superop::validate_channel(map).cptp());
}
