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
// Acceptance suite: one line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#ifdef COMMUDYN_HAVE_BOOST_RATIONAL
#include <boost/rational.hpp>
#endif

#include "test_support.hpp"

using namespace commudyn;
using namespace commudyn::testing;
using superop::SuperOperator;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what, double value, double tol) {
    if (!ok) pass = false;
    detail << (detail.tellp() > 0 ? "; " : "") << what << "=" << value << (ok ? "" : " (FAILED)") << " tol "
           << tol;
  }
  void at_most(const std::string& what, double value, double tol) { require(value < tol, what, value, tol); }
  void at_least(const std::string& what, double value, double tol) { require(value > tol, what, value, tol); }
};

ComplexMatrix pauli(char which) {
  ComplexMatrix m(2, 2);
  if (which == 'x') m << 0, 1, 1, 0;
  if (which == 'z') m << 1, 0, 0, -1;
  return m;
}

LatticeField column_as_field(const ComplexMatrix& m, int d, int axes) {
  return LatticeField(d, axes, std::vector<cplx>(m.data(), m.data() + m.rows()));
}

void weyl_relations(Outcome& out) {
  double worst = 0.0;
  std::size_t pairs = 0;
  for (int d : {2, 3, 4, 5})
    for (int parties : {1, 2}) {
      if (lattice_size(d, parties) > 9) continue;
      const auto r = weyl::relations_check(weyl::WeylFamily(d, parties));
      worst = std::max(worst, r.max_residual());
      pairs += r.pairs_checked;
    }
  out.at_most("max relation residual", worst, 1e-12);
  out.detail << " over " << pairs << " index pairs";
}

void cp_criterion(Outcome& out) {
  auto rng = make_rng(9001);
  double min_eig = 1e300, tp = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + trial % 2, parties = (trial % 5 == 4 && d == 2) ? 2 : 1;
    const weyl::WeylFamily fam(d, parties);
    const auto rep = superop::validate_channel(weyl::map_from_coeffs(fam, random_probability_field(rng, d, 2 * parties)));
    min_eig = std::min(min_eig, rep.choi_min_eigenvalue);
    tp = std::max(tp, rep.tp_residual);
  }
  out.require(min_eig >= -1e-10, "min Choi eigenvalue", min_eig, -1e-10);
  out.at_most("dual-unitality residual", tp, 1e-12);
  double worst_t = 0.0;
  bool rejected = true;
  for (int d : {2, 3}) {
    const auto rep = superop::validate_channel(SuperOperator::transpose_map(d));
    rejected = rejected && !rep.cp;
    worst_t = std::max(worst_t, std::abs(rep.choi_min_eigenvalue + 1.0));
  }
  out.require(rejected, "transpose rejected", rejected ? 1.0 : 0.0, 1.0);
  out.at_most("|transpose witness + 1|", worst_t, 1e-12);
}

void classical_closed_form(Outcome& out) {
  auto rng = make_rng(9002);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 4, axes = 1 + (trial / 4) % 2;
    const auto g = random_kolmogorov_generator(rng, d, axes);
    const double t = uniform(rng, 0.1, 2.0);
    const ComplexMatrix l = classical::circulant_matrix(g, 0.0).cast<cplx>();
    const auto ref = column_as_field(oracle::expm(ComplexMatrix(l * t)).col(0), d, axes);
    worst = std::max(worst, classical::propagate(g, 0.0, t, Mode::markov).max_abs_diff(ref));
  }
  out.at_most("max |propagate - expm e|", worst, 1e-9);
  double law = 0.0;
  const double gamma = 0.7;
  const auto g2 = classical::CirculantGenerator::constant(2, 1, {-gamma, gamma});
  for (double t : {0.05, 0.5, 1.0, 2.0, 5.0}) {
    const auto p = classical::propagate(g2, 0.0, t, Mode::markov);
    law = std::max({law, std::abs(p[0] - 0.5 * (1 + std::exp(-2 * gamma * t))),
                    std::abs(p[1] - 0.5 * (1 - std::exp(-2 * gamma * t)))});
  }
  out.at_most("two-site law residual", law, 1e-12);
}

void composition_laws(Outcome& out) {
  auto rng = make_rng(9003);
  classical::CirculantGenerator g(3, 1);
  g.set(1, TimeFunction::constant(0.5) + TimeFunction::sine(0.3, 1.7));
  g.set(2, TimeFunction::polynomial({0.2, 0.1}));
  g.complete_diagonal();
  double markov = 0.0, homog = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    double v[3] = {uniform(rng, 0, 4), uniform(rng, 0, 4), uniform(rng, 0, 4)};
    std::sort(v, v + 3);
    markov = std::max(markov, classical::composition_check(g, v[2], v[1], v[0], Mode::markov).composition_residual);
    homog = std::max(homog, classical::composition_check(g, v[2], v[1], v[0], Mode::nonmarkov, v[0] + 0.3)
                                .homogeneity_residual);
  }
  out.at_most("markov composition residual", markov, 1e-10);
  out.at_most("nonmarkov homogeneity residual", homog, 1e-12);
  classical::CirculantGenerator ramp(2, 1);
  ramp.set(1, TimeFunction::polynomial({0.0, 1.0}));
  ramp.complete_diagonal();
  out.at_least("crafted nonmarkov composition violation",
               classical::composition_check(ramp, 2.0, 1.0, 0.0, Mode::nonmarkov).composition_residual, 1e-2);
}

void commutativity(Outcome& out) {
  const int steps = oracle::kDefaultStepsPerUnit;
  // Classical circulant with time-dependent rates.
  classical::CirculantGenerator g(3, 1);
  g.set(1, TimeFunction::constant(0.6) + TimeFunction::sine(0.4, 2.0));
  g.set(2, TimeFunction::damped_trig(0.5, 0.3, 1.0, 0.0) + TimeFunction::constant(0.5));
  g.complete_diagonal();
  const auto cfun = [&](double t) { return ComplexMatrix(classical::circulant_matrix(g, t).cast<cplx>()); };
  const auto cprop = oracle::ordered_exp(cfun, 0.0, 1.0, steps);
  const double classical_gap =
      classical::propagate(g, 0.0, 1.0, Mode::markov).max_abs_diff(column_as_field(cprop.propagator.col(0), 3, 1));
  out.at_most("classical", classical_gap, 1e-7);

  // Weyl qutrit.
  const weyl::WeylFamily fam(3, 1);
  classical::CirculantGenerator a(3, 2);
  a.set(fam.pair_index(0, 1), TimeFunction::constant(0.4) + TimeFunction::cosine(0.3, 1.5));
  a.set(fam.pair_index(1, 1), TimeFunction::polynomial({0.1, 0.3}));
  a.set(fam.pair_index(2, 0), TimeFunction::damped_trig(0.6, 0.4, 0.0, 0.0));
  a.complete_diagonal();
  const auto wprop = oracle::ordered_exp([&](double t) { return weyl::map_from_coeffs(fam, a, t); }, 0.0, 1.0, steps);
  out.at_most("weyl", weyl::evolve(fam, a, 0.0, 1.0, Mode::markov).max_abs_diff(wprop.propagator), 1e-7);

  // Qubit with time-dependent pumping, detuning and dephasing.
  qubit::QubitSpec q;
  q.gamma = TimeFunction::constant(1.0) + TimeFunction::sine(1.0, 1.0);
  q.epsilon = TimeFunction::cosine(0.5, 2.0);
  q.c00 = TimeFunction::constant(0.3);
  q.c11 = TimeFunction::constant(0.4);
  q.c10_re = TimeFunction::constant(0.1);
  q.mu = 0.3;
  const auto qprop =
      oracle::ordered_exp([&](double t) { return qubit::build_generator(q, t); }, 0.0, 1.0, steps);
  out.at_most("qubit", qubit::propagate(q, 0.0, 1.0, Mode::markov).max_abs_diff(qprop.propagator), 1e-7);

  // Negative control: rotating Hamiltonian.
  const auto nfun = [](double t) {
    return SuperOperator::hamiltonian(std::cos(t) * pauli('x') + std::sin(t) * pauli('z'));
  };
  const auto nprop = oracle::ordered_exp(nfun, 0.0, 3.0, 3 * steps);
  const auto integrated =
      SuperOperator::hamiltonian(std::sin(3.0) * pauli('x') + (1.0 - std::cos(3.0)) * pauli('z'));
  out.at_least("noncommuting control gap", nprop.propagator.max_abs_diff(oracle::expm(integrated)), 1e-3);
}

void constructions(Outcome& out) {
  auto rng = make_rng(9006);
  double min_eig = 1e300, tp = 0.0, unital = 0.0, comm = 0.0;
  bool flags = true;
  for (int trial = 0; trial < 5; ++trial) {
    const auto l = random_unital_lindbladian(rng, 2 + trial % 2);
    for (double s : {0.5, 1.0, 10.0}) {
      std::vector<SuperOperator> gens;
      for (int k = 0; k <= 3; ++k) {
        const auto rep = superop::validate_channel(genfactory::resolvent_channel(l, s, k));
        flags = flags && rep.cp && rep.tp && rep.unital;
        min_eig = std::min(min_eig, rep.choi_min_eigenvalue);
        tp = std::max(tp, rep.tp_residual);
        unital = std::max(unital, rep.unital_residual);
        gens.push_back(genfactory::resolvent_generator(l, s, k));
      }
      for (std::size_t j = 0; j < gens.size(); ++j)
        for (std::size_t k = j + 1; k < gens.size(); ++k) comm = std::max(comm, superop::commutator_norm(gens[j], gens[k]));
    }
  }
  out.require(flags, "cp/tp/unital all pass", flags ? 1.0 : 0.0, 1.0);
  out.require(min_eig >= -1e-10, "min Choi eigenvalue", min_eig, -1e-10);
  out.at_most("max resolvent-generator commutator", comm, 1e-11);

  const std::vector<SuperOperator> ls{SuperOperator::dissipator(pauli('z'), 0.5),
                                      SuperOperator::hamiltonian(0.7 * pauli('z')) +
                                          SuperOperator::dissipator(pauli('z'), 0.2)};
  const genfactory::MixtureSpec spec{{TimeFunction::damped_trig(1.0, 1.0, 0.0, 0.0),
                                      TimeFunction::constant(1.0) - TimeFunction::damped_trig(1.0, 1.0, 0.0, 0.0)},
                                     genfactory::CommutingGeneratorSet(ls)};
  double mix = 0.0;
  for (double tau : {0.2, 1.0, 2.5})
    mix = std::max(mix, genfactory::mixture_solution(spec, tau).map.max_abs_diff(genfactory::mixture_map(spec, 0.0, tau)));
  out.at_most("mixture solution vs map", mix, 1e-8);

  const auto l = random_unital_lindbladian(rng, 2);
  const genfactory::MixtureSpec constant{
      {TimeFunction::constant(0.2), TimeFunction::constant(0.5), TimeFunction::constant(0.3)},
      genfactory::CommutingGeneratorSet({l, l * cplx(0.3), genfactory::resolvent_generator(l, 1.0, 1)})};
  double literal = 0.0;
  for (double tau : {0.0, 0.5, 1.5, 3.0}) {
    const auto exact = genfactory::mixture_generator_eigenvalues(constant, tau);
    const auto lit = genfactory::mixture_generator_eigenvalues(constant, tau, {1e-12, true});
    for (std::size_t a = 0; a < exact.size(); ++a) literal = std::max(literal, std::abs(exact[a] - lit[a]));
  }
  out.at_most("literal vs exact mu (constant weights)", literal, 1e-12);
}

void kernel_correspondence(Outcome& out) {
  const auto two = kernel::ModeSignal::from_exponentials({0.3, 0.7}, {-1.0, -3.0});
  double identity = 0.0, quad = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double s = 0.2 + 0.8 * i;
    const auto smp = kernel::sample(two, s);
    identity = std::max(identity, smp.identity_residual());
    quad = std::max(quad, std::abs(kernel::laplace(two, s, kernel::Transformed::c, {true}).value - smp.c_hat));
  }
  out.at_most("Laplace identity residual", identity, 1e-12);
  out.at_most("c-hat vs quadrature", quad, 1e-7);

  const cplx lam(-0.8, 0.5);
  const auto flat = kernel::ModeSignal::from_rate(
      ComplexTimeFunction(TimeFunction::constant(lam.real()), TimeFunction::constant(lam.imag())));
  double spread = 0.0;
  for (double s : {0.1, 0.5, 1.0, 4.0, 30.0})
    spread = std::max(spread, std::abs(kernel::kernel_hat(kernel::laplace(flat, s).value, s) - lam));
  out.at_most("constant-rate kernel deviation from lambda", spread, 1e-12);

  const auto report = kernel::volterra_check(kernel::memory_kernel(two), two, 5.0, 1e-3);
  out.at_most("two-exponential Volterra residual", report.max_relative_residual, 1e-5);
}

void qubit_criterion(Outcome& out) {
  double biorth = 0.0;
#ifdef COMMUDYN_HAVE_BOOST_RATIONAL
  using Q = boost::rational<long long>;
  bool exact = true;
  for (const Q mu : {Q(0), Q(1, 3), Q(1, 2), Q(5, 7), Q(1)}) {
    const auto b = qubit::DampingBasisT<Q>::make(mu);
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t c = 0; c < 4; ++c) exact = exact && b.pairing(a, c) == Q(a == c ? 1 : 0);
  }
  out.require(exact, "rational bi-orthogonality exact", exact ? 1.0 : 0.0, 1.0);
#else
  for (double mu : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const auto b = qubit::DampingBasisT<double>::make(mu);
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t c = 0; c < 4; ++c) biorth = std::max(biorth, std::abs(b.pairing(a, c) - (a == c ? 1.0 : 0.0)));
  }
  out.require(biorth == 0.0, "dyadic bi-orthogonality residual", biorth, 0.0);
#endif

  auto rng = make_rng(9008);
  double spectrum = 0.0, vdiag = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    qubit::QubitSpec s;
    s.epsilon = TimeFunction::constant(uniform(rng, -1, 1));
    s.gamma = TimeFunction::constant(uniform(rng, 0.1, 1.5));
    const double c00 = uniform(rng, 0, 1), c11 = uniform(rng, 0, 1);
    s.c00 = TimeFunction::constant(c00);
    s.c11 = TimeFunction::constant(c11);
    s.c10_re = TimeFunction::constant(uniform(rng, -1, 1) * std::sqrt(c00 * c11));
    s.mu = uniform(rng, 0, 1);
    const auto l = qubit::build_generator(s, 0.0);
    const auto lam = qubit::eigenvalues(s, 0.0);
    Eigen::ComplexEigenSolver<ComplexMatrix> es(l.matrix());
    std::vector<cplx> dense(es.eigenvalues().data(), es.eigenvalues().data() + 4);
    for (const auto& x : lam) {
      auto it = std::min_element(dense.begin(), dense.end(),
                                 [&](cplx p, cplx q) { return std::abs(p - x) < std::abs(q - x); });
      spectrum = std::max(spectrum, std::abs(*it - x));
      dense.erase(it);
    }
    const auto v = qubit::v_conjugation(s.mu);
    SuperOperator rebuilt(2);
    for (std::size_t a = 0; a < 4; ++a) rebuilt += v.v * qubit::f_projector(v, a) * v.v_inv * lam[a];
    vdiag = std::max(vdiag, rebuilt.max_abs_diff(l));
  }
  out.at_most("spectrum residual", spectrum, 1e-10);
  out.at_most("V-diagonalization residual", vdiag, 1e-10);

  qubit::QubitSpec pump;
  pump.gamma = TimeFunction::constant(1.0) + TimeFunction::sine(1.0, 1.0);
  pump.mu = 0.4;
  const auto ordered = oracle::ordered_exp([&](double t) { return qubit::build_generator(pump, t); }, 0.0, 2.0,
                                           oracle::default_steps(0.0, 2.0));
  out.at_most("propagate vs oracle", qubit::propagate(pump, 0.0, 2.0, Mode::markov).max_abs_diff(ordered.propagator),
              1e-7);

  qubit::QubitSpec cosine;
  cosine.gamma = TimeFunction::cosine(1.0, 1.0);
  const auto cls = qubit::classify(cosine, kPi);
  const double when = cls.markov_violation ? cls.markov_violation->time : -1.0;
  const bool ok = !cls.markovian && cls.nonmarkovian_valid && std::abs(when - kPi / 2) < 1e-6;
  out.require(ok, "cos-t classification (markov violation time)", when, 1e-6);
}

void diagonal_embedding(Outcome& out) {
  auto rng = make_rng(9009);
  double worst = 0.0;
  for (auto [d, parties] : {std::pair{2, 1}, std::pair{3, 1}, std::pair{4, 1}, std::pair{2, 2}}) {
    const weyl::WeylFamily fam(d, parties);
    auto a = random_kolmogorov_generator(rng, d, 2 * parties, 0.5);
    a.set(fam.pair_index(1, 0), TimeFunction::constant(0.3) + TimeFunction::sine(0.2, 2.0));
    a.complete_diagonal();
    const auto p0 = random_probability_field(rng, d, parties);
    const auto quantum =
        weyl::populations(weyl::evolve(fam, a, 0.0, 1.5, Mode::markov).apply(weyl::diagonal_state(p0)), d, parties);
    const auto classical_p =
        classical::propagate(weyl::population_generator(a), 0.0, 1.5, Mode::markov, p0);
    worst = std::max(worst, quantum.max_abs_diff(classical_p));
  }
  out.at_most("diag(quantum) vs classical under b", worst, 1e-10);
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<void(Outcome&)> run;
  };
  const std::vector<Criterion> criteria{
      {"C1 Weyl relations", weyl_relations},
      {"C2 CP criterion and probability fields", cp_criterion},
      {"C3 classical closed form vs oracle", classical_closed_form},
      {"C4 composition laws", composition_laws},
      {"C5 commutative closed forms vs ordered exponential", commutativity},
      {"C6 resolvent and mixture constructions", constructions},
      {"C7 memory-kernel correspondence", kernel_correspondence},
      {"C8 qubit generator, basis and classification", qubit_criterion},
      {"C9 diagonal embedding", diagonal_embedding},
  };
  int failures = 0;
  const auto start = std::chrono::steady_clock::now();
  for (const auto& c : criteria) {
    Outcome out;
    out.detail.precision(3);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(out);
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail << " exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += out.pass ? 0 : 1;
    std::printf("%s %s [%.2fs] %s\n", out.pass ? "PASS" : "FAIL", c.name, secs, out.detail.str().c_str());
  }
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d/%zu criteria passed in %.2fs\n", static_cast<int>(criteria.size()) - failures, criteria.size(),
              total);
  return failures == 0 ? 0 : 1;
}
