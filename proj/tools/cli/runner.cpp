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
#include "runner.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace commudyn::cli {
namespace {

using superop::SuperOperator;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double time_arg(Mode mode, double t0, double t) { return mode == Mode::markov ? t : t - t0; }

// Cumulative ordered-exponential propagators at each sample time, built
// segment by segment from t0 so each sample costs only its own interval.
template <class Op, class Fn>
std::vector<Op> ordered_track(const Fn& lfun, Op identity, const std::vector<double>& times, double t0, Mode mode,
                              int steps_per_unit) {
  std::vector<Op> out;
  Op acc = identity;
  double prev = t0;
  for (double tau : times) {
    if (tau > prev) {
      const double a = time_arg(mode, t0, prev), b = time_arg(mode, t0, tau);
      acc = oracle::ordered_exp(lfun, a, b, oracle::default_steps(a, b, steps_per_unit), false).propagator * acc;
      prev = tau;
    }
    out.push_back(acc);
  }
  return out;
}

std::string site_label(const MultiIndex& m) {
  std::string s;
  for (int v : m) s += "_" + std::to_string(v);
  return s;
}

std::vector<std::string> state_columns(int dim) {
  std::vector<std::string> cols{"t"};
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      cols.push_back("re_rho_" + std::to_string(i) + "_" + std::to_string(j));
      cols.push_back("im_rho_" + std::to_string(i) + "_" + std::to_string(j));
    }
  cols.push_back("purity");
  return cols;
}

std::vector<double> state_row(double t, const ComplexMatrix& rho) {
  std::vector<double> row{t};
  for (Eigen::Index i = 0; i < rho.rows(); ++i)
    for (Eigen::Index j = 0; j < rho.cols(); ++j) {
      row.push_back(rho(i, j).real());
      row.push_back(rho(i, j).imag());
    }
  row.push_back((rho * rho).trace().real());
  return row;
}

double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

json kolmogorov_json(const classical::KolmogorovReport& r) {
  return {{"passed", r.passed},
          {"positivity", r.positivity},
          {"conservation", r.conservation},
          {"diagonal", r.diagonal},
          {"points_checked", r.points_checked},
          {"min_offdiagonal", r.min_offdiagonal},
          {"max_conservation_residual", r.max_conservation_residual},
          {"first_violation", r.first_violation ? witness_json(*r.first_violation) : json(nullptr)}};
}

json channel_json(const superop::ChannelReport& r) {
  return {{"cp", r.cp},
          {"tp", r.tp},
          {"unital", r.unital},
          {"hermiticity_preserving", r.hermiticity_preserving},
          {"choi_min_eigenvalue", r.choi_min_eigenvalue},
          {"tp_residual", r.tp_residual},
          {"unital_residual", r.unital_residual}};
}

json condition_json(const qubit::ConditionReport& r) {
  return {{"passed", r.passed},
          {"first_violation", r.first_violation ? witness_json(*r.first_violation) : json(nullptr)}};
}

classical::KolmogorovReport require_kolmogorov(const classical::CirculantGenerator& g, const TimeGrid& grid,
                                               Mode mode) {
  auto report = classical::kolmogorov_check(g, grid.t0, grid.t, mode);
  if (!report.passed) throw PreconditionFailed(*report.first_violation);
  return report;
}

struct OracleTracker {
  const OracleSettings& settings;
  double worst = 0.0;
  std::string note;

  json summary() const {
    json j{{"enabled", settings.enabled}, {"tol", settings.tol}, {"steps", settings.steps_per_unit}};
    if (settings.enabled) {
      j["max_residual"] = worst;
      j["passed"] = std::isnan(worst) ? false : worst <= settings.tol;
      if (!note.empty()) j["note"] = note;
    }
    return j;
  }
  void record(double residual) { worst = std::isnan(residual) || std::isnan(worst) ? kNaN : std::max(worst, residual); }
};

RunResult run_classical(const ExperimentConfig& cfg, const ClassicalExperiment& ex) {
  RunResult res;
  const auto& g = ex.generator;
  const auto& grid = *cfg.time;
  res.reports["kolmogorov"] = kolmogorov_json(require_kolmogorov(g, grid, cfg.mode));
  res.table.columns.push_back("t");
  for (std::size_t m = 0; m < g.size(); ++m) res.table.columns.push_back("P" + site_label(g.multi_index(m)));
  OracleTracker tracker{cfg.oracle, 0.0, {}};
  if (cfg.oracle.enabled) res.table.columns.push_back("oracle_residual");

  const auto times = grid.points();
  std::vector<ComplexMatrix> refs;
  if (cfg.oracle.enabled) {
    const auto lfun = [&](double t) { return ComplexMatrix(classical::circulant_matrix(g, t).cast<cplx>()); };
    const auto n = static_cast<Eigen::Index>(g.size());
    refs = ordered_track<ComplexMatrix>(oracle::MatrixFn(lfun), ComplexMatrix::Identity(n, n), times, grid.t0,
                                        cfg.mode, cfg.oracle.steps_per_unit);
  }
  ComplexVector p0(static_cast<Eigen::Index>(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i) p0(static_cast<Eigen::Index>(i)) = ex.initial[i];
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto p = classical::propagate(g, grid.t0, times[i], cfg.mode, ex.initial);
    std::vector<double> row{times[i]};
    for (std::size_t m = 0; m < p.size(); ++m) row.push_back(p[m].real());
    if (cfg.oracle.enabled) {
      const ComplexVector q = refs[i] * p0;
      double r = 0.0;
      for (std::size_t m = 0; m < p.size(); ++m) r = std::max(r, std::abs(p[m] - q(static_cast<Eigen::Index>(m))));
      tracker.record(r);
      row.push_back(r);
    }
    res.table.rows.push_back(std::move(row));
  }
  res.oracle = tracker.summary();
  return res;
}

RunResult run_weyl(const ExperimentConfig& cfg, const WeylExperiment& ex) {
  RunResult res;
  const weyl::WeylFamily fam(cfg.d, cfg.parties);
  res.reports["relations_max_residual"] = weyl::relations_check(fam).max_residual();
  OracleTracker tracker{cfg.oracle, 0.0, {}};

  if (ex.field) {
    const auto map = weyl::map_from_coeffs(fam, *ex.field);
    res.reports["channel"] = channel_json(superop::validate_channel(map));
    const auto spectrum = weyl::map_spectrum(*ex.field).eigenvalues;
    res.table.columns = {"k", "l", "re_eigenvalue", "im_eigenvalue"};
    if (cfg.oracle.enabled) res.table.columns.push_back("oracle_residual");
    const auto dim = static_cast<std::size_t>(fam.dim());
    for (std::size_t k = 0; k < dim; ++k)
      for (std::size_t l = 0; l < dim; ++l) {
        const cplx ev = spectrum[fam.pair_index(k, l)];
        std::vector<double> row{double(k), double(l), ev.real(), ev.imag()};
        if (cfg.oracle.enabled) {
          const ComplexMatrix u = fam.u(k, l);
          const double r = max_abs(map.apply(u) - ev * u);
          tracker.record(r);
          row.push_back(r);
        }
        res.table.rows.push_back(std::move(row));
      }
    res.oracle = tracker.summary();
    return res;
  }

  const auto& a = *ex.rates;
  const auto& grid = *cfg.time;
  res.reports["kolmogorov"] = kolmogorov_json(require_kolmogorov(a, grid, cfg.mode));
  res.table.columns = state_columns(fam.dim());
  if (cfg.oracle.enabled) res.table.columns.push_back("oracle_residual");
  const auto times = grid.points();
  std::vector<SuperOperator> refs;
  if (cfg.oracle.enabled) {
    const oracle::GeneratorFn lfun = [&](double t) { return weyl::map_from_coeffs(fam, a, t); };
    refs = ordered_track<SuperOperator>(lfun, SuperOperator::identity(fam.dim()), times, grid.t0, cfg.mode,
                                        cfg.oracle.steps_per_unit);
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto map = weyl::evolve(fam, a, grid.t0, times[i], cfg.mode);
    auto row = state_row(times[i], map.apply(ex.initial));
    if (cfg.oracle.enabled) {
      const double r = map.max_abs_diff(refs[i]);
      tracker.record(r);
      row.push_back(r);
    }
    res.table.rows.push_back(std::move(row));
  }
  res.reports["final_channel"] = channel_json(superop::validate_channel(weyl::evolve(fam, a, grid.t0, grid.t, cfg.mode)));
  res.oracle = tracker.summary();
  return res;
}

RunResult run_mixture(const ExperimentConfig& cfg, const MixtureExperiment& ex) {
  RunResult res;
  const genfactory::MixtureSpec spec{ex.weights, genfactory::CommutingGeneratorSet(ex.generators)};
  const auto& grid = *cfg.time;
  genfactory::check_weights(spec, grid.t - grid.t0);
  res.reports["max_commutator"] = spec.generators.max_commutator();
  res.reports["diagonality_residual"] = spec.generators.diagonality_residual();
  const auto scan = genfactory::scan_singularities(spec, grid.t - grid.t0);
  res.reports["singularity"] = {{"singular", scan.singular}, {"mode", scan.mode}, {"time", scan.time},
                                {"modulus", scan.modulus}};
  res.table.columns = state_columns(spec.generators.dim());
  OracleTracker tracker{cfg.oracle, 0.0, {}};
  if (cfg.oracle.enabled) res.table.columns.push_back("oracle_residual");
  for (double tau : grid.points()) {
    const auto map = genfactory::mixture_map(spec, grid.t0, tau);
    auto row = state_row(tau, map.apply(ex.initial));
    if (cfg.oracle.enabled) {
      double r = kNaN;
      try {
        r = genfactory::mixture_solution(spec, tau - grid.t0).map.max_abs_diff(map);
      } catch (const SingularEigenvalue& e) {
        tracker.note = e.what();
      }
      tracker.record(r);
      row.push_back(r);
    }
    res.table.rows.push_back(std::move(row));
  }
  res.reports["final_channel"] = channel_json(superop::validate_channel(genfactory::mixture_map(spec, grid.t0, grid.t)));
  res.oracle = tracker.summary();
  return res;
}

RunResult run_resolvent(const ExperimentConfig& cfg, const ResolventExperiment& ex) {
  RunResult res;
  res.table.columns = {"s", "k", "choi_min_eigenvalue", "tp_residual", "unital_residual", "cp", "tp", "unital"};
  OracleTracker tracker{cfg.oracle, 0.0, {}};
  if (cfg.oracle.enabled) res.table.columns.push_back("oracle_residual");
  const ComplexMatrix& l = ex.generator.matrix();
  double worst_commutator = 0.0;
  for (double s : ex.s) {
    std::vector<SuperOperator> gens;
    for (int k : ex.k) {
      const auto channel = genfactory::resolvent_channel(ex.generator, s, k);
      const auto rep = superop::validate_channel(channel);
      std::vector<double> row{s, double(k), rep.choi_min_eigenvalue, rep.tp_residual, rep.unital_residual,
                              rep.cp ? 1.0 : 0.0, rep.tp ? 1.0 : 0.0, rep.unital ? 1.0 : 0.0};
      if (cfg.oracle.enabled) {
        const ComplexMatrix inv = (s * ComplexMatrix::Identity(l.rows(), l.cols()) - l).inverse();
        ComplexMatrix ref = ComplexMatrix::Identity(l.rows(), l.cols());
        for (int j = 0; j <= k; ++j) ref = s * inv * ref;
        const double r = max_abs(ref - channel.matrix());
        tracker.record(r);
        row.push_back(r);
      }
      res.table.rows.push_back(std::move(row));
      gens.push_back(channel - SuperOperator::identity(ex.generator.dim()));
    }
    for (std::size_t i = 0; i < gens.size(); ++i)
      for (std::size_t j = i + 1; j < gens.size(); ++j)
        worst_commutator = std::max(worst_commutator, superop::commutator_norm(gens[i], gens[j]));
  }
  res.reports["max_generator_commutator"] = worst_commutator;
  res.oracle = tracker.summary();
  return res;
}

RunResult run_qubit(const ExperimentConfig& cfg, const QubitExperiment& ex) {
  RunResult res;
  qubit::validate_spec(ex.spec);
  const auto& grid = *cfg.time;
  const auto cond = cfg.mode == Mode::markov ? qubit::check_markov(ex.spec, grid.t0, grid.t)
                                             : qubit::check_nonmarkov(ex.spec, grid.t - grid.t0);
  if (!cond.passed) throw PreconditionFailed(*cond.first_violation);
  res.reports[cfg.mode == Mode::markov ? "markov" : "nonmarkov"] = condition_json(cond);
  const auto gr = qubit::gamma_report(ex.spec, grid.t0);
  res.reports["gamma"] = {{"formula", {gr.formula.real(), gr.formula.imag()}},
                          {"numerical", {gr.numerical.real(), gr.numerical.imag()}},
                          {"discrepancy", gr.discrepancy},
                          {"flagged", gr.flagged}};
  res.table.columns = {"t", "rho00", "rho11", "re_rho01", "im_rho01", "purity"};
  OracleTracker tracker{cfg.oracle, 0.0, {}};
  if (cfg.oracle.enabled) res.table.columns.push_back("oracle_residual");
  const auto times = grid.points();
  std::vector<SuperOperator> refs;
  if (cfg.oracle.enabled) {
    const oracle::GeneratorFn lfun = [&](double t) { return qubit::build_generator(ex.spec, t); };
    refs = ordered_track<SuperOperator>(lfun, SuperOperator::identity(2), times, grid.t0, cfg.mode,
                                        cfg.oracle.steps_per_unit);
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto map = qubit::propagate(ex.spec, grid.t0, times[i], cfg.mode);
    const ComplexMatrix rho = map.apply(ex.initial);
    std::vector<double> row{times[i], rho(0, 0).real(), rho(1, 1).real(), rho(0, 1).real(), rho(0, 1).imag(),
                            (rho * rho).trace().real()};
    if (cfg.oracle.enabled) {
      const double r = map.max_abs_diff(refs[i]);
      tracker.record(r);
      row.push_back(r);
    }
    res.table.rows.push_back(std::move(row));
  }
  res.oracle = tracker.summary();
  return res;
}

RunResult run_kernel(const ExperimentConfig& cfg, const KernelExperiment& ex) {
  RunResult res;
  res.table.columns = {"s", "re_f_hat", "im_f_hat", "re_k_hat", "im_k_hat"};
  OracleTracker tracker{cfg.oracle, 0.0, {}};
  if (cfg.oracle.enabled) {
    res.table.columns.push_back("identity_residual");
    res.table.columns.push_back("oracle_residual");
  }
  for (double s : ex.s) {
    const auto smp = kernel::sample(ex.signal, s);
    std::vector<double> row{s, smp.f_hat.real(), smp.f_hat.imag(), smp.k_hat.real(), smp.k_hat.imag()};
    if (cfg.oracle.enabled) {
      kernel::LaplaceOptions numeric;
      numeric.force_numeric = true;
      const double r = std::abs(kernel::laplace(ex.signal, s, kernel::Transformed::c, numeric).value - smp.c_hat);
      row.push_back(smp.identity_residual());
      row.push_back(r);
      tracker.record(std::max(r, smp.identity_residual()));
    }
    res.table.rows.push_back(std::move(row));
  }
  if (ex.volterra) {
    const auto mk = kernel::memory_kernel(ex.signal);
    const auto v = kernel::volterra_check(mk, ex.signal, ex.volterra->horizon, ex.volterra->step);
    json weights = json::array(), rates = json::array();
    for (std::size_t i = 0; i < mk.weights.size(); ++i) {
      weights.push_back({mk.weights[i].real(), mk.weights[i].imag()});
      rates.push_back({mk.rates[i].real(), mk.rates[i].imag()});
    }
    res.reports["memory_kernel"] = {{"delta_weight", {mk.delta_weight.real(), mk.delta_weight.imag()}},
                                    {"weights", weights},
                                    {"rates", rates}};
    res.reports["volterra"] = {{"steps", v.steps},
                               {"step", v.step},
                               {"max_relative_residual", v.max_relative_residual},
                               {"richardson_residual", v.richardson_residual}};
  }
  res.oracle = tracker.summary();
  return res;
}

// One entry of a validation report.
json check(const std::string& name, bool passed, json details = json::object()) {
  details["name"] = name;
  details["passed"] = passed;
  return details;
}

json kolmogorov_check_json(const classical::CirculantGenerator& g, const TimeGrid& grid, Mode mode) {
  const auto r = classical::kolmogorov_check(g, grid.t0, grid.t, mode);
  return check("kolmogorov", r.passed, kolmogorov_json(r));
}

json finish(const std::string& kind, json checks) {
  bool all = true;
  for (const auto& c : checks) all = all && c["passed"].get<bool>();
  return {{"kind", kind}, {"checks", std::move(checks)}, {"passed", all}};
}

json channel_check(const std::string& name, const SuperOperator& map, bool need_unital = false) {
  const auto rep = superop::validate_channel(map);
  return check(name, rep.cptp() && (!need_unital || rep.unital), channel_json(rep));
}

}  // namespace

json witness_json(const Witness& w) {
  json j{{"condition", w.condition}, {"description", w.describe()}};
  j["time"] = std::isnan(w.time) ? json(nullptr) : json(w.time);
  j["value"] = std::isnan(w.value) ? json(nullptr) : json(w.value);
  j["index"] = w.index;
  return j;
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  return std::visit(
      [&](const auto& ex) -> RunResult {
        using T = std::decay_t<decltype(ex)>;
        if constexpr (std::is_same_v<T, ClassicalExperiment>) return run_classical(cfg, ex);
        else if constexpr (std::is_same_v<T, WeylExperiment>) return run_weyl(cfg, ex);
        else if constexpr (std::is_same_v<T, MixtureExperiment>) return run_mixture(cfg, ex);
        else if constexpr (std::is_same_v<T, ResolventExperiment>) return run_resolvent(cfg, ex);
        else if constexpr (std::is_same_v<T, QubitExperiment>) return run_qubit(cfg, ex);
        else return run_kernel(cfg, ex);
      },
      cfg.experiment);
}

json validate_experiment(const ExperimentConfig& cfg) {
  json checks = json::array();
  auto guarded = [&](const std::string& name, const std::function<json()>& body) {
    try {
      checks.push_back(body());
    } catch (const PreconditionFailed& e) {
      checks.push_back(check(name, false, {{"error", e.what()}, {"witness", witness_json(e.witness())}}));
    } catch (const InvalidWeights& e) {
      checks.push_back(check(name, false, {{"error", e.what()}, {"witness", witness_json(e.witness())}}));
    } catch (const Error& e) {
      checks.push_back(check(name, false, {{"error", e.what()}}));
    }
  };

  if (const auto* ex = std::get_if<ClassicalExperiment>(&cfg.experiment)) {
    guarded("kolmogorov", [&] { return kolmogorov_check_json(ex->generator, *cfg.time, cfg.mode); });
  } else if (const auto* ex = std::get_if<WeylExperiment>(&cfg.experiment)) {
    const weyl::WeylFamily fam(cfg.d, cfg.parties);
    const double rel = weyl::relations_check(fam).max_residual();
    checks.push_back(check("relations", rel < 1e-12, {{"max_residual", rel}}));
    if (ex->field) {
      guarded("channel", [&] { return channel_check("channel", weyl::map_from_coeffs(fam, *ex->field), true); });
    } else {
      guarded("kolmogorov", [&] { return kolmogorov_check_json(*ex->rates, *cfg.time, cfg.mode); });
      weyl::EvolveOptions unchecked;
      unchecked.check_preconditions = false;
      guarded("channel", [&] {
        return channel_check("channel", weyl::evolve(fam, *ex->rates, cfg.time->t0, cfg.time->t, cfg.mode, unchecked));
      });
    }
  } else if (const auto* ex = std::get_if<MixtureExperiment>(&cfg.experiment)) {
    std::optional<genfactory::CommutingGeneratorSet> set;
    guarded("commutation", [&] {
      set.emplace(ex->generators);
      return check("commutation", true, {{"max_commutator", set->max_commutator()}});
    });
    if (set) {
      const genfactory::MixtureSpec spec{ex->weights, *set};
      const double horizon = cfg.time->t - cfg.time->t0;
      guarded("weights", [&] {
        genfactory::check_weights(spec, horizon);
        return check("weights", true);
      });
      guarded("channel", [&] {
        genfactory::MixtureOptions opts;
        opts.check_weights = false;
        return channel_check("channel", genfactory::mixture_map(spec, cfg.time->t0, cfg.time->t, opts));
      });
    }
  } else if (const auto* ex = std::get_if<ResolventExperiment>(&cfg.experiment)) {
    for (double s : ex->s)
      for (int k : ex->k) {
        const std::string name = "channel(s=" + std::to_string(s) + ",k=" + std::to_string(k) + ")";
        guarded(name, [&] { return channel_check(name, genfactory::resolvent_channel(ex->generator, s, k), true); });
      }
  } else if (const auto* ex = std::get_if<QubitExperiment>(&cfg.experiment)) {
    const auto& grid = *cfg.time;
    if (cfg.mode == Mode::markov) {
      checks.push_back(check("markov", false, condition_json(qubit::check_markov(ex->spec, grid.t0, grid.t))));
    } else {
      checks.push_back(check("nonmarkov", false, condition_json(qubit::check_nonmarkov(ex->spec, grid.t - grid.t0))));
    }
    checks.back()["passed"] = checks.back()["first_violation"].is_null();
    qubit::PropagateOptions unchecked;
    unchecked.check_preconditions = false;
    guarded("channel", [&] {
      return channel_check("channel", qubit::propagate(ex->spec, grid.t0, grid.t, cfg.mode, unchecked));
    });
  } else if (const auto* ex = std::get_if<KernelExperiment>(&cfg.experiment)) {
    for (double s : ex->s) {
      const std::string name = "laplace_identity(s=" + std::to_string(s) + ")";
      guarded(name, [&] {
        const double r = kernel::sample(ex->signal, s).identity_residual();
        return check(name, r < 1e-10, {{"residual", r}});
      });
    }
  }
  return finish(cfg.kind, std::move(checks));
}

json self_test() {
  json checks = json::array();
  for (int d : {2, 3})
    for (int parties : {1, 2}) {
      const json where{{"d", d}, {"N", parties}};
      const weyl::WeylFamily fam(d, parties);
      const double rel = weyl::relations_check(fam).max_residual();
      json c = check("relations", rel < 1e-12, {{"max_residual", rel}});
      c.update(where);
      checks.push_back(c);

      // Probability field p(m, n) proportional to 1 + flat index.
      LatticeField p(d, 2 * parties);
      const double n = static_cast<double>(p.size());
      for (std::size_t i = 0; i < p.size(); ++i) p[i] = (1.0 + static_cast<double>(i)) / (n * (n + 1.0) / 2.0);
      c = channel_check("probability_field_channel", weyl::map_from_coeffs(fam, p), true);
      c.update(where);
      checks.push_back(c);

      const auto t = superop::validate_channel(SuperOperator::transpose_map(fam.dim()));
      c = check("transpose_rejected", !t.cp && std::abs(t.choi_min_eigenvalue + 1.0) < 1e-12,
                {{"choi_min_eigenvalue", t.choi_min_eigenvalue}});
      c.update(where);
      checks.push_back(c);

      classical::CirculantGenerator g(d, parties);
      for (std::size_t m = 1; m < g.size(); ++m)
        g.set(m, TimeFunction::constant(0.1 * static_cast<double>(m)) + TimeFunction::cosine(0.05, 1.0));
      g.complete_diagonal();
      const auto ok = classical::kolmogorov_check(g, 0.0, 2.0, Mode::markov);
      c = check("kolmogorov_accepts_valid", ok.passed);
      c.update(where);
      checks.push_back(c);

      g.set(g.size() - 1, TimeFunction::constant(-0.2));
      g.complete_diagonal();
      const auto bad = classical::kolmogorov_check(g, 0.0, 2.0, Mode::markov);
      c = check("kolmogorov_rejects_negative_rate", !bad.passed && bad.first_violation.has_value(),
                {{"witness", bad.first_violation ? witness_json(*bad.first_violation) : json(nullptr)}});
      c.update(where);
      checks.push_back(c);
    }
  return finish("self-test", std::move(checks));
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + table.columns[i];
  out += "\n";
  char buf[40];
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      if (i) out += ",";
      out += buf;
    }
    out += "\n";
  }
  return out;
}

json to_json(const Table& table) {
  json rows = json::array();
  for (const auto& row : table.rows) {
    json r = json::array();
    for (double v : row) r.push_back(std::isfinite(v) ? json(v) : json(nullptr));
    rows.push_back(std::move(r));
  }
  return {{"columns", table.columns}, {"rows", std::move(rows)}};
}

}  // namespace commudyn::cli
