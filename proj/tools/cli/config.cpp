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
#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace commudyn::cli {
namespace {

// Cursor into the document that carries its own dotted path for messages.
class Node {
 public:
  Node(const json& j, std::string path) : j_(&j), path_(std::move(path)) {}

  const json& raw() const { return *j_; }
  const std::string& path() const { return path_; }
  [[noreturn]] void fail(const std::string& message) const { throw SchemaError(path_.empty() ? "<root>" : path_, message); }

  bool is_object() const { return j_->is_object(); }
  bool is_array() const { return j_->is_array(); }
  bool is_number() const { return j_->is_number(); }

  void expect_object(std::initializer_list<const char*> allowed) const {
    if (!j_->is_object()) fail("expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& item : j_->items())
      if (!ok.count(item.key())) Node(item.value(), child_path(item.key())).fail("unknown key");
  }
  bool has(const char* key) const { return j_->contains(key); }
  Node at(const char* key) const {
    if (!j_->contains(key)) Node(*j_, child_path(key)).fail("required key missing");
    return Node((*j_)[key], child_path(key));
  }
  std::optional<Node> find(const char* key) const {
    if (!j_->contains(key)) return std::nullopt;
    return Node((*j_)[key], child_path(key));
  }
  std::vector<Node> elements() const {
    if (!j_->is_array()) fail("expected an array");
    std::vector<Node> out;
    for (std::size_t i = 0; i < j_->size(); ++i) out.emplace_back((*j_)[i], path_ + "[" + std::to_string(i) + "]");
    return out;
  }

  double number() const {
    if (!j_->is_number()) fail("expected a number");
    const double v = j_->get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
  }
  int integer() const {
    if (!j_->is_number_integer()) fail("expected an integer");
    return j_->get<int>();
  }
  bool boolean() const {
    if (!j_->is_boolean()) fail("expected true or false");
    return j_->get<bool>();
  }
  std::string string() const {
    if (!j_->is_string()) fail("expected a string");
    return j_->get<std::string>();
  }
  cplx complex() const {
    if (j_->is_number()) return number();
    const auto parts = elements();
    if (parts.size() != 2) fail("expected a number or [re, im]");
    return {parts[0].number(), parts[1].number()};
  }
  std::vector<double> numbers() const {
    std::vector<double> out;
    for (const auto& e : elements()) out.push_back(e.number());
    return out;
  }
  MultiIndex index(int length) const {
    if (j_->is_number_integer() && length == 1) return {integer()};
    const auto parts = elements();
    if (static_cast<int>(parts.size()) != length) fail("expected " + std::to_string(length) + " components");
    MultiIndex out;
    for (const auto& p : parts) out.push_back(p.integer());
    return out;
  }

 private:
  std::string child_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* j_;
  std::string path_;
};

TimeFunction time_function(const Node& n) {
  if (n.is_number()) return TimeFunction::constant(n.number());
  if (!n.is_object()) n.fail("expected a number or a time-function object");
  const std::string kind = n.at("kind").string();
  auto opt = [&](const char* key, double fallback) { return n.has(key) ? n.at(key).number() : fallback; };
  if (kind == "constant") {
    n.expect_object({"kind", "value"});
    return TimeFunction::constant(n.at("value").number());
  }
  if (kind == "polynomial") {
    n.expect_object({"kind", "coeffs"});
    return TimeFunction::polynomial(n.at("coeffs").numbers());
  }
  if (kind == "damped-trig") {
    n.expect_object({"kind", "amplitude", "decay", "frequency", "phase"});
    return TimeFunction::damped_trig(opt("amplitude", 1.0), opt("decay", 0.0), opt("frequency", 0.0),
                                     opt("phase", 0.0));
  }
  if (kind == "cosine" || kind == "sine") {
    n.expect_object({"kind", "amplitude", "frequency"});
    const double a = opt("amplitude", 1.0), w = opt("frequency", 1.0);
    return kind == "cosine" ? TimeFunction::cosine(a, w) : TimeFunction::sine(a, w);
  }
  if (kind == "tabulated") {
    n.expect_object({"kind", "times", "values"});
    auto times = n.at("times").numbers();
    auto values = n.at("values").numbers();
    if (times.size() != values.size() || times.empty()) n.fail("times and values must be non-empty and equally long");
    try {
      return TimeFunction::tabulated(std::move(times), std::move(values));
    } catch (const std::invalid_argument& e) {
      n.at("times").fail(e.what());
    }
  }
  if (kind == "sum") {
    n.expect_object({"kind", "terms"});
    TimeFunction total;
    for (const auto& term : n.at("terms").elements()) total += time_function(term);
    return total;
  }
  n.at("kind").fail("unknown time-function kind '" + kind + "'");
}

ComplexMatrix matrix(const Node& n, int dim) {
  const auto rows = n.elements();
  if (static_cast<int>(rows.size()) != dim) n.fail("expected " + std::to_string(dim) + " rows");
  ComplexMatrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const auto cols = rows[static_cast<std::size_t>(i)].elements();
    if (static_cast<int>(cols.size()) != dim) rows[static_cast<std::size_t>(i)].fail("expected " + std::to_string(dim) + " entries");
    for (int j = 0; j < dim; ++j) m(i, j) = cols[static_cast<std::size_t>(j)].complex();
  }
  return m;
}

ComplexMatrix density_matrix(const std::optional<Node>& n, int dim) {
  if (!n) {
    ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
    rho(0, 0) = 1.0;
    return rho;
  }
  const ComplexMatrix rho = matrix(*n, dim);
  if (!superop::is_hermitian(rho, 1e-12)) n->fail("state must be Hermitian");
  if (std::abs(rho.trace() - cplx(1.0)) > 1e-10) n->fail("state must have unit trace");
  if (superop::min_hermitian_eigenvalue(rho) < -1e-10) n->fail("state must be positive semidefinite");
  return rho;
}

superop::SuperOperator generator(const Node& n, int dim) {
  n.expect_object({"hamiltonian", "dissipators"});
  superop::SuperOperator l(dim);
  if (auto h = n.find("hamiltonian")) {
    const ComplexMatrix hm = matrix(*h, dim);
    if (!superop::is_hermitian(hm, 1e-12)) h->fail("hamiltonian must be Hermitian");
    l += superop::SuperOperator::hamiltonian(hm);
  }
  if (auto ds = n.find("dissipators")) {
    for (const auto& item : ds->elements()) {
      item.expect_object({"op", "rate"});
      const double rate = item.has("rate") ? item.at("rate").number() : 1.0;
      if (rate < 0.0) item.at("rate").fail("rate must be non-negative");
      l += superop::SuperOperator::dissipator(matrix(item.at("op"), dim), rate);
    }
  }
  return l;
}

std::vector<double> s_values(const Node& n) {
  if (n.is_number()) return {n.number()};
  if (n.is_array()) return n.numbers();
  n.expect_object({"from", "to", "samples"});
  const double a = n.at("from").number(), b = n.at("to").number();
  const int count = n.at("samples").integer();
  if (count < 1) n.at("samples").fail("must be >= 1");
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(count == 1 ? a : a + (b - a) * i / (count - 1));
  return out;
}

void require_positive_s(const Node& n, const std::vector<double>& s) {
  for (double v : s)
    if (!(v > 0.0)) n.fail("transform variables must be positive");
}

ClassicalExperiment parse_classical(const Node& root, int d, int axes) {
  ClassicalExperiment ex{classical::CirculantGenerator(d, axes), LatticeField::unit(d, axes)};
  const auto rates = root.at("rates");
  for (const auto& item : rates.elements()) {
    item.expect_object({"index", "f"});
    const MultiIndex idx = item.at("index").index(axes);
    if (ex.generator.flat_index(idx) == 0) item.at("index").fail("the zero site is fixed by conservation");
    ex.generator.set(idx, time_function(item.at("f")));
  }
  ex.generator.complete_diagonal();
  if (auto p = root.find("initial")) {
    const auto values = p->numbers();
    if (values.size() != lattice_size(d, axes)) p->fail("expected " + std::to_string(lattice_size(d, axes)) + " probabilities");
    ex.initial = LatticeField::from_real(d, axes, values);
    if (!ex.initial.is_probability()) p->fail("must be a probability vector");
  }
  return ex;
}

WeylExperiment parse_weyl(const Node& root, int d, int parties) {
  WeylExperiment ex;
  const int dim = static_cast<int>(lattice_size(d, parties));
  const weyl::WeylFamily fam(d, parties);
  auto pair = [&](const Node& item) {
    const MultiIndex m = item.at("m").index(parties), n = item.at("n").index(parties);
    return fam.pair_index(fam.flat(m), fam.flat(n));
  };
  if (root.has("rates") == root.has("field")) root.fail("exactly one of 'rates' or 'field' is required");
  if (auto rates = root.find("rates")) {
    classical::CirculantGenerator a(d, 2 * parties);
    for (const auto& item : rates->elements()) {
      item.expect_object({"m", "n", "f"});
      const std::size_t flat = pair(item);
      if (flat == 0) item.fail("the (0, 0) coefficient is fixed by conservation");
      a.set(flat, time_function(item.at("f")));
    }
    a.complete_diagonal();
    ex.rates = std::move(a);
  } else {
    const auto field = root.at("field");
    LatticeField p(d, 2 * parties);
    for (const auto& item : field.elements()) {
      item.expect_object({"m", "n", "p"});
      p[pair(item)] += item.at("p").number();
    }
    if (!p.is_probability()) field.fail("must be a probability field (non-negative, summing to 1)");
    ex.field = std::move(p);
  }
  ex.initial = density_matrix(root.find("initial_state"), dim);
  return ex;
}

MixtureExperiment parse_mixture(const Node& root, int dim) {
  MixtureExperiment ex;
  const auto gens = root.at("generators").elements();
  const auto weights = root.at("weights").elements();
  if (gens.empty()) root.at("generators").fail("at least one generator is required");
  if (gens.size() != weights.size()) root.at("weights").fail("one weight per generator is required");
  for (const auto& g : gens) ex.generators.push_back(generator(g, dim));
  for (const auto& w : weights) ex.weights.push_back(time_function(w));
  ex.initial = density_matrix(root.find("initial_state"), dim);
  return ex;
}

ResolventExperiment parse_resolvent(const Node& root, int dim) {
  ResolventExperiment ex{generator(root.at("generator"), dim), s_values(root.at("s")), {0}};
  require_positive_s(root.at("s"), ex.s);
  if (auto k = root.find("k")) {
    ex.k.clear();
    if (k->is_array()) {
      for (const auto& e : k->elements()) ex.k.push_back(e.integer());
    } else {
      ex.k.push_back(k->integer());
    }
    for (int v : ex.k)
      if (v < 0) k->fail("orders must be non-negative");
  }
  return ex;
}

QubitExperiment parse_qubit(const Node& root) {
  QubitExperiment ex;
  auto fn = [&](const char* key) { return root.has(key) ? time_function(root.at(key)) : TimeFunction{}; };
  ex.spec.epsilon = fn("epsilon");
  ex.spec.gamma = fn("gamma");
  ex.spec.c00 = fn("c00");
  ex.spec.c11 = fn("c11");
  ex.spec.c10_re = fn("c10_re");
  ex.spec.c10_im = fn("c10_im");
  if (auto mu = root.find("mu")) {
    ex.spec.mu = mu->number();
    if (ex.spec.mu < 0.0 || ex.spec.mu > 1.0) mu->fail("must lie in [0, 1]");
  }
  ex.initial = density_matrix(root.find("initial_state"), 2);
  return ex;
}

KernelExperiment parse_kernel(const Node& root) {
  const auto sig = root.at("signal");
  sig.expect_object({"rate", "exponentials"});
  if (sig.has("rate") == sig.has("exponentials")) sig.fail("exactly one of 'rate' or 'exponentials' is required");
  auto build = [&]() -> kernel::ModeSignal {
    if (auto r = sig.find("rate")) {
      r->expect_object({"re", "im"});
      return kernel::ModeSignal::from_rate(ComplexTimeFunction(
          time_function(r->at("re")), r->has("im") ? time_function(r->at("im")) : TimeFunction{}));
    }
    const auto e = sig.at("exponentials");
    e.expect_object({"weights", "rates"});
    std::vector<cplx> w, r;
    for (const auto& x : e.at("weights").elements()) w.push_back(x.complex());
    for (const auto& x : e.at("rates").elements()) r.push_back(x.complex());
    if (w.size() != r.size() || w.empty()) e.fail("weights and rates must be non-empty and equally long");
    try {
      return kernel::ModeSignal::from_exponentials(std::move(w), std::move(r));
    } catch (const NormalizationError& err) {
      e.at("weights").fail(err.what());
    }
  };
  KernelExperiment ex{build(), s_values(root.at("s")), std::nullopt};
  require_positive_s(root.at("s"), ex.s);
  if (auto v = root.find("volterra")) {
    v->expect_object({"horizon", "step"});
    VolterraSettings vs;
    if (v->has("horizon")) vs.horizon = v->at("horizon").number();
    if (v->has("step")) vs.step = v->at("step").number();
    if (!(vs.horizon > 0.0) || !(vs.step > 0.0) || vs.step >= vs.horizon) v->fail("need 0 < step < horizon");
    if (!ex.signal.exponentials()) v->fail("Volterra check needs an exponential-sum signal");
    ex.volterra = vs;
  }
  return ex;
}

}  // namespace

std::vector<double> TimeGrid::points() const {
  std::vector<double> out;
  for (int i = 0; i < samples; ++i) out.push_back(samples == 1 ? t : t0 + (t - t0) * i / (samples - 1));
  return out;
}

ExperimentConfig parse_config(const json& doc) {
  const Node root(doc, "");
  if (!root.is_object()) root.fail("config must be a JSON object");
  ExperimentConfig cfg;
  cfg.source = doc;
  cfg.kind = root.at("kind").string();

  static const std::vector<std::string> kinds{"classical", "weyl", "mixture", "resolvent", "qubit", "kernel"};
  if (std::find(kinds.begin(), kinds.end(), cfg.kind) == kinds.end())
    root.at("kind").fail("unknown experiment kind '" + cfg.kind + "'");

  const std::set<std::string> common{"kind", "oracle", "output"};
  const std::map<std::string, std::set<std::string>> per_kind{
      {"classical", {"dims", "mode", "time", "rates", "initial"}},
      {"weyl", {"dims", "mode", "time", "rates", "field", "initial_state"}},
      {"mixture", {"dims", "time", "generators", "weights", "initial_state"}},
      {"resolvent", {"dims", "generator", "s", "k"}},
      {"qubit", {"mode", "time", "epsilon", "gamma", "c00", "c11", "c10_re", "c10_im", "mu", "initial_state"}},
      {"kernel", {"signal", "s", "volterra"}},
  };
  const auto& allowed = per_kind.at(cfg.kind);
  for (const auto& item : doc.items())
    if (!common.count(item.key()) && !allowed.count(item.key()))
      Node(item.value(), item.key()).fail("unknown key for kind '" + cfg.kind + "'");

  if (allowed.count("dims")) {
    const auto dims = root.at("dims");
    dims.expect_object({"d", "N"});
    cfg.d = dims.at("d").integer();
    if (cfg.d < 2) dims.at("d").fail("must be an integer >= 2");
    if (auto n = dims.find("N")) {
      cfg.parties = n->integer();
      if (cfg.parties < 1) n->fail("must be an integer >= 1");
    }
    const double size = std::pow(static_cast<double>(cfg.d), cfg.parties);
    const double cap = cfg.kind == "classical" ? 4096.0 : 16.0;
    if (size > cap) dims.fail("d^N = " + std::to_string(static_cast<long long>(size)) + " exceeds " +
                              std::to_string(static_cast<int>(cap)) + " for kind '" + cfg.kind + "'");
  } else if (cfg.kind == "qubit") {
    cfg.d = 2;
  }

  if (auto m = root.find("mode")) {
    const auto s = m->string();
    if (s == "markov") cfg.mode = Mode::markov;
    else if (s == "nonmarkov") cfg.mode = Mode::nonmarkov;
    else m->fail("expected 'markov' or 'nonmarkov'");
  }

  if (allowed.count("time")) {
    const bool needs_time = !(cfg.kind == "weyl" && doc.contains("field"));
    if (needs_time || root.has("time")) {
      const auto t = root.at("time");
      t.expect_object({"t0", "t", "samples"});
      TimeGrid grid;
      if (t.has("t0")) grid.t0 = t.at("t0").number();
      grid.t = t.at("t").number();
      if (t.has("samples")) grid.samples = t.at("samples").integer();
      if (grid.samples < 1) t.at("samples").fail("must be >= 1");
      if (grid.t < grid.t0) t.at("t").fail("must not precede t0");
      cfg.time = grid;
    }
  }

  if (auto o = root.find("oracle")) {
    o->expect_object({"enabled", "tol", "steps"});
    if (o->has("enabled")) cfg.oracle.enabled = o->at("enabled").boolean();
    if (o->has("tol")) cfg.oracle.tol = o->at("tol").number();
    if (o->has("steps")) cfg.oracle.steps_per_unit = o->at("steps").integer();
    if (cfg.oracle.steps_per_unit < 1) o->at("steps").fail("must be >= 1");
  }
  if (auto out = root.find("output")) cfg.output = out->string();

  const int dim = cfg.d > 0 ? static_cast<int>(lattice_size(cfg.d, cfg.parties)) : 0;
  if (cfg.kind == "classical") cfg.experiment = parse_classical(root, cfg.d, cfg.parties);
  else if (cfg.kind == "weyl") cfg.experiment = parse_weyl(root, cfg.d, cfg.parties);
  else if (cfg.kind == "mixture") cfg.experiment = parse_mixture(root, dim);
  else if (cfg.kind == "resolvent") cfg.experiment = parse_resolvent(root, dim);
  else if (cfg.kind == "qubit") cfg.experiment = parse_qubit(root);
  else cfg.experiment = parse_kernel(root);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("", "cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError("", "'" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

TimeFunction parse_time_function(const json& j, const std::string& path) { return time_function(Node(j, path)); }

ComplexMatrix parse_matrix(const json& j, const std::string& path, int dim) { return matrix(Node(j, path), dim); }

}  // namespace commudyn::cli
