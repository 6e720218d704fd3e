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
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <doctest.h>

#include "app.hpp"
#include "config.hpp"
#include "runner.hpp"

using namespace commudyn;
using namespace commudyn::cli;
namespace fs = std::filesystem;

namespace {

std::string config_path(const std::string& name) { return std::string(COMMUDYN_CONFIG_DIR) + "/" + name; }

json read_json(const std::string& path) {
  std::ifstream in(path);
  return json::parse(in);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "commudyn_test_cli";
  fs::create_directories(dir);
  return dir / name;
}

std::string schema_path(const json& doc) {
  try {
    parse_config(doc);
  } catch (const SchemaError& e) {
    return e.path();
  }
  return "<accepted>";
}

json classical_doc() {
  return json::parse(R"({"kind": "classical", "dims": {"d": 2, "N": 1}, "time": {"t": 1.0},
                         "rates": [{"index": [1], "f": 0.5}]})");
}

}  // namespace

TEST_CASE("schema violations name the offending path") {
  auto doc = classical_doc();
  doc["dims"]["d"] = 1;
  CHECK(schema_path(doc) == "dims.d");

  doc = classical_doc();
  doc["colour"] = "blue";
  CHECK(schema_path(doc) == "colour");

  doc = classical_doc();
  doc["rates"][0]["f"] = json{{"kind", "bessel"}};
  CHECK(schema_path(doc) == "rates[0].f.kind");

  doc = classical_doc();
  doc["rates"][0]["f"] = json{{"kind", "constant"}, {"value", 1.0}, {"extra", 2}};
  CHECK(schema_path(doc) == "rates[0].f.extra");

  doc = classical_doc();
  doc.erase("time");
  CHECK(schema_path(doc) == "time");

  doc = classical_doc();
  doc["mode"] = "sideways";
  CHECK(schema_path(doc) == "mode");

  doc = classical_doc();
  doc["rates"][0]["index"] = json::array({0});
  CHECK(schema_path(doc) == "rates[0].index");

  doc = classical_doc();
  doc["initial"] = json::array({0.3, 0.3});
  CHECK(schema_path(doc) == "initial");

  // "field" is not a classical key.
  doc = classical_doc();
  doc["field"] = json::array();
  CHECK(schema_path(doc) == "field");

  CHECK(schema_path(json::parse(R"({"kind": "tensor"})")) == "kind");
  CHECK(schema_path(json::parse(R"([1, 2])")) == "<root>");
}

TEST_CASE("time-function specs map onto the core kinds") {
  const auto check_fn = [](const char* text, const TimeFunction& expected) {
    const auto f = parse_time_function(json::parse(text), "f");
    for (double t : {0.0, 0.3, 1.7, 4.0}) CHECK(f(t) == doctest::Approx(expected(t)).epsilon(1e-15));
  };
  check_fn("2.5", TimeFunction::constant(2.5));
  check_fn(R"({"kind": "constant", "value": -1})", TimeFunction::constant(-1.0));
  check_fn(R"({"kind": "polynomial", "coeffs": [1, 0, 3]})", TimeFunction::polynomial({1, 0, 3}));
  check_fn(R"({"kind": "damped-trig", "amplitude": 2, "decay": 0.5, "frequency": 3, "phase": 0.1})",
           TimeFunction::damped_trig(2, 0.5, 3, 0.1));
  check_fn(R"({"kind": "sine", "amplitude": 2, "frequency": 3})", TimeFunction::sine(2, 3));
  check_fn(R"({"kind": "cosine"})", TimeFunction::cosine(1, 1));
  check_fn(R"({"kind": "tabulated", "times": [0, 1, 2], "values": [0, 2, 1]})",
           TimeFunction::tabulated({0, 1, 2}, {0, 2, 1}));
  check_fn(R"({"kind": "sum", "terms": [1, {"kind": "sine", "amplitude": 0.5, "frequency": 2}]})",
           TimeFunction::constant(1) + TimeFunction::sine(0.5, 2));
  CHECK_THROWS_AS(parse_time_function(json::parse(R"({"kind": "tabulated", "times": [1, 0], "values": [0, 1]})"), "f"),
                  SchemaError);
}

TEST_CASE("matrices and states are validated") {
  const auto m = parse_matrix(json::parse("[[1, [0, 2]], [[0, -2], 3]]"), "h", 2);
  CHECK(m(0, 1) == cplx(0, 2));
  CHECK(m(1, 0) == cplx(0, -2));
  CHECK_THROWS_AS(parse_matrix(json::parse("[[1, 0]]"), "h", 2), SchemaError);

  auto doc = json::parse(R"({"kind": "qubit", "time": {"t": 1}, "gamma": 1, "initial_state": [[0.5, 0], [0, 0.4]]})");
  CHECK(schema_path(doc) == "initial_state");
  doc["initial_state"] = json::parse("[[1.2, 0], [0, -0.2]]");
  CHECK(schema_path(doc) == "initial_state");
  doc["mu"] = 1.5;
  doc.erase("initial_state");
  CHECK(schema_path(doc) == "mu");
}

TEST_CASE("qubit demo relaxes to the fixed point") {
  const auto cfg = load_config(config_path("qubit_demo.json"));
  const auto res = run_experiment(cfg);
  REQUIRE(res.table.columns.size() == 6);
  CHECK(res.table.columns[2] == "rho11");
  const double mu = std::get<QubitExperiment>(cfg.experiment).spec.mu;
  const auto& last = res.table.rows.back();
  CHECK(last[0] == doctest::Approx(20.0));
  // Relaxation at rate gamma = 1: e^{-20} ~ 2e-9.
  CHECK(std::abs(last[2] - mu) < 1e-8);
  CHECK(std::abs(last[1] + last[2] - 1.0) < 1e-12);
  CHECK(std::abs(res.table.rows.front()[1] - 1.0) < 1e-15);
}

TEST_CASE("classical two-site config follows the closed-form law") {
  const auto res = run_experiment(load_config(config_path("classical_two_site.json")));
  REQUIRE(res.table.columns == std::vector<std::string>{"t", "P_0", "P_1"});
  for (const auto& row : res.table.rows) {
    const double e = std::exp(-2.0 * 0.7 * row[0]);
    CHECK(std::abs(row[1] - 0.5 * (1 + e)) < 1e-12);
    CHECK(std::abs(row[2] - 0.5 * (1 - e)) < 1e-12);
  }
  CHECK(res.reports["kolmogorov"]["passed"] == true);
}

TEST_CASE("every shipped config runs with oracle residuals inside tolerance") {
  for (const auto& entry : fs::directory_iterator(COMMUDYN_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    CAPTURE(entry.path().filename().string());
    auto cfg = load_config(entry.path().string());
    cfg.oracle.enabled = true;
    const auto res = run_experiment(cfg);
    CHECK(!res.table.rows.empty());
    for (const auto& row : res.table.rows) CHECK(row.size() == res.table.columns.size());
    CHECK(res.oracle["passed"] == true);
    CHECK(res.oracle["max_residual"].get<double>() < cfg.oracle.tol);
  }
}

TEST_CASE("CSV uses 17 significant digits and round-trips exactly") {
  Table t{{"a", "b"}, {{1.0 / 3.0, std::exp(1.0)}, {-1e-300, 12345678.901234567}}};
  const std::string csv = to_csv(t);
  std::istringstream in(csv);
  std::string header, line;
  std::getline(in, header);
  CHECK(header == "a,b");
  for (const auto& row : t.rows) {
    std::getline(in, line);
    const auto comma = line.find(',');
    CHECK(std::strtod(line.substr(0, comma).c_str(), nullptr) == row[0]);
    CHECK(std::strtod(line.substr(comma + 1).c_str(), nullptr) == row[1]);
  }
  CHECK(csv.find("0.33333333333333331") != std::string::npos);
}

TEST_CASE("runs are deterministic and the sidecar echo reproduces them") {
  const auto out1 = scratch("ring1.csv").string(), out2 = scratch("ring2.csv").string();
  std::ostringstream sink, err;
  RunOptions opts;
  opts.config = config_path("classical_ring_driven.json");
  opts.out = out1;
  REQUIRE(run_command(opts, sink, err) == kExitOk);
  opts.out = out2;
  REQUIRE(run_command(opts, sink, err) == kExitOk);
  CHECK(read_text(out1) == read_text(out2));

  const auto sidecar = read_json(sidecar_path(out1));
  CHECK(sidecar.contains("wall_time_s"));
  CHECK(sidecar["oracle"]["passed"] == true);
  CHECK(sidecar["reports"]["kolmogorov"]["passed"] == true);

  const auto echo_path = scratch("ring_echo.json").string();
  std::ofstream(echo_path) << sidecar["config"].dump(2);
  const auto out3 = scratch("ring3.csv").string();
  opts.config = echo_path;
  opts.out = out3;
  REQUIRE(run_command(opts, sink, err) == kExitOk);
  CHECK(read_text(out1) == read_text(out3));
}

TEST_CASE("flags override the oracle settings and the format") {
  std::ostringstream out, err;
  RunOptions opts;
  opts.config = config_path("classical_two_site.json");
  opts.oracle = true;
  opts.steps = 512;
  opts.format = "json";
  REQUIRE(run_command(opts, out, err) == kExitOk);
  const auto table = json::parse(out.str());
  CHECK(table["columns"].back() == "oracle_residual");
  CHECK(table["rows"].size() == 31);

  const auto path = scratch("two_site.csv").string();
  opts.format = "csv";
  opts.out = path;
  opts.tol = 1e-30;
  REQUIRE(run_command(opts, out, err) == kExitOk);
  const auto sidecar = read_json(sidecar_path(path));
  CHECK(sidecar["config"]["oracle"]["steps"] == 512);
  CHECK(sidecar["oracle"]["passed"] == false);
  CHECK(err.str().find("warning") != std::string::npos);
}

TEST_CASE("exit codes") {
  std::ostringstream out, err;
  RunOptions opts;

  const auto bad = scratch("bad_d.json").string();
  auto doc = classical_doc();
  doc["dims"]["d"] = 1;
  std::ofstream(bad) << doc.dump();
  opts.config = bad;
  CHECK(run_command(opts, out, err) == kExitSchemaOrIo);
  CHECK(err.str().find("dims.d") != std::string::npos);

  opts.config = scratch("does_not_exist.json").string();
  CHECK(run_command(opts, out, err) == kExitSchemaOrIo);

  const auto negative = scratch("negative.json").string();
  doc = classical_doc();
  doc["rates"][0]["f"] = -0.5;
  std::ofstream(negative) << doc.dump();
  opts.config = negative;
  opts.out = scratch("negative.csv").string();
  err.str("");
  CHECK(run_command(opts, out, err) == kExitPrecondition);
  CHECK(err.str().find("index=(1)") != std::string::npos);
  const auto sidecar = read_json(sidecar_path(opts.out));
  CHECK(sidecar["error"]["witness"]["index"] == json::array({1}));

  opts.out = (scratch("missing_dir") / "nested" / "x.csv").string();
  opts.config = config_path("classical_two_site.json");
  CHECK(run_command(opts, out, err) == kExitSchemaOrIo);
}

TEST_CASE("validate reports pass/fail with witnesses") {
  const auto weyl_report = validate_experiment(load_config(config_path("weyl_two_qubit_channel.json")));
  CHECK(weyl_report["passed"] == true);
  CHECK(weyl_report["checks"].size() == 2);

  auto doc = classical_doc();
  doc["rates"][0]["f"] = json{{"kind", "sine"}, {"amplitude", 1.0}, {"frequency", 1.0}};
  doc["time"] = json{{"t0", 0.0}, {"t", 6.0}};
  const auto report = validate_experiment(parse_config(doc));
  CHECK(report["passed"] == false);
  const auto& k = report["checks"][0];
  CHECK(k["name"] == "kolmogorov");
  CHECK(k["first_violation"]["index"] == json::array({1}));
  const double when = k["first_violation"]["time"].get<double>();
  CHECK(when > kPi);
  CHECK(when < 2 * kPi);

  doc["mode"] = "nonmarkov";
  doc["time"]["t"] = 3.0;
  CHECK(validate_experiment(parse_config(doc))["passed"] == true);

  for (const auto& entry : fs::directory_iterator(COMMUDYN_CONFIG_DIR)) {
    CAPTURE(entry.path().filename().string());
    CHECK(validate_experiment(load_config(entry.path().string()))["passed"] == true);
  }
}

TEST_CASE("self-test covers d in {2,3} and N in {1,2}") {
  const auto report = self_test();
  CHECK(report["passed"] == true);
  std::set<std::pair<int, int>> seen;
  for (const auto& c : report["checks"]) seen.insert({c["d"].get<int>(), c["N"].get<int>()});
  CHECK(seen == std::set<std::pair<int, int>>{{2, 1}, {2, 2}, {3, 1}, {3, 2}});
  std::ostringstream out, err;
  CHECK(validate_command(std::nullopt, "", out, err) == kExitOk);
  CHECK(json::parse(out.str())["passed"] == true);
}
