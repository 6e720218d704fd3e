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
#include "app.hpp"

#include <chrono>
#include <fstream>
#include <ostream>

#include "config.hpp"
#include "runner.hpp"

namespace commudyn::cli {
namespace {

bool write_file(const std::string& path, const std::string& text, std::ostream& err) {
  std::ofstream f(path, std::ios::binary);
  if (f) f << text;
  if (!f) {
    err << "error: cannot write '" << path << "'\n";
    return false;
  }
  return true;
}

json error_json(const std::exception& e) {
  json j{{"type", "precondition"}, {"message", e.what()}};
  if (const auto* p = dynamic_cast<const PreconditionFailed*>(&e)) j["witness"] = witness_json(p->witness());
  if (const auto* p = dynamic_cast<const NonProbabilisticResult*>(&e)) j["witness"] = witness_json(p->witness());
  if (const auto* p = dynamic_cast<const InvalidWeights*>(&e)) j["witness"] = witness_json(p->witness());
  return j;
}

}  // namespace

std::string sidecar_path(const std::string& results_path) { return results_path + ".sidecar.json"; }

int run_command(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  try {
    cfg = load_config(opts.config);
  } catch (const SchemaError& e) {
    err << "error: " << e.what() << "\n";
    return kExitSchemaOrIo;
  }
  if (opts.format != "csv" && opts.format != "json") {
    err << "error: --format must be csv or json\n";
    return kExitSchemaOrIo;
  }
  if (opts.oracle) cfg.oracle.enabled = *opts.oracle;
  if (opts.tol) cfg.oracle.tol = *opts.tol;
  if (opts.steps) {
    if (*opts.steps < 1) {
      err << "error: --steps must be >= 1\n";
      return kExitSchemaOrIo;
    }
    cfg.oracle.steps_per_unit = *opts.steps;
  }
  const std::string path = opts.out.empty() ? cfg.output : opts.out;

  // Echo with the effective oracle settings so the echo reproduces this run.
  json echo = cfg.source;
  echo["oracle"] = {{"enabled", cfg.oracle.enabled}, {"tol", cfg.oracle.tol}, {"steps", cfg.oracle.steps_per_unit}};
  echo.erase("output");
  json sidecar{{"config", echo}};

  const auto start = std::chrono::steady_clock::now();
  RunResult result;
  int code = kExitOk;
  try {
    result = run_experiment(cfg);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    sidecar["error"] = error_json(e);
    code = kExitPrecondition;
  }
  sidecar["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (code == kExitOk) {
    sidecar["reports"] = result.reports;
    sidecar["oracle"] = result.oracle;
    if (result.oracle.value("enabled", false) && !result.oracle.value("passed", false))
      err << "warning: oracle residual " << result.oracle["max_residual"].dump() << " exceeds tol "
          << cfg.oracle.tol << "\n";
    const std::string body = opts.format == "csv" ? to_csv(result.table) : to_json(result.table).dump(2) + "\n";
    if (path.empty()) {
      out << body;
    } else if (!write_file(path, body, err)) {
      return kExitSchemaOrIo;
    }
  }
  if (!path.empty() && !write_file(sidecar_path(path), sidecar.dump(2) + "\n", err)) return kExitSchemaOrIo;
  return code;
}

int validate_command(const std::optional<std::string>& config, const std::string& out_path, std::ostream& out,
                     std::ostream& err) {
  json report;
  try {
    report = config ? validate_experiment(load_config(*config)) : self_test();
  } catch (const SchemaError& e) {
    err << "error: " << e.what() << "\n";
    return kExitSchemaOrIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitPrecondition;
  }
  const std::string text = report.dump(2) + "\n";
  if (out_path.empty()) {
    out << text;
  } else if (!write_file(out_path, text, err)) {
    return kExitSchemaOrIo;
  }
  return report["passed"].get<bool>() ? kExitOk : kExitPrecondition;
}

}  // namespace commudyn::cli
