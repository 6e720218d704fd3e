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
#include <iostream>

#include <CLI11.hpp>

#include "app.hpp"

int main(int argc, char** argv) {
  using namespace commudyn::cli;
  CLI::App app{"commudyn: commutative quantum and classical dynamics experiments"};
  app.require_subcommand(1);

  RunOptions run;
  bool oracle = false;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment config and write CSV/JSON results");
  run_cmd->add_option("config", run.config, "Experiment config (JSON)")->required();
  auto* oracle_flag = run_cmd->add_flag("--oracle", oracle, "Add ordered-exponential cross-check columns");
  auto* tol_opt = run_cmd->add_option("--tol", "Oracle tolerance");
  auto* steps_opt = run_cmd->add_option("--steps", "Oracle midpoint steps per unit time");
  run_cmd->add_option("--out", run.out, "Results path (sidecar written to <path>.sidecar.json)");
  run_cmd->add_option("--format", run.format, "Results format")->check(CLI::IsMember({"csv", "json"}));

  std::string validate_config, validate_out;
  auto* val_cmd = app.add_subcommand("validate", "Run condition checks on a config, or the built-in self-test");
  val_cmd->add_option("config", validate_config, "Experiment config (JSON); omit for the self-test");
  val_cmd->add_option("--out", validate_out, "Write the JSON report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitSchemaOrIo;
  }

  if (*run_cmd) {
    if (*oracle_flag) run.oracle = oracle;
    if (*tol_opt) run.tol = tol_opt->as<double>();
    if (*steps_opt) run.steps = steps_opt->as<int>();
    return run_command(run, std::cout, std::cerr);
  }
  return validate_command(validate_config.empty() ? std::nullopt : std::optional<std::string>(validate_config),
                          validate_out, std::cout, std::cerr);
}
