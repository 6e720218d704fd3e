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

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "config.hpp"

namespace commudyn::cli {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct RunResult {
  Table table;
  // Condition reports gathered while running (Kolmogorov, channel, ...).
  json reports = json::object();
  // {"enabled", "tol", "steps", "max_residual", "passed"}
  json oracle = json::object();
};

// Dispatches on cfg.kind. Module errors propagate unchanged.
RunResult run_experiment(const ExperimentConfig& cfg);

// {"kind", "checks": [...], "passed"}
json validate_experiment(const ExperimentConfig& cfg);
// Built-in suite over d in {2, 3}, N in {1, 2}.
json self_test();

// Header row plus one line per row, 17 significant digits.
std::string to_csv(const Table& table);
json to_json(const Table& table);

json witness_json(const Witness& w);

}  // namespace commudyn::cli
