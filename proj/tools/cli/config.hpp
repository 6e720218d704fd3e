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

// Experiment configuration: a JSON document validated against a fixed schema
// before anything is dispatched to the core library.

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "commudyn/commudyn.hpp"

namespace commudyn::cli {

using nlohmann::json;

// Schema violation; path() names the offending key, e.g. "dims.d".
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct TimeGrid {
  double t0 = 0.0;
  double t = 1.0;
  int samples = 11;
  std::vector<double> points() const;
};

struct OracleSettings {
  bool enabled = false;
  double tol = 1e-7;
  int steps_per_unit = oracle::kDefaultStepsPerUnit;
};

struct ClassicalExperiment {
  classical::CirculantGenerator generator;
  LatticeField initial;
};

struct WeylExperiment {
  // Exactly one of rates (generator, trajectory output) or field (channel,
  // spectrum output) is present.
  std::optional<classical::CirculantGenerator> rates;
  std::optional<LatticeField> field;
  ComplexMatrix initial;
};

struct MixtureExperiment {
  std::vector<TimeFunction> weights;
  std::vector<superop::SuperOperator> generators;
  ComplexMatrix initial;
};

struct ResolventExperiment {
  superop::SuperOperator generator;
  std::vector<double> s;
  std::vector<int> k;
};

struct QubitExperiment {
  qubit::QubitSpec spec;
  ComplexMatrix initial;
};

struct VolterraSettings {
  double horizon = 5.0;
  double step = 1e-3;
};

struct KernelExperiment {
  kernel::ModeSignal signal;
  std::vector<double> s;
  std::optional<VolterraSettings> volterra;
};

using Experiment = std::variant<ClassicalExperiment, WeylExperiment, MixtureExperiment, ResolventExperiment,
                                QubitExperiment, KernelExperiment>;

struct ExperimentConfig {
  std::string kind;
  int d = 0;
  int parties = 1;
  Mode mode = Mode::markov;
  std::optional<TimeGrid> time;
  OracleSettings oracle;
  std::string output;
  Experiment experiment;
  // The document as read, for echoing into the sidecar.
  json source;
};

ExperimentConfig parse_config(const json& doc);
// Reads and parses a file; I/O failures surface as SchemaError on path "".
ExperimentConfig load_config(const std::string& path);

// Building blocks, exposed for tests.
TimeFunction parse_time_function(const json& j, const std::string& path);
ComplexMatrix parse_matrix(const json& j, const std::string& path, int dim);

}  // namespace commudyn::cli
