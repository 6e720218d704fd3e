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

#include <iosfwd>
#include <optional>
#include <string>

namespace commudyn::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitSchemaOrIo = 1;
inline constexpr int kExitPrecondition = 2;

struct RunOptions {
  std::string config;
  std::optional<bool> oracle;
  std::optional<double> tol;
  std::optional<int> steps;
  // Empty: use the config's "output", else stdout.
  std::string out;
  std::string format = "csv";
};

// Results go to opts.out (or the config's output path) with a sidecar at
// <path>.sidecar.json; without a path the table is written to out.
int run_command(const RunOptions& opts, std::ostream& out, std::ostream& err);

// Validation report as JSON on out (or written to out_path). Exit 0 when all
// checks pass, 2 when any fails, 1 on schema or I/O errors.
int validate_command(const std::optional<std::string>& config, const std::string& out_path, std::ostream& out,
                     std::ostream& err);

std::string sidecar_path(const std::string& results_path);

}  // namespace commudyn::cli
