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
#include "commudyn/errors.hpp"

#include <sstream>

namespace commudyn {

std::string Witness::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << condition;
  if (!std::isnan(time)) os << " at t=" << time;
  if (!index.empty()) {
    os << " index=(";
    for (std::size_t i = 0; i < index.size(); ++i) os << (i ? "," : "") << index[i];
    os << ")";
  }
  if (!std::isnan(value)) os << " value=" << value;
  return os.str();
}

namespace {
std::string singular_message(std::size_t mode, double time, double modulus) {
  std::ostringstream os;
  os.precision(17);
  os << "eigenvalue of mode " << mode << " vanishes at t=" << time << " (|c|=" << modulus << ")";
  return os.str();
}
}  // namespace

SingularEigenvalue::SingularEigenvalue(std::size_t mode, double time, double modulus)
    : Error(singular_message(mode, time, modulus)), mode_(mode), time_(time), modulus_(modulus) {}

}  // namespace commudyn
