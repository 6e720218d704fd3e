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

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "commudyn/types.hpp"

namespace commudyn {

// Describes which condition failed, where, and by how much.
struct Witness {
  std::string condition;
  double time = std::numeric_limits<double>::quiet_NaN();
  MultiIndex index;
  double value = std::numeric_limits<double>::quiet_NaN();

  // Witness without a time or index.
  static Witness of(std::string condition, double value) {
    Witness w;
    w.condition = std::move(condition);
    w.value = value;
    return w;
  }

  std::string describe() const;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NonFiniteValue : public Error {
 public:
  using Error::Error;
};

class NonOrthonormalBasis : public Error {
 public:
  using Error::Error;
};

// Raised when a map has non-trivial Jordan blocks (eigenvector matrix too
// ill-conditioned to trust a damping basis).
class DefectiveMap : public Error {
 public:
  DefectiveMap(const std::string& what, double condition_number)
      : Error(what), condition_number_(condition_number) {}
  double condition_number() const { return condition_number_; }

 private:
  double condition_number_;
};

class UndefinedFunctionValue : public Error {
 public:
  using Error::Error;
};

class PreconditionFailed : public Error {
 public:
  explicit PreconditionFailed(Witness witness)
      : Error("precondition failed: " + witness.describe()), witness_(std::move(witness)) {}
  const Witness& witness() const { return witness_; }

 private:
  Witness witness_;
};

class NonProbabilisticResult : public Error {
 public:
  explicit NonProbabilisticResult(Witness witness)
      : Error("result is not a probability vector: " + witness.describe()), witness_(std::move(witness)) {}
  const Witness& witness() const { return witness_; }

 private:
  Witness witness_;
};

class NormalizationError : public Error {
 public:
  using Error::Error;
};

class InvalidWeights : public Error {
 public:
  explicit InvalidWeights(Witness witness)
      : Error("invalid mixture weights: " + witness.describe()), witness_(std::move(witness)) {}
  const Witness& witness() const { return witness_; }

 private:
  Witness witness_;
};

class InvalidGeneratorSet : public Error {
 public:
  using Error::Error;
};

class SingularEigenvalue : public Error {
 public:
  SingularEigenvalue(std::size_t mode, double time, double modulus);
  std::size_t mode() const { return mode_; }
  double time() const { return time_; }
  double modulus() const { return modulus_; }

 private:
  std::size_t mode_;
  double time_;
  double modulus_;
};

class SingularResolvent : public Error {
 public:
  using Error::Error;
};

class QuadratureNotConverged : public Error {
 public:
  QuadratureNotConverged(const std::string& what, double change)
      : Error(what), change_(change) {}
  double change() const { return change_; }

 private:
  double change_;
};

class DivergentTransform : public Error {
 public:
  using Error::Error;
};

class PoleEncountered : public Error {
 public:
  using Error::Error;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

}  // namespace commudyn
