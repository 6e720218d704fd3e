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

#include <span>
#include <vector>

#include "commudyn/types.hpp"

namespace commudyn {

// Powers lambda^r, r = 0..d-1, of lambda = exp(2 pi i / d). Entries at
// multiples of a quarter turn are exact.
std::vector<cplx> roots_of_unity(int d);

// Complex-valued function on Z_d^axes stored flat. Multi-indices are laid out
// row-major with axis 0 slowest (party 1 slowest).
class LatticeField {
 public:
  LatticeField() = default;
  LatticeField(int d, int axes);
  LatticeField(int d, int axes, std::vector<cplx> values);

  // e(m) = delta_{m,0}.
  static LatticeField unit(int d, int axes);
  static LatticeField from_real(int d, int axes, std::span<const double> values);

  int d() const { return d_; }
  int axes() const { return axes_; }
  std::size_t size() const { return values_.size(); }

  cplx& operator[](std::size_t flat) { return values_[flat]; }
  const cplx& operator[](std::size_t flat) const { return values_[flat]; }
  cplx& at(std::span<const int> multi) { return values_[flat_index(multi)]; }
  const cplx& at(std::span<const int> multi) const { return values_[flat_index(multi)]; }

  // Entries are reduced mod d, so negative components are allowed.
  std::size_t flat_index(std::span<const int> multi) const;
  MultiIndex multi_index(std::size_t flat) const;

  std::span<const cplx> values() const { return values_; }
  std::span<cplx> values() { return values_; }
  std::vector<double> real_values() const;

  bool same_shape(const LatticeField& other) const { return d_ == other.d_ && axes_ == other.axes_; }
  cplx sum() const;
  double max_abs_diff(const LatticeField& other) const;
  double max_imag() const;
  // Real, >= -tol entrywise, summing to 1 +- tol.
  bool is_probability(double tol = kDefaultTol) const;

 private:
  int d_ = 0;
  int axes_ = 0;
  std::vector<cplx> values_;
};

// d^n as size_t, throwing if it would be absurdly large for dense work.
std::size_t lattice_size(int d, int axes);

}  // namespace commudyn
