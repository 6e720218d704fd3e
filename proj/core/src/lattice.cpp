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
#include "commudyn/lattice.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "commudyn/errors.hpp"

namespace commudyn {

std::vector<cplx> roots_of_unity(int d) {
  if (d < 1) throw std::invalid_argument("roots_of_unity: d must be positive");
  std::vector<cplx> out(d);
  for (int r = 0; r < d; ++r) {
    if ((4 * r) % d == 0) {
      switch ((4 * r) / d) {
        case 0: out[r] = {1.0, 0.0}; break;
        case 1: out[r] = {0.0, 1.0}; break;
        case 2: out[r] = {-1.0, 0.0}; break;
        default: out[r] = {0.0, -1.0}; break;
      }
    } else {
      out[r] = std::polar(1.0, 2.0 * kPi * r / d);
    }
  }
  return out;
}

std::size_t lattice_size(int d, int axes) {
  if (d < 2) throw std::invalid_argument("lattice: d must be >= 2, got " + std::to_string(d));
  if (axes < 1) throw std::invalid_argument("lattice: need at least one axis");
  std::size_t n = 1;
  for (int a = 0; a < axes; ++a) {
    n *= static_cast<std::size_t>(d);
    if (n > (std::size_t{1} << 26)) throw std::invalid_argument("lattice: size d^axes too large for dense storage");
  }
  return n;
}

LatticeField::LatticeField(int d, int axes) : d_(d), axes_(axes), values_(lattice_size(d, axes)) {}

LatticeField::LatticeField(int d, int axes, std::vector<cplx> values)
    : d_(d), axes_(axes), values_(std::move(values)) {
  if (values_.size() != lattice_size(d, axes))
    throw DimensionMismatch("LatticeField: expected " + std::to_string(lattice_size(d, axes)) + " values, got " +
                            std::to_string(values_.size()));
  for (const auto& v : values_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw NonFiniteValue("LatticeField: non-finite value");
}

LatticeField LatticeField::unit(int d, int axes) {
  LatticeField e(d, axes);
  e[0] = 1.0;
  return e;
}

LatticeField LatticeField::from_real(int d, int axes, std::span<const double> values) {
  std::vector<cplx> v(values.begin(), values.end());
  return LatticeField(d, axes, std::move(v));
}

std::size_t LatticeField::flat_index(std::span<const int> multi) const {
  if (static_cast<int>(multi.size()) != axes_)
    throw DimensionMismatch("LatticeField: multi-index has " + std::to_string(multi.size()) + " axes, field has " +
                            std::to_string(axes_));
  std::size_t flat = 0;
  for (int m : multi) {
    const int r = ((m % d_) + d_) % d_;
    flat = flat * static_cast<std::size_t>(d_) + static_cast<std::size_t>(r);
  }
  return flat;
}

MultiIndex LatticeField::multi_index(std::size_t flat) const {
  MultiIndex out(axes_);
  for (int a = axes_ - 1; a >= 0; --a) {
    out[a] = static_cast<int>(flat % static_cast<std::size_t>(d_));
    flat /= static_cast<std::size_t>(d_);
  }
  return out;
}

std::vector<double> LatticeField::real_values() const {
  std::vector<double> out(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) out[i] = values_[i].real();
  return out;
}

cplx LatticeField::sum() const {
  cplx s = 0.0;
  for (const auto& v : values_) s += v;
  return s;
}

double LatticeField::max_abs_diff(const LatticeField& other) const {
  if (!same_shape(other)) throw DimensionMismatch("LatticeField: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) m = std::max(m, std::abs(values_[i] - other.values_[i]));
  return m;
}

double LatticeField::max_imag() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::abs(v.imag()));
  return m;
}

bool LatticeField::is_probability(double tol) const {
  double total = 0.0;
  for (const auto& v : values_) {
    if (std::abs(v.imag()) > tol || v.real() < -tol) return false;
    total += v.real();
  }
  return std::abs(total - 1.0) <= tol;
}

}  // namespace commudyn
