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
#include "commudyn/timefn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "commudyn/errors.hpp"
#include "commudyn/quadrature.hpp"

namespace commudyn {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double poly_eval(const std::vector<double>& c, double t) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
  return acc;
}

double poly_antiderivative(const std::vector<double>& c, double t) {
  double acc = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * t + c[k] / static_cast<double>(k + 1);
  return acc * t;
}

double poly_derivative(const std::vector<double>& c, double t) {
  double acc = 0.0;
  for (std::size_t k = c.size(); k-- > 1;) acc = acc * t + c[k] * static_cast<double>(k);
  return acc;
}

// Integral of exp(z u) over [a, b] for complex z, stable as z -> 0.
cplx exp_integral(cplx z, double a, double b) {
  const double h = b - a;
  const cplx zh = z * h;
  if (std::abs(zh) < 1e-5) {
    const cplx series = 1.0 + zh / 2.0 + zh * zh / 6.0 + zh * zh * zh / 24.0 + zh * zh * zh * zh / 120.0;
    return std::exp(z * a) * h * series;
  }
  return (std::exp(z * b) - std::exp(z * a)) / z;
}

double tab_eval(const TabulatedShape& s, double t) {
  const auto& x = s.times;
  const auto& y = s.values;
  if (t <= x.front()) return y.front();
  if (t >= x.back()) return y.back();
  const auto hi = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), t) - x.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - x[lo]) / (x[hi] - x[lo]);
  return (1.0 - w) * y[lo] + w * y[hi];
}

double tab_integral(const TabulatedShape& s, double a, double b) {
  if (a == b) return 0.0;
  if (a > b) return -tab_integral(s, b, a);
  // Break points: interpolation knots inside (a, b).
  std::vector<double> cuts{a};
  for (double x : s.times)
    if (x > a && x < b) cuts.push_back(x);
  cuts.push_back(b);
  double total = 0.0;
  auto f = [&](double t) { return tab_eval(s, t); };
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += adaptive_simpson(f, cuts[i], cuts[i + 1], 1e-10).value;
  return total;
}

struct EvalVisitor {
  double t;
  double operator()(const ConstantShape& s) const { return s.value; }
  double operator()(const PolynomialShape& s) const { return poly_eval(s.coeffs, t); }
  double operator()(const DampedTrigShape& s) const {
    return s.amplitude * std::exp(-s.decay * t) * std::cos(s.frequency * t + s.phase);
  }
  double operator()(const TabulatedShape& s) const { return tab_eval(s, t); }
};

struct DerivativeVisitor {
  double t;
  double operator()(const ConstantShape&) const { return 0.0; }
  double operator()(const PolynomialShape& s) const { return poly_derivative(s.coeffs, t); }
  double operator()(const DampedTrigShape& s) const {
    const double arg = s.frequency * t + s.phase;
    return s.amplitude * std::exp(-s.decay * t) * (-s.decay * std::cos(arg) - s.frequency * std::sin(arg));
  }
  double operator()(const TabulatedShape& s) const {
    const double h = 1e-6 * std::max(1.0, std::abs(t));
    return (tab_eval(s, t + h) - tab_eval(s, t - h)) / (2.0 * h);
  }
};

struct IntegralVisitor {
  double a;
  double b;
  double operator()(const ConstantShape& s) const { return s.value * (b - a); }
  double operator()(const PolynomialShape& s) const {
    return poly_antiderivative(s.coeffs, b) - poly_antiderivative(s.coeffs, a);
  }
  double operator()(const DampedTrigShape& s) const {
    const cplx z{-s.decay, s.frequency};
    return s.amplitude * std::real(std::polar(1.0, s.phase) * exp_integral(z, a, b));
  }
  double operator()(const TabulatedShape& s) const { return tab_integral(s, a, b); }
};

// Range [liminf, limsup] of a shape as t -> inf.
struct AsymptoticRange {
  double lo;
  double hi;
};

struct BoundVisitor {
  AsymptoticRange operator()(const ConstantShape& s) const { return {s.value, s.value}; }
  AsymptoticRange operator()(const PolynomialShape& s) const {
    std::size_t deg = s.coeffs.size();
    while (deg > 0 && s.coeffs[deg - 1] == 0.0) --deg;
    if (deg == 0) return {0.0, 0.0};
    if (deg == 1) return {s.coeffs[0], s.coeffs[0]};
    const double lim = s.coeffs[deg - 1] > 0.0 ? kInf : -kInf;
    return {lim, lim};
  }
  AsymptoticRange operator()(const DampedTrigShape& s) const {
    if (s.amplitude == 0.0 || s.decay > 0.0) return {0.0, 0.0};
    if (s.frequency == 0.0) {
      const double v = s.amplitude * std::cos(s.phase);
      if (s.decay == 0.0 || v == 0.0) return {v, v};
      const double lim = v > 0.0 ? kInf : -kInf;
      return {lim, lim};
    }
    if (s.decay < 0.0) return {-kInf, kInf};
    return {-std::abs(s.amplitude), std::abs(s.amplitude)};
  }
  AsymptoticRange operator()(const TabulatedShape& s) const { return {s.values.back(), s.values.back()}; }
};

bool shape_is_constant(const TimeFunction::Shape& shape) {
  if (std::holds_alternative<ConstantShape>(shape)) return true;
  if (const auto* p = std::get_if<PolynomialShape>(&shape)) {
    for (std::size_t k = 1; k < p->coeffs.size(); ++k)
      if (p->coeffs[k] != 0.0) return false;
    return true;
  }
  if (const auto* d = std::get_if<DampedTrigShape>(&shape))
    return d->amplitude == 0.0 || (d->decay == 0.0 && d->frequency == 0.0);
  if (const auto* tab = std::get_if<TabulatedShape>(&shape))
    return std::all_of(tab->values.begin(), tab->values.end(), [&](double v) { return v == tab->values.front(); });
  return false;
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw NonFiniteValue(std::string("TimeFunction: non-finite ") + what);
}

}  // namespace

const char* to_string(TimeFunctionKind kind) {
  switch (kind) {
    case TimeFunctionKind::constant: return "constant";
    case TimeFunctionKind::polynomial: return "polynomial";
    case TimeFunctionKind::damped_trig: return "damped-trig";
    case TimeFunctionKind::tabulated: return "tabulated";
    case TimeFunctionKind::composite: return "composite";
  }
  return "unknown";
}

TimeFunction::TimeFunction(Shape shape, double weight) {
  require_finite(weight, "weight");
  std::visit(
      [](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, ConstantShape>) {
          require_finite(s.value, "constant");
        } else if constexpr (std::is_same_v<S, PolynomialShape>) {
          for (double c : s.coeffs) require_finite(c, "polynomial coefficient");
        } else if constexpr (std::is_same_v<S, DampedTrigShape>) {
          require_finite(s.amplitude, "amplitude");
          require_finite(s.decay, "decay");
          require_finite(s.frequency, "frequency");
          require_finite(s.phase, "phase");
        } else {
          if (s.times.empty() || s.times.size() != s.values.size())
            throw std::invalid_argument("TimeFunction: tabulated times/values must be non-empty and equal length");
          for (std::size_t i = 0; i < s.times.size(); ++i) {
            require_finite(s.times[i], "table time");
            require_finite(s.values[i], "table value");
            if (i > 0 && !(s.times[i] > s.times[i - 1]))
              throw std::invalid_argument("TimeFunction: tabulated times must be strictly increasing");
          }
        }
      },
      shape);
  if (weight != 0.0) terms_.push_back({weight, std::move(shape)});
}

TimeFunction TimeFunction::constant(double value) { return TimeFunction(ConstantShape{value}); }

TimeFunction TimeFunction::polynomial(std::vector<double> coeffs) {
  return TimeFunction(PolynomialShape{std::move(coeffs)});
}

TimeFunction TimeFunction::damped_trig(double amplitude, double decay, double frequency, double phase) {
  return TimeFunction(DampedTrigShape{amplitude, decay, frequency, phase});
}

TimeFunction TimeFunction::tabulated(std::vector<double> times, std::vector<double> values) {
  return TimeFunction(TabulatedShape{std::move(times), std::move(values)});
}

double TimeFunction::eval(double t) const {
  double acc = 0.0;
  for (const auto& term : terms_) acc += term.weight * std::visit(EvalVisitor{t}, term.shape);
  return acc;
}

double TimeFunction::derivative(double t) const {
  double acc = 0.0;
  for (const auto& term : terms_) acc += term.weight * std::visit(DerivativeVisitor{t}, term.shape);
  return acc;
}

double TimeFunction::integral(double a, double b) const {
  double acc = 0.0;
  for (const auto& term : terms_) acc += term.weight * std::visit(IntegralVisitor{a, b}, term.shape);
  return acc;
}

bool TimeFunction::is_constant() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return shape_is_constant(t.shape); });
}

bool TimeFunction::is_analytic() const {
  return std::none_of(terms_.begin(), terms_.end(),
                      [](const Term& t) { return std::holds_alternative<TabulatedShape>(t.shape); });
}

TimeFunctionKind TimeFunction::kind() const {
  if (terms_.empty()) return TimeFunctionKind::constant;
  if (terms_.size() > 1) return TimeFunctionKind::composite;
  switch (terms_.front().shape.index()) {
    case 0: return TimeFunctionKind::constant;
    case 1: return TimeFunctionKind::polynomial;
    case 2: return TimeFunctionKind::damped_trig;
    default: return TimeFunctionKind::tabulated;
  }
}

double TimeFunction::asymptotic_upper_bound() const {
  double total = 0.0;
  for (const auto& term : terms_) {
    const AsymptoticRange r = std::visit(BoundVisitor{}, term.shape);
    const double contribution = term.weight > 0.0 ? term.weight * r.hi : term.weight * r.lo;
    if (contribution == kInf) return kInf;
    total += contribution;
  }
  return total;
}

TimeFunction& TimeFunction::operator+=(const TimeFunction& other) {
  if (&other == this) return *this *= 2.0;
  for (const auto& term : other.terms_) {
    bool merged = false;
    if (const auto* c = std::get_if<ConstantShape>(&term.shape)) {
      for (auto& mine : terms_) {
        if (auto* mc = std::get_if<ConstantShape>(&mine.shape)) {
          mc->value = mine.weight * mc->value + term.weight * c->value;
          mine.weight = 1.0;
          merged = true;
          break;
        }
      }
    } else if (const auto* p = std::get_if<PolynomialShape>(&term.shape)) {
      for (auto& mine : terms_) {
        if (auto* mp = std::get_if<PolynomialShape>(&mine.shape)) {
          std::vector<double> sum(std::max(mp->coeffs.size(), p->coeffs.size()), 0.0);
          for (std::size_t k = 0; k < mp->coeffs.size(); ++k) sum[k] += mine.weight * mp->coeffs[k];
          for (std::size_t k = 0; k < p->coeffs.size(); ++k) sum[k] += term.weight * p->coeffs[k];
          mp->coeffs = std::move(sum);
          mine.weight = 1.0;
          merged = true;
          break;
        }
      }
    }
    if (!merged) terms_.push_back(term);
  }
  std::erase_if(terms_, [](const Term& t) {
    if (t.weight == 0.0) return true;
    if (const auto* c = std::get_if<ConstantShape>(&t.shape)) return c->value == 0.0;
    if (const auto* p = std::get_if<PolynomialShape>(&t.shape))
      return std::all_of(p->coeffs.begin(), p->coeffs.end(), [](double v) { return v == 0.0; });
    return false;
  });
  return *this;
}

TimeFunction& TimeFunction::operator-=(const TimeFunction& other) { return *this += (-1.0 * other); }

TimeFunction& TimeFunction::operator*=(double scale) {
  require_finite(scale, "scale");
  if (scale == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& term : terms_) term.weight *= scale;
  return *this;
}

std::string TimeFunction::describe() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  os.precision(6);
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i) os << " + ";
    const auto& t = terms_[i];
    os << t.weight << "*";
    std::visit(
        [&](const auto& s) {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, ConstantShape>) {
            os << s.value;
          } else if constexpr (std::is_same_v<S, PolynomialShape>) {
            os << "poly[" << s.coeffs.size() << "]";
          } else if constexpr (std::is_same_v<S, DampedTrigShape>) {
            os << s.amplitude << "e^{-" << s.decay << "t}cos(" << s.frequency << "t+" << s.phase << ")";
          } else {
            os << "table[" << s.times.size() << "]";
          }
        },
        t.shape);
  }
  return os.str();
}

ComplexTimeFunction combine(const std::vector<TimeFunction>& fns, const std::vector<cplx>& weights) {
  if (fns.size() != weights.size()) throw DimensionMismatch("combine: fns/weights size mismatch");
  ComplexTimeFunction out;
  for (std::size_t j = 0; j < fns.size(); ++j) {
    if (weights[j].real() != 0.0) out.re += weights[j].real() * fns[j];
    if (weights[j].imag() != 0.0) out.im += weights[j].imag() * fns[j];
  }
  return out;
}

}  // namespace commudyn
