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
#include <variant>
#include <vector>

#include "commudyn/types.hpp"

namespace commudyn {

// Shape primitives. A TimeFunction is a real linear combination of these.
struct ConstantShape {
  double value = 0.0;
};

// c[0] + c[1] t + c[2] t^2 + ...
struct PolynomialShape {
  std::vector<double> coeffs;
};

// amplitude * exp(-decay t) * cos(frequency t + phase)
struct DampedTrigShape {
  double amplitude = 1.0;
  double decay = 0.0;
  double frequency = 0.0;
  double phase = 0.0;
};

// Piecewise-linear interpolation through (times[i], values[i]), held at the
// end values outside [times.front(), times.back()].
struct TabulatedShape {
  std::vector<double> times;
  std::vector<double> values;
};

enum class TimeFunctionKind { constant, polynomial, damped_trig, tabulated, composite };

const char* to_string(TimeFunctionKind kind);

// Real-valued time-dependent coefficient with point evaluation, derivative and
// definite integration. Analytic antiderivatives are used for constant,
// polynomial and damped-trig shapes; tabulated shapes are integrated by
// adaptive Simpson per interpolation segment.
class TimeFunction {
 public:
  using Shape = std::variant<ConstantShape, PolynomialShape, DampedTrigShape, TabulatedShape>;

  struct Term {
    double weight = 1.0;
    Shape shape;
  };

  TimeFunction() = default;  // identically zero
  explicit TimeFunction(Shape shape, double weight = 1.0);

  static TimeFunction constant(double value);
  static TimeFunction polynomial(std::vector<double> coeffs);
  static TimeFunction damped_trig(double amplitude, double decay, double frequency, double phase);
  static TimeFunction cosine(double amplitude, double frequency) { return damped_trig(amplitude, 0.0, frequency, 0.0); }
  static TimeFunction sine(double amplitude, double frequency) {
    return damped_trig(amplitude, 0.0, frequency, -0.5 * kPi);
  }
  static TimeFunction tabulated(std::vector<double> times, std::vector<double> values);

  double operator()(double t) const { return eval(t); }
  double eval(double t) const;
  double derivative(double t) const;
  // Definite integral over [a, b].
  double integral(double a, double b) const;
  // Definite integral over [0, t].
  double integrate(double t) const { return integral(0.0, t); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  bool is_analytic() const;
  TimeFunctionKind kind() const;
  const std::vector<Term>& terms() const { return terms_; }

  // Upper bound on limsup_{t -> inf} f(t); +inf when unbounded above.
  double asymptotic_upper_bound() const;

  TimeFunction& operator+=(const TimeFunction& other);
  TimeFunction& operator-=(const TimeFunction& other);
  TimeFunction& operator*=(double scale);

  friend TimeFunction operator+(TimeFunction a, const TimeFunction& b) { return a += b; }
  friend TimeFunction operator-(TimeFunction a, const TimeFunction& b) { return a -= b; }
  friend TimeFunction operator*(TimeFunction a, double s) { return a *= s; }
  friend TimeFunction operator*(double s, TimeFunction a) { return a *= s; }
  friend TimeFunction operator-(TimeFunction a) { return a *= -1.0; }

  std::string describe() const;

 private:
  std::vector<Term> terms_;
};

// Complex combination re(t) + i im(t); the Fourier-space rates of circulant
// and Weyl generators have this form.
struct ComplexTimeFunction {
  TimeFunction re;
  TimeFunction im;

  ComplexTimeFunction() = default;
  ComplexTimeFunction(TimeFunction real_part, TimeFunction imag_part = {})
      : re(std::move(real_part)), im(std::move(imag_part)) {}

  cplx eval(double t) const { return {re.eval(t), im.eval(t)}; }
  cplx operator()(double t) const { return eval(t); }
  cplx derivative(double t) const { return {re.derivative(t), im.derivative(t)}; }
  cplx integral(double a, double b) const { return {re.integral(a, b), im.integral(a, b)}; }
  cplx integrate(double t) const { return integral(0.0, t); }
  bool is_constant() const { return re.is_constant() && im.is_constant(); }
};

// Linear combination sum_j weights[j] * fns[j] with complex weights.
ComplexTimeFunction combine(const std::vector<TimeFunction>& fns, const std::vector<cplx>& weights);

}  // namespace commudyn
