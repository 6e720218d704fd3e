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
#include "commudyn/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "commudyn/errors.hpp"
#include "commudyn/quadrature.hpp"

namespace commudyn::kernel {
namespace {

// Coefficients lowest degree first.
using Poly = std::vector<cplx>;

Poly multiply(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

cplx evaluate(const Poly& p, cplx x) {
  cplx acc = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Poly derivative(const Poly& p) {
  if (p.size() <= 1) return {0.0};
  Poly out(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) out[i - 1] = static_cast<double>(i) * p[i];
  return out;
}

std::vector<cplx> roots(const Poly& p) {
  const auto n = static_cast<Eigen::Index>(p.size()) - 1;
  if (n < 1) return {};
  ComplexMatrix companion = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) companion(i, n - 1) = -p[static_cast<std::size_t>(i)] / p.back();
  Eigen::ComplexEigenSolver<ComplexMatrix> es(companion, false);
  std::vector<cplx> out(es.eigenvalues().data(), es.eigenvalues().data() + n);
  // One Newton polish per root.
  const Poly dp = derivative(p);
  for (auto& r : out) {
    const cplx d = evaluate(dp, r);
    if (std::abs(d) > 0.0) r -= evaluate(p, r) / d;
  }
  return out;
}

// Merge equal rates and drop zero weights.
ExponentialSum canonical(const ExponentialSum& e) {
  ExponentialSum out;
  for (std::size_t i = 0; i < e.rates.size(); ++i) {
    bool merged = false;
    for (std::size_t j = 0; j < out.rates.size(); ++j)
      if (std::abs(out.rates[j] - e.rates[i]) <= 1e-14 * std::max(1.0, std::abs(e.rates[i]))) {
        out.weights[j] += e.weights[i];
        merged = true;
        break;
      }
    if (!merged) {
      out.rates.push_back(e.rates[i]);
      out.weights.push_back(e.weights[i]);
    }
  }
  ExponentialSum kept;
  for (std::size_t i = 0; i < out.rates.size(); ++i)
    if (out.weights[i] != cplx(0.0)) {
      kept.rates.push_back(out.rates[i]);
      kept.weights.push_back(out.weights[i]);
    }
  return kept;
}

struct Horizon {
  double end = 0.0;
  double tail = 0.0;
};

// Smallest multiple of the probe width after which the damped signal stays
// below the truncation level for the whole next window.
template <class F>
Horizon truncation_horizon(const F& fn, double s, double margin, const LaplaceOptions& options) {
  const double width = std::max(0.25, std::min(1.0, 1.0 / std::max(margin, 1e-12)));
  for (double t = 0.0; t <= options.max_horizon; t += width) {
    double envelope = 0.0;
    for (int j = 0; j <= 16; ++j) {
      const double x = t + width * j / 16.0;
      envelope = std::max(envelope, std::abs(fn(x)) * std::exp(-s * x));
    }
    if (envelope < options.truncation) return {t, envelope / margin};
  }
  throw QuadratureNotConverged("laplace: truncation horizon exceeds " + std::to_string(options.max_horizon), 0.0);
}

}  // namespace

ModeSignal ModeSignal::from_rate(ComplexTimeFunction rate) {
  ModeSignal out;
  if (rate.is_constant()) {
    const cplx lam = rate.eval(0.0);
    out.exponentials_ = ExponentialSum{{1.0}, {lam}};
  }
  out.rate_ = std::move(rate);
  return out;
}

ModeSignal ModeSignal::from_exponentials(std::vector<cplx> weights, std::vector<cplx> rates, double tol) {
  if (weights.size() != rates.size() || weights.empty())
    throw DimensionMismatch("exponential sum needs matching, non-empty weight and rate lists");
  cplx total = 0.0;
  for (const auto& w : weights) total += w;
  if (std::abs(total - 1.0) > tol)
    throw NormalizationError("exponential-sum signal must satisfy c(0) = 1 (weights sum to " +
                             std::to_string(total.real()) + ")");
  ModeSignal out;
  out.exponentials_ = ExponentialSum{std::move(weights), std::move(rates)};
  return out;
}

cplx ModeSignal::c(double t) const {
  if (rate_) return std::exp(rate_->integrate(t));
  cplx acc = 0.0;
  for (std::size_t i = 0; i < exponentials_->rates.size(); ++i)
    acc += exponentials_->weights[i] * std::exp(exponentials_->rates[i] * t);
  return acc;
}

cplx ModeSignal::f(double t) const {
  if (rate_) return rate_->eval(t) * c(t);
  cplx acc = 0.0;
  for (std::size_t i = 0; i < exponentials_->rates.size(); ++i)
    acc += exponentials_->weights[i] * exponentials_->rates[i] * std::exp(exponentials_->rates[i] * t);
  return acc;
}

cplx ModeSignal::rate(double t) const {
  if (rate_) return rate_->eval(t);
  return f(t) / c(t);
}

double ModeSignal::growth_bound() const {
  if (exponentials_) {
    double g = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < exponentials_->rates.size(); ++i)
      if (exponentials_->weights[i] != cplx(0.0)) g = std::max(g, exponentials_->rates[i].real());
    return g;
  }
  return rate_->re.asymptotic_upper_bound();
}

ModeSignal mode_signal(const ComplexTimeFunction& rate) { return ModeSignal::from_rate(rate); }

LaplaceResult laplace(const ModeSignal& signal, double s, Transformed which, const LaplaceOptions& options) {
  const double growth = signal.growth_bound();
  if (!(s > growth))
    throw DivergentTransform("laplace: s = " + std::to_string(s) + " does not exceed the growth bound " +
                             std::to_string(growth));
  LaplaceResult out;
  if (signal.exponentials() && !options.force_numeric) {
    const auto& e = *signal.exponentials();
    for (std::size_t i = 0; i < e.rates.size(); ++i) {
      const cplx term = e.weights[i] / (s - e.rates[i]);
      out.value += which == Transformed::f ? e.rates[i] * term : term;
    }
    out.analytic = true;
    return out;
  }
  auto x = [&](double t) { return which == Transformed::f ? signal.f(t) : signal.c(t); };
  const double margin = std::isfinite(growth) ? s - growth : s;
  const Horizon hz = truncation_horizon(x, s, margin, options);
  out.horizon = hz.end;
  auto integrand = [&](double t) { return x(t) * std::exp(-s * t); };
  const double panel = std::min(1.0, 2.0 / s);
  const auto q = panelled_simpson(integrand, 0.0, hz.end, options.tol, panel);
  out.value = q.value;
  out.error = q.error + hz.tail;
  return out;
}

cplx kernel_hat(cplx f_hat, double s, double floor) {
  const cplx denom = 1.0 + f_hat;
  if (std::abs(denom) < floor)
    throw PoleEncountered("kernel_hat: 1 + f^ vanishes at s = " + std::to_string(s));
  return s * f_hat / denom;
}

double LaplaceSample::identity_residual() const { return std::abs(s * c_hat - 1.0 - k_hat * c_hat); }

LaplaceSample sample(const ModeSignal& signal, double s, const LaplaceOptions& options) {
  const auto r = laplace(signal, s, Transformed::f, options);
  LaplaceSample out;
  out.s = s;
  out.f_hat = r.value;
  out.k_hat = kernel_hat(r.value, s);
  out.c_hat = (1.0 + r.value) / s;
  out.error = r.error;
  return out;
}

std::vector<LaplaceSample> sample(const ModeSignal& signal, const std::vector<double>& s_grid,
                                  const LaplaceOptions& options) {
  std::vector<LaplaceSample> out;
  out.reserve(s_grid.size());
  for (double s : s_grid) out.push_back(sample(signal, s, options));
  return out;
}

cplx MemoryKernel::regular(double t) const {
  cplx acc = 0.0;
  for (std::size_t i = 0; i < rates.size(); ++i) acc += weights[i] * std::exp(rates[i] * t);
  return acc;
}

cplx MemoryKernel::laplace(double s) const {
  cplx acc = delta_weight;
  for (std::size_t i = 0; i < rates.size(); ++i) acc += weights[i] / (s - rates[i]);
  return acc;
}

MemoryKernel memory_kernel(const ModeSignal& signal) {
  if (!signal.exponentials())
    throw PreconditionFailed(Witness::of("memory kernel is only available for exponential-sum signals", 0.0));
  const ExponentialSum e = canonical(*signal.exponentials());
  const std::size_t n = e.rates.size();
  MemoryKernel k;
  if (n == 0) return k;
  // c^ = N / Q with Q = prod (s - r_i), N = sum_i w_i prod_{j != i} (s - r_j).
  Poly q{1.0};
  for (const auto& r : e.rates) q = multiply(q, {-r, 1.0});
  Poly num(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    Poly term{e.weights[i]};
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) term = multiply(term, {-e.rates[j], 1.0});
    for (std::size_t p = 0; p < term.size(); ++p) num[p] += term[p];
  }
  const cplx lead = num.back();
  if (std::abs(lead - 1.0) > 1e-10) throw NormalizationError("memory_kernel: signal does not start at c(0) = 1");
  // Q = (s + b) N + R with N monic.
  for (auto& v : num) v /= lead;
  const cplx b = q[n - 1] - (n >= 2 ? num[n - 2] : cplx(0.0));
  Poly rem = q;
  // rem = Q - (s + b) N
  for (std::size_t p = 0; p < num.size(); ++p) {
    rem[p + 1] -= num[p];
    rem[p] -= b * num[p];
  }
  k.delta_weight = -b;
  if (n == 1) return k;
  const Poly dnum = derivative(num);
  for (const auto& rho : roots(num)) {
    const cplx d = evaluate(dnum, rho);
    if (std::abs(d) < 1e-12)
      throw PreconditionFailed(Witness::of("memory_kernel: repeated root in c^ numerator", std::abs(d)));
    k.rates.push_back(rho);
    k.weights.push_back(-evaluate(rem, rho) / d);
  }
  return k;
}

namespace {

std::vector<cplx> volterra_solve(const MemoryKernel& kernel, double step, std::size_t steps) {
  std::vector<cplx> kr(steps + 1);
  for (std::size_t j = 0; j <= steps; ++j) kr[j] = kernel.regular(step * static_cast<double>(j));
  std::vector<cplx> y(steps + 1);
  y[0] = 1.0;
  const cplx a = kernel.delta_weight;
  // F_n = a y_n + h (kr_n y_0 / 2 + sum_{j=1}^{n-1} kr_{n-j} y_j + kr_0 y_n / 2)
  cplx f_prev = a * y[0];
  const cplx implicit = 1.0 - 0.5 * step * (a + 0.5 * step * kr[0]);
  for (std::size_t n = 0; n < steps; ++n) {
    const std::size_t m = n + 1;
    cplx known = 0.5 * kr[m] * y[0];
    for (std::size_t j = 1; j < m; ++j) known += kr[m - j] * y[j];
    known *= step;
    y[m] = (y[n] + 0.5 * step * (f_prev + known)) / implicit;
    f_prev = a * y[m] + known + 0.5 * step * kr[0] * y[m];
  }
  return y;
}

}  // namespace

VolterraReport volterra_check(const MemoryKernel& kernel, const ModeSignal& signal, double horizon, double step,
                              bool richardson) {
  if (!(step > 0.0) || !(horizon > 0.0))
    throw PreconditionFailed(Witness::of("volterra_check needs positive step and horizon", step));
  VolterraReport out;
  out.steps = static_cast<std::size_t>(std::llround(horizon / step));
  out.step = horizon / static_cast<double>(out.steps);
  out.solution = volterra_solve(kernel, out.step, out.steps);
  out.times.resize(out.steps + 1);
  double sup_c = 0.0;
  std::vector<cplx> exact(out.steps + 1);
  for (std::size_t j = 0; j <= out.steps; ++j) {
    out.times[j] = out.step * static_cast<double>(j);
    exact[j] = signal.c(out.times[j]);
    sup_c = std::max(sup_c, std::abs(exact[j]));
    out.max_abs_residual = std::max(out.max_abs_residual, std::abs(out.solution[j] - exact[j]));
  }
  out.max_relative_residual = out.max_abs_residual / std::max(sup_c, 1e-300);
  if (richardson) {
    const auto fine = volterra_solve(kernel, 0.5 * out.step, 2 * out.steps);
    double worst = 0.0;
    for (std::size_t j = 0; j <= out.steps; ++j) {
      const cplx extrap = (4.0 * fine[2 * j] - out.solution[j]) / 3.0;
      worst = std::max(worst, std::abs(extrap - exact[j]));
    }
    out.richardson_residual = worst / std::max(sup_c, 1e-300);
  }
  return out;
}

}  // namespace commudyn::kernel
