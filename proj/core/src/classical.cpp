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
#include "commudyn/classical.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "commudyn/errors.hpp"

namespace commudyn::classical {
namespace {

void require_same_shape(const LatticeField& x, const LatticeField& y, const char* what) {
  if (!x.same_shape(y))
    throw DimensionMismatch(std::string(what) + ": fields have different (d, axes)");
}

// Flat index of (a - b) mod d, axis by axis.
std::size_t flat_difference(std::size_t a, std::size_t b, int d, int axes) {
  std::size_t out = 0;
  std::size_t scale = 1;
  const auto ud = static_cast<std::size_t>(d);
  for (int ax = 0; ax < axes; ++ax) {
    const auto da = static_cast<int>(a % ud);
    const auto db = static_cast<int>(b % ud);
    a /= ud;
    b /= ud;
    out += static_cast<std::size_t>(((da - db) % d + d) % d) * scale;
    scale *= ud;
  }
  return out;
}

std::size_t flat_negate(std::size_t a, int d, int axes) { return flat_difference(0, a, d, axes); }

LatticeField transform(const LatticeField& x, int sign) {
  const int d = x.d();
  const auto ud = static_cast<std::size_t>(d);
  const auto roots = roots_of_unity(d);
  std::vector<cplx> cur(x.values().begin(), x.values().end());
  std::vector<cplx> next(cur.size());
  std::size_t stride = 1;
  for (int ax = 0; ax < x.axes(); ++ax) {
    const std::size_t block = stride * ud;
    for (std::size_t base = 0; base < cur.size(); base += block)
      for (std::size_t off = 0; off < stride; ++off)
        for (std::size_t m = 0; m < ud; ++m) {
          cplx acc = 0.0;
          for (std::size_t k = 0; k < ud; ++k) {
            const auto r = static_cast<std::size_t>(((sign * static_cast<long long>(m * k)) % d + d) % d);
            acc += roots[r] * cur[base + off + k * stride];
          }
          next[base + off + m * stride] = acc;
        }
    std::swap(cur, next);
    stride = block;
  }
  return LatticeField(d, x.axes(), std::move(cur));
}

KolmogorovReport check_fields(const CirculantGenerator& g, const std::vector<double>& grid, double tol,
                              bool integrated) {
  KolmogorovReport report;
  const std::string prefix = integrated ? "integrated " : "";
  report.min_offdiagonal = std::numeric_limits<double>::infinity();
  auto flag = [&](bool& which, const char* what, double t, std::size_t flat, double value) {
    which = false;
    report.passed = false;
    if (!report.first_violation)
      report.first_violation = Witness{prefix + what, t, g.multi_index(flat), value};
  };
  for (double t : grid) {
    const LatticeField a = integrated ? g.integrated(0.0, t) : g.at_time(t);
    ++report.points_checked;
    double total = a[0].real();
    for (std::size_t m = 1; m < a.size(); ++m) {
      const double v = a[m].real();
      total += v;
      report.min_offdiagonal = std::min(report.min_offdiagonal, v);
      if (v < -tol) flag(report.positivity, "off-diagonal rate is negative", t, m, v);
    }
    report.max_conservation_residual = std::max(report.max_conservation_residual, std::abs(total));
    if (std::abs(total) > tol) flag(report.conservation, "rates do not sum to zero", t, 0, total);
    // Implied by the two conditions above; tracked separately but never decisive on its own.
    if (a[0].real() > tol) report.diagonal = false;
  }
  if (!std::isfinite(report.min_offdiagonal)) report.min_offdiagonal = 0.0;
  return report;
}

}  // namespace

LatticeField convolve(const LatticeField& x, const LatticeField& y) {
  require_same_shape(x, y, "convolve");
  LatticeField out(x.d(), x.axes());
  for (std::size_t n = 0; n < x.size(); ++n) {
    cplx acc = 0.0;
    for (std::size_t k = 0; k < y.size(); ++k) acc += x[flat_difference(n, k, x.d(), x.axes())] * y[k];
    out[n] = acc;
  }
  return out;
}

LatticeField dft(const LatticeField& x) { return transform(x, +1); }

LatticeField idft(const LatticeField& x) {
  LatticeField out = transform(x, -1);
  const double scale = 1.0 / static_cast<double>(x.size());
  for (auto& v : out.values()) v *= scale;
  return out;
}

CirculantGenerator::CirculantGenerator(int d, int axes)
    : d_(d), axes_(axes), coefficients_(lattice_size(d, axes)) {}

CirculantGenerator::CirculantGenerator(int d, int axes, std::vector<TimeFunction> coefficients)
    : d_(d), axes_(axes), coefficients_(std::move(coefficients)) {
  if (coefficients_.size() != lattice_size(d, axes))
    throw DimensionMismatch("CirculantGenerator: expected " + std::to_string(lattice_size(d, axes)) +
                            " coefficients, got " + std::to_string(coefficients_.size()));
}

CirculantGenerator CirculantGenerator::constant(int d, int axes, const std::vector<double>& values) {
  std::vector<TimeFunction> fns;
  fns.reserve(values.size());
  for (double v : values) fns.push_back(TimeFunction::constant(v));
  return CirculantGenerator(d, axes, std::move(fns));
}

std::size_t CirculantGenerator::flat_index(std::span<const int> multi) const {
  if (static_cast<int>(multi.size()) != axes_) throw DimensionMismatch("CirculantGenerator: wrong multi-index length");
  std::size_t flat = 0;
  for (int m : multi) flat = flat * static_cast<std::size_t>(d_) + static_cast<std::size_t>(((m % d_) + d_) % d_);
  return flat;
}

MultiIndex CirculantGenerator::multi_index(std::size_t flat) const {
  MultiIndex out(axes_);
  for (int a = axes_ - 1; a >= 0; --a) {
    out[a] = static_cast<int>(flat % static_cast<std::size_t>(d_));
    flat /= static_cast<std::size_t>(d_);
  }
  return out;
}

const TimeFunction& CirculantGenerator::coefficient(std::span<const int> multi) const {
  return coefficients_[flat_index(multi)];
}

void CirculantGenerator::set(std::size_t flat, TimeFunction f) { coefficients_.at(flat) = std::move(f); }

void CirculantGenerator::set(std::span<const int> multi, TimeFunction f) { set(flat_index(multi), std::move(f)); }

void CirculantGenerator::complete_diagonal() {
  TimeFunction total;
  for (std::size_t m = 1; m < coefficients_.size(); ++m) total += coefficients_[m];
  coefficients_[0] = -total;
}

bool CirculantGenerator::is_homogeneous() const {
  return std::all_of(coefficients_.begin(), coefficients_.end(), [](const TimeFunction& f) { return f.is_constant(); });
}

LatticeField CirculantGenerator::at_time(double t) const {
  std::vector<cplx> v(coefficients_.size());
  for (std::size_t m = 0; m < v.size(); ++m) v[m] = coefficients_[m].eval(t);
  return LatticeField(d_, axes_, std::move(v));
}

LatticeField CirculantGenerator::integrated(double a, double b) const {
  std::vector<cplx> v(coefficients_.size());
  for (std::size_t m = 0; m < v.size(); ++m) v[m] = coefficients_[m].integral(a, b);
  return LatticeField(d_, axes_, std::move(v));
}

CirculantGenerator reflect(const CirculantGenerator& g) {
  std::vector<TimeFunction> out(g.size());
  for (std::size_t m = 0; m < g.size(); ++m) out[flat_negate(m, g.d(), g.axes())] = g.coefficient(m);
  return CirculantGenerator(g.d(), g.axes(), std::move(out));
}

LatticeField reflect(const LatticeField& x) {
  LatticeField out(x.d(), x.axes());
  for (std::size_t m = 0; m < x.size(); ++m) out[flat_negate(m, x.d(), x.axes())] = x[m];
  return out;
}

ComplexMatrix circulant_matrix(const LatticeField& a) {
  const auto n = static_cast<Eigen::Index>(a.size());
  ComplexMatrix l(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      l(i, j) = a[flat_difference(static_cast<std::size_t>(i), static_cast<std::size_t>(j), a.d(), a.axes())];
  return l;
}

RealMatrix circulant_matrix(const CirculantGenerator& g, double t) { return circulant_matrix(g.at_time(t)).real(); }

LatticeField circulant_spectrum(const CirculantGenerator& g, double t) { return dft(g.at_time(t)); }

ComplexVector circulant_eigenvector(int d, int axes, std::size_t m) {
  const std::size_t n = lattice_size(d, axes);
  LatticeField delta(d, axes);
  delta[m] = 1.0;
  // dft(delta_m)(k) = lambda^{m.k}; conjugate to pair with l_m.
  const LatticeField psi = dft(delta);
  ComplexVector v(static_cast<Eigen::Index>(n));
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) v(static_cast<Eigen::Index>(k)) = std::conj(psi[k]) * scale;
  return v;
}

std::vector<double> uniform_grid(double a, double b, int points) {
  if (points < 1) throw PreconditionFailed(Witness::of("grid needs at least one point", static_cast<double>(points)));
  if (points == 1) return {b};
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) grid[i] = a + (b - a) * i / (points - 1);
  grid.back() = b;
  return grid;
}

KolmogorovReport kolmogorov_check_markov(const CirculantGenerator& g, const std::vector<double>& grid, double tol) {
  return check_fields(g, grid, tol, false);
}

KolmogorovReport kolmogorov_check_nonmarkov(const CirculantGenerator& g, const std::vector<double>& tau_grid,
                                            double tol) {
  return check_fields(g, tau_grid, tol, true);
}

KolmogorovReport kolmogorov_check(const CirculantGenerator& g, double t0, double t, Mode mode, double tol,
                                  int grid_points) {
  const Window w = integration_window(mode, t0, t);
  const auto grid = uniform_grid(w.begin, w.end, grid_points);
  return mode == Mode::markov ? kolmogorov_check_markov(g, grid, tol) : kolmogorov_check_nonmarkov(g, grid, tol);
}

LatticeField propagate(const CirculantGenerator& g, double t0, double t, Mode mode, const PropagateOptions& options) {
  if (t < t0) throw PreconditionFailed(Witness{"propagation requires t >= t0", t, {}, t - t0});
  if (options.check_preconditions) {
    const auto report = kolmogorov_check(g, t0, t, mode, options.tol, options.grid_points);
    if (!report.passed) throw PreconditionFailed(*report.first_violation);
  }
  LatticeField phase = dft(g.integrated(integration_window(mode, t0, t)));
  for (auto& v : phase.values()) v = std::exp(v);
  LatticeField p = idft(phase);
  if (options.check_result) {
    double total = 0.0;
    for (std::size_t m = 0; m < p.size(); ++m) {
      total += p[m].real();
      if (p[m].real() < -options.tol)
        throw NonProbabilisticResult(Witness{"negative probability", t, p.multi_index(m), p[m].real()});
    }
    if (std::abs(total - 1.0) > options.tol)
      throw NonProbabilisticResult(Witness{"probabilities do not sum to one", t, {}, total});
  }
  for (auto& v : p.values()) v = v.real();
  return p;
}

LatticeField propagate(const CirculantGenerator& g, double t0, double t, Mode mode, const LatticeField& p0,
                       const PropagateOptions& options) {
  return convolve(propagate(g, t0, t, mode, options), p0);
}

CompositionReport composition_check(const CirculantGenerator& g, double t, double s, double u, Mode mode,
                                    double shift) {
  if (!(t >= s && s >= u)) throw PreconditionFailed(Witness{"composition check requires t >= s >= u", t, {}, s});
  PropagateOptions raw;
  raw.check_preconditions = false;
  raw.check_result = false;
  CompositionReport report;
  report.mode = mode;
  report.shift = shift;
  const LatticeField ts = propagate(g, s, t, mode, raw);
  const LatticeField su = propagate(g, u, s, mode, raw);
  const LatticeField tu = propagate(g, u, t, mode, raw);
  report.composition_residual = convolve(ts, su).max_abs_diff(tu);
  report.homogeneity_residual = propagate(g, u + shift, t + shift, mode, raw).max_abs_diff(tu);
  return report;
}

}  // namespace commudyn::classical
