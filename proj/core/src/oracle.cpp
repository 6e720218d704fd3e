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
#include "commudyn/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "commudyn/errors.hpp"

namespace commudyn::oracle {
namespace {

constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0, 129060195264000.0,
    10559470521600.0,    670442572800.0,      33522128640.0,      1323241920.0,       40840800.0,
    960960.0,            16380.0,             182.0,              1.0};
constexpr double kTheta13 = 5.371920351148152;

double one_norm(const ComplexMatrix& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); }

template <class Op, class Fn>
Op midpoint_product(const Fn& lfun, double t0, double t, int steps, Op identity) {
  const double h = (t - t0) / steps;
  Op acc = std::move(identity);
  for (int j = 0; j < steps; ++j) {
    const double mid = t0 + (j + 0.5) * h;
    acc = expm(lfun(mid) * cplx(h)) * acc;
  }
  return acc;
}

const ComplexMatrix& as_matrix(const ComplexMatrix& m) { return m; }
const ComplexMatrix& as_matrix(const superop::SuperOperator& m) { return m.matrix(); }

template <class Op, class Fn>
SteppedPropagation<Op> stepped(const Fn& lfun, double t0, double t, int steps, bool estimate_error, Op identity) {
  if (steps < 1) throw PreconditionFailed(Witness{"ordered_exp requires steps >= 1", t, {}, static_cast<double>(steps)});
  SteppedPropagation<Op> out;
  out.steps = steps;
  out.step = (t - t0) / steps;
  out.propagator = midpoint_product(lfun, t0, t, steps, identity);
  if (estimate_error && steps > 1 && t != t0) {
    const int coarse = (steps + 1) / 2;
    const Op rough = midpoint_product(lfun, t0, t, coarse, identity);
    const double hn = out.step;
    const double hm = (t - t0) / coarse;
    const double diff = (as_matrix(out.propagator) - as_matrix(rough)).cwiseAbs().maxCoeff();
    out.error_estimate = diff * hn * hn / (hm * hm - hn * hn);
    out.local_error = out.error_estimate / steps;
  }
  return out;
}

}  // namespace

ComplexMatrix expm(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("expm: matrix must be square");
  if (!m.allFinite()) throw NonFiniteValue("expm: non-finite input");
  const auto n = m.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  if (n == 0 || m.isZero(0.0)) return id;

  const double norm = one_norm(m);
  int s = 0;
  if (norm > kTheta13) s = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
  if (s > 1023) throw OverflowError("expm: norm " + std::to_string(norm) + " is too large");
  const ComplexMatrix a = m * std::ldexp(1.0, -s);

  const ComplexMatrix a2 = a * a;
  const ComplexMatrix a4 = a2 * a2;
  const ComplexMatrix a6 = a4 * a2;
  const auto& b = kPade13;
  const ComplexMatrix u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id;
  const ComplexMatrix u = a * u_inner;
  const ComplexMatrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
  ComplexMatrix r = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < s; ++k) r = r * r;
  if (!r.allFinite()) throw OverflowError("expm: result overflowed (input 1-norm " + std::to_string(norm) + ")");
  return r;
}

superop::SuperOperator expm(const superop::SuperOperator& m) {
  return superop::SuperOperator(m.dim(), expm(m.matrix()));
}

int default_steps(double t0, double t, int steps_per_unit) {
  return std::max(1, static_cast<int>(std::ceil(steps_per_unit * std::abs(t - t0) - 1e-9)));
}

SteppedPropagation<ComplexMatrix> ordered_exp(const MatrixFn& lfun, double t0, double t, int steps,
                                              bool estimate_error) {
  const ComplexMatrix probe = lfun(t0);
  return stepped<ComplexMatrix>(lfun, t0, t, steps, estimate_error,
                                ComplexMatrix::Identity(probe.rows(), probe.cols()));
}

SteppedPropagation<superop::SuperOperator> ordered_exp(const GeneratorFn& lfun, double t0, double t, int steps,
                                                       bool estimate_error) {
  const int dim = lfun(t0).dim();
  return stepped<superop::SuperOperator>(lfun, t0, t, steps, estimate_error, superop::SuperOperator::identity(dim));
}

SteppedPropagation<superop::SuperOperator> ordered_exp_homogeneous(const GeneratorFn& lfun, double t0, double t,
                                                                   int steps, bool estimate_error) {
  // Shifting the integration variable leaves the ordered product unchanged.
  return ordered_exp(lfun, 0.0, t - t0, steps, estimate_error);
}

Trajectory evolve_state(const GeneratorFn& lfun, const ComplexMatrix& rho0, const std::vector<double>& times,
                        int steps_per_unit) {
  Trajectory out;
  out.times = times;
  if (times.empty()) return out;
  ComplexMatrix rho = rho0;
  const cplx tr0 = rho0.trace();
  out.states.push_back(rho);
  for (std::size_t j = 1; j < times.size(); ++j) {
    const double a = times[j - 1];
    const double b = times[j];
    if (b != a) {
      const auto step = ordered_exp(lfun, a, b, default_steps(a, b, steps_per_unit), false);
      rho = step.propagator.apply(rho);
    }
    out.trace_drift = std::max(out.trace_drift, std::abs(rho.trace() - tr0));
    out.states.push_back(rho);
  }
  return out;
}

}  // namespace commudyn::oracle
