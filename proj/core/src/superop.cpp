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
#include "commudyn/superop.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "commudyn/errors.hpp"

namespace commudyn::superop {
namespace {

void require_same_dim(int a, int b, const char* what) {
  if (a != b)
    throw DimensionMismatch(std::string(what) + ": dimension mismatch (" + std::to_string(a) + " vs " +
                            std::to_string(b) + ")");
}

// R[i + D j, k + D l] = A[i + D k, j + D l]; R is the F-coefficient matrix of
// A in the matrix-unit basis.
ComplexMatrix reshuffle(const ComplexMatrix& a, int d) {
  ComplexMatrix r(d * d, d * d);
  for (int l = 0; l < d; ++l)
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) r(i + d * j, k + d * l) = a(i + d * k, j + d * l);
  return r;
}

ComplexMatrix unreshuffle(const ComplexMatrix& r, int d) {
  ComplexMatrix a(d * d, d * d);
  for (int l = 0; l < d; ++l)
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) a(i + d * k, j + d * l) = r(i + d * j, k + d * l);
  return a;
}

ComplexMatrix basis_matrix(const std::vector<ComplexMatrix>& basis, int d) {
  const auto n = static_cast<Eigen::Index>(d) * d;
  if (static_cast<Eigen::Index>(basis.size()) != n)
    throw DimensionMismatch("basis must contain D^2 = " + std::to_string(n) + " elements");
  ComplexMatrix w(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    if (basis[a].rows() != d || basis[a].cols() != d) throw DimensionMismatch("basis element has wrong shape");
    w.col(a) = vec(basis[a]);
  }
  return w;
}

ComplexMatrix checked_basis_matrix(const std::vector<ComplexMatrix>& basis, int d, double tol) {
  ComplexMatrix w = basis_matrix(basis, d);
  const double dev = (w.adjoint() * w - ComplexMatrix::Identity(w.cols(), w.cols())).cwiseAbs().maxCoeff();
  if (dev > tol) throw NonOrthonormalBasis("basis is not orthonormal (Gram deviation " + std::to_string(dev) + ")");
  return w;
}

int dim_from_basis(const std::vector<ComplexMatrix>& basis) {
  if (basis.empty()) throw DimensionMismatch("empty basis");
  return static_cast<int>(basis.front().rows());
}

// Clusters of numerically equal eigenvalues, ordered by (real, imag) of the
// cluster mean; members keep solver order.
std::vector<std::vector<Eigen::Index>> eigenvalue_clusters(const ComplexVector& values) {
  const Eigen::Index n = values.size();
  std::vector<Eigen::Index> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](Eigen::Index x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double scale = std::max({1.0, std::abs(values(i)), std::abs(values(j))});
      if (std::abs(values(i) - values(j)) <= 1e-8 * scale) parent[find(j)] = find(i);
    }
  std::vector<std::vector<Eigen::Index>> clusters;
  std::vector<Eigen::Index> slot(n, -1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<Eigen::Index>(clusters.size());
      clusters.emplace_back();
    }
    clusters[slot[root]].push_back(i);
  }
  auto mean = [&](const std::vector<Eigen::Index>& c) {
    cplx m = 0.0;
    for (auto i : c) m += values(i);
    return m / static_cast<double>(c.size());
  };
  std::stable_sort(clusters.begin(), clusters.end(), [&](const auto& a, const auto& b) {
    const cplx ma = mean(a);
    const cplx mb = mean(b);
    if (ma.real() != mb.real()) return ma.real() < mb.real();
    return ma.imag() < mb.imag();
  });
  return clusters;
}

void gram_schmidt(ComplexMatrix& block) {
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index c = 0; c < block.cols(); ++c) {
      for (Eigen::Index p = 0; p < c; ++p) block.col(c) -= block.col(p) * block.col(p).dot(block.col(c));
      block.col(c).normalize();
    }
  }
}

void fix_phase(Eigen::Ref<ComplexVector> v) {
  const double top = v.cwiseAbs().maxCoeff();
  Eigen::Index pick = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) >= top * (1.0 - 1e-9)) {
      pick = i;
      break;
    }
  const cplx phase = v(pick) / std::abs(v(pick));
  v *= std::conj(phase);
  v(pick) = std::abs(v(pick));
}

}  // namespace

ComplexVector vec(const ComplexMatrix& x) {
  return Eigen::Map<const ComplexVector>(x.data(), x.size());
}

ComplexMatrix devec(const ComplexVector& v, int dim) {
  if (v.size() != static_cast<Eigen::Index>(dim) * dim) throw DimensionMismatch("devec: length is not dim^2");
  return Eigen::Map<const ComplexMatrix>(v.data(), dim, dim);
}

SuperOperator::SuperOperator(int dim) : dim_(dim), matrix_(ComplexMatrix::Zero(dim * dim, dim * dim)) {
  if (dim < 1) throw DimensionMismatch("SuperOperator: dim must be positive");
}

SuperOperator::SuperOperator(int dim, ComplexMatrix matrix) : dim_(dim), matrix_(std::move(matrix)) {
  if (dim < 1) throw DimensionMismatch("SuperOperator: dim must be positive");
  if (matrix_.rows() != dim * dim || matrix_.cols() != dim * dim)
    throw DimensionMismatch("SuperOperator: matrix must be dim^2 x dim^2");
  if (!is_finite(matrix_)) throw NonFiniteValue("SuperOperator: non-finite entries");
}

SuperOperator SuperOperator::identity(int dim) {
  return SuperOperator(dim, ComplexMatrix::Identity(dim * dim, dim * dim));
}

SuperOperator SuperOperator::sandwich(const ComplexMatrix& left, const ComplexMatrix& right) {
  const auto d = left.rows();
  if (left.cols() != d || right.rows() != d || right.cols() != d)
    throw DimensionMismatch("sandwich: operands must be square and equal size");
  // vec(l x r) = (r^T (x) l) vec(x)
  ComplexMatrix m(d * d, d * d);
  for (Eigen::Index q = 0; q < d; ++q)
    for (Eigen::Index p = 0; p < d; ++p) m.block(p * d, q * d, d, d) = right(q, p) * left;
  return SuperOperator(static_cast<int>(d), std::move(m));
}

SuperOperator SuperOperator::conjugation(const ComplexMatrix& u) { return sandwich(u, u.adjoint()); }

SuperOperator SuperOperator::hamiltonian(const ComplexMatrix& h) {
  const auto d = static_cast<int>(h.rows());
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  return (sandwich(h, id) - sandwich(id, h)) * cplx{0.0, -1.0};
}

SuperOperator SuperOperator::dissipator(const ComplexMatrix& jump, cplx rate) {
  const auto d = static_cast<int>(jump.rows());
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  const ComplexMatrix jj = jump.adjoint() * jump;
  SuperOperator out = sandwich(jump, jump.adjoint()) - (sandwich(jj, id) + sandwich(id, jj)) * 0.5;
  return out * rate;
}

SuperOperator SuperOperator::transpose_map(int dim) {
  ComplexMatrix m = ComplexMatrix::Zero(dim * dim, dim * dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) m(j + dim * i, i + dim * j) = 1.0;
  return SuperOperator(dim, std::move(m));
}

SuperOperator SuperOperator::from_action(int dim, const std::function<ComplexMatrix(const ComplexMatrix&)>& action) {
  ComplexMatrix m(dim * dim, dim * dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) {
      ComplexMatrix e = ComplexMatrix::Zero(dim, dim);
      e(i, j) = 1.0;
      const ComplexMatrix img = action(e);
      if (img.rows() != dim || img.cols() != dim) throw DimensionMismatch("from_action: image has wrong shape");
      m.col(i + dim * j) = vec(img);
    }
  return SuperOperator(dim, std::move(m));
}

ComplexMatrix SuperOperator::apply(const ComplexMatrix& x) const {
  if (x.rows() != dim_ || x.cols() != dim_) throw DimensionMismatch("SuperOperator::apply: operand has wrong shape");
  return devec(matrix_ * vec(x), dim_);
}

SuperOperator& SuperOperator::operator+=(const SuperOperator& other) {
  require_same_dim(dim_, other.dim_, "SuperOperator +");
  matrix_ += other.matrix_;
  return *this;
}

SuperOperator& SuperOperator::operator-=(const SuperOperator& other) {
  require_same_dim(dim_, other.dim_, "SuperOperator -");
  matrix_ -= other.matrix_;
  return *this;
}

SuperOperator& SuperOperator::operator*=(cplx scale) {
  matrix_ *= scale;
  return *this;
}

SuperOperator operator*(const SuperOperator& a, const SuperOperator& b) {
  require_same_dim(a.dim(), b.dim(), "compose");
  return SuperOperator(a.dim(), a.matrix() * b.matrix());
}

double SuperOperator::max_abs() const { return matrix_.size() ? matrix_.cwiseAbs().maxCoeff() : 0.0; }

double SuperOperator::max_abs_diff(const SuperOperator& other) const {
  require_same_dim(dim_, other.dim_, "max_abs_diff");
  return (matrix_ - other.matrix_).cwiseAbs().maxCoeff();
}

SuperOperator compose(const SuperOperator& a, const SuperOperator& b) { return a * b; }

cplx hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("hs_inner: shape mismatch");
  return (a.conjugate().cwiseProduct(b)).sum();
}

cplx hs_inner(const SuperOperator& a, const SuperOperator& b) {
  require_same_dim(a.dim(), b.dim(), "hs_inner");
  return (a.matrix().conjugate().cwiseProduct(b.matrix())).sum();
}

SuperOperator dual(const SuperOperator& a) { return SuperOperator(a.dim(), a.matrix().adjoint()); }

double commutator_norm(const SuperOperator& a, const SuperOperator& b) {
  require_same_dim(a.dim(), b.dim(), "commutator_norm");
  return (a.matrix() * b.matrix() - b.matrix() * a.matrix()).norm();
}

bool is_normal(const SuperOperator& a, double tol) {
  const ComplexMatrix& m = a.matrix();
  const double scale = std::max(1.0, m.squaredNorm());
  return (m * m.adjoint() - m.adjoint() * m).cwiseAbs().maxCoeff() <= tol * scale;
}

bool is_finite(const ComplexMatrix& m) { return m.allFinite(); }

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double min_hermitian_eigenvalue(const ComplexMatrix& m) {
  const ComplexMatrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

std::vector<ComplexMatrix> matrix_unit_basis(int dim) {
  std::vector<ComplexMatrix> basis;
  basis.reserve(static_cast<std::size_t>(dim) * dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) {
      ComplexMatrix e = ComplexMatrix::Zero(dim, dim);
      e(i, j) = 1.0;
      basis.push_back(std::move(e));
    }
  return basis;
}

double gram_deviation(const std::vector<ComplexMatrix>& basis) {
  const int d = dim_from_basis(basis);
  const ComplexMatrix w = basis_matrix(basis, d);
  return (w.adjoint() * w - ComplexMatrix::Identity(w.cols(), w.cols())).cwiseAbs().maxCoeff();
}

ComplexMatrix f_coefficients(const SuperOperator& a, const std::vector<ComplexMatrix>& basis, double tol) {
  const int d = dim_from_basis(basis);
  require_same_dim(a.dim(), d, "f_coefficients");
  const ComplexMatrix w = checked_basis_matrix(basis, d, tol);
  return w.adjoint() * reshuffle(a.matrix(), d) * w;
}

SuperOperator from_f_coefficients(const ComplexMatrix& coeffs, const std::vector<ComplexMatrix>& basis) {
  const int d = dim_from_basis(basis);
  const ComplexMatrix w = basis_matrix(basis, d);
  return SuperOperator(d, unreshuffle(w * coeffs * w.adjoint(), d));
}

ComplexMatrix e_coefficients(const SuperOperator& a, const std::vector<ComplexMatrix>& basis, double tol) {
  const int d = dim_from_basis(basis);
  require_same_dim(a.dim(), d, "e_coefficients");
  const ComplexMatrix w = checked_basis_matrix(basis, d, tol);
  return w.adjoint() * a.matrix() * w;
}

SuperOperator from_e_coefficients(const ComplexMatrix& coeffs, const std::vector<ComplexMatrix>& basis) {
  const int d = dim_from_basis(basis);
  const ComplexMatrix w = basis_matrix(basis, d);
  return SuperOperator(d, w * coeffs * w.adjoint());
}

ChannelReport validate_channel(const SuperOperator& a, double tol) {
  const int d = a.dim();
  ChannelReport report;
  const ComplexMatrix choi = reshuffle(a.matrix(), d);
  report.hermiticity_residual = (choi - choi.adjoint()).cwiseAbs().maxCoeff();
  report.hermiticity_preserving = report.hermiticity_residual <= tol;

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (choi + choi.adjoint()));
  report.choi_min_eigenvalue = es.eigenvalues()(0);
  report.choi_witness = devec(es.eigenvectors().col(0), d);
  report.cp = report.hermiticity_preserving && report.choi_min_eigenvalue >= -tol;

  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  report.tp_witness = dual(a).apply(id);
  report.tp_residual = (report.tp_witness - id).cwiseAbs().maxCoeff();
  report.tp = report.tp_residual <= tol;

  report.unital_witness = a.apply(id);
  report.unital_residual = (report.unital_witness - id).cwiseAbs().maxCoeff();
  report.unital = report.unital_residual <= tol;
  return report;
}

SpectralDecomposition::SpectralDecomposition(int dim, ComplexVector eigenvalues, ComplexMatrix right,
                                             ComplexMatrix left)
    : dim_(dim), eigenvalues_(std::move(eigenvalues)), right_(std::move(right)), left_(std::move(left)) {
  const Eigen::Index n = static_cast<Eigen::Index>(dim) * dim;
  if (eigenvalues_.size() != n || right_.rows() != n || right_.cols() != n || left_.rows() != n ||
      left_.cols() != n)
    throw DimensionMismatch("SpectralDecomposition: inconsistent sizes");
}

ComplexMatrix SpectralDecomposition::g(std::size_t alpha) const {
  return devec(right_.col(static_cast<Eigen::Index>(alpha)), dim_);
}

ComplexMatrix SpectralDecomposition::h(std::size_t alpha) const {
  return devec(left_.col(static_cast<Eigen::Index>(alpha)), dim_);
}

double SpectralDecomposition::biorthogonality_residual() const {
  return (right_.adjoint() * left_ - ComplexMatrix::Identity(right_.cols(), right_.cols())).cwiseAbs().maxCoeff();
}

double SpectralDecomposition::completeness_residual() const {
  return (right_ * left_.adjoint() - ComplexMatrix::Identity(right_.rows(), right_.rows())).cwiseAbs().maxCoeff();
}

SuperOperator SpectralDecomposition::projector(std::size_t alpha) const {
  const auto a = static_cast<Eigen::Index>(alpha);
  return SuperOperator(dim_, right_.col(a) * left_.col(a).adjoint());
}

SpectralDecomposition diagonalize(const SuperOperator& a, const DiagonalizeOptions& options) {
  const ComplexMatrix& m = a.matrix();
  const Eigen::Index n = m.rows();
  Eigen::ComplexEigenSolver<ComplexMatrix> es(m, true);
  if (es.info() != Eigen::Success) throw Error("diagonalize: eigensolver failed to converge");

  ComplexMatrix raw = es.eigenvectors();
  for (Eigen::Index c = 0; c < n; ++c) raw.col(c).normalize();
  Eigen::BDCSVD<ComplexMatrix> svd(raw);
  const auto& sv = svd.singularValues();
  const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
  if (!(cond <= options.condition_cap))
    throw DefectiveMap("diagonalize: eigenvector matrix condition number " + std::to_string(cond) +
                           " exceeds cap; map has non-trivial Jordan blocks",
                       cond);

  const auto clusters = eigenvalue_clusters(es.eigenvalues());
  ComplexVector values(n);
  ComplexMatrix right(n, n);
  Eigen::Index col = 0;
  for (const auto& cluster : clusters) {
    const auto k = static_cast<Eigen::Index>(cluster.size());
    ComplexMatrix block(n, k);
    for (Eigen::Index j = 0; j < k; ++j) block.col(j) = raw.col(cluster[j]);
    if (k > 1) gram_schmidt(block);
    for (Eigen::Index j = 0; j < k; ++j) {
      values(col) = es.eigenvalues()(cluster[j]);
      right.col(col) = block.col(j);
      fix_phase(right.col(col));
      ++col;
    }
  }

  ComplexMatrix left;
  const bool unitary_basis =
      (right.adjoint() * right - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-10;
  if (is_normal(a, options.tol) && unitary_basis) {
    left = right;
  } else {
    left = right.adjoint().partialPivLu().inverse();
  }
  return SpectralDecomposition(a.dim(), std::move(values), std::move(right), std::move(left));
}

SuperOperator spectral_function(const SpectralDecomposition& dec, const std::function<cplx(cplx)>& phi) {
  const Eigen::Index n = static_cast<Eigen::Index>(dec.size());
  ComplexVector fv(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    fv(i) = phi(dec.eigenvalues()(i));
    if (!std::isfinite(fv(i).real()) || !std::isfinite(fv(i).imag()))
      throw UndefinedFunctionValue("spectral_function: phi is undefined at eigenvalue (" +
                                   std::to_string(dec.eigenvalues()(i).real()) + ", " +
                                   std::to_string(dec.eigenvalues()(i).imag()) + ")");
  }
  return SuperOperator(dec.dim(), dec.right() * fv.asDiagonal() * dec.left().adjoint());
}

}  // namespace commudyn::superop
