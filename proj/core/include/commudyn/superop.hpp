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

#include <functional>
#include <vector>

#include "commudyn/types.hpp"

namespace commudyn::superop {

enum class Vectorization { column_stacking };

// vec(x)[i + D*j] = x(i, j). The only vec/devec pair in the library.
ComplexVector vec(const ComplexMatrix& x);
ComplexMatrix devec(const ComplexVector& v, int dim);

// Linear map M_D -> M_D stored as the D^2 x D^2 matrix acting on vec(x).
class SuperOperator {
 public:
  static constexpr Vectorization vectorization = Vectorization::column_stacking;

  SuperOperator() = default;
  explicit SuperOperator(int dim);
  SuperOperator(int dim, ComplexMatrix matrix);

  static SuperOperator identity(int dim);
  static SuperOperator zero(int dim) { return SuperOperator(dim); }
  // x -> left * x * right
  static SuperOperator sandwich(const ComplexMatrix& left, const ComplexMatrix& right);
  // x -> u x u*
  static SuperOperator conjugation(const ComplexMatrix& u);
  // x -> -i [h, x]
  static SuperOperator hamiltonian(const ComplexMatrix& h);
  // x -> rate * (j x j* - 1/2 {j* j, x})
  static SuperOperator dissipator(const ComplexMatrix& jump, cplx rate = 1.0);
  static SuperOperator transpose_map(int dim);
  static SuperOperator from_action(int dim, const std::function<ComplexMatrix(const ComplexMatrix&)>& action);

  int dim() const { return dim_; }
  const ComplexMatrix& matrix() const { return matrix_; }

  ComplexMatrix apply(const ComplexMatrix& x) const;
  ComplexMatrix operator()(const ComplexMatrix& x) const { return apply(x); }

  SuperOperator& operator+=(const SuperOperator& other);
  SuperOperator& operator-=(const SuperOperator& other);
  SuperOperator& operator*=(cplx scale);

  friend SuperOperator operator+(SuperOperator a, const SuperOperator& b) { return a += b; }
  friend SuperOperator operator-(SuperOperator a, const SuperOperator& b) { return a -= b; }
  friend SuperOperator operator*(SuperOperator a, cplx s) { return a *= s; }
  friend SuperOperator operator*(cplx s, SuperOperator a) { return a *= s; }
  // Composition: (A * B) x = A (B x).
  friend SuperOperator operator*(const SuperOperator& a, const SuperOperator& b);

  // Frobenius norm of the representing matrix (= Hilbert-Schmidt norm of the map).
  double norm() const { return matrix_.norm(); }
  double max_abs() const;
  double max_abs_diff(const SuperOperator& other) const;

 private:
  int dim_ = 0;
  ComplexMatrix matrix_;
};

SuperOperator compose(const SuperOperator& a, const SuperOperator& b);

// tr(a* b); conjugate-linear in the first slot.
cplx hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);
// <<A, B>> = sum_alpha (A f_alpha, B f_alpha) for any orthonormal f.
cplx hs_inner(const SuperOperator& a, const SuperOperator& b);

// (dual(A) a, b) = (a, A b).
SuperOperator dual(const SuperOperator& a);

double commutator_norm(const SuperOperator& a, const SuperOperator& b);
bool is_normal(const SuperOperator& a, double tol = kDefaultTol);

bool is_finite(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol = kDefaultTol);
// Smallest eigenvalue of the Hermitian part (m + m*)/2.
double min_hermitian_eigenvalue(const ComplexMatrix& m);

// e_{ij} ordered by vec index i + D*j.
std::vector<ComplexMatrix> matrix_unit_basis(int dim);
double gram_deviation(const std::vector<ComplexMatrix>& basis);

// a_{alpha beta} with A = sum a_{alpha beta} F_{alpha beta},
// F_{alpha beta} x = f_alpha x f_beta*.
ComplexMatrix f_coefficients(const SuperOperator& a, const std::vector<ComplexMatrix>& basis,
                             double tol = kDefaultTol);
SuperOperator from_f_coefficients(const ComplexMatrix& coeffs, const std::vector<ComplexMatrix>& basis);

// a'_{alpha beta} with A = sum a'_{alpha beta} E_{alpha beta},
// E_{alpha beta} x = f_alpha (f_beta, x).
ComplexMatrix e_coefficients(const SuperOperator& a, const std::vector<ComplexMatrix>& basis,
                             double tol = kDefaultTol);
SuperOperator from_e_coefficients(const ComplexMatrix& coeffs, const std::vector<ComplexMatrix>& basis);

struct ChannelReport {
  bool cp = false;
  bool tp = false;
  bool unital = false;
  bool hermiticity_preserving = false;

  // Minimum eigenvalue of the (Hermitian part of the) F-coefficient matrix in
  // the matrix-unit basis, with its eigenvector reshaped to a D x D matrix.
  double choi_min_eigenvalue = 0.0;
  ComplexMatrix choi_witness;
  // ||dual(A) I - I||_max
  double tp_residual = 0.0;
  ComplexMatrix tp_witness;
  // ||A I - I||_max
  double unital_residual = 0.0;
  ComplexMatrix unital_witness;
  // ||a - a*||_max for the coefficient matrix a.
  double hermiticity_residual = 0.0;

  bool cptp() const { return cp && tp; }
};

ChannelReport validate_channel(const SuperOperator& a, double tol = kDefaultTol);

// Eigen-decomposition A = sum_alpha d_alpha g_alpha tr(h_alpha* .) with
// tr(g_alpha* h_beta) = delta_{alpha beta}. Columns of right()/left() are
// vec(g_alpha)/vec(h_alpha).
class SpectralDecomposition {
 public:
  SpectralDecomposition() = default;
  SpectralDecomposition(int dim, ComplexVector eigenvalues, ComplexMatrix right, ComplexMatrix left);

  int dim() const { return dim_; }
  std::size_t size() const { return static_cast<std::size_t>(eigenvalues_.size()); }
  const ComplexVector& eigenvalues() const { return eigenvalues_; }
  const ComplexMatrix& right() const { return right_; }
  const ComplexMatrix& left() const { return left_; }
  cplx eigenvalue(std::size_t alpha) const { return eigenvalues_(static_cast<Eigen::Index>(alpha)); }
  ComplexMatrix g(std::size_t alpha) const;
  ComplexMatrix h(std::size_t alpha) const;

  // max |tr(g_a* h_b) - delta_ab|
  double biorthogonality_residual() const;
  // ||sum_a g_a tr(h_a* .) - id||_max
  double completeness_residual() const;
  // x -> g_alpha tr(h_alpha* x)
  SuperOperator projector(std::size_t alpha) const;

 private:
  int dim_ = 0;
  ComplexVector eigenvalues_;
  ComplexMatrix right_;
  ComplexMatrix left_;
};

struct DiagonalizeOptions {
  double tol = kDefaultTol;
  // Eigenvector-matrix condition number beyond which the map is treated as defective.
  double condition_cap = 1e8;
};

SpectralDecomposition diagonalize(const SuperOperator& a, const DiagonalizeOptions& options = {});

// sum_alpha phi(d_alpha) g_alpha tr(h_alpha* .)
SuperOperator spectral_function(const SpectralDecomposition& dec, const std::function<cplx(cplx)>& phi);

}  // namespace commudyn::superop
