// Copyright 2026 The stellar-witness Authors
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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace stellar {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// Dense row-major complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, ComplexVector entries);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const Complex> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return entries_.empty(); }

  Complex& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  std::span<const Complex> entries() const noexcept { return entries_; }
  std::span<Complex> entries() noexcept { return entries_; }

  ComplexMatrix adjoint() const;
  ComplexVector column(std::size_t c) const;

  double max_abs() const;
  double frobenius_norm() const;
  /// Maximum absolute column sum.
  double one_norm() const;
  Complex trace() const;
  bool all_finite() const;
  /// max |A(k,l) - conj(A(l,k))| relative to max|A|, per the Hermitian test.
  bool is_hermitian(double rel_tol = 1e-12) const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scale);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  ComplexVector entries_;
};

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, ComplexMatrix a);
ComplexVector operator*(const ComplexMatrix& a, std::span<const Complex> v);

double norm2(std::span<const Complex> v);
Complex inner(std::span<const Complex> a, std::span<const Complex> b);  // <a|b>

/// Eigenpairs of a Hermitian matrix, eigenvalues sorted descending.
struct Spectrum {
  std::vector<double> eigenvalues;
  std::vector<ComplexVector> eigenvectors;
};

/// Cyclic complex Jacobi diagonalisation of (A + A^dagger)/2.
///
/// Each eigenvector is normalised and rotated so that its largest-modulus
/// component (first one on ties) is real and positive, which makes the output
/// a deterministic function of the input bits.
Spectrum hermitian_spectrum(const ComplexMatrix& a);

/// Largest eigenvalue only (same algorithm, skips eigenvector bookkeeping).
double max_eigenvalue(const ComplexMatrix& a);

/// exp(A) by scaling and squaring around a truncated Taylor series.
ComplexMatrix matrix_exponential(const ComplexMatrix& a);

/// Physicists' Hermite polynomials H_0(x) .. H_{n_max}(x).
ComplexVector hermite_sequence(Complex x, std::size_t n_max);

/// ln(n!) with a cached table for small n.
double log_factorial(std::size_t n);

}  // namespace stellar
