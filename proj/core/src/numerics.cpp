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

#include "stellar/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "stellar/errors.hpp"

namespace stellar {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : ComplexMatrix(rows, cols, ComplexVector(rows * cols)) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, ComplexVector entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows == 0 || cols == 0) {
    throw DimensionError("matrix dimensions must be positive");
  }
  if (entries_.size() != rows * cols) {
    throw DimensionError("entry count " + std::to_string(entries_.size()) +
                         " does not match " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> values) {
  ComplexMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

ComplexVector ComplexMatrix::column(std::size_t c) const {
  ComplexVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : entries_) m = std::max(m, std::abs(z));
  return m;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : entries_) s += std::norm(z);
  return std::sqrt(s);
}

double ComplexMatrix::one_norm() const {
  double best = 0.0;
  for (std::size_t c = 0; c < cols_; ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) s += std::abs((*this)(r, c));
    best = std::max(best, s);
  }
  return best;
}

Complex ComplexMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

bool ComplexMatrix::is_hermitian(double rel_tol) const {
  if (!square()) return false;
  const double scale = max_abs();
  for (std::size_t k = 0; k < rows_; ++k)
    for (std::size_t l = k; l < cols_; ++l)
      if (std::abs((*this)(k, l) - std::conj((*this)(l, k))) > rel_tol * scale) return false;
  return true;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionError("shape mismatch in +=");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionError("shape mismatch in -=");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
  for (auto& z : entries_) z *= scale;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("cannot multiply " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " by " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
  }
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

ComplexVector operator*(const ComplexMatrix& a, std::span<const Complex> v) {
  if (a.cols() != v.size()) throw DimensionError("matrix-vector shape mismatch");
  ComplexVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex s = 0.0;
    for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * v[k];
    out[i] = s;
  }
  return out;
}

double norm2(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
  const std::size_t n = std::min(a.size(), b.size());
  Complex s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::conj(a[i]) * b[i];
  return s;
}

namespace {

constexpr int kMaxSweeps = 64;

ComplexMatrix symmetrized(const ComplexMatrix& a) {
  if (!a.square()) {
    throw DimensionError("hermitian_spectrum needs a square matrix, got " +
                         std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
  if (!a.all_finite()) throw NumericError("hermitian_spectrum: non-finite entry");
  const std::size_t n = a.rows();
  ComplexMatrix h(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    h(k, k) = a(k, k).real();
    for (std::size_t l = k + 1; l < n; ++l) {
      const Complex v = 0.5 * (a(k, l) + std::conj(a(l, k)));
      h(k, l) = v;
      h(l, k) = std::conj(v);
    }
  }
  return h;
}

// Diagonalises h in place; accumulates rotations into v when given.
void jacobi(ComplexMatrix& h, ComplexMatrix* v) {
  const std::size_t n = h.rows();
  const double scale = h.frobenius_norm();
  if (scale == 0.0) return;
  const double target = 1e-32 * scale * scale;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(h(p, q));
    if (off <= target) return;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = h(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const Complex phase = apq / mag;
        const double app = h(p, p).real();
        const double aqq = h(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // G = [[c, s e^{i phi}], [-s e^{-i phi}, c]] on the (p, q) plane.
        const Complex gpq = s * phase;
        const Complex gqp = -s * std::conj(phase);

        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = h(k, p);
          const Complex akq = h(k, q);
          h(k, p) = akp * c + akq * gqp;
          h(k, q) = akp * gpq + akq * c;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = h(p, k);
          const Complex aqk = h(q, k);
          h(p, k) = c * apk + std::conj(gqp) * aqk;
          h(q, k) = std::conj(gpq) * apk + c * aqk;
        }
        h(p, q) = 0.0;
        h(q, p) = 0.0;
        h(p, p) = h(p, p).real();
        h(q, q) = h(q, q).real();

        if (v != nullptr) {
          auto& vm = *v;
          for (std::size_t k = 0; k < n; ++k) {
            const Complex vkp = vm(k, p);
            const Complex vkq = vm(k, q);
            vm(k, p) = vkp * c + vkq * gqp;
            vm(k, q) = vkp * gpq + vkq * c;
          }
        }
      }
    }
  }
  throw NumericError("Jacobi eigensolver did not converge in " + std::to_string(kMaxSweeps) +
                     " sweeps");
}

}  // namespace

Spectrum hermitian_spectrum(const ComplexMatrix& a) {
  ComplexMatrix h = symmetrized(a);
  const std::size_t n = h.rows();
  ComplexMatrix v = ComplexMatrix::identity(n);
  jacobi(h, &v);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return h(x, x).real() > h(y, y).real();
  });

  Spectrum out;
  out.eigenvalues.reserve(n);
  out.eigenvectors.reserve(n);
  for (std::size_t idx : order) {
    out.eigenvalues.push_back(h(idx, idx).real());
    ComplexVector vec = v.column(idx);
    std::size_t lead = 0;
    for (std::size_t k = 1; k < n; ++k)
      if (std::abs(vec[k]) > std::abs(vec[lead]) * (1.0 + 1e-12)) lead = k;
    const double nrm = norm2(vec);
    const Complex fix = std::conj(vec[lead]) / (std::abs(vec[lead]) * nrm);
    for (auto& z : vec) z *= fix;
    vec[lead] = vec[lead].real();
    out.eigenvectors.push_back(std::move(vec));
  }
  return out;
}

double max_eigenvalue(const ComplexMatrix& a) {
  ComplexMatrix h = symmetrized(a);
  if (h.rows() == 1) return h(0, 0).real();
  jacobi(h, nullptr);
  double best = h(0, 0).real();
  for (std::size_t i = 1; i < h.rows(); ++i) best = std::max(best, h(i, i).real());
  return best;
}

ComplexMatrix matrix_exponential(const ComplexMatrix& a) {
  if (!a.square()) throw DimensionError("matrix_exponential needs a square matrix");
  if (!a.all_finite()) throw NumericError("matrix_exponential: non-finite entry");
  const double norm = a.one_norm();
  if (norm > 1e6) {
    throw NumericError("matrix_exponential: one-norm " + std::to_string(norm) +
                       " exceeds the supported range");
  }
  const std::size_t n = a.rows();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  ComplexMatrix b = a;
  b *= std::ldexp(1.0, -squarings);

  ComplexMatrix result = ComplexMatrix::identity(n);
  ComplexMatrix term = ComplexMatrix::identity(n);
  for (int k = 1; k <= 40; ++k) {
    term = term * b;
    term *= 1.0 / k;
    result += term;
    if (term.max_abs() <= 1e-18 * result.max_abs()) break;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  if (!result.all_finite()) {
    throw NumericError("matrix_exponential overflowed (one-norm " + std::to_string(norm) + ")");
  }
  return result;
}

ComplexVector hermite_sequence(Complex x, std::size_t n_max) {
  ComplexVector h(n_max + 1);
  h[0] = 1.0;
  if (n_max >= 1) h[1] = 2.0 * x;
  for (std::size_t k = 1; k < n_max; ++k)
    h[k + 1] = 2.0 * x * h[k] - 2.0 * static_cast<double>(k) * h[k - 1];
  return h;
}

double log_factorial(std::size_t n) {
  static const auto table = [] {
    std::array<double, 512> t{};
    for (std::size_t k = 2; k < t.size(); ++k) t[k] = t[k - 1] + std::log(static_cast<double>(k));
    return t;
  }();
  if (n < table.size()) return table[n];
  return std::lgamma(static_cast<double>(n) + 1.0);
}

}  // namespace stellar
