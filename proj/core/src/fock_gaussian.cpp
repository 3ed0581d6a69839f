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

#include "stellar/fock_gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "stellar/errors.hpp"

namespace stellar {

double FockVector::norm_squared() const {
  double s = 0.0;
  for (const auto& z : amplitudes) s += std::norm(z);
  return s;
}

std::vector<double> FockDensity::probabilities() const {
  std::vector<double> p(matrix.rows());
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = matrix(k, k).real();
  return p;
}

FockDensity to_density(const FockVector& psi) {
  const std::size_t n = psi.amplitudes.size();
  ComplexMatrix rho(n, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l) rho(k, l) = psi.amplitudes[k] * std::conj(psi.amplitudes[l]);
  return {std::move(rho), psi.tail_bound};
}

bool GaussianParams::valid() const {
  return std::isfinite(theta) && std::isfinite(vartheta) && std::isfinite(r) && r >= 0.0 &&
         std::isfinite(alpha.real()) && std::isfinite(alpha.imag());
}

GaussianParams canonical(GaussianParams p) {
  if (p.r < 0.0) {
    constexpr double half_pi = std::numbers::pi / 2.0;
    p.r = -p.r;
    p.theta += half_pi;
    p.vartheta -= half_pi;
    p.alpha *= Complex(0.0, -1.0);
  }
  return p;
}

namespace {

// With mu = cosh r, nu = sinh r the Hermite sum for <k|U|m> becomes
//
//   e^{ik theta} e^{im vartheta} mu^{-1/2} exp(-|alpha|^2/2 + nu/(2 mu) alpha^*^2)
//     * sum_j mu^{-j} sqrt(C(k,j) C(m,j)) col[m-j] row[k-j]
//
// where col and row are Hermite polynomials rescaled by powers of
// sqrt(nu/(2 mu)) and 1/sqrt(n!). In that form the sinh r -> 0 limit is
// regular and no factorial is ever formed explicitly.
struct ElementKernel {
  double theta;
  double vartheta;
  double log_mu;
  Complex prefactor;
  ComplexVector col;  // indexed by m - j
  ComplexVector row;  // indexed by k - j

  ElementKernel(const GaussianParams& p, std::size_t row_max, std::size_t col_max)
      : theta(p.theta), vartheta(p.vartheta) {
    if (!p.valid()) throw DomainError("Gaussian parameters must be finite with r >= 0");
    const double mu = std::cosh(p.r);
    const double nu = std::sinh(p.r);
    const double ratio = nu / mu;
    const Complex a = p.alpha;
    const Complex ac = std::conj(a);
    log_mu = std::log(mu);
    prefactor = std::exp(Complex(-0.5 * std::norm(a)) + 0.5 * ratio * ac * ac) / std::sqrt(mu);

    col.resize(col_max + 1);
    col[0] = 1.0;
    const Complex col_step = -ac / mu;
    if (col_max >= 1) col[1] = col_step;
    for (std::size_t n = 1; n < col_max; ++n) {
      const double sn = std::sqrt(static_cast<double>(n));
      col[n + 1] = (col_step * col[n] - sn * ratio * col[n - 1]) / std::sqrt(static_cast<double>(n + 1));
    }

    row.resize(row_max + 1);
    row[0] = 1.0;
    const Complex row_step = a - ratio * ac;
    if (row_max >= 1) row[1] = row_step;
    for (std::size_t n = 1; n < row_max; ++n) {
      const double sn = std::sqrt(static_cast<double>(n));
      row[n + 1] = (row_step * row[n] + sn * ratio * row[n - 1]) / std::sqrt(static_cast<double>(n + 1));
    }
  }

  Complex element(std::size_t k, std::size_t m) const {
    const std::size_t jmax = std::min(k, m);
    const double lk = log_factorial(k);
    const double lm = log_factorial(m);
    Complex sum = 0.0;
    for (std::size_t j = 0; j <= jmax; ++j) {
      const double log_binoms = lk + lm - 2.0 * log_factorial(j) - log_factorial(k - j) -
                                log_factorial(m - j);
      const double weight = std::exp(0.5 * log_binoms - static_cast<double>(j) * log_mu);
      sum += weight * (col[m - j] * row[k - j]);
    }
    const double phase = static_cast<double>(k) * theta + static_cast<double>(m) * vartheta;
    return std::polar(1.0, phase) * prefactor * sum;
  }
};

}  // namespace

Complex gaussian_matrix_element(const GaussianParams& params, long k, long m) {
  if (k < 0 || m < 0) {
    throw DomainError("Fock indices must be non-negative, got (" + std::to_string(k) + ", " +
                      std::to_string(m) + ")");
  }
  const ElementKernel kernel(params, static_cast<std::size_t>(k), static_cast<std::size_t>(m));
  return kernel.element(static_cast<std::size_t>(k), static_cast<std::size_t>(m));
}

ComplexMatrix gaussian_block(const GaussianParams& params, std::size_t row_max,
                             std::size_t col_max) {
  const ElementKernel kernel(params, row_max, col_max);
  ComplexMatrix out(row_max + 1, col_max + 1);
  for (std::size_t k = 0; k <= row_max; ++k)
    for (std::size_t m = 0; m <= col_max; ++m) out(k, m) = kernel.element(k, m);
  return out;
}

FockVector transform_coherent(const GaussianParams& params, Complex beta, std::size_t k_max) {
  if (!params.valid()) throw DomainError("Gaussian parameters must be finite with r >= 0");
  const double mu = std::cosh(params.r);
  const double nu = std::sinh(params.r);
  const Complex rot = std::polar(1.0, params.vartheta);
  const Complex beta_t = rot * beta * mu + std::conj(rot) * std::conj(beta) * nu;
  const Complex exponent = 0.5 * (params.alpha * std::conj(beta_t) - std::conj(params.alpha) * beta_t);
  const Complex phase = std::exp(exponent);

  GaussianParams shifted{params.theta, 0.0, params.r, params.alpha + beta_t};
  const ElementKernel kernel(shifted, k_max, 0);
  FockVector out;
  out.amplitudes.resize(k_max + 1);
  for (std::size_t k = 0; k <= k_max; ++k) out.amplitudes[k] = phase * kernel.element(k, 0);
  out.tail_bound = std::max(0.0, 1.0 - out.norm_squared());
  return out;
}

ComplexMatrix annihilation(std::size_t cutoff) {
  ComplexMatrix a(cutoff + 1, cutoff + 1);
  for (std::size_t k = 1; k <= cutoff; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

std::size_t default_oracle_cutoff(const GaussianParams& params, std::size_t relevant) {
  const double amp = std::abs(params.alpha);
  return relevant + 30 + static_cast<std::size_t>(std::ceil(amp * amp + 8.0 * amp));
}

OracleMatrix oracle_gaussian_matrix(const GaussianParams& params, std::size_t cutoff,
                                    std::size_t relevant, double max_defect) {
  if (!params.valid()) throw DomainError("Gaussian parameters must be finite with r >= 0");
  if (relevant > cutoff) throw DomainError("relevant block exceeds the oracle cutoff");
  const std::size_t dim = cutoff + 1;
  const ComplexMatrix a = annihilation(cutoff);
  const ComplexMatrix ad = a.adjoint();

  auto phase_gate = [&](double phi) {
    ComplexMatrix gen(dim, dim);
    for (std::size_t k = 0; k < dim; ++k) gen(k, k) = Complex(0.0, phi * static_cast<double>(k));
    return matrix_exponential(gen);
  };

  ComplexMatrix disp_gen = params.alpha * ad - std::conj(params.alpha) * a;
  const ComplexMatrix displacement = matrix_exponential(disp_gen);

  const double tau = std::tanh(params.r);
  const ComplexMatrix ad2 = ad * ad;
  const ComplexMatrix a2 = a * a;
  ComplexMatrix number_gen(dim, dim);
  const double log_cosh = std::log(std::cosh(params.r));
  for (std::size_t k = 0; k < dim; ++k) number_gen(k, k) = -log_cosh * (static_cast<double>(k) + 0.5);
  const ComplexMatrix squeeze = matrix_exponential(Complex(0.5 * tau) * ad2) *
                                matrix_exponential(number_gen) *
                                matrix_exponential(Complex(-0.5 * tau) * a2);

  OracleMatrix out;
  out.cutoff = cutoff;
  out.matrix = phase_gate(params.theta) * displacement * squeeze * phase_gate(params.vartheta);

  const std::size_t guard = std::max<std::size_t>(5, dim / 6);
  const std::size_t band_start = dim > guard ? dim - guard : 0;
  double defect = 0.0;
  for (std::size_t k = 0; k <= relevant; ++k) {
    double mass = 0.0;
    for (std::size_t l = band_start; l < dim; ++l) mass += std::norm(displacement(k, l));
    defect = std::max(defect, mass);
  }
  out.defect = defect;
  if (defect > max_defect) {
    throw TailBoundError("oracle cutoff " + std::to_string(cutoff) +
                             " too small: leakage indicator " + std::to_string(defect),
                         defect);
  }
  return out;
}

}  // namespace stellar
