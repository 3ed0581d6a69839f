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

#include "stellar/states.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stellar/errors.hpp"

namespace stellar {

namespace {

void require_cutoff(Complex beta, std::size_t cutoff) {
  const std::size_t needed = default_coherent_cutoff(beta);
  if (cutoff < needed) {
    throw TailBoundError("cutoff " + std::to_string(cutoff) + " below the required " +
                             std::to_string(needed) + " for |beta| = " +
                             std::to_string(std::abs(beta)),
                         static_cast<double>(needed - cutoff));
  }
}

void require_unit_interval(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError(std::string(name) + " must lie in [0, 1], got " + std::to_string(x));
  }
}

void add_projector(ComplexMatrix& rho, const FockVector& psi, double weight) {
  const std::size_t n = psi.amplitudes.size();
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l)
      rho(k, l) += weight * psi.amplitudes[k] * std::conj(psi.amplitudes[l]);
}

}  // namespace

std::size_t default_coherent_cutoff(Complex beta) {
  const double b = std::abs(beta);
  return std::max<std::size_t>(16, static_cast<std::size_t>(std::ceil(b * b + 8.0 * b + 8.0)));
}

FockVector coherent(Complex beta, std::size_t cutoff) {
  require_cutoff(beta, cutoff);
  FockVector out;
  out.amplitudes.resize(cutoff + 1);
  out.amplitudes[0] = std::exp(-0.5 * std::norm(beta));
  for (std::size_t k = 1; k <= cutoff; ++k)
    out.amplitudes[k] = out.amplitudes[k - 1] * beta / std::sqrt(static_cast<double>(k));
  out.tail_bound = std::max(0.0, 1.0 - out.norm_squared());
  return out;
}

FockVector coherent(Complex beta) { return coherent(beta, default_coherent_cutoff(beta)); }

double cat_normalization(Complex beta, Parity parity) {
  const double x = -2.0 * std::norm(beta);
  return parity == Parity::Even ? 1.0 + std::exp(x) : -std::expm1(x);
}

FockVector cat(Complex beta, Parity parity, std::size_t cutoff) {
  const double norm = cat_normalization(beta, parity);
  if (norm <= 0.0) throw DegenerateError("odd cat state is undefined at beta = 0");
  FockVector base = coherent(beta, cutoff);
  const std::size_t keep = parity == Parity::Even ? 0 : 1;
  const double scale = 2.0 / std::sqrt(2.0 * norm);
  for (std::size_t k = 0; k < base.amplitudes.size(); ++k)
    base.amplitudes[k] = (k % 2 == keep) ? scale * base.amplitudes[k] : Complex{};
  base.tail_bound = std::max(0.0, 1.0 - base.norm_squared());
  return base;
}

FockVector cat(Complex beta, Parity parity) {
  return cat(beta, parity, default_coherent_cutoff(beta));
}

double lossy_cat_even_weight(Complex beta, double t) {
  require_unit_interval(t, "amplitude transmittance");
  const double b2 = std::norm(beta);
  const double num = std::exp(-2.0 * t * t * b2) + std::exp(-2.0 * (1.0 - t * t) * b2);
  return 0.5 + 0.5 * num / (1.0 + std::exp(-2.0 * b2));
}

FockDensity lossy_cat(Complex beta, double t, std::size_t cutoff) {
  const double p_even = lossy_cat_even_weight(beta, t);
  const Complex damped = t * beta;
  require_cutoff(damped, cutoff);
  ComplexMatrix rho(cutoff + 1, cutoff + 1);
  double tail = 0.0;
  const FockVector even = cat(damped, Parity::Even, cutoff);
  add_projector(rho, even, p_even);
  tail = std::max(tail, even.tail_bound);
  if (p_even < 1.0 && cat_normalization(damped, Parity::Odd) > 0.0) {
    const FockVector odd = cat(damped, Parity::Odd, cutoff);
    add_projector(rho, odd, 1.0 - p_even);
    tail = std::max(tail, odd.tail_bound);
  }
  return {std::move(rho), tail};
}

FockDensity lossy_cat(Complex beta, double t) {
  return lossy_cat(beta, t, default_coherent_cutoff(t * beta));
}

FockDensity thermal(double nbar, std::size_t cutoff) {
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) {
    throw DomainError("mean photon number must be finite and non-negative");
  }
  const double ratio = nbar / (1.0 + nbar);
  const double tail = std::pow(ratio, static_cast<double>(cutoff + 1));
  if (tail > 1e-9) {
    throw TailBoundError("cutoff " + std::to_string(cutoff) + " leaves thermal tail " +
                             std::to_string(tail),
                         tail);
  }
  ComplexMatrix rho(cutoff + 1, cutoff + 1);
  double w = 1.0 / (1.0 + nbar);
  for (std::size_t m = 0; m <= cutoff; ++m) {
    rho(m, m) = w;
    w *= ratio;
  }
  return {std::move(rho), tail};
}

double q0_after_loss(std::span<const double> p, double transmittance) {
  require_unit_interval(transmittance, "transmittance");
  double total = 0.0;
  for (double pm : p) {
    if (!(pm >= 0.0)) throw DomainError("probabilities must be non-negative");
    total += pm;
  }
  if (total > 1.0 + 1e-12) throw DomainError("probabilities sum to more than one");
  const double loss = 1.0 - transmittance;
  double sum = 0.0;
  double weight = 1.0;
  for (double pm : p) {
    sum += weight * pm;
    weight *= loss;
  }
  return sum;
}

double click_statistics(std::span<const double> p, int channels, double eta, double dark,
                        int clicks) {
  if (channels < 1) throw DomainError("detector needs at least one channel");
  if (clicks < 0 || clicks > channels) {
    throw DomainError("click multiplicity " + std::to_string(clicks) + " outside [0, " +
                      std::to_string(channels) + "]");
  }
  require_unit_interval(eta, "efficiency");
  require_unit_interval(dark, "dark-count probability");
  double sum = 0.0;
  double binom = 1.0;
  for (int j = 0; j <= clicks; ++j) {
    const int silent = channels - clicks + j;
    const double term = binom * std::pow(1.0 - dark, silent) *
                        q0_after_loss(p, eta * silent / static_cast<double>(channels));
    sum += (j % 2 == 0) ? term : -term;
    binom = binom * (clicks - j) / (j + 1);
  }
  return sum;
}

}  // namespace stellar
