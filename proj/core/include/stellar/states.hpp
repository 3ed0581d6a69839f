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

#include <cstddef>
#include <span>

#include "stellar/fock_types.hpp"

namespace stellar {

enum class Parity { Even, Odd };

/// max(16, ceil(|beta|^2 + 8|beta| + 8)); the smallest cutoff accepted by the
/// coherent-family constructors.
std::size_t default_coherent_cutoff(Complex beta);

FockVector coherent(Complex beta, std::size_t cutoff);
FockVector coherent(Complex beta);

/// N_+/-(beta) = 1 +/- exp(-2|beta|^2).
double cat_normalization(Complex beta, Parity parity);

/// (|beta> +/- |-beta>) / sqrt(2 N_+/-). Throws DegenerateError for the odd
/// cat at beta = 0.
FockVector cat(Complex beta, Parity parity, std::size_t cutoff);
FockVector cat(Complex beta, Parity parity);

/// Weight of |t beta_+> in an even cat sent through amplitude transmittance t.
double lossy_cat_even_weight(Complex beta, double t);

/// p_+ |t beta_+><t beta_+| + (1 - p_+) |t beta_-><t beta_-|.
FockDensity lossy_cat(Complex beta, double t, std::size_t cutoff);
FockDensity lossy_cat(Complex beta, double t);

/// Thermal state with weights nbar^m / (1 + nbar)^(m+1).
FockDensity thermal(double nbar, std::size_t cutoff);

/// sum_m (1 - T)^m p_m: vacuum probability after intensity transmittance T.
double q0_after_loss(std::span<const double> p, double transmittance);

/// Probability that exactly a given subset of `clicks` detectors fires in a
/// balanced array of `channels` on-off detectors with efficiency `eta` and
/// dark-count probability `dark`.
double click_statistics(std::span<const double> p, int channels, double eta, double dark,
                        int clicks);

}  // namespace stellar
