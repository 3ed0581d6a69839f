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

#include "stellar/numerics.hpp"

namespace stellar {

/// Pure-state amplitudes <k|psi> for k = 0..cutoff.
///
/// `tail_bound` bounds the probability mass above the cutoff, so the stored
/// norm squared lies in [1 - tail_bound, 1].
struct FockVector {
  ComplexVector amplitudes;
  double tail_bound = 0.0;

  std::size_t cutoff() const noexcept { return amplitudes.empty() ? 0 : amplitudes.size() - 1; }
  double norm_squared() const;
};

/// Density matrix on Fock states 0..cutoff.
struct FockDensity {
  ComplexMatrix matrix;
  double tail_bound = 0.0;

  std::size_t cutoff() const noexcept { return matrix.rows() - 1; }
  std::vector<double> probabilities() const;
};

FockDensity to_density(const FockVector& psi);

}  // namespace stellar
