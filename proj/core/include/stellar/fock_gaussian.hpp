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
#include <optional>

#include "stellar/fock_types.hpp"
#include "stellar/numerics.hpp"

namespace stellar {

/// Single-mode Gaussian unitary U = F(theta) D(alpha) S(r) F(vartheta) with
/// F(phi) = exp(i phi n), D(alpha) = exp(alpha a^dag - alpha^* a) and
/// S(r) = exp(r/2 (a^dag^2 - a^2)).
struct GaussianParams {
  double theta = 0.0;
  double vartheta = 0.0;
  double r = 0.0;  // >= 0
  Complex alpha{};

  bool valid() const;
};

/// Maps a parameter tuple with r < 0 onto an equivalent one with r >= 0.
///
/// Uses S(-r) = F(pi/2) S(r) F(-pi/2) and D(alpha) F(phi) = F(phi) D(e^{-i phi} alpha),
/// so the result equals the input operator exactly (theta absorbs the phase).
GaussianParams canonical(GaussianParams p);

/// <k|U|m>. Throws DomainError for negative indices or invalid params.
Complex gaussian_matrix_element(const GaussianParams& params, long k, long m);

/// Matrix of <k|U|m> for 0 <= k <= row_max, 0 <= m <= col_max. Entries are
/// bit-identical to gaussian_matrix_element.
ComplexMatrix gaussian_block(const GaussianParams& params, std::size_t row_max,
                             std::size_t col_max);

/// Amplitudes <k|U|beta> for k <= k_max of a transformed coherent state.
FockVector transform_coherent(const GaussianParams& params, Complex beta, std::size_t k_max);

/// Result of the truncated-generator oracle.
struct OracleMatrix {
  ComplexMatrix matrix;  // (cutoff+1) x (cutoff+1)
  double defect = 0.0;   // edge leakage of the relevant rows, see below
  std::size_t cutoff = 0;
};

/// Independent reference for <k|U|m> built from exponentials of truncated
/// generator matrices: F(theta) . D(alpha) . S(r) . F(vartheta).
///
/// D is exp(alpha a^dag - alpha^* a) on the truncated space. S is evaluated in
/// its normal-ordered form exp(tanh r/2 a^dag^2) cosh(r)^-(n+1/2)
/// exp(-tanh r/2 a^2), each factor exponentiated from its truncated generator;
/// those factors are exact on the truncated space, so the only truncation
/// error enters through D. `defect` is the largest probability mass that a D
/// row (rows 0..relevant) places in the top guard band of the truncated space.
///
/// Throws TailBoundError when the defect exceeds `max_defect`.
OracleMatrix oracle_gaussian_matrix(const GaussianParams& params, std::size_t cutoff,
                                    std::size_t relevant, double max_defect = 1e-9);

/// Cutoff used when none is given: relevant + 30 + ceil(|alpha|^2 + 8|alpha|).
std::size_t default_oracle_cutoff(const GaussianParams& params, std::size_t relevant);

/// Truncated annihilation operator on Fock states 0..cutoff.
ComplexMatrix annihilation(std::size_t cutoff);

}  // namespace stellar
