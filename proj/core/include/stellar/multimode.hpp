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
#include <utility>
#include <vector>

#include "stellar/fock_gaussian.hpp"
#include "stellar/threshold.hpp"

namespace stellar {

inline constexpr std::size_t kMaxModes = 3;

/// Photon numbers of N modes.
struct MultiIndex {
  std::vector<std::size_t> occupations;

  std::size_t modes() const noexcept { return occupations.size(); }
  std::size_t total() const noexcept;
  auto operator<=>(const MultiIndex&) const = default;
};

/// All multi-indices with total <= n: by total, then descending
/// lexicographic order within a total, e.g. (0,0), (1,0), (0,1), (2,0), ...
std::vector<MultiIndex> enumerate_subspace(std::size_t modes, std::size_t n);

/// Multi-indices with total exactly s, same order as enumerate_subspace.
std::vector<MultiIndex> enumerate_sector(std::size_t modes, std::size_t s);

/// U = (prod_k D_k(alpha_k) S_k(r_k) F_k(phi_k)) V_I with
/// V_I = exp(sum_ij A_ij a_i^dag a_j), A anti-Hermitian.
///
/// The per-mode factors are GaussianParams with theta = 0 (alpha_k, r_k >= 0,
/// vartheta = phi_k). The phases phi_k duplicate part of V_I; they exist so a
/// negative squeezing can be folded back to r_k >= 0 without touching A.
struct MultimodeGaussianParams {
  ComplexMatrix generator;            // A, N x N anti-Hermitian
  std::vector<GaussianParams> modes;  // one per mode

  static MultimodeGaussianParams identity(std::size_t modes);

  std::size_t mode_count() const noexcept { return modes.size(); }
  /// The single-particle interferometer exp(A) followed by the phases phi_k.
  ComplexMatrix interferometer() const;
  /// Throws DimensionError / DomainError for inconsistent sizes, a
  /// non-anti-Hermitian generator or invalid per-mode params.
  void validate() const;
};

/// Matrix of V_I on the total-photon sector s (basis enumerate_sector), from
/// the exponential of the sector's restriction of sum_ij A_ij a_i^dag a_j.
/// Exact: the generator preserves total photon number.
ComplexMatrix passive_sector(const ComplexMatrix& generator, std::size_t s);

/// Finite superposition of multimode Fock states.
struct MultimodeState {
  std::vector<std::pair<MultiIndex, Complex>> amplitudes;

  static MultimodeState fock(MultiIndex m);
  std::size_t modes() const;
  std::size_t max_total() const;
  double norm_squared() const;
};

/// Amplitudes <k|U|psi> for the rows enumerate_subspace(N, n_rows).
ComplexVector multimode_transform(const MultimodeGaussianParams& params,
                                  const MultimodeState& psi, std::size_t n_rows);

struct MultimodeBlock {
  std::vector<MultiIndex> rows;
  std::vector<MultiIndex> cols;  // every multi-index with all occupations <= cutoff
  ComplexMatrix matrix;
  double defect = 0.0;  // max over rows of 1 - sum_cols |<k|U|m>|^2
};

/// <k|U|m> for |k| <= n_rows and per-mode occupations of m <= cutoff. The
/// entries are exact; `defect` measures how much of each row lies beyond the
/// cutoff. Throws TailBoundError when defect > max_defect.
MultimodeBlock multimode_gaussian_block(const MultimodeGaussianParams& params,
                                        std::size_t n_rows, std::size_t cutoff,
                                        double max_defect = 1e-8);

/// The per-mode cutoff used when none is given.
inline std::size_t default_multimode_cutoff(std::size_t n) { return n + 12; }

struct MultimodeTerm {
  double weight = 0.0;
  MultimodeState state;
};

/// sum_t w_t |psi_t><psi_t| + identity_weight I on N <= 3 modes.
class MultimodeWitness {
 public:
  MultimodeWitness(std::size_t modes, std::vector<MultimodeTerm> terms,
                   double identity_weight = 0.0);

  std::size_t modes() const noexcept { return modes_; }
  const std::vector<MultimodeTerm>& terms() const noexcept { return terms_; }
  double identity_weight() const noexcept { return identity_weight_; }

  /// V W V^dag for the passive unitary V = exp(sum_ij A_ij a_i^dag a_j); term
  /// states keep finite support.
  MultimodeWitness passively_transformed(const ComplexMatrix& generator) const;

 private:
  std::size_t modes_;
  std::vector<MultimodeTerm> terms_;
  double identity_weight_;
};

/// Pi_{n-1} U W U^dag Pi_{n-1} on enumerate_subspace(N, n - 1).
ComplexMatrix multimode_compress(const MultimodeWitness& w,
                                 const MultimodeGaussianParams& params, std::size_t n);

struct MultimodeThresholdResult {
  std::size_t rank = 0;
  double value = 0.0;
  MultimodeGaussianParams params;
  std::vector<MultiIndex> basis;  // enumerate_subspace(N, rank - 1)
  ComplexVector core;
  ThresholdDiagnostics diagnostics;
};

/// W_{N,n} by multi-start Nelder–Mead over N^2 generator parameters and
/// 3N squeezing/displacement parameters.
MultimodeThresholdResult multimode_threshold(const MultimodeWitness& w, std::size_t n,
                                             const OptimizerConfig& config);

}  // namespace stellar
