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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stellar/fock_gaussian.hpp"
#include "stellar/multistart.hpp"
#include "stellar/witness.hpp"

namespace stellar {

struct OptimizerConfig {
  std::size_t starts = 200;
  double r_max = 3.0;
  double alpha_bound = 6.0;  // bound on |Re alpha| and |Im alpha|
  double simplex_tolerance = 1e-9;
  std::size_t max_iterations = 2000;
  std::uint64_t seed = 0x5eed;
  std::size_t threads = 0;  // 0 = hardware concurrency (capped by STELLAR_THREADS)
  /// Optimise vartheta even when the witness is phase invariant.
  bool free_vartheta = false;

  /// Throws DomainError unless starts >= 1 and all bounds/tolerances are positive.
  void validate() const;
};

struct ThresholdDiagnostics {
  std::vector<StartRecord> starts;
  std::size_t starts_near_best = 0;  // within 1e-6 of the best value
  std::size_t converged_starts = 0;
  std::size_t optimized_parameters = 0;
  bool r_at_bound = false;
  bool alpha_at_bound = false;
  /// The witness carries truncation error (density terms or truncated states).
  double witness_tail_bound = 0.0;
  /// Set by compute_thresholds when this rank came out below the previous one.
  bool monotonicity_violation = false;
};

struct ThresholdResult {
  std::size_t rank = 0;
  double value = 0.0;
  GaussianParams params;  // theta = 0, r >= 0, vartheta in [0, 2 pi)
  ComplexVector core;     // top eigenvector, coefficients c_0..c_{n-1}
  ThresholdDiagnostics diagnostics;
};

/// Top eigenvalue of compress_conjugated(w, params, n).
double objective(const WitnessOperator& w, std::size_t n, const GaussianParams& params);

/// W_n by multi-start Nelder–Mead over (r, Re alpha, Im alpha[, vartheta]).
/// Extra warm-start parameters run after the seeded starts.
ThresholdResult compute_threshold(const WitnessOperator& w, std::size_t n,
                                  const OptimizerConfig& config,
                                  std::span<const GaussianParams> warm = {});

/// W_1..W_{n_max}; each rank is warm-started from the previous optimum, and a
/// drop below the previous rank by more than 1e-7 sets monotonicity_violation.
std::vector<ThresholdResult> compute_thresholds(const WitnessOperator& w, std::size_t n_max,
                                                const OptimizerConfig& config);

/// U^dag |core> on Fock states 0..cutoff; tail_bound is the missing norm.
FockVector extremal_state(const ThresholdResult& result, std::size_t cutoff);

/// |<psi_t| U^dag |core>|^2 for every rank-one term of the witness, in term order.
std::vector<double> term_overlaps(const WitnessOperator& w, const ThresholdResult& result);

/// Re-evaluates the objective at the stored parameters.
double reevaluate(const WitnessOperator& w, const ThresholdResult& result);

}  // namespace stellar
