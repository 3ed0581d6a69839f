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
#include <variant>
#include <vector>

#include "stellar/fock_gaussian.hpp"
#include "stellar/fock_types.hpp"
#include "stellar/states.hpp"

namespace stellar {

/// |index><index|
struct FockProjector {
  std::size_t index = 0;
};

/// |beta_+/-><beta_+/-|, kept in closed form so conjugation by a Gaussian
/// unitary can go through transform_coherent.
struct CatProjector {
  Complex beta{};
  Parity parity = Parity::Even;
};

/// A witness term is weight * |psi><psi| for the first three kinds and
/// weight * rho for a density.
using TermState = std::variant<FockProjector, CatProjector, FockVector, FockDensity>;

struct WitnessTerm {
  double weight = 0.0;
  TermState state;
};

/// Hermitian witness sum_t w_t P_t + identity_weight * I.
///
/// The identity component is symbolic: it is never materialised on a
/// truncated space.
class WitnessOperator {
 public:
  WitnessOperator() = default;
  explicit WitnessOperator(std::vector<WitnessTerm> terms, double identity_weight = 0.0);

  const std::vector<WitnessTerm>& terms() const noexcept { return terms_; }
  double identity_weight() const noexcept { return identity_weight_; }

  /// Largest Fock index with a nonzero matrix element (or the declared
  /// truncation of closed-form cat terms).
  std::size_t support_cutoff() const noexcept { return support_cutoff_; }
  /// True iff the operator is diagonal in the Fock basis.
  bool phase_invariant() const noexcept { return phase_invariant_; }
  /// Weighted truncation mass carried by the terms' finite representations.
  double tail_bound() const noexcept { return tail_bound_; }
  /// True when every term is a rank-one projector.
  bool rank_one_terms() const noexcept { return rank_one_terms_; }

  /// Dense matrix on Fock states 0..cutoff, identity part included.
  ComplexMatrix assembled(std::size_t cutoff) const;

  /// a * W + b * I.
  WitnessOperator affine(double a, double b) const;

 private:
  std::vector<WitnessTerm> terms_;
  double identity_weight_ = 0.0;
  std::size_t support_cutoff_ = 0;
  bool phase_invariant_ = true;
  double tail_bound_ = 0.0;
  bool rank_one_terms_ = true;
};

/// cos(omega)|j><j| + sin(omega)|k><k|.
WitnessOperator fock_pair_witness(std::size_t j, std::size_t k, double omega);

/// cos(omega)|beta_-><beta_-| + sin(omega)|beta_+><beta_+|.
WitnessOperator cat_pair_witness(Complex beta, double omega);

/// sum_m w_m |m><m|.
WitnessOperator fock_diagonal_witness(std::span<const double> weights);

/// Fock amplitudes of a term's pure state on 0..cutoff (FockVector, FockProjector
/// or CatProjector terms).
FockVector term_vector(const TermState& state, std::size_t cutoff);

/// For every rank-one term, the column <k|U|psi_t> for k < n.
/// Throws DomainError if a term is a density.
std::vector<ComplexVector> conjugated_columns(const WitnessOperator& w,
                                              const GaussianParams& params, std::size_t n);

/// n x n matrix Pi_{n-1} U W U^dag Pi_{n-1}.
ComplexMatrix compress_conjugated(const WitnessOperator& w, const GaussianParams& params,
                                  std::size_t n);

struct Expectation {
  double value = 0.0;
  double tail_bound = 0.0;  // bound on the neglected contribution
};

Expectation expectation(const WitnessOperator& w, const FockVector& psi);
Expectation expectation(const WitnessOperator& w, const FockDensity& rho);

/// Spectrum of W on the full space (includes the complement eigenvalue).
std::vector<double> witness_spectrum(const WitnessOperator& w);

struct UnitRescaling {
  double a = 1.0;
  double b = 0.0;
  WitnessOperator witness;

  double map(double value) const { return a * value + b; }
};

/// Affine map a W + b I with spectrum in [0, 1]. Identity map when the
/// spectrum already fits.
UnitRescaling rescale_to_unit(const WitnessOperator& w);

/// max(0, witness_value - threshold); valid for 0 <= W <= I.
double trace_distance_lower_bound(double witness_value, double threshold);

}  // namespace stellar
