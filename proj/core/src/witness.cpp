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

#include "stellar/witness.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stellar/errors.hpp"

namespace stellar {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kImaginaryTolerance = 1e-10;

double checked_real(Complex z, const char* what) {
  if (std::abs(z.imag()) > kImaginaryTolerance * std::max(1.0, std::abs(z.real()))) {
    throw HermiticityError(std::string(what) + " has imaginary residue " +
                           std::to_string(z.imag()));
  }
  return z.real();
}

std::size_t last_nonzero(std::span<const Complex> v) {
  std::size_t last = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != Complex{}) last = i;
  return last;
}

bool diagonal_only(const ComplexMatrix& m) {
  for (std::size_t k = 0; k < m.rows(); ++k)
    for (std::size_t l = 0; l < m.cols(); ++l)
      if (k != l && m(k, l) != Complex{}) return false;
  return true;
}

FockVector resized(FockVector v, std::size_t cutoff) {
  if (v.amplitudes.size() > cutoff + 1) {
    double dropped = 0.0;
    for (std::size_t k = cutoff + 1; k < v.amplitudes.size(); ++k) dropped += std::norm(v.amplitudes[k]);
    v.amplitudes.resize(cutoff + 1);
    v.tail_bound += dropped;
  } else {
    v.amplitudes.resize(cutoff + 1);
  }
  return v;
}

}  // namespace

WitnessOperator::WitnessOperator(std::vector<WitnessTerm> terms, double identity_weight)
    : terms_(std::move(terms)), identity_weight_(identity_weight) {
  if (!std::isfinite(identity_weight_)) throw DomainError("identity weight must be finite");
  for (const auto& term : terms_) {
    if (!std::isfinite(term.weight)) throw DomainError("witness weights must be finite");
    const double w = std::abs(term.weight);
    std::visit(overloaded{
                   [&](const FockProjector& p) {
                     support_cutoff_ = std::max(support_cutoff_, p.index);
                   },
                   [&](const CatProjector& c) {
                     if (cat_normalization(c.beta, c.parity) <= 0.0) {
                       throw DegenerateError("odd cat projector at beta = 0");
                     }
                     support_cutoff_ = std::max(support_cutoff_, default_coherent_cutoff(c.beta));
                     phase_invariant_ = false;
                     tail_bound_ += w * cat(c.beta, c.parity).tail_bound;
                   },
                   [&](const FockVector& v) {
                     support_cutoff_ = std::max(support_cutoff_, last_nonzero(v.amplitudes));
                     const auto nonzero = std::count_if(v.amplitudes.begin(), v.amplitudes.end(),
                                                        [](Complex z) { return z != Complex{}; });
                     if (nonzero > 1) phase_invariant_ = false;
                     tail_bound_ += w * v.tail_bound;
                   },
                   [&](const FockDensity& d) {
                     if (!d.matrix.is_hermitian(1e-12)) {
                       throw HermiticityError("density witness term is not Hermitian");
                     }
                     support_cutoff_ = std::max(support_cutoff_, d.cutoff());
                     if (!diagonal_only(d.matrix)) phase_invariant_ = false;
                     tail_bound_ += w * d.tail_bound;
                     rank_one_terms_ = false;
                   },
               },
               term.state);
  }
}

ComplexMatrix WitnessOperator::assembled(std::size_t cutoff) const {
  const std::size_t dim = cutoff + 1;
  ComplexMatrix m(dim, dim);
  for (std::size_t k = 0; k < dim; ++k) m(k, k) = identity_weight_;
  for (const auto& term : terms_) {
    if (const auto* d = std::get_if<FockDensity>(&term.state)) {
      const std::size_t n = std::min(dim, d->matrix.rows());
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) m(k, l) += term.weight * d->matrix(k, l);
      continue;
    }
    const FockVector v = term_vector(term.state, cutoff);
    for (std::size_t k = 0; k < dim; ++k)
      for (std::size_t l = 0; l < dim; ++l)
        m(k, l) += term.weight * v.amplitudes[k] * std::conj(v.amplitudes[l]);
  }
  return m;
}

WitnessOperator WitnessOperator::affine(double a, double b) const {
  std::vector<WitnessTerm> scaled = terms_;
  for (auto& t : scaled) t.weight *= a;
  return WitnessOperator(std::move(scaled), a * identity_weight_ + b);
}

WitnessOperator fock_pair_witness(std::size_t j, std::size_t k, double omega) {
  if (j == k) throw DegenerateError("Fock-pair witness needs two distinct indices");
  return WitnessOperator({{std::cos(omega), FockProjector{j}}, {std::sin(omega), FockProjector{k}}});
}

WitnessOperator cat_pair_witness(Complex beta, double omega) {
  if (beta == Complex{}) throw DegenerateError("cat-pair witness needs beta != 0");
  return WitnessOperator({{std::cos(omega), CatProjector{beta, Parity::Odd}},
                          {std::sin(omega), CatProjector{beta, Parity::Even}}});
}

WitnessOperator fock_diagonal_witness(std::span<const double> weights) {
  std::vector<WitnessTerm> terms;
  for (std::size_t m = 0; m < weights.size(); ++m)
    if (weights[m] != 0.0) terms.push_back({weights[m], FockProjector{m}});
  return WitnessOperator(std::move(terms));
}

FockVector term_vector(const TermState& state, std::size_t cutoff) {
  return std::visit(
      overloaded{
          [&](const FockProjector& p) {
            FockVector v;
            v.amplitudes.resize(cutoff + 1);
            if (p.index <= cutoff) {
              v.amplitudes[p.index] = 1.0;
            } else {
              v.tail_bound = 1.0;
            }
            return v;
          },
          [&](const CatProjector& c) {
            const std::size_t own = std::max(cutoff, default_coherent_cutoff(c.beta));
            return resized(cat(c.beta, c.parity, own), cutoff);
          },
          [&](const FockVector& f) { return resized(f, cutoff); },
          [&](const FockDensity&) -> FockVector {
            throw DomainError("density terms have no state vector");
          },
      },
      state);
}

std::vector<ComplexVector> conjugated_columns(const WitnessOperator& w,
                                              const GaussianParams& params, std::size_t n) {
  if (n == 0) throw DomainError("stellar rank must be at least 1");
  std::size_t col_max = 0;
  bool need_block = false;
  for (const auto& term : w.terms()) {
    if (const auto* p = std::get_if<FockProjector>(&term.state)) {
      col_max = std::max(col_max, p->index);
      need_block = true;
    } else if (const auto* v = std::get_if<FockVector>(&term.state)) {
      col_max = std::max(col_max, v->cutoff());
      need_block = true;
    }
  }
  ComplexMatrix block;
  if (need_block) block = gaussian_block(params, n - 1, col_max);

  std::vector<ComplexVector> cols;
  cols.reserve(w.terms().size());
  for (const auto& term : w.terms()) {
    ComplexVector col(n);
    std::visit(overloaded{
                   [&](const FockProjector& p) {
                     for (std::size_t k = 0; k < n; ++k) col[k] = block(k, p.index);
                   },
                   [&](const CatProjector& c) {
                     const FockVector plus = transform_coherent(params, c.beta, n - 1);
                     const FockVector minus = transform_coherent(params, -c.beta, n - 1);
                     const double sign = c.parity == Parity::Even ? 1.0 : -1.0;
                     const double scale = 1.0 / std::sqrt(2.0 * cat_normalization(c.beta, c.parity));
                     for (std::size_t k = 0; k < n; ++k)
                       col[k] = scale * (plus.amplitudes[k] + sign * minus.amplitudes[k]);
                   },
                   [&](const FockVector& v) {
                     for (std::size_t k = 0; k < n; ++k) {
                       Complex s = 0.0;
                       for (std::size_t m = 0; m < v.amplitudes.size(); ++m)
                         s += block(k, m) * v.amplitudes[m];
                       col[k] = s;
                     }
                   },
                   [&](const FockDensity&) {
                     throw DomainError("density terms are not rank one");
                   },
               },
               term.state);
    cols.push_back(std::move(col));
  }
  return cols;
}

ComplexMatrix compress_conjugated(const WitnessOperator& w, const GaussianParams& params,
                                  std::size_t n) {
  if (n == 0) throw DomainError("stellar rank must be at least 1");
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) out(k, k) = w.identity_weight();

  if (w.rank_one_terms()) {
    const auto cols = conjugated_columns(w, params, n);
    for (std::size_t t = 0; t < cols.size(); ++t) {
      const double weight = w.terms()[t].weight;
      const auto& c = cols[t];
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) out(k, l) += weight * c[k] * std::conj(c[l]);
    }
    return out;
  }

  for (const auto& term : w.terms()) {
    if (const auto* d = std::get_if<FockDensity>(&term.state)) {
      const ComplexMatrix block = gaussian_block(params, n - 1, d->cutoff());
      ComplexMatrix part = block * d->matrix * block.adjoint();
      part *= term.weight;
      out += part;
    } else {
      const WitnessOperator single({term});
      const auto cols = conjugated_columns(single, params, n);
      const auto& c = cols.front();
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) out(k, l) += term.weight * c[k] * std::conj(c[l]);
    }
  }
  return out;
}

Expectation expectation(const WitnessOperator& w, const FockVector& psi) {
  Expectation out;
  out.value = w.identity_weight();
  const std::size_t cutoff = psi.cutoff();
  for (const auto& term : w.terms()) {
    const double aw = std::abs(term.weight);
    if (const auto* p = std::get_if<FockProjector>(&term.state)) {
      if (p->index <= cutoff) {
        out.value += term.weight * std::norm(psi.amplitudes[p->index]);
      } else {
        out.tail_bound += aw * psi.tail_bound;
      }
    } else if (const auto* d = std::get_if<FockDensity>(&term.state)) {
      const std::size_t n = std::min(cutoff, d->cutoff()) + 1;
      Complex s = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l)
          s += std::conj(psi.amplitudes[k]) * d->matrix(k, l) * psi.amplitudes[l];
      out.value += term.weight * checked_real(s, "density expectation");
      out.tail_bound += aw * (d->tail_bound + psi.tail_bound);
    } else {
      const FockVector phi = term_vector(term.state, cutoff);
      out.value += term.weight * std::norm(inner(phi.amplitudes, psi.amplitudes));
      // |<phi|psi>|^2 moves by at most 3 sqrt(tail_phi tail_psi) when both tails are restored.
      out.tail_bound += aw * 3.0 * std::sqrt(phi.tail_bound * std::max(psi.tail_bound, 0.0));
    }
  }
  return out;
}

Expectation expectation(const WitnessOperator& w, const FockDensity& rho) {
  Expectation out;
  out.value = w.identity_weight();
  const std::size_t cutoff = rho.cutoff();
  for (const auto& term : w.terms()) {
    const double aw = std::abs(term.weight);
    if (const auto* p = std::get_if<FockProjector>(&term.state)) {
      if (p->index <= cutoff) {
        out.value += term.weight * checked_real(rho.matrix(p->index, p->index), "diagonal element");
      } else {
        out.tail_bound += aw * rho.tail_bound;
      }
    } else if (const auto* d = std::get_if<FockDensity>(&term.state)) {
      const std::size_t n = std::min(cutoff, d->cutoff()) + 1;
      Complex s = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) s += d->matrix(k, l) * rho.matrix(l, k);
      out.value += term.weight * checked_real(s, "trace of density product");
      out.tail_bound += aw * (d->tail_bound + rho.tail_bound);
    } else {
      const FockVector phi = term_vector(term.state, cutoff);
      Complex s = 0.0;
      for (std::size_t k = 0; k <= cutoff; ++k)
        for (std::size_t l = 0; l <= cutoff; ++l)
          s += std::conj(phi.amplitudes[k]) * rho.matrix(k, l) * phi.amplitudes[l];
      out.value += term.weight * checked_real(s, "projector expectation");
      out.tail_bound += aw * 3.0 * std::sqrt(phi.tail_bound * std::max(rho.tail_bound, 0.0));
    }
  }
  return out;
}

std::vector<double> witness_spectrum(const WitnessOperator& w) {
  std::vector<double> values = hermitian_spectrum(w.assembled(w.support_cutoff())).eigenvalues;
  values.push_back(w.identity_weight());
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

UnitRescaling rescale_to_unit(const WitnessOperator& w) {
  const std::vector<double> spectrum = witness_spectrum(w);
  const double hi = spectrum.front();
  const double lo = spectrum.back();
  const double spread = hi - lo;
  if (!(spread > 1e-14)) throw DegenerateError("witness spectrum has zero spread");
  constexpr double slack = 1e-12;
  if (lo >= -slack && hi <= 1.0 + slack) return {1.0, 0.0, w};
  const double a = 1.0 / spread;
  const double b = -a * lo;
  return {a, b, w.affine(a, b)};
}

double trace_distance_lower_bound(double witness_value, double threshold) {
  return std::max(0.0, witness_value - threshold);
}

}  // namespace stellar
