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

#include "stellar/multimode.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <string>
#include <tuple>

#include "stellar/errors.hpp"
#include "stellar/multistart.hpp"
#include "stellar/parallel.hpp"

namespace stellar {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_modes(std::size_t modes) {
  if (modes < 1 || modes > kMaxModes) {
    throw DimensionError("mode count must lie in [1, " + std::to_string(kMaxModes) + "], got " +
                         std::to_string(modes));
  }
}

void compositions(std::size_t modes, std::size_t s, std::vector<std::size_t>& prefix,
                  std::vector<MultiIndex>& out) {
  if (prefix.size() + 1 == modes) {
    prefix.push_back(s);
    out.push_back({prefix});
    prefix.pop_back();
    return;
  }
  for (std::size_t first = s + 1; first-- > 0;) {
    prefix.push_back(first);
    compositions(modes, s - first, prefix, out);
    prefix.pop_back();
  }
}

// Sector matrices of V_I, computed once per evaluation.
class SectorCache {
 public:
  explicit SectorCache(const ComplexMatrix& generator) : generator_(generator) {}

  const ComplexMatrix& matrix(std::size_t s) {
    auto it = matrices_.find(s);
    if (it == matrices_.end()) it = matrices_.emplace(s, passive_sector(generator_, s)).first;
    return it->second;
  }
  const std::vector<MultiIndex>& basis(std::size_t s) {
    auto it = bases_.find(s);
    if (it == bases_.end()) it = bases_.emplace(s, enumerate_sector(generator_.rows(), s)).first;
    return it->second;
  }

 private:
  const ComplexMatrix& generator_;
  std::map<std::size_t, ComplexMatrix> matrices_;
  std::map<std::size_t, std::vector<MultiIndex>> bases_;
};

std::size_t sector_position(const std::vector<MultiIndex>& basis, const MultiIndex& m) {
  // Sectors are short; linear search keeps the ordering logic in one place.
  const auto it = std::find(basis.begin(), basis.end(), m);
  if (it == basis.end()) throw DomainError("multi-index not found in its sector");
  return static_cast<std::size_t>(it - basis.begin());
}

// V_I |psi>, grouped by sector.
std::map<std::size_t, ComplexVector> apply_passive(SectorCache& cache, const MultimodeState& psi) {
  std::map<std::size_t, ComplexVector> in;
  for (const auto& [m, amp] : psi.amplitudes) {
    const std::size_t s = m.total();
    auto& v = in[s];
    if (v.empty()) v.assign(cache.basis(s).size(), Complex{});
    v[sector_position(cache.basis(s), m)] += amp;
  }
  std::map<std::size_t, ComplexVector> out;
  for (auto& [s, v] : in) out[s] = cache.matrix(s) * std::span<const Complex>(v);
  return out;
}

ComplexVector transform_rows(SectorCache& cache, const MultimodeGaussianParams& params,
                             const MultimodeState& psi, const std::vector<MultiIndex>& rows,
                             std::size_t n_rows) {
  const std::size_t s_max = psi.max_total();
  std::vector<ComplexMatrix> blocks;
  blocks.reserve(params.modes.size());
  for (const GaussianParams& mode : params.modes) blocks.push_back(gaussian_block(mode, n_rows, s_max));

  ComplexVector out(rows.size());
  for (const auto& [s, v] : apply_passive(cache, psi)) {
    const auto& basis = cache.basis(s);
    for (std::size_t c = 0; c < basis.size(); ++c) {
      if (v[c] == Complex{}) continue;
      for (std::size_t r = 0; r < rows.size(); ++r) {
        Complex prod = v[c];
        for (std::size_t k = 0; k < blocks.size(); ++k)
          prod *= blocks[k](rows[r].occupations[k], basis[c].occupations[k]);
        out[r] += prod;
      }
    }
  }
  return out;
}

class MultimodeChart {
 public:
  MultimodeChart(std::size_t modes, const OptimizerConfig& config) : n_(modes), config_(config) {}

  std::size_t dimension() const { return n_ * n_ + 3 * n_; }

  MultimodeGaussianParams params(std::span<const double> x) const {
    MultimodeGaussianParams p;
    p.generator = ComplexMatrix(n_, n_);
    std::size_t i = 0;
    auto gen = [&] { return std::clamp(x[i++], -std::numbers::pi, std::numbers::pi); };
    for (std::size_t k = 0; k < n_; ++k) p.generator(k, k) = Complex(0.0, gen());
    for (std::size_t k = 0; k < n_; ++k) {
      for (std::size_t l = k + 1; l < n_; ++l) {
        const double re = gen();
        const double im = gen();
        p.generator(k, l) = Complex(re, im);
        p.generator(l, k) = Complex(-re, im);
      }
    }
    p.modes.resize(n_);
    for (std::size_t k = 0; k < n_; ++k) {
      GaussianParams g;
      g.r = std::clamp(x[i + k], -config_.r_max, config_.r_max);
      g.alpha = {std::clamp(x[i + n_ + k], -config_.alpha_bound, config_.alpha_bound),
                 std::clamp(x[i + 2 * n_ + k], -config_.alpha_bound, config_.alpha_bound)};
      g = canonical(g);
      g.theta = 0.0;  // a left phase commutes with the total-photon projector
      g.vartheta = std::fmod(g.vartheta, kTwoPi);
      if (g.vartheta < 0.0) g.vartheta += kTwoPi;
      if (g.vartheta >= kTwoPi) g.vartheta = 0.0;
      p.modes[k] = g;
    }
    return p;
  }

  std::vector<double> seeded_start(const MultistartPoint& u) const {
    std::vector<double> x(dimension());
    std::size_t i = 0;
    for (; i < n_ * n_; ++i) x[i] = (2.0 * u[i] - 1.0) * std::numbers::pi;
    for (std::size_t k = 0; k < n_; ++k, ++i) x[i] = u[i] * config_.r_max;
    for (; i < dimension(); ++i) x[i] = (2.0 * u[i] - 1.0) * config_.alpha_bound;
    return x;
  }

  std::vector<double> step(double jitter) const {
    std::vector<double> s(dimension(), 0.5 * jitter);
    for (std::size_t k = 0; k < n_; ++k) s[n_ * n_ + k] = 0.3 * jitter;
    return s;
  }

 private:
  std::size_t n_;
  const OptimizerConfig& config_;
};

auto tie_key(const MultimodeGaussianParams& p) {
  double r = 0.0;
  double a = 0.0;
  for (const GaussianParams& g : p.modes) {
    r += g.r;
    a += std::abs(g.alpha);
  }
  return std::make_tuple(r, a, p.generator.frobenius_norm());
}

}  // namespace

std::size_t MultiIndex::total() const noexcept {
  return std::accumulate(occupations.begin(), occupations.end(), std::size_t{0});
}

std::vector<MultiIndex> enumerate_sector(std::size_t modes, std::size_t s) {
  require_modes(modes);
  std::vector<MultiIndex> out;
  std::vector<std::size_t> prefix;
  compositions(modes, s, prefix, out);
  return out;
}

std::vector<MultiIndex> enumerate_subspace(std::size_t modes, std::size_t n) {
  std::vector<MultiIndex> out;
  for (std::size_t s = 0; s <= n; ++s) {
    auto sector = enumerate_sector(modes, s);
    out.insert(out.end(), sector.begin(), sector.end());
  }
  return out;
}

MultimodeGaussianParams MultimodeGaussianParams::identity(std::size_t modes) {
  require_modes(modes);
  return {ComplexMatrix(modes, modes), std::vector<GaussianParams>(modes)};
}

ComplexMatrix MultimodeGaussianParams::interferometer() const {
  ComplexMatrix v = matrix_exponential(generator);
  for (std::size_t k = 0; k < modes.size(); ++k) {
    const Complex phase = std::polar(1.0, modes[k].vartheta);
    for (std::size_t l = 0; l < v.cols(); ++l) v(k, l) *= phase;
  }
  return v;
}

void MultimodeGaussianParams::validate() const {
  require_modes(modes.size());
  if (generator.rows() != modes.size() || generator.cols() != modes.size()) {
    throw DimensionError("interferometer generator must be N x N");
  }
  const double scale = std::max(1.0, generator.max_abs());
  for (std::size_t k = 0; k < generator.rows(); ++k)
    for (std::size_t l = 0; l < generator.cols(); ++l)
      if (std::abs(generator(k, l) + std::conj(generator(l, k))) > 1e-12 * scale)
        throw DomainError("interferometer generator is not anti-Hermitian");
  for (const GaussianParams& g : modes)
    if (!g.valid()) throw DomainError("invalid single-mode Gaussian parameters");
}

ComplexMatrix passive_sector(const ComplexMatrix& generator, std::size_t s) {
  const std::size_t modes = generator.rows();
  const std::vector<MultiIndex> basis = enumerate_sector(modes, s);
  std::map<MultiIndex, std::size_t> index;
  for (std::size_t i = 0; i < basis.size(); ++i) index.emplace(basis[i], i);

  ComplexMatrix g(basis.size(), basis.size());
  for (std::size_t c = 0; c < basis.size(); ++c) {
    const MultiIndex& m = basis[c];
    for (std::size_t l = 0; l < modes; ++l) {
      if (m.occupations[l] == 0) continue;
      for (std::size_t i = 0; i < modes; ++i) {
        if (generator(i, l) == Complex{}) continue;
        MultiIndex out = m;
        --out.occupations[l];
        ++out.occupations[i];
        const double amp = std::sqrt(static_cast<double>(m.occupations[l]) *
                                     static_cast<double>(out.occupations[i]));
        g(index.at(out), c) += generator(i, l) * amp;
      }
    }
  }
  return matrix_exponential(g);
}

MultimodeState MultimodeState::fock(MultiIndex m) { return {{{std::move(m), Complex(1.0)}}}; }

std::size_t MultimodeState::modes() const {
  return amplitudes.empty() ? 0 : amplitudes.front().first.modes();
}

std::size_t MultimodeState::max_total() const {
  std::size_t s = 0;
  for (const auto& [m, amp] : amplitudes) s = std::max(s, m.total());
  return s;
}

double MultimodeState::norm_squared() const {
  double n = 0.0;
  for (const auto& [m, amp] : amplitudes) n += std::norm(amp);
  return n;
}

ComplexVector multimode_transform(const MultimodeGaussianParams& params,
                                  const MultimodeState& psi, std::size_t n_rows) {
  params.validate();
  SectorCache cache(params.generator);
  return transform_rows(cache, params, psi, enumerate_subspace(params.mode_count(), n_rows), n_rows);
}

MultimodeBlock multimode_gaussian_block(const MultimodeGaussianParams& params,
                                        std::size_t n_rows, std::size_t cutoff,
                                        double max_defect) {
  params.validate();
  const std::size_t modes = params.mode_count();
  MultimodeBlock out;
  out.rows = enumerate_subspace(modes, n_rows);
  for (const MultiIndex& m : enumerate_subspace(modes, modes * cutoff)) {
    if (std::all_of(m.occupations.begin(), m.occupations.end(),
                    [&](std::size_t o) { return o <= cutoff; })) {
      out.cols.push_back(m);
    }
  }
  out.matrix = ComplexMatrix(out.rows.size(), out.cols.size());
  SectorCache cache(params.generator);
  for (std::size_t c = 0; c < out.cols.size(); ++c) {
    const ComplexVector col =
        transform_rows(cache, params, MultimodeState::fock(out.cols[c]), out.rows, n_rows);
    for (std::size_t r = 0; r < out.rows.size(); ++r) out.matrix(r, c) = col[r];
  }
  for (std::size_t r = 0; r < out.rows.size(); ++r) {
    double norm = 0.0;
    for (std::size_t c = 0; c < out.cols.size(); ++c) norm += std::norm(out.matrix(r, c));
    out.defect = std::max(out.defect, 1.0 - norm);
  }
  if (out.defect > max_defect) {
    throw TailBoundError("per-mode cutoff " + std::to_string(cutoff) + " leaves row defect " +
                             std::to_string(out.defect),
                         out.defect);
  }
  return out;
}

MultimodeWitness::MultimodeWitness(std::size_t modes, std::vector<MultimodeTerm> terms,
                                   double identity_weight)
    : modes_(modes), terms_(std::move(terms)), identity_weight_(identity_weight) {
  require_modes(modes_);
  if (!std::isfinite(identity_weight_)) throw DomainError("identity weight must be finite");
  for (const MultimodeTerm& t : terms_) {
    if (!std::isfinite(t.weight)) throw DomainError("witness weights must be finite");
    if (t.state.amplitudes.empty()) throw DomainError("multimode term state is empty");
    for (const auto& [m, amp] : t.state.amplitudes) {
      if (m.modes() != modes_) {
        throw DimensionError("multi-index has " + std::to_string(m.modes()) + " modes, expected " +
                             std::to_string(modes_));
      }
    }
  }
}

MultimodeWitness MultimodeWitness::passively_transformed(const ComplexMatrix& generator) const {
  if (generator.rows() != modes_ || generator.cols() != modes_) {
    throw DimensionError("generator must be N x N");
  }
  SectorCache cache(generator);
  std::vector<MultimodeTerm> out;
  for (const MultimodeTerm& t : terms_) {
    MultimodeTerm moved{t.weight, {}};
    for (const auto& [s, v] : apply_passive(cache, t.state)) {
      const auto& basis = cache.basis(s);
      for (std::size_t i = 0; i < basis.size(); ++i)
        if (v[i] != Complex{}) moved.state.amplitudes.emplace_back(basis[i], v[i]);
    }
    out.push_back(std::move(moved));
  }
  return MultimodeWitness(modes_, std::move(out), identity_weight_);
}

ComplexMatrix multimode_compress(const MultimodeWitness& w,
                                 const MultimodeGaussianParams& params, std::size_t n) {
  if (n == 0) throw DomainError("stellar rank must be at least 1");
  if (params.mode_count() != w.modes()) throw DimensionError("params and witness mode counts differ");
  const std::vector<MultiIndex> rows = enumerate_subspace(w.modes(), n - 1);
  ComplexMatrix out(rows.size(), rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) out(k, k) = w.identity_weight();
  SectorCache cache(params.generator);
  for (const MultimodeTerm& t : w.terms()) {
    const ComplexVector c = transform_rows(cache, params, t.state, rows, n - 1);
    for (std::size_t k = 0; k < rows.size(); ++k)
      for (std::size_t l = 0; l < rows.size(); ++l) out(k, l) += t.weight * c[k] * std::conj(c[l]);
  }
  return out;
}

MultimodeThresholdResult multimode_threshold(const MultimodeWitness& w, std::size_t n,
                                             const OptimizerConfig& config) {
  config.validate();
  if (n == 0) throw DomainError("stellar rank must be at least 1");
  const MultimodeChart chart(w.modes(), config);
  const Objective f = [&](std::span<const double> x) {
    return max_eigenvalue(multimode_compress(w, chart.params(x), n));
  };

  NelderMeadOptions nm;
  nm.f_tolerance = config.simplex_tolerance;
  nm.max_iterations = config.max_iterations;

  const MultistartPlan plan(config.seed, chart.dimension());
  MultistartRun run = run_multistart(
      f, config.starts, resolve_threads(config.threads),
      [&](std::size_t i) {
        return i == 0 ? std::vector<double>(chart.dimension(), 0.0) : chart.seeded_start(plan.point(i));
      },
      [&](std::size_t i) { return chart.step(plan.jitter(i)); }, nm);

  std::vector<MultimodeGaussianParams> found(config.starts);
  for (std::size_t i = 0; i < config.starts; ++i)
    if (run.records[i].error.empty()) found[i] = chart.params(run.optima[i]);
  const std::size_t best = best_start(
      run.records, [&](std::size_t a, std::size_t b) { return tie_key(found[a]) < tie_key(found[b]); });
  const std::size_t converged = require_success(run.records, best);

  MultimodeThresholdResult out;
  out.rank = n;
  out.params = found[best];
  out.basis = enumerate_subspace(w.modes(), n - 1);
  Spectrum s = hermitian_spectrum(multimode_compress(w, out.params, n));
  out.value = s.eigenvalues.front();
  out.core = std::move(s.eigenvectors.front());

  ThresholdDiagnostics& d = out.diagnostics;
  d.converged_starts = converged;
  d.optimized_parameters = chart.dimension();
  for (const StartRecord& rec : run.records)
    if (rec.error.empty() && rec.value >= out.value - 1e-6) ++d.starts_near_best;
  constexpr double edge = 1e-6;
  for (const GaussianParams& g : out.params.modes) {
    d.r_at_bound = d.r_at_bound || g.r >= config.r_max - edge;
    d.alpha_at_bound = d.alpha_at_bound || std::abs(g.alpha.real()) >= config.alpha_bound - edge ||
                       std::abs(g.alpha.imag()) >= config.alpha_bound - edge;
  }
  d.starts = std::move(run.records);
  return out;
}

}  // namespace stellar
