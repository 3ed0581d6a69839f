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

#include "stellar/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <tuple>

#include "stellar/errors.hpp"
#include "stellar/multistart.hpp"
#include "stellar/nelder_mead.hpp"
#include "stellar/parallel.hpp"

namespace stellar {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

class Chart {
 public:
  Chart(const OptimizerConfig& config, bool with_vartheta)
      : config_(config), with_vartheta_(with_vartheta) {}

  std::size_t dimension() const { return with_vartheta_ ? 4 : 3; }

  GaussianParams params(std::span<const double> x) const {
    GaussianParams p;
    p.r = std::clamp(x[0], -config_.r_max, config_.r_max);
    p.alpha = {std::clamp(x[1], -config_.alpha_bound, config_.alpha_bound),
               std::clamp(x[2], -config_.alpha_bound, config_.alpha_bound)};
    p.vartheta = with_vartheta_ ? x[3] : 0.0;
    p = canonical(p);
    // A left phase only rotates the core state; it never changes the spectrum.
    p.theta = 0.0;
    p.vartheta = std::fmod(p.vartheta, kTwoPi);
    if (p.vartheta < 0.0) p.vartheta += kTwoPi;
    if (p.vartheta >= kTwoPi) p.vartheta = 0.0;
    return p;
  }

  std::vector<double> coordinates(const GaussianParams& p) const {
    // theta is dropped, so canonical() must not have moved phase into it.
    std::vector<double> x = {p.r, p.alpha.real(), p.alpha.imag()};
    if (with_vartheta_) x.push_back(p.vartheta);
    return x;
  }

  std::vector<double> seeded_start(const MultistartPoint& u) const {
    std::vector<double> x = {u[0] * config_.r_max, (2.0 * u[1] - 1.0) * config_.alpha_bound,
                             (2.0 * u[2] - 1.0) * config_.alpha_bound};
    if (with_vartheta_) x.push_back(u[3] * kTwoPi);
    return x;
  }

  std::vector<double> step(double jitter) const {
    std::vector<double> s = {0.3 * jitter, 0.5 * jitter, 0.5 * jitter};
    if (with_vartheta_) s.push_back(0.6 * jitter);
    return s;
  }

 private:
  const OptimizerConfig& config_;
  bool with_vartheta_;
};

auto tie_key(const GaussianParams& p) {
  return std::make_tuple(p.r, std::abs(p.alpha), p.vartheta);
}

ThresholdResult finalize(const WitnessOperator& w, std::size_t n, const GaussianParams& params) {
  ThresholdResult out;
  out.rank = n;
  out.params = params;
  Spectrum s = hermitian_spectrum(compress_conjugated(w, params, n));
  out.value = s.eigenvalues.front();
  out.core = std::move(s.eigenvectors.front());
  return out;
}

}  // namespace

void OptimizerConfig::validate() const {
  if (starts < 1) throw DomainError("optimizer needs at least one start");
  if (!(r_max > 0.0) || !(alpha_bound > 0.0)) throw DomainError("optimizer box must be non-empty");
  if (!(simplex_tolerance > 0.0)) throw DomainError("simplex tolerance must be positive");
  if (max_iterations < 1) throw DomainError("max_iterations must be positive");
}

double objective(const WitnessOperator& w, std::size_t n, const GaussianParams& params) {
  return max_eigenvalue(compress_conjugated(w, params, n));
}

ThresholdResult compute_threshold(const WitnessOperator& w, std::size_t n,
                                  const OptimizerConfig& config,
                                  std::span<const GaussianParams> warm) {
  config.validate();
  if (n == 0) throw DomainError("stellar rank must be at least 1");

  const bool with_vartheta = config.free_vartheta || !w.phase_invariant();
  const Chart chart(config, with_vartheta);
  const Objective f = [&](std::span<const double> x) { return objective(w, n, chart.params(x)); };

  NelderMeadOptions nm;
  nm.f_tolerance = config.simplex_tolerance;
  nm.max_iterations = config.max_iterations;

  const std::size_t total = config.starts + warm.size();
  const MultistartPlan plan(config.seed, chart.dimension());
  MultistartRun run = run_multistart(
      f, total, resolve_threads(config.threads),
      [&](std::size_t i) {
        if (i == 0) return std::vector<double>(chart.dimension(), 0.0);
        if (i < config.starts) return chart.seeded_start(plan.point(i));
        return chart.coordinates(chart.params(chart.coordinates(warm[i - config.starts])));
      },
      [&](std::size_t i) { return chart.step(plan.jitter(i)); }, nm);
  std::vector<StartRecord>& records = run.records;
  std::vector<GaussianParams> found(total);
  for (std::size_t i = 0; i < total; ++i)
    if (records[i].error.empty()) found[i] = chart.params(run.optima[i]);

  const std::size_t best = best_start(
      records, [&](std::size_t a, std::size_t b) { return tie_key(found[a]) < tie_key(found[b]); });
  const std::size_t converged = require_success(records, best);

  ThresholdResult out = finalize(w, n, found[best]);
  ThresholdDiagnostics& d = out.diagnostics;
  d.converged_starts = converged;
  d.optimized_parameters = chart.dimension();
  d.witness_tail_bound = w.tail_bound();
  for (const StartRecord& rec : records)
    if (rec.error.empty() && rec.value >= out.value - 1e-6) ++d.starts_near_best;
  constexpr double edge = 1e-6;
  d.r_at_bound = out.params.r >= config.r_max - edge;
  d.alpha_at_bound = std::abs(out.params.alpha.real()) >= config.alpha_bound - edge ||
                     std::abs(out.params.alpha.imag()) >= config.alpha_bound - edge;
  d.starts = std::move(records);
  return out;
}

std::vector<ThresholdResult> compute_thresholds(const WitnessOperator& w, std::size_t n_max,
                                                const OptimizerConfig& config) {
  std::vector<ThresholdResult> out;
  out.reserve(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) {
    std::vector<GaussianParams> warm;
    if (!out.empty()) warm.push_back(out.back().params);
    out.push_back(compute_threshold(w, n, config, warm));
    if (out.size() > 1 && out.back().value < out[out.size() - 2].value - 1e-7) {
      out.back().diagnostics.monotonicity_violation = true;
    }
  }
  return out;
}

FockVector extremal_state(const ThresholdResult& result, std::size_t cutoff) {
  const std::size_t n = result.core.size();
  if (n == 0) throw DomainError("threshold result has no core state");
  const ComplexMatrix block = gaussian_block(result.params, n - 1, cutoff);
  FockVector psi;
  psi.amplitudes.assign(cutoff + 1, Complex{});
  for (std::size_t m = 0; m <= cutoff; ++m) {
    Complex s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += std::conj(block(k, m)) * result.core[k];
    psi.amplitudes[m] = s;
  }
  psi.tail_bound = std::max(0.0, 1.0 - psi.norm_squared());
  return psi;
}

std::vector<double> term_overlaps(const WitnessOperator& w, const ThresholdResult& result) {
  const std::size_t n = result.core.size();
  std::vector<double> out;
  out.reserve(w.terms().size());
  for (const WitnessTerm& term : w.terms()) {
    const ComplexMatrix m = compress_conjugated(WitnessOperator({{1.0, term.state}}), result.params, n);
    const ComplexVector mq = m * std::span<const Complex>(result.core);
    out.push_back(inner(result.core, mq).real());
  }
  return out;
}

double reevaluate(const WitnessOperator& w, const ThresholdResult& result) {
  return objective(w, result.core.size(), result.params);
}

}  // namespace stellar
