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

#include "stellar/multistart.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <string>

#include "stellar/errors.hpp"
#include "stellar/parallel.hpp"

namespace stellar {

namespace {

constexpr std::array<unsigned, 24> kPrimes = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                                              41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89};

double radical_inverse(std::size_t index, unsigned base) {
  double inv = 1.0 / base;
  double f = inv;
  double out = 0.0;
  while (index > 0) {
    out += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return out;
}

double unit(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

MultistartPlan::MultistartPlan(std::uint64_t seed, std::size_t dim) : seed_(seed) {
  if (dim == 0 || dim > kPrimes.size()) {
    throw DimensionError("multistart dimension must lie in [1, " + std::to_string(kPrimes.size()) + "]");
  }
  std::uint64_t state = splitmix64(seed);
  for (std::size_t k = 0; k < dim; ++k) {
    shift_.push_back(unit(state));
    state = splitmix64(state);
  }
}

MultistartPoint MultistartPlan::point(std::size_t index) const {
  MultistartPoint u(shift_.size());
  for (std::size_t k = 0; k < shift_.size(); ++k) {
    const double v = radical_inverse(index, kPrimes[k]) + shift_[k];
    u[k] = v - std::floor(v);
  }
  return u;
}

double MultistartPlan::jitter(std::size_t index) const {
  return 0.75 + 0.5 * unit(splitmix64(seed_ ^ splitmix64(index + 1)));
}

MultistartRun run_multistart(const Objective& f, std::size_t count, std::size_t threads,
                             const std::function<std::vector<double>(std::size_t)>& initial,
                             const std::function<std::vector<double>(std::size_t)>& step,
                             const NelderMeadOptions& options) {
  MultistartRun run;
  run.records.resize(count);
  run.optima.resize(count);
  parallel_for(count, threads, [&](std::size_t i) {
    StartRecord& rec = run.records[i];
    try {
      const std::vector<double> s = step(i);
      NelderMeadResult res = nelder_mead_maximize(f, initial(i), s, options);
      rec.value = res.value;
      rec.iterations = res.iterations;
      rec.evaluations = res.evaluations;
      rec.converged = res.converged && std::isfinite(res.value);
      run.optima[i] = std::move(res.x);
    } catch (const std::exception& e) {
      rec.error = e.what();
      rec.converged = false;
    }
  });
  return run;
}

std::size_t best_start(const std::vector<StartRecord>& records,
                       const std::function<bool(std::size_t, std::size_t)>& key_less) {
  std::size_t best = records.size();
  for (std::size_t i = 0; i < records.size(); ++i) {
    const StartRecord& rec = records[i];
    if (!rec.error.empty() || !std::isfinite(rec.value)) continue;
    if (best == records.size() || rec.value > records[best].value + 1e-12 ||
        (rec.value >= records[best].value - 1e-12 && key_less(i, best))) {
      best = i;
    }
  }
  return best;
}

std::size_t require_success(const std::vector<StartRecord>& records, std::size_t best) {
  const auto converged = static_cast<std::size_t>(std::count_if(
      records.begin(), records.end(), [](const StartRecord& r) { return r.converged; }));
  if (best < records.size() && converged > 0) return converged;
  std::ostringstream trace;
  trace << "all " << records.size() << " optimizer starts failed";
  for (std::size_t i = 0; i < std::min<std::size_t>(records.size(), 8); ++i) {
    trace << "\n  start " << i << ": value=" << records[i].value
          << " iterations=" << records[i].iterations;
    if (!records[i].error.empty()) trace << " error=" << records[i].error;
  }
  throw OptimizerError(trace.str());
}

}  // namespace stellar
