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
#include <functional>
#include <string>
#include <vector>

#include "stellar/nelder_mead.hpp"

namespace stellar {

using MultistartPoint = std::vector<double>;

/// SplitMix64 finaliser; used to derive independent per-start streams.
std::uint64_t splitmix64(std::uint64_t x);

/// Deterministic start points in [0, 1)^dim: a Halton sequence with a seeded
/// Cranley–Patterson shift. Every quantity depends only on (seed, index), so
/// starts can be evaluated in any order.
class MultistartPlan {
 public:
  MultistartPlan(std::uint64_t seed, std::size_t dim);

  std::size_t dimension() const noexcept { return shift_.size(); }
  MultistartPoint point(std::size_t index) const;
  /// Simplex-size multiplier in [0.75, 1.25) from the start's private stream.
  double jitter(std::size_t index) const;

 private:
  std::uint64_t seed_;
  std::vector<double> shift_;
};

/// Outcome of one multi-start run.
struct StartRecord {
  double value = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
  std::string error;  // non-empty if the start threw
};

struct MultistartRun {
  std::vector<StartRecord> records;
  std::vector<std::vector<double>> optima;  // final point of each start
};

/// Runs `count` independent Nelder–Mead maximisations, start i from
/// initial(i) with simplex step(i), on up to `threads` workers. Exceptions are
/// caught per start and recorded. The output is independent of `threads`.
MultistartRun run_multistart(const Objective& f, std::size_t count, std::size_t threads,
                             const std::function<std::vector<double>(std::size_t)>& initial,
                             const std::function<std::vector<double>(std::size_t)>& step,
                             const NelderMeadOptions& options);

/// Index of the best finite start; ties within 1e-12 go to the smaller key.
/// Returns records.size() when no start produced a finite value.
std::size_t best_start(const std::vector<StartRecord>& records,
                       const std::function<bool(std::size_t, std::size_t)>& key_less);

/// Number of converged starts. Throws OptimizerError (with the first starts as
/// a trace) when no start converged or none produced a finite value.
std::size_t require_success(const std::vector<StartRecord>& records, std::size_t best);

}  // namespace stellar
