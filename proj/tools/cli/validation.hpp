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

#include <cstdint>
#include <string>
#include <vector>

#include "json_io.hpp"

namespace stellar::cli {

/// Outcome of one oracle-equivalence check.
struct CheckReport {
  std::string name;
  std::size_t cases = 0;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  io::Json worst_case;  // the offending input behind max_deviation

  bool passed() const { return max_deviation <= tolerance; }
};

/// Gaussian matrix elements against the truncated-generator oracle:
/// 100 random (theta, vartheta, r in [0,2], |alpha| <= 4), 10 x 10 blocks.
CheckReport check_elements(std::uint64_t seed);
/// q0(T) against (1 + nbar) Tr[tau_th rho] on 50 random diagonal states.
CheckReport check_q0_identity(std::uint64_t seed);
/// Click-pattern probabilities summed over all 2^M patterns, M <= 4.
CheckReport check_click_sums(std::uint64_t seed);
/// gift_wrap against a brute-force extreme-point test on random grids.
CheckReport check_hull(std::uint64_t seed);

/// Runs "elements", "states", "hull" or "all".
/// Throws DomainError for an unknown suite name.
std::vector<CheckReport> run_suite(const std::string& suite, std::uint64_t seed);

io::Json report_to_json(const std::vector<CheckReport>& reports, std::uint64_t seed);

}  // namespace stellar::cli
