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
#include <functional>
#include <span>
#include <vector>

namespace stellar {

using Objective = std::function<double(std::span<const double>)>;

struct NelderMeadOptions {
  double f_tolerance = 1e-9;        // spread of simplex values at convergence
  double x_tolerance = 1e-7;        // simplex diameter at convergence
  std::size_t max_iterations = 2000;  // shared by all restarts
  std::size_t max_restarts = 4;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
};

/// Maximises f with dimension-adaptive Nelder–Mead coefficients. After each
/// convergence the simplex is rebuilt around the incumbent with a smaller
/// step; the search stops once a restart gains less than f_tolerance.
/// A run converges when the simplex values agree within f_tolerance and either
/// the simplex diameter is below x_tolerance or the best value has gained less
/// than f_tolerance over the last 20 * dimension iterations.
/// Non-finite objective values are treated as -infinity.
NelderMeadResult nelder_mead_maximize(const Objective& f, std::vector<double> x0,
                                      std::span<const double> step,
                                      const NelderMeadOptions& options = {});

}  // namespace stellar
