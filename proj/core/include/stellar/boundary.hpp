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
#include <string>
#include <vector>

#include "stellar/threshold.hpp"
#include "stellar/witness.hpp"

namespace stellar {

/// One-parameter witness family W(omega) = cos(omega) P_first + sin(omega) P_second.
struct WitnessFamily {
  enum class Kind { FockPair, CatPair };

  Kind kind = Kind::FockPair;
  std::size_t j = 0;  // FockPair: first index
  std::size_t k = 2;  // FockPair: second index
  Complex beta{};     // CatPair: first term odd cat, second even cat

  static WitnessFamily fock_pair(std::size_t j, std::size_t k);
  static WitnessFamily cat_pair(Complex beta);

  WitnessOperator at(double omega) const;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct BoundaryPoint {
  double omega = 0.0;
  double p_first = 0.0;
  double p_second = 0.0;
  double threshold = 0.0;
  bool flagged = false;  // optimisation failed; excluded from the hull
  std::string error;
};

struct BoundaryCurve {
  std::size_t rank = 0;
  std::vector<BoundaryPoint> points;
  std::vector<std::size_t> hull;  // indices into points, counterclockwise

  std::vector<Point2> hull_vertices() const;
  bool on_hull(std::size_t index) const;
};

/// count points k * 2 pi / count.
std::vector<double> uniform_omegas(std::size_t count);

/// Jarvis march. Counterclockwise vertex indices starting at the lowest-x
/// (then lowest-y) point; collinear points keep only the extremes. A single
/// distinct point gives one index, a collinear set gives its two endpoints.
std::vector<std::size_t> gift_wrap(std::span<const Point2> points);

/// True if p lies inside or within `slack` of the polygon (vertices
/// counterclockwise; one or two vertices are treated as a point or segment).
bool hull_contains(std::span<const Point2> hull, Point2 p, double slack);

/// Every vertex of `inner` lies in the polygon `outer` within `slack`.
bool hull_nested(std::span<const Point2> inner, std::span<const Point2> outer, double slack);

/// Sweeps ranks 1..n_max over the omega grid. Per omega, rank n + 1 is
/// warm-started from the rank-n optimum. Omegas run in parallel; each
/// threshold then runs single-threaded, so output does not depend on the
/// worker count.
std::vector<BoundaryCurve> sweep_family(const WitnessFamily& family, std::size_t n_max,
                                        std::span<const double> omegas,
                                        const OptimizerConfig& config);

/// Curve for one rank (runs the sweep for ranks 1..n and keeps the last).
BoundaryCurve sweep_family_rank(const WitnessFamily& family, std::size_t n,
                                std::span<const double> omegas, const OptimizerConfig& config);

/// max over swept omegas of cos(omega) p.x + sin(omega) p.y - threshold: the
/// largest violation of the curve's supporting lines (<= 0 inside the region).
double region_excess(const BoundaryCurve& curve, Point2 p);

/// Every hull vertex of `inner` satisfies all supporting lines of `outer`
/// within `slack`. This compares achievable regions; comparing the two sampled
/// polygons directly also measures the chord error of the omega grid.
bool curves_nested(const BoundaryCurve& inner, const BoundaryCurve& outer, double slack);

struct Separation {
  double omega = 0.0;
  double threshold = 0.0;      // swept threshold, no margin
  double witness_value = 0.0;  // cos(omega) p_first + sin(omega) p_second
  double excess = 0.0;         // witness_value - threshold
};

/// Swept witness with the largest witness_value - threshold at p. Throws
/// DomainError when that excess does not exceed `margin`.
Separation tangent_witness(const BoundaryCurve& curve, Point2 p, double margin = 0.0);

/// Largest rank n whose curve is separated from p by more than `margin`
/// (p lies outside the rank-n region, so its stellar rank is at least n); 0 if
/// none. Curves must have consecutive ranks and nested hulls (slack 1e-6),
/// otherwise DataError.
std::size_t certify_pair(Point2 p, std::span<const BoundaryCurve> curves, double margin);

}  // namespace stellar
