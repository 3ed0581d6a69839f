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

#include "stellar/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "stellar/errors.hpp"
#include "stellar/parallel.hpp"

namespace stellar {

namespace {

constexpr double kCollinear = 1e-12;
constexpr double kNestingSlack = 1e-6;

double cross(Point2 o, Point2 a, Point2 b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double dist2(Point2 a, Point2 b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

double segment_distance(Point2 a, Point2 b, Point2 p) {
  const double len2 = dist2(a, b);
  if (len2 == 0.0) return std::sqrt(dist2(a, p));
  const double t = std::clamp(((p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y)) / len2, 0.0, 1.0);
  return std::sqrt(dist2({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)}, p));
}

}  // namespace

WitnessFamily WitnessFamily::fock_pair(std::size_t j, std::size_t k) {
  if (j == k) throw DegenerateError("Fock-pair family needs two distinct indices");
  WitnessFamily f;
  f.kind = Kind::FockPair;
  f.j = j;
  f.k = k;
  return f;
}

WitnessFamily WitnessFamily::cat_pair(Complex beta) {
  if (beta == Complex{}) throw DegenerateError("cat-pair family needs beta != 0");
  WitnessFamily f;
  f.kind = Kind::CatPair;
  f.beta = beta;
  return f;
}

WitnessOperator WitnessFamily::at(double omega) const {
  return kind == Kind::FockPair ? fock_pair_witness(j, k, omega) : cat_pair_witness(beta, omega);
}

std::vector<Point2> BoundaryCurve::hull_vertices() const {
  std::vector<Point2> out;
  out.reserve(hull.size());
  for (std::size_t i : hull) out.push_back({points[i].p_first, points[i].p_second});
  return out;
}

bool BoundaryCurve::on_hull(std::size_t index) const {
  return std::find(hull.begin(), hull.end(), index) != hull.end();
}

std::vector<double> uniform_omegas(std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(count);
  return out;
}

std::vector<std::size_t> gift_wrap(std::span<const Point2> points) {
  if (points.empty()) throw DomainError("gift wrapping needs at least one point");
  std::size_t start = 0;
  double magnitude = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    magnitude = std::max({magnitude, std::abs(points[i].x), std::abs(points[i].y)});
    if (points[i].x < points[start].x ||
        (points[i].x == points[start].x && points[i].y < points[start].y)) {
      start = i;
    }
  }
  // Cross products below this are collinear; closer points count as duplicates.
  const double eps = kCollinear * std::max(magnitude * magnitude, 1e-300);
  const double same2 = eps * eps;

  std::vector<std::size_t> hull = {start};
  std::size_t current = start;
  for (std::size_t step = 0; step <= points.size(); ++step) {
    const Point2 o = points[current];
    std::size_t next = points.size();
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (dist2(points[i], o) <= same2) continue;
      if (next == points.size()) {
        next = i;
        continue;
      }
      const double c = cross(o, points[next], points[i]);
      if (c < -eps) {
        next = i;  // points[i] is clockwise of the candidate edge
      } else if (c <= eps && dist2(points[i], o) > dist2(points[next], o)) {
        next = i;  // collinear: keep the farther point
      }
    }
    if (next == points.size() || dist2(points[next], points[start]) <= same2) break;
    if (std::find(hull.begin(), hull.end(), next) != hull.end()) break;  // tolerance cycle guard
    hull.push_back(next);
    current = next;
  }
  return hull;
}

bool hull_contains(std::span<const Point2> hull, Point2 p, double slack) {
  if (hull.empty()) return false;
  if (hull.size() == 1) return std::sqrt(dist2(hull[0], p)) <= slack;
  if (hull.size() == 2) return segment_distance(hull[0], hull[1], p) <= slack;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Point2 a = hull[i];
    const Point2 b = hull[(i + 1) % hull.size()];
    const double len = std::sqrt(dist2(a, b));
    if (len == 0.0) continue;
    if (cross(a, b, p) / len < -slack) return false;
  }
  return true;
}

bool hull_nested(std::span<const Point2> inner, std::span<const Point2> outer, double slack) {
  return std::all_of(inner.begin(), inner.end(),
                     [&](Point2 v) { return hull_contains(outer, v, slack); });
}

double region_excess(const BoundaryCurve& curve, Point2 p) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const BoundaryPoint& pt : curve.points) {
    if (pt.flagged) continue;
    worst = std::max(worst, std::cos(pt.omega) * p.x + std::sin(pt.omega) * p.y - pt.threshold);
  }
  return worst;
}

bool curves_nested(const BoundaryCurve& inner, const BoundaryCurve& outer, double slack) {
  for (const Point2 v : inner.hull_vertices())
    if (region_excess(outer, v) > slack) return false;
  return true;
}

std::vector<BoundaryCurve> sweep_family(const WitnessFamily& family, std::size_t n_max,
                                        std::span<const double> omegas,
                                        const OptimizerConfig& config) {
  if (omegas.empty()) throw DomainError("omega grid is empty");
  if (n_max == 0) throw DomainError("stellar rank must be at least 1");
  for (double w : omegas) {
    if (!(w >= 0.0 && w < 2.0 * std::numbers::pi)) {
      throw DomainError("omega " + std::to_string(w) + " outside [0, 2 pi)");
    }
  }

  std::vector<BoundaryCurve> curves(n_max);
  for (std::size_t n = 0; n < n_max; ++n) {
    curves[n].rank = n + 1;
    curves[n].points.resize(omegas.size());
  }

  OptimizerConfig inner = config;
  inner.threads = 1;
  parallel_for(omegas.size(), resolve_threads(config.threads), [&](std::size_t i) {
    const WitnessOperator w = family.at(omegas[i]);
    std::vector<GaussianParams> warm;
    for (std::size_t n = 1; n <= n_max; ++n) {
      BoundaryPoint& pt = curves[n - 1].points[i];
      pt.omega = omegas[i];
      try {
        const ThresholdResult r = compute_threshold(w, n, inner, warm);
        const std::vector<double> p = term_overlaps(w, r);
        // Rounding can push an exact 0 or 1 slightly outside the unit interval.
        pt.p_first = std::clamp(p.at(0), 0.0, 1.0);
        pt.p_second = std::clamp(p.at(1), 0.0, 1.0);
        pt.threshold = r.value;
        warm.assign(1, r.params);
      } catch (const OptimizerError& e) {
        pt.flagged = true;
        pt.error = e.what();
        pt.p_first = pt.p_second = pt.threshold = std::nan("");
      }
    }
  });

  for (BoundaryCurve& curve : curves) {
    std::vector<Point2> pts;
    std::vector<std::size_t> index;
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
      if (curve.points[i].flagged) continue;
      pts.push_back({curve.points[i].p_first, curve.points[i].p_second});
      index.push_back(i);
    }
    if (pts.empty()) continue;
    for (std::size_t h : gift_wrap(pts)) curve.hull.push_back(index[h]);
  }
  return curves;
}

BoundaryCurve sweep_family_rank(const WitnessFamily& family, std::size_t n,
                                std::span<const double> omegas, const OptimizerConfig& config) {
  return std::move(sweep_family(family, n, omegas, config).back());
}

Separation tangent_witness(const BoundaryCurve& curve, Point2 p, double margin) {
  Separation best;
  bool found = false;
  for (const BoundaryPoint& pt : curve.points) {
    if (pt.flagged) continue;
    const double value = std::cos(pt.omega) * p.x + std::sin(pt.omega) * p.y;
    const double excess = value - pt.threshold;
    if (!found || excess > best.excess) {
      best = {pt.omega, pt.threshold, value, excess};
      found = true;
    }
  }
  if (!found || !(best.excess > margin)) {
    throw DomainError("no separating witness on the rank-" + std::to_string(curve.rank) +
                      " curve for this pair");
  }
  return best;
}

std::size_t certify_pair(Point2 p, std::span<const BoundaryCurve> curves, double margin) {
  if (!(margin >= 0.0)) throw DomainError("margin must be non-negative");
  if (curves.empty()) throw DataError("no boundary curves given");
  for (std::size_t i = 1; i < curves.size(); ++i) {
    if (curves[i].rank != curves[i - 1].rank + 1) {
      throw DataError("boundary curves must have consecutive ranks");
    }
    if (!curves_nested(curves[i - 1], curves[i], kNestingSlack)) {
      throw DataError("rank-" + std::to_string(curves[i - 1].rank) +
                      " hull is not contained in the rank-" + std::to_string(curves[i].rank) +
                      " hull");
    }
  }
  std::size_t certified = 0;
  for (const BoundaryCurve& curve : curves) {
    try {
      tangent_witness(curve, p, margin);
      certified = std::max(certified, curve.rank);
    } catch (const DomainError&) {
    }
  }
  return certified;
}

}  // namespace stellar
