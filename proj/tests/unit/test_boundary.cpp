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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "stellar/boundary.hpp"
#include "stellar/errors.hpp"
#include "stellar/states.hpp"

namespace {

using stellar::BoundaryCurve;
using stellar::OptimizerConfig;
using stellar::Point2;
using stellar::WitnessFamily;

constexpr double kPi = std::numbers::pi;

OptimizerConfig quick() {
  OptimizerConfig c;
  c.starts = 60;
  c.threads = 1;
  return c;
}

std::vector<Point2> wrapped(const std::vector<Point2>& pts) {
  std::vector<Point2> out;
  for (std::size_t i : stellar::gift_wrap(pts)) out.push_back(pts[i]);
  return out;
}

double area(const std::vector<Point2>& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2 p = poly[i];
    const Point2 q = poly[(i + 1) % poly.size()];
    a += p.x * q.y - q.x * p.y;
  }
  return 0.5 * a;
}

// Shared sweeps; each is computed once per test binary.
const std::vector<BoundaryCurve>& fock02() {
  static const auto curves = stellar::sweep_family(WitnessFamily::fock_pair(0, 2), 3, stellar::uniform_omegas(16), quick());
  return curves;
}

const std::vector<BoundaryCurve>& cat2() {
  static const auto curves = stellar::sweep_family(WitnessFamily::cat_pair(2.0), 3, stellar::uniform_omegas(32), quick());
  return curves;
}

TEST(GiftWrap, Examples) {
  const auto tri = wrapped({{0, 0}, {1, 0}, {0, 1}});
  EXPECT_EQ(tri.size(), 3u);
  EXPECT_GT(area(tri), 0.0);  // counter-clockwise

  const auto line = wrapped({{0, 0}, {1, 0}, {2, 0}});
  ASSERT_EQ(line.size(), 2u);
  EXPECT_EQ(std::min(line[0].x, line[1].x), 0.0);
  EXPECT_EQ(std::max(line[0].x, line[1].x), 2.0);

  EXPECT_EQ(wrapped({{0.3, 0.3}}).size(), 1u);
  EXPECT_EQ(wrapped({{0.3, 0.3}, {0.3, 0.3}}).size(), 1u);
  EXPECT_THROW(stellar::gift_wrap(std::vector<Point2>{}), stellar::DomainError);
}

TEST(GiftWrap, RandomPointsAreContained) {
  oracle::Uniform u(200);
  std::vector<Point2> pts(200);
  for (Point2& p : pts) p = {u(), u()};
  const auto hull = wrapped(pts);
  for (const Point2& p : pts) EXPECT_TRUE(stellar::hull_contains(hull, p, 1e-12));
  EXPECT_EQ(oracle::brute_force_hull(pts).size(), hull.size());
}

TEST(GiftWrap, MatchesBruteForceOnDyadicGrids) {
  oracle::Uniform u(9);
  auto less = [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); };
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Point2> pts(1 + static_cast<std::size_t>(u() * 30));
    for (Point2& p : pts) p = {std::floor(u() * 9) / 8, std::floor(u() * 9) / 8};
    auto got = wrapped(pts);
    std::sort(got.begin(), got.end(), less);
    const auto want = oracle::brute_force_hull(pts);
    ASSERT_EQ(got.size(), want.size()) << "trial " << trial;
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_EQ(got[i].x, want[i].x);
      EXPECT_EQ(got[i].y, want[i].y);
    }
  }
}

TEST(Sweep, VacuumCornerAndNormalisation) {
  const auto& curves = fock02();
  ASSERT_EQ(curves.size(), 3u);
  EXPECT_DOUBLE_EQ(curves[0].points[0].omega, 0.0);
  EXPECT_NEAR(curves[0].points[0].p_first, 1.0, 1e-9);

  const auto f12 = stellar::sweep_family_rank(WitnessFamily::fock_pair(1, 2), 1, stellar::uniform_omegas(16), quick());
  for (const auto& p : f12.points) {
    EXPECT_FALSE(p.flagged);
    EXPECT_LE(p.p_first + p.p_second, 1.0 + 1e-12);
  }
}

TEST(Sweep, ThresholdsMonotoneAndRegionsNested) {
  for (const auto* curves : {&fock02(), &cat2()}) {
    for (std::size_t n = 1; n < curves->size(); ++n) {
      for (std::size_t i = 0; i < (*curves)[n].points.size(); ++i)
        EXPECT_GE((*curves)[n].points[i].threshold, (*curves)[n - 1].points[i].threshold - 1e-7);
      EXPECT_TRUE(stellar::curves_nested((*curves)[n - 1], (*curves)[n], 1e-6));
    }
  }
}

TEST(Sweep, CatRegionIsNearlyAQuadrilateral) {
  const auto hull = cat2()[0].hull_vertices();
  ASSERT_GE(hull.size(), 4u);
  double best = 0.0;
  for (std::size_t a = 0; a < hull.size(); ++a)
    for (std::size_t b = a + 1; b < hull.size(); ++b)
      for (std::size_t c = b + 1; c < hull.size(); ++c)
        for (std::size_t d = c + 1; d < hull.size(); ++d)
          best = std::max(best, area({hull[a], hull[b], hull[c], hull[d]}));
  EXPECT_GT(best / area(hull), 0.97);
}

TEST(Sweep, SingleOmegaAndBadGrid) {
  const auto one = stellar::sweep_family_rank(WitnessFamily::fock_pair(0, 2), 1, stellar::uniform_omegas(1), quick());
  EXPECT_EQ(one.points.size(), 1u);
  EXPECT_EQ(one.hull.size(), 1u);
  const std::vector<double> bad = {2 * kPi};
  EXPECT_THROW(stellar::sweep_family(WitnessFamily::fock_pair(0, 2), 1, bad, quick()), stellar::DomainError);
  EXPECT_THROW(WitnessFamily::fock_pair(2, 2), stellar::DegenerateError);
}

TEST(Sweep, FailedOptimisationsAreFlagged) {
  OptimizerConfig starved = quick();
  starved.starts = 2;
  starved.max_iterations = 2;
  const auto curves = stellar::sweep_family(WitnessFamily::cat_pair(2.0), 2, stellar::uniform_omegas(4), starved);
  std::size_t flagged = 0;
  for (const auto& c : curves)
    for (const auto& p : c.points) {
      if (!p.flagged) continue;
      ++flagged;
      EXPECT_TRUE(std::isnan(p.threshold));
      EXPECT_FALSE(p.error.empty());
    }
  EXPECT_GT(flagged, 0u);
}

TEST(Certify, Examples) {
  // Coherent |2>: a Gaussian state, never certified.
  const double plus = (1 + std::exp(-8.0)) / 2;
  EXPECT_EQ(stellar::certify_pair({1 - plus, plus}, cat2(), 1e-4), 0u);
  EXPECT_EQ(stellar::certify_pair({0.0, 1.0}, cat2(), 1e-4), 3u);

  // |2> has stellar rank exactly 2.
  EXPECT_EQ(stellar::certify_pair({0.0, 1.0}, fock02(), 1e-4), 2u);
  EXPECT_EQ(stellar::certify_pair({0.1, 0.1}, fock02(), 1e-4), 0u);
}

TEST(Certify, InconsistentCurveSets) {
  std::vector<BoundaryCurve> swapped = {fock02()[1], fock02()[0]};
  EXPECT_THROW(stellar::certify_pair({0.0, 1.0}, swapped, 1e-4), stellar::DataError);
  std::vector<BoundaryCurve> shrunk = {fock02()[0], fock02()[1]};
  for (auto& p : shrunk[1].points) p.threshold -= 0.05;
  EXPECT_THROW(stellar::certify_pair({0.0, 1.0}, shrunk, 1e-4), stellar::DataError);
  EXPECT_THROW(stellar::certify_pair({0.0, 1.0}, std::vector<BoundaryCurve>{}, 1e-4), stellar::DataError);
}

TEST(TangentWitness, Examples) {
  const auto sep = stellar::tangent_witness(fock02()[1], {0.0, 1.0});
  EXPECT_NEAR(sep.omega, kPi / 2, kPi / 8 + 1e-12);
  EXPECT_GT(sep.witness_value, sep.threshold);
  EXPECT_NEAR(sep.excess, sep.witness_value - sep.threshold, 1e-15);
  EXPECT_THROW(stellar::tangent_witness(fock02()[0], {1.0, 0.0}), stellar::DomainError);
}

TEST(Certify, SinglePhotonAgainstSmallBetaCats) {
  const auto curves = stellar::sweep_family(WitnessFamily::cat_pair(0.01), 2, stellar::uniform_omegas(16), quick());
  stellar::FockVector one;
  one.amplitudes = {0.0, 1.0};
  const auto odd = stellar::cat(0.01, stellar::Parity::Odd);
  const auto even = stellar::cat(0.01, stellar::Parity::Even);
  auto overlap = [&](const stellar::FockVector& c) { return std::norm(c.amplitudes[1]); };
  EXPECT_GE(stellar::certify_pair({overlap(odd), overlap(even)}, curves, 1e-4), 1u);
}

}  // namespace
