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

#include "validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "stellar/boundary.hpp"
#include "stellar/errors.hpp"
#include "stellar/fock_gaussian.hpp"
#include "stellar/states.hpp"

namespace stellar::cli {

namespace {

// Portable uniform draws: the standard distributions are not specified
// bit-for-bit across library implementations.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : engine_(seed) {}

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

 private:
  std::mt19937_64 engine_;
};

void record(CheckReport& rep, double deviation, io::Json detail) {
  if (std::isnan(deviation)) deviation = std::numeric_limits<double>::max();
  if (rep.cases++ == 0 || deviation > rep.max_deviation) {
    rep.max_deviation = deviation;
    rep.worst_case = std::move(detail);
  }
}

std::vector<double> random_probabilities(Draw& draw, std::size_t size) {
  std::vector<double> p(size);
  double sum = 0.0;
  for (double& x : p) sum += x = draw.unit();
  for (double& x : p) x /= sum;
  return p;
}

double cross(Point2 o, Point2 a, Point2 b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool on_segment(Point2 p, Point2 a, Point2 b) {
  return cross(a, b, p) == 0.0 && p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x) &&
         p.y >= std::min(a.y, b.y) && p.y <= std::max(a.y, b.y);
}

bool in_triangle(Point2 p, Point2 a, Point2 b, Point2 c) {
  if (cross(a, b, c) == 0.0) return on_segment(p, a, b) || on_segment(p, b, c) || on_segment(p, c, a);
  const double d1 = cross(a, b, p);
  const double d2 = cross(b, c, p);
  const double d3 = cross(c, a, p);
  const bool neg = d1 < 0 || d2 < 0 || d3 < 0;
  const bool pos = d1 > 0 || d2 > 0 || d3 > 0;
  return !(neg && pos);
}

// Extreme points of a set of distinct points: p is not extreme iff it lies
// in a (possibly degenerate) triangle spanned by three other points.
std::vector<Point2> brute_extreme_points(const std::vector<Point2>& pts) {
  std::vector<Point2> out;
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    bool extreme = true;
    for (std::size_t a = 0; a < n && extreme; ++a) {
      for (std::size_t b = a + 1; b < n && extreme; ++b) {
        for (std::size_t c = b; c < n && extreme; ++c) {
          if (a == i || b == i || c == i) continue;
          if (in_triangle(pts[i], pts[a], pts[b], pts[c])) extreme = false;
        }
      }
    }
    if (extreme) out.push_back(pts[i]);
  }
  return out;
}

bool point_less(Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }
bool point_equal(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }

io::Json points_json(const std::vector<Point2>& pts) {
  io::Json out = io::Json::array();
  for (Point2 p : pts) out.push_back(io::Json::array({p.x, p.y}));
  return out;
}

}  // namespace

CheckReport check_elements(std::uint64_t seed) {
  CheckReport rep{"elements", 0, 0.0, 1e-8, nullptr};
  Draw draw(seed);
  constexpr std::size_t kBlock = 9;
  for (int sample = 0; sample < 100; ++sample) {
    GaussianParams p;
    p.theta = draw.uniform(0.0, 2.0 * std::numbers::pi);
    p.vartheta = draw.uniform(0.0, 2.0 * std::numbers::pi);
    p.r = draw.uniform(0.0, 2.0);
    p.alpha = std::polar(4.0 * std::sqrt(draw.unit()), draw.uniform(0.0, 2.0 * std::numbers::pi));

    const ComplexMatrix analytic = gaussian_block(p, kBlock, kBlock);
    const OracleMatrix oracle = oracle_gaussian_matrix(p, default_oracle_cutoff(p, kBlock), kBlock);
    double worst = 0.0;
    std::size_t wk = 0;
    std::size_t wm = 0;
    for (std::size_t k = 0; k <= kBlock; ++k) {
      for (std::size_t m = 0; m <= kBlock; ++m) {
        const double d = std::abs(analytic(k, m) - oracle.matrix(k, m));
        if (d > worst || std::isnan(d)) {
          worst = std::isnan(d) ? std::numeric_limits<double>::max() : d;
          wk = k;
          wm = m;
        }
      }
    }
    record(rep, worst,
           {{"sample", sample},
            {"params", io::params_to_json(p)},
            {"k", wk},
            {"m", wm},
            {"analytic", io::complex_json(analytic(wk, wm))},
            {"oracle", io::complex_json(oracle.matrix(wk, wm))},
            {"oracle_cutoff", oracle.cutoff}});
  }
  return rep;
}

CheckReport check_q0_identity(std::uint64_t seed) {
  CheckReport rep{"states.q0_identity", 0, 0.0, 1e-8, nullptr};
  Draw draw(seed ^ 0x71);
  for (int sample = 0; sample < 50; ++sample) {
    const std::vector<double> p = random_probabilities(draw, 1 + draw.index(25));
    const double t = draw.uniform(0.1, 1.0);
    const double nbar = (1.0 - t) / t;
    const double ratio = nbar / (1.0 + nbar);
    std::size_t cutoff = p.size() - 1;
    if (ratio > 0.0) {
      // (nbar / (1 + nbar))^(cutoff + 1) <= 1e-9
      cutoff = std::max(cutoff, static_cast<std::size_t>(std::ceil(std::log(1e-9) / std::log(ratio))));
    }
    const FockDensity tau = thermal(nbar, cutoff);
    double overlap = 0.0;
    for (std::size_t m = 0; m < p.size(); ++m) overlap += tau.matrix(m, m).real() * p[m];
    const double q0 = q0_after_loss(p, t);
    const double rhs = (1.0 + nbar) * overlap;
    record(rep, std::abs(q0 - rhs),
           {{"sample", sample}, {"transmittance", t}, {"probabilities", p}, {"q0", q0}, {"thermal_form", rhs}});
  }
  return rep;
}

CheckReport check_click_sums(std::uint64_t seed) {
  CheckReport rep{"states.click_sums", 0, 0.0, 1e-9, nullptr};
  Draw draw(seed ^ 0xc1);
  for (int channels = 1; channels <= 4; ++channels) {
    for (int sample = 0; sample < 25; ++sample) {
      const std::vector<double> p = random_probabilities(draw, 1 + draw.index(12));
      const double eta = draw.unit();
      const double dark = draw.uniform(0.0, 0.2);
      // Each multiplicity m stands for C(M, m) equally likely subsets.
      double total = 0.0;
      double binom = 1.0;
      for (int m = 0; m <= channels; ++m) {
        total += binom * click_statistics(p, channels, eta, dark, m);
        binom = binom * (channels - m) / (m + 1);
      }
      record(rep, std::abs(total - 1.0),
             {{"channels", channels}, {"eta", eta}, {"dark", dark}, {"probabilities", p}, {"sum", total}});
    }
  }
  return rep;
}

CheckReport check_hull(std::uint64_t seed) {
  CheckReport rep{"hull", 0, 0.0, 0.0, nullptr};
  Draw draw(seed ^ 0x4a);
  for (int sample = 0; sample < 200; ++sample) {
    // Coordinates on a dyadic grid keep every orientation test exact and
    // make collinear and repeated points common.
    const std::size_t n = 1 + draw.index(24);
    std::vector<Point2> pts(n);
    for (Point2& q : pts) q = {static_cast<double>(draw.index(9)) / 8.0, static_cast<double>(draw.index(9)) / 8.0};

    std::vector<Point2> wrapped;
    for (std::size_t i : gift_wrap(pts)) wrapped.push_back(pts[i]);

    std::vector<Point2> distinct = pts;
    std::sort(distinct.begin(), distinct.end(), point_less);
    distinct.erase(std::unique(distinct.begin(), distinct.end(), point_equal), distinct.end());
    std::vector<Point2> expected = brute_extreme_points(distinct);

    std::vector<Point2> got = wrapped;
    std::sort(got.begin(), got.end(), point_less);
    const bool duplicates = std::adjacent_find(got.begin(), got.end(), point_equal) != got.end();
    bool ccw = true;
    for (std::size_t i = 0; wrapped.size() >= 3 && i < wrapped.size(); ++i) {
      const Point2 a = wrapped[i];
      const Point2 b = wrapped[(i + 1) % wrapped.size()];
      const Point2 c = wrapped[(i + 2) % wrapped.size()];
      ccw = ccw && cross(a, b, c) > 0.0;
    }
    const bool same = !duplicates && ccw && got.size() == expected.size() &&
                      std::equal(got.begin(), got.end(), expected.begin(), point_equal);
    record(rep, same ? 0.0 : 1.0,
           {{"sample", sample}, {"points", points_json(pts)}, {"gift_wrap", points_json(wrapped)},
            {"brute_force", points_json(expected)}});
  }
  return rep;
}

std::vector<CheckReport> run_suite(const std::string& suite, std::uint64_t seed) {
  std::vector<CheckReport> out;
  const bool all = suite == "all";
  if (!all && suite != "elements" && suite != "states" && suite != "hull") {
    throw DomainError("unknown validation suite '" + suite + "'");
  }
  if (all || suite == "elements") out.push_back(check_elements(seed));
  if (all || suite == "states") {
    out.push_back(check_q0_identity(seed));
    out.push_back(check_click_sums(seed));
  }
  if (all || suite == "hull") out.push_back(check_hull(seed));
  return out;
}

io::Json report_to_json(const std::vector<CheckReport>& reports, std::uint64_t seed) {
  io::Json checks = io::Json::array();
  bool passed = true;
  for (const CheckReport& r : reports) {
    io::Json entry = {{"check", r.name},
                      {"cases", r.cases},
                      {"max_deviation", r.max_deviation},
                      {"tolerance", r.tolerance},
                      {"passed", r.passed()}};
    if (!r.passed()) entry["worst_case"] = r.worst_case;
    checks.push_back(entry);
    passed = passed && r.passed();
  }
  return {{"seed", seed}, {"passed", passed}, {"checks", checks}};
}

}  // namespace stellar::cli
