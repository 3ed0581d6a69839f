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

#include "stellar/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "stellar/errors.hpp"

namespace stellar {

namespace {

struct Vertex {
  std::vector<double> x;
  double f;
};

class Counted {
 public:
  explicit Counted(const Objective& f) : f_(f) {}
  double operator()(std::span<const double> x) {
    ++count_;
    const double v = f_(x);
    return std::isfinite(v) ? v : -std::numeric_limits<double>::infinity();
  }
  std::size_t count() const { return count_; }

 private:
  const Objective& f_;
  std::size_t count_ = 0;
};

double diameter(const std::vector<Vertex>& s) {
  double d = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i)
    for (std::size_t k = 0; k < s[0].x.size(); ++k) d = std::max(d, std::abs(s[i].x[k] - s[0].x[k]));
  return d;
}

}  // namespace

NelderMeadResult nelder_mead_maximize(const Objective& f, std::vector<double> x0,
                                      std::span<const double> step,
                                      const NelderMeadOptions& options) {
  const std::size_t d = x0.size();
  if (d == 0 || step.size() != d) throw DimensionError("Nelder-Mead needs matching start and step");
  const double nd = static_cast<double>(d);
  // Gao & Han coefficients.
  const double expand = 1.0 + 2.0 / nd;
  const double contract = 0.75 - 0.5 / nd;
  const double shrink = 1.0 - 1.0 / nd;

  Counted eval(f);
  NelderMeadResult out;
  Vertex best{x0, eval(x0)};
  std::vector<double> scale(step.begin(), step.end());
  std::size_t iterations = 0;
  bool converged = false;

  for (std::size_t restart = 0; restart <= options.max_restarts; ++restart) {
    std::vector<Vertex> s;
    s.push_back(best);
    for (std::size_t i = 0; i < d; ++i) {
      std::vector<double> x = best.x;
      x[i] += scale[i];
      const double fx = eval(x);
      s.push_back({std::move(x), fx});
    }

    converged = false;
    std::vector<double> centroid(d), trial(d);
    auto point = [&](double t, const std::vector<double>& from) {
      for (std::size_t k = 0; k < d; ++k) trial[k] = centroid[k] + t * (from[k] - centroid[k]);
      return trial;
    };

    double anchor = s.front().f;  // best value at the last significant improvement
    std::size_t anchor_iteration = iterations;
    const std::size_t stall_window = 20 * d;

    while (iterations < options.max_iterations) {
      std::stable_sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.f > b.f; });
      if (s.front().f > anchor + options.f_tolerance || !std::isfinite(anchor)) {
        anchor = s.front().f;
        anchor_iteration = iterations;
      }
      const double spread = s.front().f - s.back().f;
      if (std::isfinite(s.front().f) && spread <= options.f_tolerance &&
          (diameter(s) <= options.x_tolerance || iterations - anchor_iteration >= stall_window)) {
        // Either the simplex collapsed or the values agree and have stopped
        // improving (flat directions never shrink the simplex).
        converged = true;
        break;
      }
      ++iterations;

      std::fill(centroid.begin(), centroid.end(), 0.0);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k < d; ++k) centroid[k] += s[i].x[k] / nd;

      Vertex& worst = s.back();
      std::vector<double> xr = point(-1.0, worst.x);
      const double fr = eval(xr);
      if (fr > s.front().f) {
        std::vector<double> xe = point(-expand, worst.x);
        const double fe = eval(xe);
        worst = fe > fr ? Vertex{std::move(xe), fe} : Vertex{std::move(xr), fr};
        continue;
      }
      if (fr > s[d - 1].f) {
        worst = {std::move(xr), fr};
        continue;
      }
      const bool outside = fr > worst.f;
      std::vector<double> xc = outside ? point(-contract, worst.x) : point(contract, worst.x);
      const double fc = eval(xc);
      if (outside ? fc >= fr : fc > worst.f) {
        worst = {std::move(xc), fc};
        continue;
      }
      for (std::size_t i = 1; i <= d; ++i) {
        for (std::size_t k = 0; k < d; ++k)
          s[i].x[k] = s[0].x[k] + shrink * (s[i].x[k] - s[0].x[k]);
        s[i].f = eval(s[i].x);
      }
    }

    std::stable_sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.f > b.f; });
    const double gain = s.front().f - best.f;
    if (s.front().f > best.f) best = s.front();
    if (restart > 0 && !(gain > options.f_tolerance)) break;
    if (iterations >= options.max_iterations) break;
    for (double& v : scale) v *= 0.25;
  }

  out.x = std::move(best.x);
  out.value = best.f;
  out.iterations = iterations;
  out.evaluations = eval.count();
  out.converged = converged;
  return out;
}

}  // namespace stellar
