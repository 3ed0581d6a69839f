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

#include "oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

namespace {

Matrix lowering(std::size_t cutoff) {
  Matrix a = Matrix::Zero(cutoff + 1, cutoff + 1);
  for (std::size_t k = 1; k <= cutoff; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

Matrix phase(double phi, std::size_t cutoff) {
  Matrix f = Matrix::Zero(cutoff + 1, cutoff + 1);
  for (std::size_t k = 0; k <= cutoff; ++k) f(k, k) = std::polar(1.0, phi * static_cast<double>(k));
  return f;
}

double factorial(std::size_t n) { return std::tgamma(static_cast<double>(n) + 1.0); }

}  // namespace

Matrix expm_unitary(const stellar::GaussianParams& p, std::size_t cutoff) {
  const Matrix a = lowering(cutoff);
  const Matrix ad = a.adjoint();
  const Matrix d = (p.alpha * ad - std::conj(p.alpha) * a).exp();
  const Matrix s = (0.5 * p.r * (ad * ad - a * a)).exp();
  return phase(p.theta, cutoff) * d * s * phase(p.vartheta, cutoff);
}

Complex laguerre_displacement(Complex alpha, std::size_t k, std::size_t m) {
  const double x = std::norm(alpha);
  const double gauss = std::exp(-0.5 * x);
  if (k >= m) {
    const auto d = static_cast<unsigned>(k - m);
    return std::sqrt(factorial(m) / factorial(k)) * std::pow(alpha, static_cast<double>(d)) * gauss *
           std::assoc_laguerre(static_cast<unsigned>(m), d, x);
  }
  const auto d = static_cast<unsigned>(m - k);
  return std::sqrt(factorial(k) / factorial(m)) * std::pow(-std::conj(alpha), static_cast<double>(d)) * gauss *
         std::assoc_laguerre(static_cast<unsigned>(k), d, x);
}

Matrix to_eigen(const stellar::ComplexMatrix& m) {
  Matrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

double grid_fock1_threshold(double step) {
  // In the Bargmann picture S(r)|0> ~ exp(t z^2 / 2) / sqrt(cosh r) with
  // t = tanh r, and <1|D(alpha) = <-alpha|(a + alpha); differentiating gives
  // |<1|D S|0>|^2 = exp(-|a|^2 (1 - t cos 2chi)) |a|^2 (1 + t^2 - 2t cos 2chi) / cosh r.
  const auto steps = [&](double hi) { return static_cast<int>(std::lround(hi / step)); };
  double best = 0.0;
  for (int ir = 0; ir <= steps(3.0); ++ir) {
    const double r = ir * step;
    const double t = std::tanh(r);
    const double c = 1.0 / std::cosh(r);
    for (int ic = 0; ic <= steps(std::numbers::pi); ++ic) {
      const double cos2 = std::cos(2.0 * ic * step);
      const double decay = 1.0 - t * cos2;
      const double shape = (1.0 + t * t - 2.0 * t * cos2) * c;
      for (int ia = 0; ia <= steps(3.0); ++ia) {
        const double a2 = (ia * step) * (ia * step);
        best = std::max(best, std::exp(-a2 * decay) * a2 * shape);
      }
    }
  }
  return best;
}

std::vector<stellar::Point2> brute_force_hull(std::vector<stellar::Point2> pts) {
  auto less = [](stellar::Point2 a, stellar::Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); };
  auto same = [](stellar::Point2 a, stellar::Point2 b) { return a.x == b.x && a.y == b.y; };
  std::sort(pts.begin(), pts.end(), less);
  pts.erase(std::unique(pts.begin(), pts.end(), same), pts.end());
  if (pts.size() <= 2) return pts;

  // p is extreme iff it starts a counter-clockwise hull edge. Exact for
  // inputs whose orientation tests round exactly (e.g. dyadic grids).
  auto cross = [](stellar::Point2 o, stellar::Point2 a, stellar::Point2 b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
  };
  std::vector<stellar::Point2> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool extreme = false;
    for (std::size_t j = 0; j < pts.size() && !extreme; ++j) {
      if (j == i) continue;
      // Edge (i, j) is a hull edge iff every other point is strictly left of
      // it, or collinear and strictly inside the segment.
      bool edge = true;
      for (std::size_t k = 0; k < pts.size() && edge; ++k) {
        if (k == i || k == j) continue;
        const double c = cross(pts[i], pts[j], pts[k]);
        if (c < 0.0) edge = false;
        if (c == 0.0) {
          const double dot = (pts[k].x - pts[i].x) * (pts[j].x - pts[i].x) + (pts[k].y - pts[i].y) * (pts[j].y - pts[i].y);
          const double len2 = (pts[j].x - pts[i].x) * (pts[j].x - pts[i].x) + (pts[j].y - pts[i].y) * (pts[j].y - pts[i].y);
          if (dot <= 0.0 || dot >= len2) edge = false;
        }
      }
      extreme = edge;
    }
    if (extreme) out.push_back(pts[i]);
  }
  return out;
}

double routed_click_probability(const std::vector<double>& p, int channels, double eta, double dark,
                                unsigned mask) {
  const int clicks = std::popcount(mask);
  const double silent = std::pow(1.0 - dark, channels - clicks);
  double total = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) {
    if (p[n] == 0.0) continue;
    // Each photon is lost (0) or detected at detector d (1..channels).
    std::vector<int> fate(n, 0);
    double sum = 0.0;
    while (true) {
      double weight = 1.0;
      unsigned hit = 0;
      for (int f : fate) {
        weight *= f == 0 ? 1.0 - eta : eta / channels;
        if (f > 0) hit |= 1u << (f - 1);
      }
      if ((hit & ~mask) == 0) sum += weight * std::pow(dark, std::popcount(mask & ~hit)) * silent;
      std::size_t i = 0;
      while (i < n && ++fate[i] > channels) fate[i++] = 0;
      if (i == n) break;
    }
    total += p[n] * sum;
  }
  return total;
}

Complex permanent(const Matrix& a) {
  // Ryser's formula.
  const auto n = static_cast<int>(a.rows());
  if (n == 0) return 1.0;
  Complex total = 0.0;
  for (unsigned subset = 1; subset < (1u << n); ++subset) {
    Complex product = 1.0;
    for (int i = 0; i < n; ++i) {
      Complex row = 0.0;
      for (int j = 0; j < n; ++j)
        if (subset & (1u << j)) row += a(i, j);
      product *= row;
    }
    total += ((n - std::popcount(subset)) % 2 == 0 ? 1.0 : -1.0) * product;
  }
  return total;
}

Complex passive_amplitude(const Matrix& u, const std::vector<std::size_t>& k,
                          const std::vector<std::size_t>& m) {
  std::vector<Eigen::Index> rows;
  std::vector<Eigen::Index> cols;
  double norm = 1.0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    rows.insert(rows.end(), k[i], static_cast<Eigen::Index>(i));
    norm *= factorial(k[i]);
  }
  for (std::size_t j = 0; j < m.size(); ++j) {
    cols.insert(cols.end(), m[j], static_cast<Eigen::Index>(j));
    norm *= factorial(m[j]);
  }
  if (rows.size() != cols.size()) return 0.0;
  Matrix sub(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) sub(i, j) = u(rows[i], cols[j]);
  return permanent(sub) / std::sqrt(norm);
}

stellar::WitnessOperator conjugated_fock_pair(std::size_t j, std::size_t k, double omega,
                                              const stellar::GaussianParams& v, std::size_t cutoff) {
  const stellar::ComplexMatrix block = stellar::gaussian_block(v, cutoff, std::max(j, k));
  auto rotated = [&](std::size_t m) {
    stellar::FockVector psi;
    psi.amplitudes = block.column(m);
    psi.tail_bound = std::max(0.0, 1.0 - psi.norm_squared());
    return psi;
  };
  return stellar::WitnessOperator({stellar::WitnessTerm{std::cos(omega), rotated(j)},
                                   stellar::WitnessTerm{std::sin(omega), rotated(k)}});
}

double Uniform::operator()() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return static_cast<double>(z >> 11) * 0x1p-53;
}

}  // namespace oracle
