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

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "stellar/errors.hpp"
#include "stellar/states.hpp"
#include "stellar/witness.hpp"

namespace {

using stellar::Complex;
using stellar::ComplexMatrix;
using stellar::GaussianParams;
using stellar::Parity;
using stellar::WitnessOperator;
using stellar::WitnessTerm;

constexpr double kPi = std::numbers::pi;

oracle::Matrix projector(const stellar::ComplexVector& v, std::size_t cutoff) {
  oracle::Matrix out = oracle::Matrix::Zero(cutoff + 1, cutoff + 1);
  for (std::size_t k = 0; k < v.size() && k <= cutoff; ++k)
    for (std::size_t l = 0; l < v.size() && l <= cutoff; ++l)
      out(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = v[k] * std::conj(v[l]);
  return out;
}

oracle::Matrix fock(std::size_t j, std::size_t cutoff) {
  oracle::Matrix out = oracle::Matrix::Zero(cutoff + 1, cutoff + 1);
  out(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = 1.0;
  return out;
}

// Pi_{n-1} U W U^dag Pi_{n-1} with U from Eigen's expm.
oracle::Matrix compressed_oracle(const oracle::Matrix& w, const GaussianParams& p, std::size_t n, std::size_t cutoff) {
  const oracle::Matrix u = oracle::expm_unitary(p, cutoff);
  const auto d = static_cast<Eigen::Index>(n);
  return (u * w * u.adjoint()).topLeftCorner(d, d);
}

double max_diff(const ComplexMatrix& a, const oracle::Matrix& b) {
  return (oracle::to_eigen(a) - b).cwiseAbs().maxCoeff();
}

TEST(FockPair, Examples) {
  const auto w0 = stellar::fock_pair_witness(0, 2, 0.0).assembled(4);
  EXPECT_NEAR(max_diff(w0, fock(0, 4)), 0.0, 1e-16);
  const auto w1 = stellar::fock_pair_witness(0, 2, kPi / 2).assembled(4);
  EXPECT_NEAR(max_diff(w1, fock(2, 4)), 0.0, 1e-16);

  const auto spectrum = stellar::witness_spectrum(stellar::fock_pair_witness(1, 2, kPi / 4));
  ASSERT_GE(spectrum.size(), 3u);
  EXPECT_NEAR(spectrum[0], std::cos(kPi / 4), 1e-15);
  EXPECT_NEAR(spectrum[1], std::sin(kPi / 4), 1e-15);
  for (std::size_t i = 2; i < spectrum.size(); ++i) EXPECT_NEAR(spectrum[i], 0.0, 1e-15);

  EXPECT_THROW(stellar::fock_pair_witness(3, 3, 0.1), stellar::DegenerateError);
  EXPECT_TRUE(stellar::fock_pair_witness(0, 2, 0.3).phase_invariant());
  EXPECT_EQ(stellar::fock_pair_witness(0, 5, 0.3).support_cutoff(), 5u);
}

TEST(CatPair, Examples) {
  const auto w = stellar::cat_pair_witness(2.0, 0.0);
  const std::size_t c = w.support_cutoff();
  const auto odd = stellar::cat(2.0, Parity::Odd, c);
  EXPECT_NEAR(max_diff(w.assembled(c), projector(odd.amplitudes, c)), 0.0, 1e-14);
  EXPECT_FALSE(w.phase_invariant());

  const auto quarter = stellar::cat_pair_witness(2.0, kPi / 4);
  EXPECT_NEAR(quarter.assembled(quarter.support_cutoff()).trace().real(), std::sqrt(2.0), 1e-6);

  EXPECT_THROW(stellar::cat_pair_witness(0.0, 1.0), stellar::DegenerateError);
}

TEST(CatPair, SmallBetaRecoversFockPair) {
  for (double omega : {0.0, 0.4, kPi / 2, 2.0, 4.0}) {
    const auto w = stellar::cat_pair_witness(1e-4, omega).assembled(6);
    oracle::Matrix want = std::cos(omega) * fock(1, 6) + std::sin(omega) * fock(0, 6);
    EXPECT_NEAR(max_diff(w, want), 0.0, 1e-7);
  }
}

TEST(Compress, TrivialCases) {
  const auto vac = stellar::fock_pair_witness(0, 2, 0.0);
  const auto c1 = stellar::compress_conjugated(vac, GaussianParams{}, 1);
  ASSERT_EQ(c1.rows(), 1u);
  EXPECT_EQ(c1(0, 0), Complex(1.0));
  const auto two = stellar::fock_pair_witness(0, 2, kPi / 2);
  EXPECT_LE(stellar::compress_conjugated(two, GaussianParams{}, 2).max_abs(), 1e-16);
  EXPECT_THROW(stellar::compress_conjugated(two, GaussianParams{}, 0), stellar::DomainError);
}

TEST(Compress, MatchesOracleProduct) {
  oracle::Uniform u(31);
  for (int trial = 0; trial < 6; ++trial) {
    GaussianParams p;
    p.vartheta = u(0, 2 * kPi);
    p.r = u(0, 1.2);
    p.alpha = {u(-1.5, 1.5), u(-1.5, 1.5)};
    const std::size_t cutoff = 260;
    const auto w = stellar::fock_pair_witness(0, 2, 0.7);
    const oracle::Matrix want = compressed_oracle(std::cos(0.7) * fock(0, cutoff) + std::sin(0.7) * fock(2, cutoff), p, 3, cutoff);
    EXPECT_LE(max_diff(stellar::compress_conjugated(w, p, 3), want), 1e-8);
  }
}

TEST(Compress, CatVectorAndDensityTermsMatchOracle) {
  GaussianParams p;
  p.vartheta = 0.8;
  p.r = 0.6;
  p.alpha = {0.4, -0.9};
  const std::size_t cutoff = 200;

  const auto cat_w = stellar::cat_pair_witness({1.5, 0.5}, 1.1);
  const auto odd = stellar::cat({1.5, 0.5}, Parity::Odd, 60);
  const auto even = stellar::cat({1.5, 0.5}, Parity::Even, 60);
  const oracle::Matrix cat_op = std::cos(1.1) * projector(odd.amplitudes, cutoff) + std::sin(1.1) * projector(even.amplitudes, cutoff);
  EXPECT_LE(max_diff(stellar::compress_conjugated(cat_w, p, 4), compressed_oracle(cat_op, p, 4, cutoff)), 1e-8);

  stellar::FockVector v;
  v.amplitudes = {Complex{0.6, 0.0}, Complex{0.0, 0.48}, Complex{0.64, 0.0}};
  const auto rho = stellar::thermal(0.3, 30);
  const WitnessOperator mixed({WitnessTerm{0.7, v}, WitnessTerm{-0.4, rho}}, 0.25);
  EXPECT_FALSE(mixed.phase_invariant());
  EXPECT_FALSE(mixed.rank_one_terms());
  oracle::Matrix op = 0.7 * projector(v.amplitudes, cutoff) + 0.25 * oracle::Matrix::Identity(cutoff + 1, cutoff + 1);
  op.topLeftCorner(31, 31) -= 0.4 * oracle::to_eigen(rho.matrix);
  EXPECT_LE(max_diff(stellar::compress_conjugated(mixed, p, 3), compressed_oracle(op, p, 3, cutoff)), 1e-8);
}

TEST(Witness, RejectsNonHermitianDensity) {
  stellar::FockDensity rho{ComplexMatrix(2, 2, {0.5, 0.2, 0.0, 0.5}), 0.0};
  EXPECT_THROW(WitnessOperator({WitnessTerm{1.0, rho}}), stellar::HermiticityError);
  EXPECT_THROW(WitnessOperator({WitnessTerm{NAN, stellar::FockProjector{0}}}), stellar::DomainError);
}

TEST(Expectation, Examples) {
  EXPECT_DOUBLE_EQ(stellar::expectation(stellar::fock_pair_witness(0, 2, 0.0), stellar::coherent(0.0)).value, 1.0);

  stellar::FockVector one;
  one.amplitudes = {0.0, 1.0};
  EXPECT_NEAR(stellar::expectation(stellar::fock_pair_witness(1, 2, kPi / 4), one).value, std::cos(kPi / 4), 1e-15);

  const auto e = stellar::expectation(stellar::cat_pair_witness(2.0, kPi / 2), stellar::coherent(2.0));
  EXPECT_NEAR(e.value, (1.0 + std::exp(-8.0)) / 2.0, 1e-9);
  EXPECT_NEAR(e.value, 0.50017, 1e-5);
}

TEST(Expectation, DensityAgreesWithVector) {
  const auto psi = stellar::cat({0.7, 0.3}, Parity::Even);
  const auto w = stellar::cat_pair_witness(1.2, 0.9).affine(2.0, -0.3);
  const auto ev = stellar::expectation(w, psi);
  const auto ed = stellar::expectation(w, stellar::to_density(psi));
  EXPECT_NEAR(ev.value, ed.value, 1e-12);
}

TEST(Rescale, Examples) {
  const auto inside = stellar::rescale_to_unit(stellar::fock_pair_witness(0, 2, 0.4));
  EXPECT_EQ(inside.a, 1.0);
  EXPECT_EQ(inside.b, 0.0);

  const auto doubled = stellar::rescale_to_unit(stellar::fock_diagonal_witness(std::vector<double>{2.0}));
  EXPECT_DOUBLE_EQ(doubled.a, 0.5);
  EXPECT_DOUBLE_EQ(doubled.b, 0.0);

  const auto signed_w = stellar::rescale_to_unit(stellar::fock_diagonal_witness(std::vector<double>{1.0, -1.0}));
  EXPECT_DOUBLE_EQ(signed_w.a, 0.5);
  EXPECT_DOUBLE_EQ(signed_w.b, 0.5);
  const auto eig = stellar::witness_spectrum(signed_w.witness);
  EXPECT_DOUBLE_EQ(eig.front(), 1.0);
  EXPECT_DOUBLE_EQ(eig.back(), 0.0);
  EXPECT_DOUBLE_EQ(signed_w.map(0.0), 0.5);

  EXPECT_THROW(stellar::rescale_to_unit(WitnessOperator({}, 2.0)), stellar::DegenerateError);
}

TEST(TraceDistance, Examples) {
  EXPECT_DOUBLE_EQ(stellar::trace_distance_lower_bound(0.9, 0.6), 0.9 - 0.6);
  EXPECT_EQ(stellar::trace_distance_lower_bound(0.5, 0.6), 0.0);
  EXPECT_EQ(stellar::trace_distance_lower_bound(1.0, 0.0), 1.0);
}

}  // namespace
