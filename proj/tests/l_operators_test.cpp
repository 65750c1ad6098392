// Copyright 2026 The ellr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <random>

#include "ellr/l_operators.hpp"
#include "test_util.hpp"

namespace ellr {
namespace {

const ModularParams kParams;
const cplx kTau = kParams.tau;

Bivariate exp_function(double a, double b) {
  return Bivariate{[a, b](cplx z1, cplx z2) { return std::exp(2.0 * kPi * kI * (a * z1 + b * z2)); },
                   [a, b](cplx z1, cplx z2) {
                     const cplx v = std::exp(2.0 * kPi * kI * (a * z1 + b * z2));
                     return std::array<cplx, 2>{2.0 * kPi * kI * a * v, 2.0 * kPi * kI * b * v};
                   }};
}

std::vector<std::array<cplx, 2>> pairs(std::mt19937_64& rng, int count) {
  std::vector<std::array<cplx, 2>> out;
  for (int p = 0; p < count; ++p) {
    const auto z = test::draw_generic(rng, kTau, 2);
    out.push_back({z[0], z[1]});
  }
  return out;
}

TEST(LOperator, ConstantFunctionGivesOutgoingVector) {
  const auto lam = default_window(0, 2, kParams);
  const auto m = outgoing_coeffs({0.21, 0.05}, lam, Parity::plus, kParams);
  const Univariate one = [](cplx) { return cplx{1.0}; };
  for (int i = 0; i <= 2; ++i)
    EXPECT_EQ(l_apply(m, lam.stepped(i), one, {0.1, 0.2}, kTau), outgoing_eval(m, i, {0.1, 0.2}, kTau));
  EXPECT_EQ(l_apply(m, lam.stepped(0).stepped(2), one, 0.1, kTau), cplx{});
  EXPECT_EQ(l_apply(m, lam, one, 0.1, kTau), cplx{});
}

TEST(LOperator, SumOverCornersIsIdentityOnSpace) {
  for (Parity par : {Parity::plus, Parity::minus}) {
    const auto lam = default_window(0, 2, kParams);
    const auto m = outgoing_coeffs({-0.3, 0.12}, lam, par, kParams);
    const Univariate f = [&](cplx z) { return basis_eval(m.space, 0, z, kTau) - 2.0 * basis_eval(m.space, 2, z, kTau); };
    const cplx z{0.33, -0.07};
    cplx sum = 0.0;
    for (int i = 0; i <= 2; ++i) sum += l_apply(m, lam.stepped(i), f, z, kTau);
    EXPECT_LT(relative_difference(sum, f(z)), 1e-10);
  }
}

class Rll : public ::testing::TestWithParam<Parity> {};

TEST_P(Rll, PointwiseForAllPairs) {
  const double h = GetParam() == Parity::plus ? 0.0 : 0.5;
  std::mt19937_64 rng(1400);
  for (int k2 : {0, 1, 2}) {
    const auto lam = default_window(0, k2, kParams);
    const cplx xi1 = test::draw_spectral(rng, kTau);
    const cplx xi2 = test::draw_spectral(rng, kTau);
    const auto pts = pairs(rng, 2);
    for (int i = 0; i <= k2; ++i)
      for (int j = 0; j <= k2; ++j)
        EXPECT_LT(rll_pointwise_residual(xi1, xi2, lam, i, j, exp_function(1 + h, -2 + h), pts, GetParam(), kParams),
                  1e-8)
            << k2 << ":" << i << j;
  }
}

TEST_P(Rll, Assembled) {
  const double h = GetParam() == Parity::plus ? 0.0 : 0.5;
  std::mt19937_64 rng(1401);
  for (int k2 : {1, 2}) {
    const auto lam = default_window(0, k2, kParams);
    const auto nu = lam.stepped(0).stepped(k2);
    const auto pts = pairs(rng, 2);
    EXPECT_LT(rll_assembled_residual(test::draw_spectral(rng, kTau), test::draw_spectral(rng, kTau), nu,
                                     exp_function(h, 1 + h), pts, GetParam(), kParams),
              1e-8);
  }
}

TEST_P(Rll, EqualSpectralParameters) {
  const auto lam = default_window(0, 1, kParams);
  const std::vector<std::array<cplx, 2>> pts{{cplx{0.1, 0.02}, cplx{-0.3, 0.1}}};
  const cplx xi{0.19, -0.1};
  for (int i = 0; i <= 1; ++i)
    for (int j = 0; j <= 1; ++j)
      EXPECT_LT(rll_pointwise_residual(xi, xi, lam, i, j, exp_function(2, 1), pts, GetParam(), kParams), 1e-8);
}

INSTANTIATE_TEST_SUITE_P(Parities, Rll, ::testing::Values(Parity::plus, Parity::minus));

TEST(BelavinOutgoing, IsIncomingAppliedToTranslatedBasis) {
  const auto lam = default_window(0, 2, kParams);
  const cplx xi{0.27, 0.06};
  const int k = 3;
  for (int i = 0; i <= 2; ++i) {
    const auto c = belavin_outgoing(xi, lam, lam.stepped(i, -1), kParams);
    for (int j = 0; j < k; ++j) {
      const Univariate ej = [&](cplx z) { return basis_eval(tilde_space(k), j, z, kTau); };
      const cplx expect = incoming_apply(lam, i, translate(k, xi + lam.total(), ej));
      EXPECT_LT(relative_difference(c(j), expect), 1e-12);
    }
  }
  EXPECT_EQ(belavin_outgoing(xi, lam, lam.stepped(0), kParams).norm(), 0.0);
}

TEST(BelavinOutgoing, RankOneIsTheta) {
  const WeightSequence lam(0, {cplx{0.13, 0.0}}, kParams.mu);
  const cplx xi{0.2, 0.1};
  const auto c = belavin_outgoing(xi, lam, lam.stepped(0, -1), kParams);
  EXPECT_LT(relative_difference(c(0), theta1(xi, kTau)), 1e-13);
}

class BelavinL : public ::testing::TestWithParam<int> {};

TEST_P(BelavinL, RankOneAndMatchesClosedForm) {
  const int k = GetParam();
  const auto lam = default_window(0, k - 1, kParams);
  const cplx xi{0.23, -0.08};
  for (int i = 0; i < k; ++i) {
    const auto kap = lam.stepped(i, -1);
    const auto m = belavin_l_matrix(xi, lam, kap, kParams, GridOptions{0.13, 0.58, 0.31});
    EXPECT_EQ(m.rank, 1);
    EXPECT_LT(m.residual, 1e-9);
    EXPECT_LT(matrix_relative_residual(m.l, belavin_l_closed_form(xi, lam, kap, kParams)), 1e-9) << i;
    EXPECT_EQ(m.star, m.l.transpose());
  }
}

TEST_P(BelavinL, ZeroOffAdmissibleCorners) {
  const int k = GetParam();
  const auto lam = default_window(0, k - 1, kParams);
  const auto m = belavin_l_matrix(0.3, lam, lam.stepped(0), kParams);
  EXPECT_EQ(m.l.norm(), 0.0);
  EXPECT_EQ(m.rank, 0);
  EXPECT_EQ(belavin_l_closed_form(0.3, lam, lam.stepped(0), kParams).norm(), 0.0);
}

TEST_P(BelavinL, VertexIrfForAllStepPairs) {
  const int k = GetParam();
  std::mt19937_64 rng(1500 + k);
  const auto base = default_window(0, k - 1, kParams);
  const cplx xi1 = test::draw_spectral(rng, kTau);
  const cplx xi2 = test::draw_spectral(rng, kTau);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      EXPECT_LT(belavin_vertex_irf_residual(xi1, xi2, base.stepped(a).stepped(b), a, b, kParams), 1e-8) << a << b;
}

TEST_P(BelavinL, RllPerPairAndAssembled) {
  const int k = GetParam();
  std::mt19937_64 rng(1600 + k);
  const auto base = default_window(0, k - 1, kParams);
  const cplx xi1 = test::draw_spectral(rng, kTau);
  const cplx xi2 = test::draw_spectral(rng, kTau);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      EXPECT_LT(belavin_rll_residual(xi1, xi2, base.stepped(a).stepped(b), a, b, kParams), 1e-8) << a << b;
  EXPECT_LT(belavin_rll_assembled_residual(xi1, xi2, base, kParams), 1e-8);
}

INSTANTIATE_TEST_SUITE_P(Sizes, BelavinL, ::testing::Values(1, 2, 3));

TEST(BelavinL, RejectsLatticeShifts) {
  const auto lam = default_window(0, 1, kParams);
  const auto kap = lam.stepped(0, -1);
  EXPECT_THROW(belavin_l_matrix(0.0, lam, kap, kParams), GenericityError);
  EXPECT_THROW(belavin_l_matrix(2.0 * kParams.mu, lam, kap, kParams), GenericityError);
  const cplx s_zero = 2.0 * kParams.mu - kap.total();
  EXPECT_THROW(belavin_l_matrix(s_zero, lam, kap, kParams), GenericityError);
}

}  // namespace
}  // namespace ellr
