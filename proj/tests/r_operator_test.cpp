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

#include "ellr/r_operator.hpp"
#include "test_util.hpp"

namespace ellr {
namespace {

const ModularParams kParams;
const cplx kTau = kParams.tau;

Bivariate constant_one() {
  return Bivariate{[](cplx, cplx) { return cplx{1.0}; }, [](cplx, cplx) { return std::array<cplx, 2>{}; }};
}

Bivariate smooth() {
  return Bivariate{[](cplx a, cplx b) { return std::exp(2.0 * kPi * kI * a) + a * b * b; },
                   [](cplx a, cplx b) {
                     return std::array<cplx, 2>{2.0 * kPi * kI * std::exp(2.0 * kPi * kI * a) + b * b, 2.0 * a * b};
                   }};
}

TEST(ROperator, AtZeroIsScaledIdentity) {
  const RContext ctx{kParams, 0.0};
  const auto f = smooth();
  for (auto [z1, z2] : {std::pair<cplx, cplx>{0.1, 0.35}, {cplx{0.2, 0.1}, cplx{-0.3, 0.05}}})
    EXPECT_LT(relative_difference(r_apply(ctx, f, z1, z2), theta1_deriv0(kTau) * f(z1, z2)), 1e-12);
}

TEST(ROperator, TwoTermFormulaOffDiagonal) {
  const cplx xi{0.27, 0.08};
  const cplx mu = kParams.mu;
  const RContext ctx{kParams, xi};
  const auto f = smooth();
  const cplx z1{0.1, 0.02};
  const cplx z2{-0.23, 0.11};
  const cplx w = z2 - z1;
  const cplx d0 = theta1_deriv0(kTau);
  const cplx a = theta1(xi, kTau) * theta1(w - mu, kTau) * d0 / (theta1(-mu, kTau) * theta1(w, kTau));
  const cplx b = theta1(w - xi, kTau) * d0 / theta1(w, kTau);
  EXPECT_LT(relative_difference(r_apply(ctx, f, z1, z2), a * f(z2, z1) + b * f(z1, z2)), 1e-14);
}

// With f ≡ 1 the two poles cancel and the diagonal value is the constant
// Laurent term of A + B.
TEST(ROperator, DiagonalValueForConstant) {
  const cplx xi{0.27, 0.08};
  const cplx mu = kParams.mu;
  const cplx expected =
      (theta1(xi, kTau) * theta1_deriv(-mu, kTau) + theta1_deriv(-xi, kTau) * theta1(-mu, kTau)) / theta1(-mu, kTau);
  const RContext ctx{kParams, xi};
  const cplx z{0.13, 0.04};
  EXPECT_LT(relative_difference(r_apply(ctx, constant_one(), z, z), expected), 1e-12);
  EXPECT_LT(relative_difference(r_apply(ctx, constant_one(), z, z + 3e-13), expected), 1e-10);
}

// Exactly on, just inside and just outside the ε_diag ring must agree.
TEST(ROperator, BranchesAgreeNearDiagonal) {
  const cplx xi{-0.19, 0.12};
  const RContext ctx{kParams, xi};
  const auto f = smooth();
  const cplx z1{0.21, -0.03};
  const cplx on = r_apply(ctx, f, z1, z1);
  for (double gap : {1e-13, 1e-9, 5e-5, 9.9e-5}) {
    const cplx inside = r_apply(ctx, f, z1, z1 + gap);
    EXPECT_LT(std::abs(inside - on) / std::abs(on), 1e-6 + 20 * gap) << gap;
  }
  const cplx below = r_apply(ctx, f, z1, z1 + 0.99e-4);
  const cplx above = r_apply(ctx, f, z1, z1 + 1.01e-4);
  EXPECT_LT(std::abs(below - above) / std::abs(on), 1e-5);
}

TEST(ROperator, RingMeanMatchesLimitToSixDigits) {
  const cplx xi{0.31, 0.0};
  const RContext ctx{kParams, xi};
  const auto f = smooth();
  const cplx z{0.05, 0.07};
  const cplx lim = r_apply(ctx, f, z, z);
  const cplx ring = r_apply(ctx, f, z, z + 1e-8);
  EXPECT_LT(relative_difference(ring, lim), 1e-6);
}

TEST(ROperator, PoleWithoutDerivativesThrows) {
  const RContext ctx{kParams, {0.2, 0.1}};
  const Bivariate2 g = [](cplx a, cplx b) { return a + 2.0 * b; };
  EXPECT_THROW(r_apply(ctx, g, 0.3, 0.3), DerivativeRequired);
  EXPECT_NO_THROW(r_apply(ctx, g, 0.3, 0.3 + 1e-6));
  EXPECT_NO_THROW(r_apply(ctx, g, 0.3, 0.7));
}

// The pole set is the whole lattice; the limit at w0 = 1 + τ must agree with
// the mean of two-term evaluations on a small ring, which is exact to O(h⁴)
// for the analytic continuation across the removable singularity.
TEST(ROperator, LimitAtNonzeroLatticePoint) {
  const cplx xi{0.22, -0.05};
  const RContext ctx{kParams, xi};
  const auto f = smooth();
  const cplx z1{0.1, 0.02};
  const cplx z2 = z1 + 1.0 + kTau;
  const cplx lim = r_apply(ctx, f, z1, z2);
  const TwoTermKernel k(kParams, xi);
  const double h = 1e-3;
  cplx near = 0.0;
  for (cplx e : {cplx{h, 0}, cplx{-h, 0}, cplx{0, h}, cplx{0, -h}}) near += 0.25 * k.two_term(f.value, z1, z2 + e);
  EXPECT_LT(relative_difference(lim, near), 1e-8);
}

TEST(ROperator, PreservesPeriodicityInBothVariables) {
  const cplx xi{0.15, 0.09};
  const RContext ctx{kParams, xi};
  const Bivariate f = with_central_differences(
      [](cplx a, cplx b) { return std::exp(2.0 * kPi * kI * a) * std::exp(-4.0 * kPi * kI * b) + 1.0; });
  const cplx z1{0.12, 0.03};
  const cplx z2{0.41, -0.07};
  const cplx v = r_apply(ctx, f, z1, z2);
  EXPECT_LT(relative_difference(r_apply(ctx, f, z1 + 1.0, z2), v), 1e-12);
  EXPECT_LT(relative_difference(r_apply(ctx, f, z1, z2 - 1.0), v), 1e-12);
  EXPECT_LT(relative_difference(r_apply(ctx, f, z1 + 1.0, z2 + 1.0), v), 1e-12);
}

TEST(ROperator, GapReportsDistanceToPoleSet) {
  const TwoTermKernel k(kParams, 0.3);
  EXPECT_NEAR(k.gap(0.1, 0.1), 0.0, 1e-15);
  EXPECT_NEAR(k.gap(0.1, 1.1 + kTau.real() + kI * kTau.imag()), 0.0, 1e-14);
  EXPECT_NEAR(k.gap(0.0, 0.25), 0.25, 1e-15);
}

std::vector<Trivariate> test_functions(Parity parity) {
  const double h = parity == Parity::plus ? 0.0 : 0.5;
  std::vector<Trivariate> out;
  for (auto [a, b, c] : {std::array<double, 3>{1, 0, 0}, {0, 1, -1}, {2, -1, 1}, {-1, 2, 0}, {1, 1, 1}})
    out.push_back([a, b, c, h](cplx z1, cplx z2, cplx z3) {
      return std::exp(2.0 * kPi * kI * ((a + h) * z1 + (b + h) * z2 + (c + h) * z3));
    });
  return out;
}

class RYangBaxter : public ::testing::TestWithParam<Parity> {};

TEST_P(RYangBaxter, HoldsPointwiseOnRandomTriples) {
  std::mt19937_64 rng(400 + int(GetParam()));
  for (int trial = 0; trial < 3; ++trial) {
    const cplx xi1 = test::draw_spectral(rng, kTau);
    const cplx xi2 = test::draw_spectral(rng, kTau);
    const cplx xi3 = test::draw_spectral(rng, kTau);
    std::vector<Point3> pts;
    for (int s = 0; s < 4; ++s) {
      const auto z = test::draw_generic(rng, kTau, 3);
      pts.push_back({z[0], z[1], z[2]});
    }
    for (const auto& f : test_functions(GetParam())) EXPECT_LT(ybe_pointwise_residual(kParams, xi1, xi2, xi3, f, pts), 1e-9);
  }
}

TEST_P(RYangBaxter, HoldsWithCoincidentSpectralParameters) {
  const cplx xi{0.17, 0.06};
  const std::vector<Point3> pts{{cplx{0.1, 0.02}, cplx{-0.2, 0.1}, cplx{0.33, -0.05}}};
  for (const auto& f : test_functions(GetParam())) {
    EXPECT_LT(ybe_pointwise_residual(kParams, xi, xi, {-0.3, 0.1}, f, pts), 1e-9);
    EXPECT_LT(ybe_pointwise_residual(kParams, xi, xi, xi, f, pts), 1e-9);
  }
}

INSTANTIATE_TEST_SUITE_P(Parities, RYangBaxter, ::testing::Values(Parity::plus, Parity::minus));

class RSubspace : public ::testing::TestWithParam<std::tuple<int, Parity>> {};

TEST_P(RSubspace, MapsIntoSwappedProduct) {
  const auto [n, parity] = GetParam();
  std::mt19937_64 rng(500 + n);
  const cplx xi1 = test::draw_spectral(rng, kTau);
  const cplx xi2 = test::draw_spectral(rng, kTau);
  EXPECT_LT(subspace_mapping_residual(kParams, n, xi1, xi2, parity), 1e-8);
  EXPECT_GT(subspace_mapping_residual(kParams, n, xi1, xi2, parity, MappingTarget::unswapped), 1e-2);
}

INSTANTIATE_TEST_SUITE_P(Sizes, RSubspace,
                         ::testing::Combine(::testing::Values(1, 2, 3, 4), ::testing::Values(Parity::plus, Parity::minus)));

TEST(ROperator, SubspaceRejectsBadSize) {
  EXPECT_THROW(subspace_mapping_residual(kParams, 0, 0.1, 0.2, Parity::plus), DomainError);
}

}  // namespace
}  // namespace ellr
