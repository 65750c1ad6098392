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

// Pointwise action of the elliptic R-operator
//
//   (Ř(ξ)f)(z1, z2) = θ₁(ξ)θ₁(z21 − μ)θ₁'(0) / (θ₁(−μ)θ₁(z21)) · f(z2, z1)
//                   + θ₁(z21 − ξ)θ₁'(0) / θ₁(z21) · f(z1, z2),      z21 = z2 − z1.
//
// Both coefficients have simple poles where z21 ∈ ℤ + ℤτ; for f in the
// relevant function spaces the poles cancel. Near those points the two-term
// formula loses digits to cancellation, so evaluation switches:
//
//   gap ≥ 1e-4          two-term formula
//   1e-12 < gap < 1e-4  mean of the two-term formula over a ring of radius
//                       4e-4 around z2 (Cauchy's formula for the holomorphic
//                       continuation; the ring stays ≥ 3e-4 from the pole)
//   gap ≤ 1e-12         Laurent limit at the pole, which needs ∂f

#ifndef ELLR_R_OPERATOR_HPP_
#define ELLR_R_OPERATOR_HPP_

#include <array>
#include <vector>

#include "ellr/function_spaces.hpp"

namespace ellr {

inline constexpr double kDiagEps = 1e-4;
inline constexpr double kLimitEps = 1e-12;
inline constexpr double kCentralDiffStep = 1e-6;

using Bivariate2 = std::function<cplx(cplx, cplx)>;

/// A function of two variables, optionally with its first partial derivatives.
struct Bivariate {
  Bivariate2 value;
  std::function<std::array<cplx, 2>(cplx, cplx)> partials;

  bool has_partials() const { return static_cast<bool>(partials); }
  cplx operator()(cplx z1, cplx z2) const { return value(z1, z2); }
};

/// Attaches central-difference partials (step h) to a plain function.
inline Bivariate with_central_differences(Bivariate2 f, double h = kCentralDiffStep) {
  Bivariate b;
  b.value = f;
  b.partials = [f = std::move(f), h](cplx z1, cplx z2) {
    return std::array<cplx, 2>{(f(z1 + h, z2) - f(z1 - h, z2)) / (2.0 * h),
                               (f(z1, z2 + h) - f(z1, z2 - h)) / (2.0 * h)};
  };
  return b;
}

/// Product g(z1)h(z2) of univariates, with exact partials when both
/// derivatives are supplied.
inline Bivariate product_function(Univariate g, Univariate h, Univariate dg = {}, Univariate dh = {}) {
  Bivariate b;
  b.value = [g, h](cplx z1, cplx z2) { return g(z1) * h(z2); };
  if (dg && dh)
    b.partials = [g, h, dg, dh](cplx z1, cplx z2) {
      return std::array<cplx, 2>{dg(z1) * h(z2), g(z1) * dh(z2)};
    };
  return b;
}

/// The kernel shared by Ř and its shifted variants:
///
///   F(z1, z2) = A(w) f(z2 + p, z1 − p) + B(w) f(z1 − q, z2 + q),   w = z2 − z1 + s,
///   A(w) = θ₁(ξ)θ₁(w − μ)θ₁'(0) / (θ₁(−μ)θ₁(w)),   B(w) = θ₁(w − ξ)θ₁'(0) / θ₁(w).
///
/// Ř(ξ) is s = p = q = 0.
class TwoTermKernel {
 public:
  TwoTermKernel(const ModularParams& params, cplx xi, cplx s = 0.0, cplx p = 0.0, cplx q = 0.0)
      : tau_(params.tau), mu_(params.mu), xi_(xi), s_(s), p_(p), q_(q) {
    params.validate();
    d0_ = theta1_deriv0(tau_);
    th_xi_ = theta1(xi_, tau_);
    th_mmu_ = theta1(-mu_, tau_);
  }

  cplx xi() const { return xi_; }

  /// Distance of w = z2 − z1 + s from the pole set ℤ + ℤτ.
  double gap(cplx z1, cplx z2) const { return lattice_distance(z2 - z1 + s_, tau_); }

  cplx operator()(const Bivariate& f, cplx z1, cplx z2) const {
    const cplx w = z2 - z1 + s_;
    const cplx w0 = nearest_lattice_point(w, tau_);
    const double g = std::abs(w - w0);
    if (g >= kDiagEps) return two_term(f.value, z1, z2);
    if (g <= kLimitEps) return limit(f, z1, z2, w - w0, w0);
    return ring_mean(f.value, z1, z2);
  }

  cplx two_term(const Bivariate2& f, cplx z1, cplx z2) const {
    const cplx w = z2 - z1 + s_;
    const cplx thw = theta1(w, tau_);
    const cplx a = th_xi_ * theta1(w - mu_, tau_) * d0_ / (th_mmu_ * thw);
    const cplx b = theta1(w - xi_, tau_) * d0_ / thw;
    return a * f(z2 + p_, z1 - p_) + b * f(z1 - q_, z2 + q_);
  }

 private:
  cplx ring_mean(const Bivariate2& f, cplx z1, cplx z2) const {
    constexpr int kPoints = 8;
    const double r = 4.0 * kDiagEps;
    cplx sum = 0.0;
    for (int k = 0; k < kPoints; ++k) {
      const cplx e = std::polar(r, 2.0 * kPi * k / kPoints);
      sum += two_term(f, z1, z2 + e);
    }
    return sum / double(kPoints);
  }

  // Constant term of the Laurent expansion in w about the pole w0. For
  // g(w)/θ₁(w) with a simple zero of θ₁ at w0:
  //   c₋₁ = g(w0)/θ₁'(w0),   c₀ = g'(w0)/θ₁'(w0) − g(w0)θ₁''(w0) / (2θ₁'(w0)²).
  cplx limit(const Bivariate& f, cplx z1, cplx z2, cplx offset, cplx w0) const {
    if (!f.has_partials())
      throw DerivativeRequired("R-operator evaluated on its pole set; supply partial derivatives");
    const cplx zs = z2 - offset;  // the point with w exactly w0
    const cplx t1 = theta1_deriv(w0, tau_, 1);
    const cplx t2 = theta1_deriv(w0, tau_, 2);

    const cplx ka = th_xi_ * d0_ / th_mmu_;
    const cplx ga = ka * theta1(w0 - mu_, tau_);
    const cplx dga = ka * theta1_deriv(w0 - mu_, tau_, 1);
    const cplx gb = d0_ * theta1(w0 - xi_, tau_);
    const cplx dgb = d0_ * theta1_deriv(w0 - xi_, tau_, 1);

    const auto c0 = [&](cplx gv, cplx dgv) { return dgv / t1 - gv * t2 / (2.0 * t1 * t1); };

    const cplx fa = f.value(zs + p_, z1 - p_);
    const cplx fb = f.value(z1 - q_, zs + q_);
    const auto da = f.partials(zs + p_, z1 - p_);
    const auto db = f.partials(z1 - q_, zs + q_);
    return ga / t1 * da[0] + gb / t1 * db[1] + c0(ga, dga) * fa + c0(gb, dgb) * fb;
  }

  cplx tau_, mu_, xi_, s_, p_, q_;
  cplx d0_, th_xi_, th_mmu_;
};

struct RContext {
  ModularParams params;
  cplx xi{};
};

/// (Ř(ξ)f)(z1, z2).
inline cplx r_apply(const RContext& ctx, const Bivariate& f, cplx z1, cplx z2) {
  return TwoTermKernel(ctx.params, ctx.xi)(f, z1, z2);
}

inline cplx r_apply(const RContext& ctx, const Bivariate2& f, cplx z1, cplx z2) {
  return r_apply(ctx, Bivariate{f, {}}, z1, z2);
}

using Point3 = std::array<cplx, 3>;

namespace detail {

using Fn3 = std::function<cplx(cplx, cplx, cplx)>;

// Ř acting on slots (1,2) or (2,3) of a function of three variables.
inline Fn3 r12(const ModularParams& p, cplx xi, Fn3 g) {
  return [k = TwoTermKernel(p, xi), g = std::move(g)](cplx z1, cplx z2, cplx z3) {
    return k(with_central_differences([&](cplx a, cplx b) { return g(a, b, z3); }), z1, z2);
  };
}

inline Fn3 r23(const ModularParams& p, cplx xi, Fn3 g) {
  return [k = TwoTermKernel(p, xi), g = std::move(g)](cplx z1, cplx z2, cplx z3) {
    return k(with_central_differences([&](cplx a, cplx b) { return g(z1, a, b); }), z2, z3);
  };
}

}  // namespace detail

/// Max over `points` of |LHS − RHS| / max(|LHS|, |RHS|, 1) for
///   (1⊗Ř(ξ12))(Ř(ξ13)⊗1)(1⊗Ř(ξ23)) f = (Ř(ξ23)⊗1)(1⊗Ř(ξ13))(Ř(ξ12)⊗1) f.
inline double ybe_pointwise_residual(const ModularParams& params, cplx xi1, cplx xi2, cplx xi3, const Trivariate& f,
                                     const std::vector<Point3>& points) {
  using detail::r12;
  using detail::r23;
  const auto lhs = r23(params, xi1 - xi2, r12(params, xi1 - xi3, r23(params, xi2 - xi3, f)));
  const auto rhs = r12(params, xi2 - xi3, r23(params, xi1 - xi3, r12(params, xi1 - xi2, f)));
  double worst = 0.0;
  for (const auto& z : points) {
    const cplx l = lhs(z[0], z[1], z[2]);
    const cplx r = rhs(z[0], z[1], z[2]);
    worst = std::max(worst, std::abs(l - r) / std::max({std::abs(l), std::abs(r), 1.0}));
  }
  return worst;
}

/// Which product space Ř(ξ12)(V(ξ1) ⊗ V(ξ2+μ)) is expanded in.
enum class MappingTarget {
  swapped,    // V(ξ2) ⊗ V(ξ1+μ), where the image lives
  unswapped,  // V(ξ1) ⊗ V(ξ2+μ), a negative control
};

/// Max held-out reconstruction residual of Ř(ξ12)(e_a ⊗ e_b) in the target
/// product basis, over all basis pairs (a, b) of V_n(ξ1) ⊗ V_n(ξ2+μ).
inline double subspace_mapping_residual(const ModularParams& params, int n, cplx xi1, cplx xi2, Parity parity,
                                        MappingTarget target = MappingTarget::swapped) {
  if (n < 1 || n > 8) throw DomainError("subspace mapping: n must lie in [1, 8]");
  params.validate();
  const cplx tau = params.tau;
  const cplx mu = params.mu;
  const SpaceSpec src1{n, xi1, parity};
  const SpaceSpec src2{n, xi2 + mu, parity};
  const SpaceSpec dst1 = target == MappingTarget::swapped ? SpaceSpec{n, xi2, parity} : src1;
  const SpaceSpec dst2 = target == MappingTarget::swapped ? SpaceSpec{n, xi1 + mu, parity} : src2;

  const TwoTermKernel kernel(params, xi1 - xi2);
  double worst = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const Bivariate f = product_function([&, a](cplx z) { return basis_eval(src1, a, z, tau); },
                                           [&, b](cplx z) { return basis_eval(src2, b, z, tau); },
                                           [&, a](cplx z) { return basis_deriv(src1, a, z, tau); },
                                           [&, b](cplx z) { return basis_deriv(src2, b, z, tau); });
      const auto g = [&](cplx z1, cplx z2) { return kernel(f, z1, z2); };
      worst = std::max(worst, expand_in_product_basis(g, dst1, dst2, tau).residual);
    }
  }
  return worst;
}

}  // namespace ellr

#endif  // ELLR_R_OPERATOR_HPP_
