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

// The k²×k² matrix of the modified operator Ř_k(ξ) on Ṽ_k ⊗ Ṽ_k, where
// Ṽ_k = Ṽ_k(0) has basis e_j(z) = θ[½ − j/k; k/2](−kz, kτ).
//
// Ř_k(ξ1 − ξ2) is Ř(ξ1 − ξ2) conjugated by the translations T_k:
//
//   Ř_k(ξ12) = (T_k(ξ2)⁻¹ ⊗ T_k(ξ1+μ)⁻¹) Ř(ξ12) (T_k(ξ1) ⊗ T_k(ξ2+μ)),
//
// which reduces to the shifted two-term kernel
//
//   A(w) f(z2 + μ/k, z1 − μ/k) + B(w) f(z1 − ξ/k, z2 + ξ/k),   w = z2 − z1 + (ξ+μ)/k.
//
// Matrix layout: row/column (i, j) ↦ i·k + j, column (a, b) holding the
// coefficients of Ř_k(e_a ⊗ e_b).

#ifndef ELLR_BELAVIN_HPP_
#define ELLR_BELAVIN_HPP_

#include <utility>

#include "ellr/r_operator.hpp"

namespace ellr {

inline constexpr double kMembershipTol = 1e-6;

struct OperatorMatrix {
  int k = 1;
  Eigen::MatrixXcd entries;       // k×k or k²×k²
  double max_residual = 0.0;      // worst column expansion residual, 0 for exact matrices
  double max_cond = 1.0;
};

/// The tilde basis e_j of Ṽ_k = Ṽ_k(0).
inline SpaceSpec tilde_space(int k, cplx xi = 0.0) { return {k, xi, Parity::plus, true}; }

/// Kronecker product a ⊗ b.
inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// max|a − b| / max(max|a|, max|b|).
inline double matrix_relative_residual(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  const double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  return scale == 0.0 ? 0.0 : (a - b).cwiseAbs().maxCoeff() / scale;
}

inline TwoTermKernel rk_kernel(int k, cplx xi, const ModularParams& params) {
  if (k < 1) throw DomainError("k must be at least 1");
  const double kd = k;
  return TwoTermKernel(params, xi, (xi + params.mu) / kd, params.mu / kd, xi / kd);
}

/// (Ř_k(ξ)f)(z1, z2).
inline cplx rk_apply(int k, cplx xi, const ModularParams& params, const Bivariate& f, cplx z1, cplx z2) {
  return rk_kernel(k, xi, params)(f, z1, z2);
}

/// (Ř_k(ξ1 − ξ2)f)(z1, z2) evaluated literally as the T_k sandwich around Ř.
inline cplx rk_apply_conjugated(int k, cplx xi1, cplx xi2, const ModularParams& params, const Bivariate& f, cplx z1,
                                cplx z2) {
  if (k < 1) throw DomainError("k must be at least 1");
  const double kd = k;
  const cplx s1 = xi1 / kd;
  const cplx s2 = (xi2 + params.mu) / kd;
  Bivariate shifted;
  shifted.value = [&](cplx u1, cplx u2) { return f.value(u1 - s1, u2 - s2); };
  if (f.has_partials()) shifted.partials = [&](cplx u1, cplx u2) { return f.partials(u1 - s1, u2 - s2); };
  return r_apply(RContext{params, xi1 - xi2}, shifted, z1 + xi2 / kd, z2 + (xi1 + params.mu) / kd);
}

namespace detail {

inline Bivariate tilde_product(int k, int a, int b, cplx tau) {
  const SpaceSpec sp = tilde_space(k);
  return product_function([=](cplx z) { return basis_eval(sp, a, z, tau); },
                          [=](cplx z) { return basis_eval(sp, b, z, tau); },
                          [=](cplx z) { return basis_deriv(sp, a, z, tau); },
                          [=](cplx z) { return basis_deriv(sp, b, z, tau); });
}

using PairApply = std::function<cplx(const Bivariate&, cplx, cplx)>;

inline OperatorMatrix expand_pair_operator(int k, const ModularParams& params, const PairApply& apply,
                                           GridOptions grid) {
  const SpaceSpec sp = tilde_space(k);
  OperatorMatrix out{k, Eigen::MatrixXcd(k * k, k * k)};
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      const Bivariate f = tilde_product(k, a, b, params.tau);
      const auto g = [&](cplx z1, cplx z2) { return apply(f, z1, z2); };
      const auto e = expand_in_product_basis(g, sp, sp, params.tau, grid);
      if (e.residual > kMembershipTol)
        throw MembershipError("R_k image left the space tilde V_k (x) tilde V_k: residual " + std::to_string(e.residual));
      out.entries.col(a * k + b) = e.coeffs;
      out.max_residual = std::max(out.max_residual, e.residual);
      out.max_cond = std::max(out.max_cond, e.cond);
    }
  }
  return out;
}

}  // namespace detail

/// Matrix of Ř_k(ξ) in the basis e_i ⊗ e_j.
inline OperatorMatrix rk_matrix(int k, cplx xi, const ModularParams& params, GridOptions grid = {}) {
  const TwoTermKernel kernel = rk_kernel(k, xi, params);
  return detail::expand_pair_operator(
      k, params, [&](const Bivariate& f, cplx z1, cplx z2) { return kernel(f, z1, z2); }, grid);
}

/// Same matrix, built from (ξ1, ξ2) through the T_k sandwich.
inline OperatorMatrix rk_matrix_conjugated(int k, cplx xi1, cplx xi2, const ModularParams& params,
                                           GridOptions grid = {}) {
  return detail::expand_pair_operator(
      k, params,
      [&](const Bivariate& f, cplx z1, cplx z2) { return rk_apply_conjugated(k, xi1, xi2, params, f, z1, z2); },
      grid);
}

/// S[(α,β),(γ,δ)] = M[(δ,γ),(β,α)], i.e. S = P Mᵀ P with P the flip.
inline Eigen::MatrixXcd star_transform(const Eigen::MatrixXcd& m, int k) {
  Eigen::MatrixXcd s(k * k, k * k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int g = 0; g < k; ++g)
        for (int d = 0; d < k; ++d) s(a * k + b, g * k + d) = m(d * k + g, b * k + a);
  return s;
}

/// Ř_k(ξ)*.
inline OperatorMatrix rk_star_matrix(int k, cplx xi, const ModularParams& params, GridOptions grid = {}) {
  OperatorMatrix m = rk_matrix(k, xi, params, grid);
  m.entries = star_transform(m.entries, k);
  return m;
}

/// A e_j = e^{2πij/k} e_j and B e_j = e_{j+1 mod k}.
inline std::pair<OperatorMatrix, OperatorMatrix> ab_matrices(int k) {
  if (k < 1) throw DomainError("k must be at least 1");
  OperatorMatrix a{k, Eigen::MatrixXcd::Zero(k, k)};
  OperatorMatrix b{k, Eigen::MatrixXcd::Zero(k, k)};
  for (int j = 0; j < k; ++j) {
    a.entries(j, j) = std::exp(2.0 * kPi * kI * double(j) / double(k));
    b.entries((j + 1) % k, j) = 1.0;
  }
  return {a, b};
}

/// (Af)(z) = −f(z + 1/k).
inline cplx a_apply(int k, const Univariate& f, cplx z) { return -f(z + 1.0 / double(k)); }

/// (Bf)(z) = −e^{2πi(z + τ/2k)} f(z + τ/k).
inline cplx b_apply(int k, cplx tau, const Univariate& f, cplx z) {
  return -std::exp(2.0 * kPi * kI * (z + tau / (2.0 * k))) * f(z + tau / double(k));
}

struct BelavinResiduals {
  double symmetry_a = 0.0;  // Ř_k(ξ) A⊗A = A⊗A Ř_k(ξ)
  double symmetry_b = 0.0;  // Ř_k(ξ) B⊗B = B⊗B Ř_k(ξ)
  double shift_one = 0.0;   // Ř_k(ξ+1) = −(1⊗A) Ř_k(ξ) (A⊗1)⁻¹
  double shift_tau = 0.0;   // Ř_k(ξ+τ) = (1⊗B) Ř_k(ξ) (B⊗1)⁻¹ (−e^{2πi(ξ+τ/2−μ/k)})⁻¹
  double unitality = 0.0;   // Ř_k(0) = θ₁'(0) id

  double max() const { return std::max({symmetry_a, symmetry_b, shift_one, shift_tau, unitality}); }
};

/// Residuals of the characterizing properties of Ř_k. With `drop_shift_sign`
/// the (−1) in the shift-by-1 relation is omitted (a negative control).
inline BelavinResiduals belavin_property_residuals(int k, cplx xi, const ModularParams& params,
                                                   bool drop_shift_sign = false) {
  if (k < 1 || k > 6) throw DomainError("Belavin properties: k must lie in [1, 6]");
  const auto [am, bm] = ab_matrices(k);
  const Eigen::MatrixXcd& a = am.entries;
  const Eigen::MatrixXcd& b = bm.entries;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(k, k);
  const Eigen::MatrixXcd r = rk_matrix(k, xi, params).entries;

  BelavinResiduals out;
  const Eigen::MatrixXcd aa = kron(a, a);
  const Eigen::MatrixXcd bb = kron(b, b);
  out.symmetry_a = matrix_relative_residual(r * aa, aa * r);
  out.symmetry_b = matrix_relative_residual(r * bb, bb * r);

  const double sign = drop_shift_sign ? 1.0 : -1.0;
  const Eigen::MatrixXcd r1 = rk_matrix(k, xi + 1.0, params).entries;
  out.shift_one = matrix_relative_residual(r1, sign * kron(id, a) * r * kron(a, id).inverse());

  const cplx factor = 1.0 / (-std::exp(2.0 * kPi * kI * (xi + params.tau / 2.0 - params.mu / double(k))));
  const Eigen::MatrixXcd rt = rk_matrix(k, xi + params.tau, params).entries;
  out.shift_tau = matrix_relative_residual(rt, factor * kron(id, b) * r * kron(b, id).inverse());

  const Eigen::MatrixXcd r0 = rk_matrix(k, 0.0, params).entries;
  const Eigen::MatrixXcd expect = theta1_deriv0(params.tau) * Eigen::MatrixXcd::Identity(k * k, k * k);
  out.unitality = matrix_relative_residual(r0, expect);
  return out;
}

/// Relative residual of the matrix Yang–Baxter equation
///   (1⊗R12)(R13⊗1)(1⊗R23) = (R23⊗1)(1⊗R13)(R12⊗1),   Rij = M(ξi − ξj),
/// for a given k²×k² matrix family.
inline double ybe_matrix_residual(int k, const std::function<Eigen::MatrixXcd(cplx)>& family, cplx xi1, cplx xi2,
                                  cplx xi3) {
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(k, k);
  const Eigen::MatrixXcd r12 = family(xi1 - xi2);
  const Eigen::MatrixXcd r13 = family(xi1 - xi3);
  const Eigen::MatrixXcd r23 = family(xi2 - xi3);
  const Eigen::MatrixXcd lhs = kron(id, r12) * kron(r13, id) * kron(id, r23);
  const Eigen::MatrixXcd rhs = kron(r23, id) * kron(id, r13) * kron(r12, id);
  return matrix_relative_residual(lhs, rhs);
}

inline double ybe_matrix_residual(int k, cplx xi1, cplx xi2, cplx xi3, const ModularParams& params) {
  if (k < 1 || k > 6) throw DomainError("matrix YBE: k must lie in [1, 6]");
  return ybe_matrix_residual(k, [&](cplx x) { return rk_matrix(k, x, params).entries; }, xi1, xi2, xi3);
}

}  // namespace ellr

#endif  // ELLR_BELAVIN_HPP_
