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

// Intertwining vectors between the vertex picture (functions of z) and the
// face picture (weight sequences).
//
// Incoming:  φ̄_λ^κ f = f(λ_i) if κ = λ + με_i, else 0.
// Outgoing:  φ(ξ)_λ^κ(z) = Σ_j φ(ξ)_{λ j}^κ e_j(z), where e_j is the basis of
//            V_k(ξ + |λ|) and the coefficients are the inverse of the matrix
//            φ̄[i][j] = e_j(λ_i), so that the two families are dual.
//
// Window indices i ∈ [k1, k2] label matrix rows i − k1; basis labels are
// 0, …, k−1.

#ifndef ELLR_INTERTWINERS_HPP_
#define ELLR_INTERTWINERS_HPP_

#include "ellr/irf.hpp"
#include "ellr/r_operator.hpp"

namespace ellr {

inline constexpr double kMaxIntertwinerCondition = 1e8;

/// φ̄_λ^κ f.
inline cplx incoming_apply(const WeightSequence& lambda, const WeightSequence& kappa, const Univariate& f) {
  const auto i = kappa.unit_step_from(lambda);
  return i ? f(lambda.value(*i)) : cplx{};
}

/// φ̄_λ^{λ+με_i} f.
inline cplx incoming_apply(const WeightSequence& lambda, int i, const Univariate& f) { return f(lambda.value(i)); }

struct IntertwinerMatrix {
  int k = 1;
  cplx xi{};
  WeightSequence lambda;
  SpaceSpec space;          // V_k(ξ + |λ|) (or its minus/tilde variant)
  Eigen::MatrixXcd phibar;  // rows: steps i − k1, columns: basis j
  Eigen::MatrixXcd phi;     // phi(j, i − k1) = φ(ξ)_{λ j}^{λ+με_i}; empty until solved
  double cond = 0.0;
  double duality_left = 0.0;   // max|φ̄φ − I|
  double duality_right = 0.0;  // max|φφ̄ − I|

  Parity parity() const { return space.parity; }
};

/// The k×k matrix of basis evaluations e_j(λ_i), e_j spanning
/// V_k(ξ + |λ|) for the requested parity (Ṽ_k(ξ + |λ|) when `tilde`).
inline IntertwinerMatrix phibar_matrix(cplx xi, const WeightSequence& lambda, Parity parity,
                                       const ModularParams& params, bool tilde = false) {
  params.validate();
  const int k = lambda.size();
  IntertwinerMatrix m{k, xi, lambda, SpaceSpec{k, xi + lambda.total(), parity, tilde}, Eigen::MatrixXcd(k, k), {}};
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) m.phibar(i, j) = basis_eval(m.space, j, lambda.value(lambda.k1() + i), params.tau);
  return m;
}

/// φ̄ together with its two-sided inverse φ.
inline IntertwinerMatrix outgoing_coeffs(cplx xi, const WeightSequence& lambda, Parity parity,
                                         const ModularParams& params, bool tilde = false) {
  if (lattice_distance(xi, params.tau) <= kGenericityTol)
    throw GenericityError("outgoing vectors need xi off the lattice Z + Z*tau");
  IntertwinerMatrix m = phibar_matrix(xi, lambda, parity, params, tilde);
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m.phibar);
  const auto& sv = svd.singularValues();
  m.cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
  if (!(m.cond <= kMaxIntertwinerCondition))
    throw SingularError("intertwiner matrix is singular to working precision (cond " + std::to_string(m.cond) + ")");
  m.phi = m.phibar.partialPivLu().inverse();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(m.k, m.k);
  m.duality_left = (m.phibar * m.phi - id).cwiseAbs().maxCoeff();
  m.duality_right = (m.phi * m.phibar - id).cwiseAbs().maxCoeff();
  return m;
}

/// φ(ξ)_λ^{λ+με_i}(z).
inline cplx outgoing_eval(const IntertwinerMatrix& m, int i, cplx z, cplx tau) {
  const int col = i - m.lambda.k1();
  if (col < 0 || col >= m.k) throw DomainError("outgoing vector: step index outside the window");
  cplx s = 0.0;
  for (int j = 0; j < m.k; ++j) s += m.phi(j, col) * basis_eval(m.space, j, z, tau);
  return s;
}

inline cplx outgoing_deriv(const IntertwinerMatrix& m, int i, cplx z, cplx tau) {
  const int col = i - m.lambda.k1();
  if (col < 0 || col >= m.k) throw DomainError("outgoing vector: step index outside the window");
  cplx s = 0.0;
  for (int j = 0; j < m.k; ++j) s += m.phi(j, col) * basis_deriv(m.space, j, z, tau);
  return s;
}

/// φ(ξ)_λ^κ(z); exactly 0 unless κ = λ + με_i.
inline cplx outgoing_eval(const IntertwinerMatrix& m, const WeightSequence& kappa, cplx z, cplx tau) {
  const auto i = kappa.unit_step_from(m.lambda);
  return i ? outgoing_eval(m, *i, z, tau) : cplx{};
}

/// Product φ(ξ1)_λ^{λ+με_i}(z1) · φ(ξ2)_κ^{κ+με_j}(z2) with exact partials.
inline Bivariate outgoing_product(const IntertwinerMatrix& a, int i, const IntertwinerMatrix& b, int j, cplx tau) {
  return product_function([&a, i, tau](cplx z) { return outgoing_eval(a, i, z, tau); },
                          [&b, j, tau](cplx z) { return outgoing_eval(b, j, z, tau); },
                          [&a, i, tau](cplx z) { return outgoing_deriv(a, i, z, tau); },
                          [&b, j, tau](cplx z) { return outgoing_deriv(b, j, z, tau); });
}

enum class DeterminantSign {
  corrected,     // (−√−1 η)^{−(k−1)(k−2)/2}, which holds for every k
  as_displayed,  // (√−1 η)^{−(k−1)(k−2)/2}, wrong for k ≡ 0, 3 mod 4
};

/// Relative residual between det(θ[½ − j/k; k/2](ξ + |λ| − kλ_i, kτ)) and
///   (−1)^{k−1} (c·η(τ))^{−(k−1)(k−2)/2} θ₁(ξ) Π_{i<j} θ₁(λ_i − λ_j),
/// c = −√−1 (corrected) or √−1 (as displayed).
inline double weyl_kac_det_residual(cplx xi, const WeightSequence& lambda, const ModularParams& params,
                                    DeterminantSign sign = DeterminantSign::corrected) {
  const int k = lambda.size();
  const auto m = phibar_matrix(xi, lambda, Parity::plus, params, /*tilde=*/true);
  const cplx det = m.phibar.partialPivLu().determinant();

  const cplx c = sign == DeterminantSign::corrected ? -kI : kI;
  const cplx base = 1.0 / (c * dedekind_eta(params.tau));
  cplx rhs = (k % 2 == 1) ? 1.0 : -1.0;
  for (int e = 0; e < (k - 1) * (k - 2) / 2; ++e) rhs *= base;
  rhs *= theta1(xi, params.tau);
  for (int i = lambda.k1(); i <= lambda.k2(); ++i)
    for (int j = i + 1; j <= lambda.k2(); ++j) rhs *= theta1(lambda.value(i) - lambda.value(j), params.tau);
  return relative_difference(det, rhs);
}

/// Relative residual of the vertex–IRF correspondence
///   (φ̄_λ^κ ⊗ φ̄_κ^ν)(Ř(ξ)f) = Σ_κ' W[κ'; λ, ξ, ν; κ] (φ̄_λ^κ' ⊗ φ̄_κ'^ν) f.
/// Returns 0 when both sides vanish (non-admissible κ or ν).
inline double vertex_irf_residual(const WeightSequence& lambda, const WeightSequence& kappa,
                                  const WeightSequence& nu, cplx xi, const Bivariate& f, const ModularParams& params) {
  const IrfWeights w(params);
  const auto i = kappa.unit_step_from(lambda);
  const auto j = nu.unit_step_from(kappa);
  cplx lhs = 0.0;
  if (i && j) {
    const cplx z1 = lambda.value(*i);
    const cplx z2 = kappa.value(*j);
    if (lattice_distance(z2 - z1, params.tau) < kDiagEps)
      throw GenericityError("vertex-IRF evaluation point lies on the diagonal set");
    lhs = r_apply(RContext{params, xi}, f, z1, z2);
  }
  cplx rhs = 0.0;
  for (int c = lambda.k1(); c <= lambda.k2(); ++c) {
    const WeightSequence kp = lambda.stepped(c);
    const auto jp = nu.unit_step_from(kp);
    if (!jp) continue;
    const cplx weight = w(kp, lambda, xi, nu, kappa);
    if (weight != 0.0) rhs += weight * f(lambda.value(c), kp.value(*jp));
  }
  return relative_difference(lhs, rhs);
}

/// κ = λ + με_i, ν = κ + με_j.
inline double vertex_irf_residual(const WeightSequence& lambda, int i, int j, cplx xi, const Bivariate& f,
                                  const ModularParams& params) {
  const WeightSequence kappa = lambda.stepped(i);
  return vertex_irf_residual(lambda, kappa, kappa.stepped(j), xi, f, params);
}

/// Relative residual of the exchange relation
///   Ř(ξ12)(φ(ξ1)_λ^κ ⊗ φ(ξ2)_κ^ν)(z1, z2) = Σ_κ' φ(ξ2)_λ^κ'(z1) φ(ξ1)_κ'^ν(z2) W[κ; λ, ξ12, ν; κ'],
/// κ = λ + με_i, ν = κ + με_j.
inline double exchange_residual(cplx xi1, cplx xi2, const WeightSequence& lambda, int i, int j, cplx z1, cplx z2,
                                Parity parity, const ModularParams& params) {
  const cplx tau = params.tau;
  const WeightSequence kappa = lambda.stepped(i);
  const WeightSequence nu = kappa.stepped(j);
  const auto o1 = outgoing_coeffs(xi1, lambda, parity, params);
  const auto o2k = outgoing_coeffs(xi2, kappa, parity, params);
  const cplx lhs = r_apply(RContext{params, xi1 - xi2}, outgoing_product(o1, i, o2k, j, tau), z1, z2);

  const IrfWeights w(params);
  const auto o2 = outgoing_coeffs(xi2, lambda, parity, params);
  cplx rhs = 0.0;
  for (int c = lambda.k1(); c <= lambda.k2(); ++c) {
    const WeightSequence kp = lambda.stepped(c);
    const auto jp = nu.unit_step_from(kp);
    if (!jp) continue;
    const cplx weight = w(kappa, lambda, xi1 - xi2, nu, kp);
    if (weight == 0.0) continue;
    const auto o1k = outgoing_coeffs(xi1, kp, parity, params);
    rhs += outgoing_eval(o2, c, z1, tau) * outgoing_eval(o1k, *jp, z2, tau) * weight;
  }
  return relative_difference(lhs, rhs);
}

}  // namespace ellr

#endif  // ELLR_INTERTWINERS_HPP_
