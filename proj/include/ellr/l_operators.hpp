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

// Factorized L-operators.
//
// Function side: the rank-one operator Ľ(ξ)_λ^κ f = φ(ξ)_λ^κ · φ̄_λ^κ f and the
// RLL relation
//
//   Σ_κ Ř(ξ12) Ľ(ξ1)_λ^κ ⊗ Ľ(ξ2)_κ^ν = Σ_κ Ľ(ξ2)_λ^κ ⊗ Ľ(ξ1)_κ^ν Ř(ξ12).
//
// Matrix side (Belavin): with s = ξ + |κ| − kμ and κ = λ − με_i,
//
//   L̃(ξ)_λ^κ = T_k(s)⁻¹ Ľ(ξ − kμ)_κ^λ T_k(s) restricted to Ṽ_k,
//
// its transpose L̃*(ξ)_λ^κ, and the outgoing vectors
//
//   φ(ξ)_λ^κ = Σ_j θ[½ − j/k; k/2](ξ + |λ| − kλ_i, kτ) e^j.
//
// Both matrix-side steps go downward (κ = λ − με_i).

#ifndef ELLR_L_OPERATORS_HPP_
#define ELLR_L_OPERATORS_HPP_

#include <map>

#include "ellr/belavin.hpp"
#include "ellr/intertwiners.hpp"

namespace ellr {

/// (Ľ(ξ)_λ^κ f)(z) for an outgoing matrix built at (ξ, λ); 0 off admissible κ.
inline cplx l_apply(const IntertwinerMatrix& out, const WeightSequence& kappa, const Univariate& f, cplx z,
                    cplx tau) {
  const auto i = kappa.unit_step_from(out.lambda);
  if (!i) return 0.0;
  return outgoing_eval(out, *i, z, tau) * f(out.lambda.value(*i));
}

namespace detail {

// Both sides of the pointwise RLL relation for one (λ, ν) pair at (z1, z2).
struct RllSides {
  cplx lhs;
  cplx rhs;
};

class RllEvaluator {
 public:
  RllEvaluator(cplx xi1, cplx xi2, Parity parity, const ModularParams& params, const Bivariate& f)
      : xi1_(xi1), xi2_(xi2), parity_(parity), params_(params), f_(f),
        kernel_(params, xi1 - xi2) {}

  RllSides operator()(const WeightSequence& lambda, const WeightSequence& nu, cplx z1, cplx z2) const {
    const cplx tau = params_.tau;
    const auto o1 = outgoing_coeffs(xi1_, lambda, parity_, params_);
    const auto o2 = outgoing_coeffs(xi2_, lambda, parity_, params_);
    RllSides s{0.0, 0.0};
    for (int c = lambda.k1(); c <= lambda.k2(); ++c) {
      const WeightSequence kappa = lambda.stepped(c);
      const auto jp = nu.unit_step_from(kappa);
      if (!jp) continue;
      const cplx a = lambda.value(c);
      const cplx b = kappa.value(*jp);

      // Ř(ξ12)(Ľ(ξ1)_λ^κ ⊗ Ľ(ξ2)_κ^ν) f = f(a, b) · Ř(ξ12)(φ(ξ1)_λ^κ ⊗ φ(ξ2)_κ^ν)
      const auto o2k = outgoing_coeffs(xi2_, kappa, parity_, params_);
      s.lhs += f_(a, b) * kernel_(outgoing_product(o1, c, o2k, *jp, tau), z1, z2);

      // (Ľ(ξ2)_λ^κ ⊗ Ľ(ξ1)_κ^ν) Ř(ξ12) f = (Ř(ξ12)f)(a, b) · φ(ξ2)_λ^κ(z1) φ(ξ1)_κ^ν(z2)
      const auto o1k = outgoing_coeffs(xi1_, kappa, parity_, params_);
      s.rhs += kernel_(f_, a, b) * outgoing_eval(o2, c, z1, tau) * outgoing_eval(o1k, *jp, z2, tau);
    }
    return s;
  }

 private:
  cplx xi1_, xi2_;
  Parity parity_;
  ModularParams params_;
  Bivariate f_;
  TwoTermKernel kernel_;
};

}  // namespace detail

/// Max relative residual of the RLL relation for ν = λ + μ(ε_i + ε_j) over
/// `points` (pairs (z1, z2) stored in the first two slots).
inline double rll_pointwise_residual(cplx xi1, cplx xi2, const WeightSequence& lambda, int i, int j,
                                     const Bivariate& f, const std::vector<std::array<cplx, 2>>& points,
                                     Parity parity, const ModularParams& params) {
  const detail::RllEvaluator eval(xi1, xi2, parity, params, f);
  const WeightSequence nu = lambda.stepped(i).stepped(j);
  double worst = 0.0;
  for (const auto& z : points) {
    const auto s = eval(lambda, nu, z[0], z[1]);
    worst = std::max(worst, relative_difference(s.lhs, s.rhs));
  }
  return worst;
}

/// The RLL relation assembled over the face index: both sides applied to
/// f ⊗ δ^ν produce a vector with one component per λ = ν − μ(ε_a + ε_b);
/// the residual is max over components and points of |LHS − RHS| divided by
/// the largest component on either side.
inline double rll_assembled_residual(cplx xi1, cplx xi2, const WeightSequence& nu, const Bivariate& f,
                                     const std::vector<std::array<cplx, 2>>& points, Parity parity,
                                     const ModularParams& params) {
  const detail::RllEvaluator eval(xi1, xi2, parity, params, f);
  double err = 0.0;
  double scale = 0.0;
  for (int a = nu.k1(); a <= nu.k2(); ++a) {
    for (int b = a; b <= nu.k2(); ++b) {
      const WeightSequence lambda = nu.stepped(a, -1).stepped(b, -1);
      for (const auto& z : points) {
        const auto s = eval(lambda, nu, z[0], z[1]);
        err = std::max(err, std::abs(s.lhs - s.rhs));
        scale = std::max({scale, std::abs(s.lhs), std::abs(s.rhs)});
      }
    }
  }
  return scale == 0.0 ? 0.0 : err / scale;
}

/// Coefficients of φ(ξ)_λ^κ over the dual basis e^j; zero unless κ = λ − με_i.
inline Eigen::VectorXcd belavin_outgoing(cplx xi, const WeightSequence& lambda, const WeightSequence& kappa,
                                         const ModularParams& params) {
  const int k = lambda.size();
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(k);
  const auto i = lambda.unit_step_from(kappa);
  if (!i) return c;
  const cplx arg = xi + lambda.total() - double(k) * lambda.value(*i);
  for (int j = 0; j < k; ++j) c(j) = theta_char(basis_characteristics(k, j), arg, double(k) * params.tau);
  return c;
}

/// Relative residual of the matrix-side vertex–IRF correspondence
///   Ř_k(ξ12)* φ(ξ1)_λ^κ ⊗ φ(ξ2)_κ^ν = Σ_κ' φ(ξ2)_λ^κ' ⊗ φ(ξ1)_κ'^ν W̃[κ; λ, ξ12, ν; κ'],
/// W̃[κ; λ, ξ, ν; κ'] = W[κ'; ν, ξ, λ; κ], κ = λ − με_i, ν = κ − με_j.
inline double belavin_vertex_irf_residual(cplx xi1, cplx xi2, const WeightSequence& lambda, int i, int j,
                                          const ModularParams& params,
                                          const Eigen::MatrixXcd* star = nullptr) {
  const int k = lambda.size();
  Eigen::MatrixXcd s_local;
  if (!star) {
    s_local = rk_star_matrix(k, xi1 - xi2, params).entries;
    star = &s_local;
  }
  const WeightSequence kappa = lambda.stepped(i, -1);
  const WeightSequence nu = kappa.stepped(j, -1);
  const auto vec_kron = [](const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    Eigen::VectorXcd out(a.size() * b.size());
    for (Eigen::Index x = 0; x < a.size(); ++x) out.segment(x * b.size(), b.size()) = a(x) * b;
    return out;
  };
  const Eigen::VectorXcd lhs =
      (*star) * vec_kron(belavin_outgoing(xi1, lambda, kappa, params), belavin_outgoing(xi2, kappa, nu, params));

  const IrfWeights w(params);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(k * k);
  for (int c = lambda.k1(); c <= lambda.k2(); ++c) {
    const WeightSequence kp = lambda.stepped(c, -1);
    const cplx weight = w(kp, nu, xi1 - xi2, lambda, kappa);
    if (weight == 0.0) continue;
    rhs += weight * vec_kron(belavin_outgoing(xi2, lambda, kp, params), belavin_outgoing(xi1, kp, nu, params));
  }
  return matrix_relative_residual(lhs, rhs);
}

struct BelavinLMatrix {
  Eigen::MatrixXcd l;     // L̃(ξ)_λ^κ in the basis e_j
  Eigen::MatrixXcd star;  // L̃*(ξ)_λ^κ = transpose, acting on the dual basis
  double residual = 0.0;  // worst column expansion residual
  int rank = 0;           // singular values above 1e-8 · σ_max
};

namespace detail {

inline void require_generic(cplx value, cplx tau, const char* what) {
  if (lattice_distance(value, tau) <= kGenericityTol)
    throw GenericityError(std::string("spectral shift ") + what + " lies on the lattice Z + Z*tau");
}

inline int numerical_rank(const Eigen::MatrixXcd& m) {
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  int r = 0;
  for (Eigen::Index a = 0; a < sv.size(); ++a)
    if (sv(a) > 1e-8 * sv(0)) ++r;
  return sv(0) == 0.0 ? 0 : r;
}

}  // namespace detail

/// L̃(ξ)_λ^κ, built pointwise from the T_k sandwich around Ľ(ξ − kμ)_κ^λ and
/// expanded in the basis of Ṽ_k; zero unless κ = λ − με_i.
inline BelavinLMatrix belavin_l_matrix(cplx xi, const WeightSequence& lambda, const WeightSequence& kappa,
                                       const ModularParams& params, GridOptions grid = {}) {
  const int k = lambda.size();
  BelavinLMatrix out{Eigen::MatrixXcd::Zero(k, k), Eigen::MatrixXcd::Zero(k, k)};
  const auto i = lambda.unit_step_from(kappa);
  if (!i) return out;

  const cplx kmu = double(k) * params.mu;
  const cplx s = xi + kappa.total() - kmu;
  detail::require_generic(xi, params.tau, "xi");
  detail::require_generic(xi - kmu, params.tau, "xi - k*mu");
  detail::require_generic(s, params.tau, "xi + |kappa| - k*mu");

  // Ľ(ξ − kμ)_κ^λ acts on Ṽ_k(s) = T_k(s)Ṽ_k.
  const auto phi = outgoing_coeffs(xi - kmu, kappa, Parity::plus, params, /*tilde=*/true);
  const SpaceSpec base = tilde_space(k);
  const cplx shift = s / double(k);
  for (int b = 0; b < k; ++b) {
    const Univariate tb = [&, b](cplx z) { return basis_eval(base, b, z - shift, params.tau); };  // T_k(s) e_b
    const Univariate g = [&](cplx z) { return l_apply(phi, lambda, tb, z + shift, params.tau); };
    const auto e = expand_in_basis(g, base, params.tau, grid);
    out.l.col(b) = e.coeffs;
    out.residual = std::max(out.residual, e.residual);
  }
  out.star = out.l.transpose();
  out.rank = detail::numerical_rank(out.l);
  return out;
}

/// Closed form of L̃(ξ)_λ^κ: the outer product of column i of the inverse and
/// row i of the Ṽ-basis evaluation matrix, both taken at (ξ − kμ, κ).
inline Eigen::MatrixXcd belavin_l_closed_form(cplx xi, const WeightSequence& lambda, const WeightSequence& kappa,
                                              const ModularParams& params) {
  const int k = lambda.size();
  const auto i = lambda.unit_step_from(kappa);
  if (!i) return Eigen::MatrixXcd::Zero(k, k);
  const auto m = outgoing_coeffs(xi - double(k) * params.mu, kappa, Parity::plus, params, /*tilde=*/true);
  const int r = *i - lambda.k1();
  return m.phi.col(r) * m.phibar.row(r);
}

/// Relative residual of the per-pair RLL relation on Ṽ_k* ⊗ Ṽ_k*,
///   Σ_κ Ř_k(ξ12)* (L̃*(ξ1)_λ^κ ⊗ L̃*(ξ2)_κ^ν) = Σ_κ (L̃*(ξ2)_λ^κ ⊗ L̃*(ξ1)_κ^ν) Ř_k(ξ12)*,
/// with ν = λ − μ(ε_a + ε_b).
inline double belavin_rll_residual(cplx xi1, cplx xi2, const WeightSequence& lambda, int a, int b,
                                   const ModularParams& params, const Eigen::MatrixXcd* star = nullptr) {
  const int k = lambda.size();
  if (k > 4) throw DomainError("Belavin RLL: window size must be at most 4");
  Eigen::MatrixXcd s_local;
  if (!star) {
    s_local = rk_star_matrix(k, xi1 - xi2, params).entries;
    star = &s_local;
  }
  const WeightSequence nu = lambda.stepped(a, -1).stepped(b, -1);
  Eigen::MatrixXcd lhs = Eigen::MatrixXcd::Zero(k * k, k * k);
  Eigen::MatrixXcd rhs = lhs;
  for (int c = lambda.k1(); c <= lambda.k2(); ++c) {
    const WeightSequence kappa = lambda.stepped(c, -1);
    if (!kappa.unit_step_from(nu)) continue;  // κ → ν must be one downward step
    lhs += (*star) * kron(belavin_l_matrix(xi1, lambda, kappa, params).star,
                          belavin_l_matrix(xi2, kappa, nu, params).star);
    rhs += kron(belavin_l_matrix(xi2, lambda, kappa, params).star, belavin_l_matrix(xi1, kappa, nu, params).star) *
           (*star);
  }
  return matrix_relative_residual(lhs, rhs);
}

/// The same relation assembled over the face index. L̃*(ξ) becomes the block
/// operator on ℂ^k ⊗ ℂ^Q with block (λ, κ) = L̃*(ξ)_λ^κ, where Q holds the
/// origin of `base` and every sequence one or two steps above it. Both sides
///   Ř_k*₁₂ L̃*(ξ1)₁₃ L̃*(ξ2)₂₃  and  L̃*(ξ2)₁₃ L̃*(ξ1)₂₃ Ř_k*₁₂
/// are formed as full matrices and compared on the columns δ^base, the only
/// columns whose intermediate sums stay inside Q.
inline double belavin_rll_assembled_residual(cplx xi1, cplx xi2, const WeightSequence& base,
                                             const ModularParams& params) {
  const int k = base.size();
  if (k > 4) throw DomainError("Belavin RLL: window size must be at most 4");
  std::vector<WeightSequence> q{base};
  for (int a = base.k1(); a <= base.k2(); ++a) q.push_back(base.stepped(a));
  for (int a = base.k1(); a <= base.k2(); ++a)
    for (int b = a; b <= base.k2(); ++b) q.push_back(base.stepped(a).stepped(b));
  const int nq = static_cast<int>(q.size());
  const int dim = k * k * nq;
  const auto idx = [&](int x, int y, int w) { return (x * k + y) * nq + w; };

  const auto l_block = [&](cplx xi) {
    Eigen::MatrixXcd l13 = Eigen::MatrixXcd::Zero(dim, dim);
    Eigen::MatrixXcd l23 = Eigen::MatrixXcd::Zero(dim, dim);
    for (int r = 0; r < nq; ++r) {
      for (int c = 0; c < nq; ++c) {
        if (!q[r].unit_step_from(q[c])) continue;  // block (λ, κ) needs κ = λ − με_i
        const Eigen::MatrixXcd m = belavin_l_matrix(xi, q[r], q[c], params).star;
        for (int x = 0; x < k; ++x)
          for (int y = 0; y < k; ++y)
            for (int t = 0; t < k; ++t) {
              l13(idx(x, t, r), idx(y, t, c)) = m(x, y);
              l23(idx(t, x, r), idx(t, y, c)) = m(x, y);
            }
      }
    }
    return std::pair{l13, l23};
  };

  const Eigen::MatrixXcd s = rk_star_matrix(k, xi1 - xi2, params).entries;
  const Eigen::MatrixXcd s12 = kron(s, Eigen::MatrixXcd::Identity(nq, nq));
  const auto [a13, a23] = l_block(xi1);
  const auto [b13, b23] = l_block(xi2);
  const Eigen::MatrixXcd lhs = s12 * a13 * b23;
  const Eigen::MatrixXcd rhs = b13 * a23 * s12;

  Eigen::MatrixXcd lc(dim, k * k);
  Eigen::MatrixXcd rc(dim, k * k);
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < k; ++y) {
      lc.col(x * k + y) = lhs.col(idx(x, y, 0));
      rc.col(x * k + y) = rhs.col(idx(x, y, 0));
    }
  return matrix_relative_residual(lc, rc);
}

}  // namespace ellr

#endif  // ELLR_L_OPERATORS_HPP_
