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

// Finite-dimensional theta-function spaces and their explicit bases.
//
//   V_n(ξ)  : f(z+1) = f(z),        f(z+τ) = (−1)ⁿ e^{2πi(ξ − nz)} f(z)
//   V_n⁻(ξ) : f(z+1) = −f(z),       f(z+τ) = (−1)ⁿ e^{2πi(ξ − nz + τ/2)} f(z)
//   Ṽ_n(ξ)  : f(z+1) = (−1)ⁿ f(z),  f(z+τ) = (−1)ⁿ e^{−2πi(nz − ξ + nτ/2)} f(z)
//
// with bases θ[½ − j/n; n/2](ξ − nz, nτ) · e^{πinz}, · e^{πi(n+1)z}, and
// no exponential factor, respectively (j = 0, …, n−1).
//
// Membership of a sampled function in a space is decided numerically: the
// function is fitted by least squares on an oversampled grid and the fit is
// checked at points that were not used in the solve.

#ifndef ELLR_FUNCTION_SPACES_HPP_
#define ELLR_FUNCTION_SPACES_HPP_

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "ellr/theta.hpp"

namespace ellr {

enum class Parity { plus, minus };

inline const char* to_string(Parity p) { return p == Parity::plus ? "plus" : "minus"; }

struct SpaceSpec {
  int n = 1;
  cplx xi{};
  Parity parity = Parity::plus;
  bool tilde = false;  // Ṽ_n(ξ) convention: no exponential factor
};

struct BasisExpansion {
  Eigen::VectorXcd coeffs;
  double residual = 0.0;  // max relative reconstruction error at held-out points
  double cond = 1.0;      // σ_max / σ_min of the sampling matrix
};

/// Sampling grid placement for expansions. offset1/offset2 position the first
/// and second variable's samples; they differ by half a grid step so that the
/// two coordinates never coincide modulo 1.
struct GridOptions {
  double offset1 = 0.37;
  double offset2 = 0.87;
  double retry_shift = 0.19;
};

inline constexpr double kMaxCondition = 1e8;

inline int reduce_index(int j, int n) {
  const int r = j % n;
  return r < 0 ? r + n : r;
}

/// θ[½ − j/n; n/2].
inline ThetaCharacteristics basis_characteristics(int n, int j) {
  return {Rational(n - 2 * reduce_index(j, n), 2 * n), Rational(n, 2)};
}

namespace detail {

inline int exponent_factor(const SpaceSpec& s) {
  if (s.tilde) return 0;
  return s.parity == Parity::plus ? s.n : s.n + 1;
}

inline void check_spec(const SpaceSpec& s) {
  if (s.n < 1) throw DomainError("space dimension must be at least 1");
}

}  // namespace detail

/// j-th basis element of the space described by `spec`, evaluated at z.
inline cplx basis_eval(const SpaceSpec& spec, int j, cplx z, cplx tau) {
  detail::check_spec(spec);
  const cplx theta = theta_char(basis_characteristics(spec.n, j), spec.xi - double(spec.n) * z, double(spec.n) * tau);
  const int e = detail::exponent_factor(spec);
  return e == 0 ? theta : theta * std::exp(kPi * kI * double(e) * z);
}

/// d/dz of basis_eval.
inline cplx basis_deriv(const SpaceSpec& spec, int j, cplx z, cplx tau) {
  detail::check_spec(spec);
  const auto ch = basis_characteristics(spec.n, j);
  const cplx w = spec.xi - double(spec.n) * z;
  const cplx ntau = double(spec.n) * tau;
  const cplx dtheta = -double(spec.n) * theta_char(ch, w, ntau, 1);
  const int e = detail::exponent_factor(spec);
  if (e == 0) return dtheta;
  const cplx ex = std::exp(kPi * kI * double(e) * z);
  return (dtheta + theta_char(ch, w, ntau) * kPi * kI * double(e)) * ex;
}

/// (T_k(ξ) f)(z) = f(z − ξ/k).
inline cplx translate_eval(int k, cplx xi, const Univariate& f, cplx z) {
  if (k < 1) throw DomainError("translation index k must be at least 1");
  return f(z - xi / double(k));
}

inline Univariate translate(int k, cplx xi, Univariate f) {
  if (k < 1) throw DomainError("translation index k must be at least 1");
  return [k, xi, f = std::move(f)](cplx z) { return f(z - xi / double(k)); };
}

/// Max relative residual of the two quasi-periodicity relations defining
/// `spec`'s space, over `samples` deterministic points.
inline double quasi_periodicity_residual(const Univariate& f, const SpaceSpec& spec, cplx tau, int samples = 8) {
  detail::check_spec(spec);
  const double n = spec.n;
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double t = (s + 0.29) / samples;
    const cplx z{t - 0.5, tau.imag() * (0.3 * t - 0.15)};
    const cplx fz = f(z);

    cplx one_factor;
    cplx tau_factor;
    if (spec.tilde) {
      one_factor = std::fmod(n, 2.0) == 0.0 ? 1.0 : -1.0;
      tau_factor = one_factor * std::exp(-2.0 * kPi * kI * (n * z - spec.xi + n * tau / 2.0));
    } else {
      const double sign_n = std::fmod(n, 2.0) == 0.0 ? 1.0 : -1.0;
      one_factor = spec.parity == Parity::plus ? 1.0 : -1.0;
      const cplx extra = spec.parity == Parity::plus ? cplx{} : tau / 2.0;
      tau_factor = sign_n * std::exp(2.0 * kPi * kI * (spec.xi - n * z + extra));
    }
    worst = std::max(worst, relative_difference(f(z + 1.0), one_factor * fz));
    worst = std::max(worst, relative_difference(f(z + tau), tau_factor * fz));
  }
  return worst;
}

namespace detail {

struct LeastSquares {
  Eigen::VectorXcd x;
  double cond;
};

inline LeastSquares solve_least_squares(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& y) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  const double cond = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
  return {svd.solve(y), cond};
}

template <class Sample, class Basis>
BasisExpansion expand_on_grid(std::size_t unknowns, const std::vector<Sample>& fit, const std::vector<Sample>& held_out,
                              const Basis& basis_row, const std::function<cplx(const Sample&)>& target) {
  Eigen::MatrixXcd a(fit.size(), unknowns);
  Eigen::VectorXcd y(fit.size());
  double scale = 0.0;
  for (std::size_t r = 0; r < fit.size(); ++r) {
    a.row(r) = basis_row(fit[r]);
    y(r) = target(fit[r]);
    scale = std::max(scale, std::abs(y(r)));
  }
  auto [x, cond] = solve_least_squares(a, y);

  double err = 0.0;
  for (const auto& p : held_out) {
    const cplx v = target(p);
    scale = std::max(scale, std::abs(v));
    err = std::max(err, std::abs((basis_row(p) * x)(0) - v));
  }
  return {std::move(x), scale > 0.0 ? err / scale : 0.0, cond};
}

inline cplx sample_point(int s, int count, double offset, double im) { return {(s + offset) / count, im}; }

}  // namespace detail

/// Least-squares expansion of f over the basis of `spec`.
///
/// Fits on 2n points (s + 0.37)/2n + 0.05i·Im τ; the residual is measured at n
/// fresh points. Retries once with a shifted grid if the sampling matrix has
/// condition number above 1e8, then throws ConditioningError.
inline BasisExpansion expand_in_basis(const Univariate& f, const SpaceSpec& spec, cplx tau, GridOptions grid = {}) {
  detail::check_spec(spec);
  const int n = spec.n;
  const auto row = [&](const cplx& z) {
    Eigen::RowVectorXcd r(n);
    for (int j = 0; j < n; ++j) r(j) = basis_eval(spec, j, z, tau);
    return r;
  };
  const std::function<cplx(const cplx&)> target = [&](const cplx& z) { return f(z); };

  for (int attempt = 0; attempt < 2; ++attempt) {
    const double off = grid.offset1 + attempt * grid.retry_shift;
    std::vector<cplx> fit, held;
    for (int s = 0; s < 2 * n; ++s) fit.push_back(detail::sample_point(s, 2 * n, off, 0.05 * tau.imag()));
    for (int s = 0; s < n; ++s) held.push_back(detail::sample_point(s, n, off + 0.24, -0.04 * tau.imag()));
    auto e = detail::expand_on_grid<cplx>(n, fit, held, row, target);
    if (e.cond <= kMaxCondition) return e;
  }
  throw ConditioningError("basis sampling matrix is ill-conditioned (cond > 1e8)");
}

/// Least-squares expansion of g(z1, z2) over the product basis of two spaces;
/// coefficient (i, j) is stored at index i·n2 + j.
inline BasisExpansion expand_in_product_basis(const std::function<cplx(cplx, cplx)>& g, const SpaceSpec& s1,
                                              const SpaceSpec& s2, cplx tau, GridOptions grid = {}) {
  detail::check_spec(s1);
  detail::check_spec(s2);
  const int n1 = s1.n;
  const int n2 = s2.n;
  using Pt = std::array<cplx, 2>;
  const auto row = [&](const Pt& p) {
    Eigen::RowVectorXcd r(n1 * n2);
    std::vector<cplx> b2(n2);
    for (int j = 0; j < n2; ++j) b2[j] = basis_eval(s2, j, p[1], tau);
    for (int i = 0; i < n1; ++i) {
      const cplx b1 = basis_eval(s1, i, p[0], tau);
      for (int j = 0; j < n2; ++j) r(i * n2 + j) = b1 * b2[j];
    }
    return r;
  };
  const std::function<cplx(const Pt&)> target = [&](const Pt& p) { return g(p[0], p[1]); };
  const double im = 0.05 * tau.imag();

  for (int attempt = 0; attempt < 2; ++attempt) {
    const double shift = attempt * grid.retry_shift;
    std::vector<Pt> fit, held;
    for (int s = 0; s < 2 * n1; ++s)
      for (int t = 0; t < 2 * n2; ++t)
        fit.push_back({detail::sample_point(s, 2 * n1, grid.offset1 + shift, im),
                       detail::sample_point(t, 2 * n2, grid.offset2 + shift, im)});
    for (int s = 0; s < n1; ++s)
      for (int t = 0; t < n2; ++t)
        held.push_back({detail::sample_point(s, n1, grid.offset1 + shift + 0.24, -0.04 * tau.imag()),
                        detail::sample_point(t, n2, grid.offset2 + shift + 0.26, 0.02 * tau.imag())});
    auto e = detail::expand_on_grid<Pt>(std::size_t(n1) * n2, fit, held, row, target);
    if (e.cond <= kMaxCondition) return e;
  }
  throw ConditioningError("product-basis sampling matrix is ill-conditioned (cond > 1e8)");
}

}  // namespace ellr

#endif  // ELLR_FUNCTION_SPACES_HPP_
