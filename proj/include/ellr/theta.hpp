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

// Theta functions with rational characteristics,
//
//   θ[a;b](z, τ) = Σ_m exp[πi(m+a)²τ + 2πi(m+a)(z+b)],
//
// and the odd function θ₁ = θ[½;½], together with θ₁'(0) and Dedekind's η.
//
// Evaluation sums the series directly. z is first shifted by an integer n so
// that |Re z| ≤ ½; the shift contributes the exact phase exp(2πi·a·n), which
// is computed from the rational a without rounding. The phases exp(2πi(m+a)b)
// are likewise reduced modulo 1 in integer arithmetic.
//
// Truncation. |term| = exp(−π Im τ (m+a)² − 2π (m+a) Im z), a Gaussian in m+a
// centred at c = −Im z / Im τ. Summing |m + a − c| ≤ M with
//
//   M = ceil( sqrt( (T + π Im τ/4 + 2π|Im z| + |ln tol|) / (π Im τ) ) ) + 2,
//   T = 5, tol = 1e-17,
//
// drops only terms below tol·exp(−T) of the peak term, so the absolute
// truncation error is far under 1e-14 times the series scale (the peak term).

#ifndef ELLR_THETA_HPP_
#define ELLR_THETA_HPP_

#include <cstdint>
#include <numeric>

#include "ellr/core.hpp"

namespace ellr {

/// Exact rational number num/den with den > 0 and gcd(num, den) = 1.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  constexpr Rational() = default;
  constexpr Rational(std::int64_t n, std::int64_t d = 1) : num(n), den(d) {
    if (den == 0) throw DomainError("rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  constexpr double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend constexpr bool operator==(const Rational&, const Rational&) = default;
};

struct ThetaCharacteristics {
  Rational a;
  Rational b;
};

/// Characteristics of θ₁.
inline constexpr ThetaCharacteristics kThetaOne{Rational(1, 2), Rational(1, 2)};

namespace detail {

inline constexpr double kTruncationSafety = 5.0;
inline constexpr double kTruncationTol = 1e-17;

inline int theta_half_width(double im_tau, double im_z) {
  const double log_tol = std::abs(std::log(kTruncationTol));
  const double num = kTruncationSafety + kPi * im_tau / 4.0 + 2.0 * kPi * std::abs(im_z) + log_tol;
  return static_cast<int>(std::ceil(std::sqrt(num / (kPi * im_tau)))) + 2;
}

// exp(2πi · p/q) for integers with the numerator reduced modulo q first.
inline cplx unit_phase(std::int64_t p, std::int64_t q) {
  std::int64_t r = p % q;
  if (r < 0) r += q;
  const double angle = 2.0 * kPi * static_cast<double>(r) / static_cast<double>(q);
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace detail

/// d-th z-derivative of θ[a;b](z, τ), d ≥ 0.
inline cplx theta_char(const ThetaCharacteristics& ch, cplx z, cplx tau, int derivative = 0) {
  if (!(tau.imag() > 0.0)) throw DomainError("theta: Im(tau) must be positive");
  if (derivative < 0) throw DomainError("theta: negative derivative order");
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DomainError("theta: non-finite argument");

  const auto& [a, b] = ch;
  const double shift = std::round(z.real());
  const cplx z0 = z - shift;
  const auto n = static_cast<std::int64_t>(shift);

  const double av = a.value();
  const double centre = -z0.imag() / tau.imag();
  const int half = detail::theta_half_width(tau.imag(), z0.imag());
  const auto lo = static_cast<std::int64_t>(std::floor(centre - av)) - half;
  const auto hi = static_cast<std::int64_t>(std::ceil(centre - av)) + half;

  cplx sum = 0.0;
  for (std::int64_t m = lo; m <= hi; ++m) {
    const double x = static_cast<double>(m) + av;
    // (m + a)·b = (m·den_a + num_a)·num_b / (den_a·den_b), reduced mod 1 exactly.
    const cplx phase_b = detail::unit_phase((m * a.den + a.num) * b.num, a.den * b.den);
    cplx term = std::exp(kI * kPi * x * x * tau + 2.0 * kPi * kI * x * z0) * phase_b;
    for (int d = 0; d < derivative; ++d) term *= 2.0 * kPi * kI * x;
    sum += term;
  }
  // θ[a;b](z0 + n) = exp(2πi·a·n) θ[a;b](z0).
  return detail::unit_phase(a.num * n, a.den) * sum;
}

inline cplx theta1(cplx z, cplx tau) { return theta_char(kThetaOne, z, tau); }

/// d-th derivative of θ₁ at z.
inline cplx theta1_deriv(cplx z, cplx tau, int order = 1) { return theta_char(kThetaOne, z, tau, order); }

inline cplx theta1_deriv0(cplx tau) { return theta1_deriv(0.0, tau, 1); }

/// η(τ) = exp(πiτ/12) Π_{m≥1} (1 − exp(2πimτ)); factors are kept until |1 − factor| < 1e-17.
inline cplx dedekind_eta(cplx tau) {
  if (!(tau.imag() > 0.0)) throw DomainError("eta: Im(tau) must be positive");
  const cplx q = std::exp(2.0 * kPi * kI * tau);
  cplx product = 1.0;
  cplx qm = q;
  while (std::abs(qm) >= 1e-17) {
    product *= 1.0 - qm;
    qm *= q;
  }
  return std::exp(kPi * kI * tau / 12.0) * product;
}

/// Relative residual of the three-term identity
///   θ₁(x+y)θ₁(x−y)θ₁(z+w)θ₁(z−w) + θ₁(x+z)θ₁(x−z)θ₁(w+y)θ₁(w−y)
///     + θ₁(x+w)θ₁(x−w)θ₁(y+z)θ₁(y−z) = 0,
/// i.e. |sum| divided by the largest of the three products.
inline double three_term_residual(cplx x, cplx y, cplx z, cplx w, cplx tau) {
  const auto t = [&](cplx u) { return theta1(u, tau); };
  const cplx p1 = t(x + y) * t(x - y) * t(z + w) * t(z - w);
  const cplx p2 = t(x + z) * t(x - z) * t(w + y) * t(w - y);
  const cplx p3 = t(x + w) * t(x - w) * t(y + z) * t(y - z);
  const double scale = std::max({std::abs(p1), std::abs(p2), std::abs(p3)});
  return scale == 0.0 ? 0.0 : std::abs(p1 + p2 + p3) / scale;
}

}  // namespace ellr

#endif  // ELLR_THETA_HPP_
