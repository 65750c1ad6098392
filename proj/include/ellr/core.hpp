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

#ifndef ELLR_CORE_HPP_
#define ELLR_CORE_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ellr {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

// Minimum distance to ℤ + ℤτ (or ℤ + ℤμ) demanded of every "generic" quantity.
inline constexpr double kGenericityTol = 1e-6;

// Error hierarchy. Every failure mode the library can report derives from Error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class GenericityError : public Error {
 public:
  using Error::Error;
};

class ConditioningError : public Error {
 public:
  using Error::Error;
};

class MembershipError : public Error {
 public:
  using Error::Error;
};

class SingularError : public Error {
 public:
  using Error::Error;
};

class DerivativeRequired : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Distance from z to the nearest point of the lattice ℤ + ℤ·period.
inline double lattice_distance(cplx z, cplx period) {
  const double n0 = std::round(z.imag() / period.imag());
  double best = std::abs(z);
  for (double n = n0 - 1; n <= n0 + 1; n += 1) {
    const cplx w = z - n * period;
    const double m0 = std::round(w.real());
    for (double m = m0 - 1; m <= m0 + 1; m += 1) best = std::min(best, std::abs(w - m));
  }
  return best;
}

/// Nearest point m + n·period of the lattice ℤ + ℤ·period.
inline cplx nearest_lattice_point(cplx z, cplx period) {
  const double n0 = std::round(z.imag() / period.imag());
  cplx best = 0.0;
  double best_d = std::abs(z);
  for (double n = n0 - 1; n <= n0 + 1; n += 1) {
    const cplx w = z - n * period;
    const double m0 = std::round(w.real());
    for (double m = m0 - 1; m <= m0 + 1; m += 1) {
      const cplx p = m + n * period;
      if (std::abs(z - p) < best_d) {
        best_d = std::abs(z - p);
        best = p;
      }
    }
  }
  return best;
}

/// Modular parameter τ (Im τ > 0) and the shift μ ∉ ℤ + ℤτ.
struct ModularParams {
  cplx tau{0.2, 1.0};
  cplx mu{0.41421356237309515, 0.0};

  /// μ ∈ ℝ \ ℤ, required by the face-model constructions.
  bool mu_real() const {
    return mu.imag() == 0.0 && std::abs(mu.real() - std::round(mu.real())) > kGenericityTol;
  }

  void validate(bool require_real_mu = false) const {
    if (!(tau.imag() > 0.0)) throw DomainError("Im(tau) must be positive");
    if (lattice_distance(mu, tau) <= kGenericityTol)
      throw GenericityError("mu lies on the period lattice Z + Z*tau");
    if (require_real_mu && !mu_real()) throw GenericityError("mu must be real and non-integer");
  }
};

/// Relative difference |a − b| / max(|a|, |b|); 0 when both vanish.
inline double relative_difference(cplx a, cplx b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

using Univariate = std::function<cplx(cplx)>;
using Trivariate = std::function<cplx(cplx, cplx, cplx)>;

}  // namespace ellr

#endif  // ELLR_CORE_HPP_
