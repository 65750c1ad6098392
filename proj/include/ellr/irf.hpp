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

// Face (IRF) model: weight sequences λ = (λ_{k1}, …, λ_{k2}), steps λ + με_i,
// and the Boltzmann weights
//
//   W[κ'; λ, ξ, ν; κ],   κ = λ + με_i,  κ' = λ + με_j',  ν = κ + με_j,
//
//   i = j = j'   θ₁(μ − ξ)θ₁'(0) / θ₁(μ)
//   j' = i ≠ j   θ₁(λ_ji − ξ)θ₁'(0) / θ₁(λ_ji)
//   j' = j ≠ i   θ₁(ξ)θ₁(λ_ji − μ)θ₁'(0) / (θ₁(λ_ji)θ₁(−μ))
//   otherwise    0,
//
// with λ_ji = λ_j − λ_i.
//
// A sequence is stored as a fixed origin plus integer step counts, so two
// sequences reached by different paths compare exactly.

#ifndef ELLR_IRF_HPP_
#define ELLR_IRF_HPP_

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ellr/theta.hpp"

namespace ellr {

/// λ_i = i·r for the default window; r ≈ √3/π keeps every λ_ij off ℤ + ℤμ.
inline constexpr double kDefaultSpacing = 0.5513288954217921;

class WeightSequence {
 public:
  WeightSequence(int k1, std::vector<cplx> origin, cplx mu)
      : k1_(k1), origin_(std::make_shared<const std::vector<cplx>>(std::move(origin))),
        steps_(origin_->size(), 0), mu_(mu) {
    if (origin_->empty()) throw DomainError("weight sequence window is empty");
  }

  int k1() const { return k1_; }
  int k2() const { return k1_ + size() - 1; }
  int size() const { return static_cast<int>(steps_.size()); }
  cplx mu() const { return mu_; }
  bool in_window(int i) const { return i >= k1_ && i <= k2(); }

  /// λ_i for i in [k1, k2].
  cplx value(int i) const {
    const int a = local(i);
    return (*origin_)[a] + mu_ * double(steps_[a]);
  }

  std::vector<cplx> values() const {
    std::vector<cplx> v(size());
    for (int a = 0; a < size(); ++a) v[a] = value(k1_ + a);
    return v;
  }

  /// |λ| = Σ_i λ_i over the window.
  cplx total() const {
    cplx s = 0.0;
    for (int a = 0; a < size(); ++a) s += value(k1_ + a);
    return s;
  }

  const std::vector<int>& steps() const { return steps_; }

  /// λ + dir·με_i.
  WeightSequence stepped(int i, int dir = 1) const {
    WeightSequence out = *this;
    out.steps_[local(i)] += dir;
    return out;
  }

  bool same_origin(const WeightSequence& o) const {
    return origin_ == o.origin_ || (k1_ == o.k1_ && *origin_ == *o.origin_ && mu_ == o.mu_);
  }

  /// Step counts of `this − o`; empty if the sequences do not share an origin.
  std::optional<std::vector<int>> step_difference(const WeightSequence& o) const {
    if (!same_origin(o)) return std::nullopt;
    std::vector<int> d(size());
    for (int a = 0; a < size(); ++a) d[a] = steps_[a] - o.steps_[a];
    return d;
  }

  /// Global index i if `this = o + με_i`, otherwise nullopt.
  std::optional<int> unit_step_from(const WeightSequence& o) const {
    const auto d = step_difference(o);
    if (!d) return std::nullopt;
    std::optional<int> idx;
    for (int a = 0; a < size(); ++a) {
      if ((*d)[a] == 0) continue;
      if ((*d)[a] != 1 || idx) return std::nullopt;
      idx = k1_ + a;
    }
    return idx;
  }

  friend bool operator==(const WeightSequence& a, const WeightSequence& b) {
    return a.same_origin(b) && a.steps_ == b.steps_;
  }

 private:
  int local(int i) const {
    if (!in_window(i)) throw DomainError("index " + std::to_string(i) + " outside the sequence window");
    return i - k1_;
  }

  int k1_;
  std::shared_ptr<const std::vector<cplx>> origin_;
  std::vector<int> steps_;
  cplx mu_;
};

/// λ_i = i·r on [k1, k2].
inline WeightSequence default_window(int k1, int k2, const ModularParams& params, double spacing = kDefaultSpacing) {
  if (k2 < k1) throw DomainError("window requires k1 <= k2");
  std::vector<cplx> v;
  for (int i = k1; i <= k2; ++i) v.emplace_back(i * spacing, 0.0);
  return WeightSequence(k1, std::move(v), params.mu);
}

struct SequenceViolation {
  enum class Kind { outside_strip, lattice_hit };
  Kind kind;
  int i = 0;
  int j = 0;
  int m = 0;
  int n = 0;
  double margin = 0.0;  // |λ_i − λ_j − m − nμ| or Im τ/2 − |Im λ_i|

  std::string describe() const {
    if (kind == Kind::outside_strip)
      return "lambda_" + std::to_string(i) + " outside |Im z| < Im(tau)/2 (margin " + std::to_string(margin) + ")";
    return "lambda_" + std::to_string(i) + " - lambda_" + std::to_string(j) + " near " + std::to_string(m) + " + " +
           std::to_string(n) + "*mu (distance " + std::to_string(margin) + ")";
  }
};

/// All violated genericity constraints: |Im λ_i| < Im τ/2 and
/// |λ_i − λ_j − m − nμ| > 1e-6 for i ≠ j, m, n ∈ [−2, 2].
inline std::vector<SequenceViolation> validate_sequence(const WeightSequence& seq, const ModularParams& params) {
  std::vector<SequenceViolation> out;
  const double half = params.tau.imag() / 2.0;
  for (int i = seq.k1(); i <= seq.k2(); ++i) {
    const double m = half - std::abs(seq.value(i).imag());
    if (!(m > 0.0)) out.push_back({SequenceViolation::Kind::outside_strip, i, i, 0, 0, m});
  }
  for (int i = seq.k1(); i <= seq.k2(); ++i) {
    for (int j = seq.k1(); j <= seq.k2(); ++j) {
      if (i == j) continue;
      const cplx d = seq.value(i) - seq.value(j);
      for (int m = -2; m <= 2; ++m) {
        for (int n = -2; n <= 2; ++n) {
          const double dist = std::abs(d - double(m) - double(n) * params.mu);
          if (!(dist > kGenericityTol)) out.push_back({SequenceViolation::Kind::lattice_hit, i, j, m, n, dist});
        }
      }
    }
  }
  return out;
}

/// A face (λ, κ = λ+με_i, κ' = λ+με_j', ν = κ+με_j).
struct FaceConfig {
  WeightSequence lambda;
  int i;
  int jp;
  int j;

  WeightSequence kappa() const { return lambda.stepped(i); }
  WeightSequence kappa_prime() const { return lambda.stepped(jp); }
  WeightSequence nu() const { return lambda.stepped(i).stepped(j); }
};

/// Boltzmann weights with the ξ-independent theta values cached.
class IrfWeights {
 public:
  explicit IrfWeights(const ModularParams& params) : tau_(params.tau), mu_(params.mu) {
    params.validate();
    d0_ = theta1_deriv0(tau_);
    th_mu_ = theta1(mu_, tau_);
    th_mmu_ = theta1(-mu_, tau_);
  }

  /// W[top; left, ξ, right; bottom]; zero on non-admissible quadruples.
  cplx operator()(const WeightSequence& top, const WeightSequence& left, cplx xi, const WeightSequence& right,
                  const WeightSequence& bottom) const {
    const auto i = bottom.unit_step_from(left);
    const auto jp = top.unit_step_from(left);
    const auto j = right.unit_step_from(bottom);
    if (!i || !jp || !j) return 0.0;
    if (*i == *j && *j == *jp) return theta1(mu_ - xi, tau_) * d0_ / th_mu_;
    if (*i == *j) return 0.0;
    const cplx lji = left.value(*j) - left.value(*i);
    if (*jp == *i) return theta1(lji - xi, tau_) * d0_ / theta1(lji, tau_);
    if (*jp == *j) return theta1(xi, tau_) * theta1(lji - mu_, tau_) * d0_ / (theta1(lji, tau_) * th_mmu_);
    return 0.0;
  }

  cplx operator()(const FaceConfig& f, cplx xi) const {
    return (*this)(f.kappa_prime(), f.lambda, xi, f.nu(), f.kappa());
  }

 private:
  cplx tau_, mu_, d0_, th_mu_, th_mmu_;
};

inline cplx boltzmann_weight(const FaceConfig& face, cplx xi, const ModularParams& params) {
  return IrfWeights(params)(face, xi);
}

/// Every sequence reachable from λ by one or two forward steps inside the
/// window: the possible intermediate corners κ' of a face with corner λ.
inline std::vector<WeightSequence> intermediate_candidates(const WeightSequence& lambda) {
  std::vector<WeightSequence> out;
  for (int a = lambda.k1(); a <= lambda.k2(); ++a) out.push_back(lambda.stepped(a));
  for (int a = lambda.k1(); a <= lambda.k2(); ++a)
    for (int b = a; b <= lambda.k2(); ++b) out.push_back(lambda.stepped(a).stepped(b));
  return out;
}

/// Relative residual of the star–triangle relation
///
///   Σ_κ' W[κ'; κ, ξ12, γ; ν] W[α; λ, ξ13, κ'; κ] W[β; α, ξ23, γ; κ']
///     = Σ_κ' W[κ'; λ, ξ23, ν; κ] W[β; κ', ξ13, γ; ν] W[α; λ, ξ12, β; κ'],
///
/// with κ = λ+με_i, ν = κ+με_j, γ = ν+με_l. α is λ plus με of i, j, l for
/// alpha_choice 0, 1, 2; β is λ plus μ(ε_i+ε_j), μ(ε_i+ε_l), μ(ε_j+ε_l).
/// Returns 0 when both sides vanish.
inline double star_triangle_residual(const WeightSequence& lambda, int i, int j, int l, int alpha_choice,
                                     int beta_choice, cplx xi1, cplx xi2, cplx xi3, const ModularParams& params) {
  if (alpha_choice < 0 || alpha_choice > 2 || beta_choice < 0 || beta_choice > 2)
    throw DomainError("star-triangle: alpha/beta choice must be 0, 1 or 2");
  const IrfWeights w(params);
  const WeightSequence kappa = lambda.stepped(i);
  const WeightSequence nu = kappa.stepped(j);
  const WeightSequence gamma = nu.stepped(l);
  const int ijl[3] = {i, j, l};
  const WeightSequence alpha = lambda.stepped(ijl[alpha_choice]);
  static constexpr int kPairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  const WeightSequence beta = lambda.stepped(ijl[kPairs[beta_choice][0]]).stepped(ijl[kPairs[beta_choice][1]]);

  cplx lhs = 0.0;
  cplx rhs = 0.0;
  for (const auto& kp : intermediate_candidates(lambda)) {
    lhs += w(kp, kappa, xi1 - xi2, gamma, nu) * w(alpha, lambda, xi1 - xi3, kp, kappa) *
           w(beta, alpha, xi2 - xi3, gamma, kp);
    rhs += w(kp, lambda, xi2 - xi3, nu, kappa) * w(beta, kp, xi1 - xi3, gamma, nu) *
           w(alpha, lambda, xi1 - xi2, beta, kp);
  }
  return relative_difference(lhs, rhs);
}

}  // namespace ellr

#endif  // ELLR_IRF_HPP_
