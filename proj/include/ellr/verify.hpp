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

// Verification suites and residual reports.
//
// Every suite draws its random inputs from std::mt19937_64 seeded with
// seed ^ FNV-1a(suite name); a draw u ∈ [0, 1) is (x >> 11)·2⁻⁵³ for the raw
// 64-bit output x. Suites therefore produce the same checks whether run alone
// or as part of "all".
//
// Requires nlohmann/json (single header "json.hpp").

#ifndef ELLR_VERIFY_HPP_
#define ELLR_VERIFY_HPP_

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ellr/l_operators.hpp"
#include "json.hpp"

namespace ellr {

inline constexpr std::string_view kSuiteNames[] = {
    "theta",     "ybe-pointwise", "subspace", "belavin-props", "ybe-matrix",         "irf-star-triangle", "vertex-irf",
    "duality",   "weyl-kac",      "exchange", "rll",           "belavin-vertex-irf", "belavin-rll",       "all"};

inline bool is_suite_name(std::string_view s) {
  for (auto n : kSuiteNames)
    if (n == s) return true;
  return false;
}

/// Parses "0.2+1i", "0.2+1.0i", "-0.3-0.2i", "1i", "-i", "0.5" (j accepted for i).
inline cplx parse_complex(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  const auto number = [&](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      throw ConfigError("cannot parse complex number '" + s + "'");
    }
    if (used != t.size()) throw ConfigError("cannot parse complex number '" + s + "'");
    return v;
  };
  if (s.empty()) throw ConfigError("empty complex number");
  if (s.back() != 'i' && s.back() != 'j') {
    if (s == "+" || s == "-") throw ConfigError("cannot parse complex number '" + s + "'");
    return {number(s), 0.0};
  }
  const std::string body = s.substr(0, s.size() - 1);
  std::size_t split = std::string::npos;
  for (std::size_t p = body.size(); p-- > 1;) {
    if ((body[p] == '+' || body[p] == '-') && body[p - 1] != 'e' && body[p - 1] != 'E') {
      split = p;
      break;
    }
  }
  if (split == std::string::npos) return {0.0, number(body)};
  const std::string re = body.substr(0, split);
  if (re.empty() || re == "+" || re == "-") throw ConfigError("cannot parse complex number '" + s + "'");
  return {number(re), number(body.substr(split))};
}

inline std::string format_complex(cplx z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex_digest(std::string_view s) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, fnv1a(s));
  return buf;
}

struct SuiteConfig {
  std::string suite = "all";
  cplx tau{0.2, 1.0};
  cplx mu{0.41421356237309515, 0.0};
  int k1 = 0;
  int k2 = 3;
  std::optional<int> k;        // restricts k-indexed suites to this size
  std::vector<cplx> lambda;    // explicit window values; empty means λ_i = i·r
  std::vector<cplx> xi;        // spectral values consumed before random draws
  std::optional<int> draws;    // spectral draws per suite; each suite has its own default
  std::uint64_t seed = 42;
  double tol = 1e-8;
  std::string out;
  std::string format = "json";

  ModularParams params() const { return {tau, mu}; }

  void validate() const {
    if (!is_suite_name(suite)) throw ConfigError("unknown suite '" + suite + "'");
    if (k2 < k1) throw ConfigError("window requires k1 <= k2");
    if (k && (*k < 1 || *k > 8)) throw ConfigError("k must lie in [1, 8]");
    if (draws && *draws < 1) throw ConfigError("draws must be positive");
    if (!(tol > 0.0)) throw ConfigError("tol must be positive");
    if (format != "json" && format != "csv") throw ConfigError("format must be json or csv");
    if (!lambda.empty() && static_cast<int>(lambda.size()) != k2 - k1 + 1)
      throw ConfigError("explicit lambda must have k2 - k1 + 1 entries");
  }
};

namespace detail {

inline cplx json_complex(const nlohmann::json& j, const char* field) {
  if (j.is_string()) return parse_complex(j.get<std::string>());
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw ConfigError(std::string("field '") + field + "' must be a complex number ([re, im] or string)");
}

inline nlohmann::json complex_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

}  // namespace detail

/// Overlays the fields present in `j` onto `base`. Unknown keys are rejected.
inline SuiteConfig config_from_json(const nlohmann::json& j, SuiteConfig base = {}) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "suite") {
        base.suite = v.get<std::string>();
      } else if (key == "tau") {
        base.tau = detail::json_complex(v, "tau");
      } else if (key == "mu") {
        base.mu = detail::json_complex(v, "mu");
      } else if (key == "window") {
        if (!v.is_array() || v.size() != 2) throw ConfigError("window must be [k1, k2]");
        base.k1 = v[0].get<int>();
        base.k2 = v[1].get<int>();
      } else if (key == "k") {
        base.k = v.is_null() ? std::nullopt : std::optional<int>(v.get<int>());
      } else if (key == "lambda" || key == "xi") {
        if (!v.is_array()) throw ConfigError("field '" + key + "' must be a list");
        std::vector<cplx> out;
        for (const auto& e : v) out.push_back(detail::json_complex(e, key.c_str()));
        (key == "lambda" ? base.lambda : base.xi) = std::move(out);
      } else if (key == "draws") {
        base.draws = v.is_null() ? std::nullopt : std::optional<int>(v.get<int>());
      } else if (key == "seed") {
        base.seed = v.get<std::uint64_t>();
      } else if (key == "tol") {
        base.tol = v.get<double>();
      } else if (key == "out") {
        base.out = v.get<std::string>();
      } else if (key == "format") {
        base.format = v.get<std::string>();
      } else {
        throw ConfigError("unknown config field '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return base;
}

struct CheckResult {
  std::string name;
  std::string digest;               // FNV-1a of the check's canonical input string
  std::optional<double> residual;   // empty when the check raised
  bool pass = false;
  std::string error;
};

struct ResidualReport {
  std::string suite;
  nlohmann::json params;
  std::vector<CheckResult> checks;
  double max_residual = 0.0;  // +inf if any check raised
  bool pass = false;
  double wall_time = 0.0;     // seconds

  nlohmann::json to_json(bool include_timing = true) const {
    nlohmann::json j;
    j["schema"] = 1;
    j["suite"] = suite;
    j["params"] = params;
    auto arr = nlohmann::json::array();
    for (const auto& c : checks) {
      nlohmann::json e{{"name", c.name}, {"inputs_digest", c.digest}, {"pass", c.pass}};
      e["residual"] = c.residual ? nlohmann::json(*c.residual) : nlohmann::json(nullptr);
      if (!c.error.empty()) e["error"] = c.error;
      arr.push_back(std::move(e));
    }
    j["checks"] = std::move(arr);
    j["max_residual"] = std::isfinite(max_residual) ? nlohmann::json(max_residual) : nlohmann::json(nullptr);
    j["pass"] = pass;
    if (include_timing) j["wall_time"] = wall_time;
    return j;
  }

  std::string to_csv() const {
    std::ostringstream os;
    os << "check,residual,pass\n";
    for (const auto& c : checks) {
      char buf[32] = "";
      if (c.residual) std::snprintf(buf, sizeof buf, "%.6e", *c.residual);
      os << c.name << ',' << buf << ',' << (c.pass ? "true" : "false") << '\n';
    }
    return os.str();
  }

  const CheckResult* find(std::string_view name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }

  /// Largest residual among checks whose name starts with `prefix`.
  double max_residual_with_prefix(std::string_view prefix) const {
    double m = 0.0;
    for (const auto& c : checks) {
      if (c.name.compare(0, prefix.size(), prefix) != 0) continue;
      m = std::max(m, c.residual ? *c.residual : std::numeric_limits<double>::infinity());
    }
    return m;
  }
};

namespace detail {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform(double a, double b) { return a + (b - a) * double(eng_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 eng_;
};

inline std::string index_tag(const char* prefix, int i, int width = 2) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%0*d", prefix, width, i);
  return buf;
}

class SuiteRun {
 public:
  SuiteRun(const SuiteConfig& cfg, std::string_view suite)
      : cfg_(cfg), params_(cfg.params()), rng_(cfg.seed ^ fnv1a(suite)), suite_(suite) {}

  const SuiteConfig& cfg() const { return cfg_; }
  const ModularParams& params() const { return params_; }
  cplx tau() const { return params_.tau; }
  int draws(int fallback) const { return cfg_.draws.value_or(fallback); }

  std::vector<int> sizes(std::initializer_list<int> fallback) const {
    if (cfg_.k) return {*cfg_.k};
    return fallback;
  }

  /// Next spectral parameter: explicit values first, then random draws with
  /// Re ∈ [−½, ½], Im ∈ [−0.3, 0.3]·Im τ, kept 0.05 away from ℤ + ℤτ.
  cplx spectral() {
    if (next_xi_ < cfg_.xi.size()) return cfg_.xi[next_xi_++];
    for (;;) {
      const cplx z{rng_.uniform(-0.5, 0.5), rng_.uniform(-0.3, 0.3) * tau().imag()};
      if (lattice_distance(z, tau()) >= 0.05) return z;
    }
  }

  cplx point(double im_frac = 0.2) { return {rng_.uniform(-0.5, 0.5), rng_.uniform(-im_frac, im_frac) * tau().imag()}; }

  /// Points whose pairwise differences stay 0.05 away from ℤ + ℤτ.
  std::vector<cplx> generic_points(int count, double im_frac = 0.2) {
    for (;;) {
      std::vector<cplx> z(count);
      for (auto& v : z) v = point(im_frac);
      bool ok = true;
      for (int a = 0; a < count && ok; ++a)
        for (int b = a + 1; b < count && ok; ++b) ok = lattice_distance(z[a] - z[b], tau()) >= 0.05;
      if (ok) return z;
    }
  }

  double uniform(double a, double b) { return rng_.uniform(a, b); }

  /// Window λ of size k starting at k1 (the configured window when k is empty).
  WeightSequence window(std::optional<int> k = std::nullopt) const {
    const int size = k.value_or(cfg_.k2 - cfg_.k1 + 1);
    std::vector<cplx> v;
    for (int a = 0; a < size; ++a) {
      if (!cfg_.lambda.empty()) {
        if (a >= static_cast<int>(cfg_.lambda.size()))
          throw ConfigError("explicit lambda window is smaller than the requested size " + std::to_string(size));
        v.push_back(cfg_.lambda[a]);
      } else {
        v.emplace_back((cfg_.k1 + a) * kDefaultSpacing, 0.0);
      }
    }
    WeightSequence seq(cfg_.k1, std::move(v), params_.mu);
    const auto bad = validate_sequence(seq, params_);
    if (!bad.empty()) throw GenericityError("lambda window violates genericity: " + bad.front().describe());
    return seq;
  }

  template <class F>
  void check(const std::string& name, const std::string& inputs, F&& compute) {
    CheckResult c;
    c.name = std::string(suite_) + "/" + name;
    c.digest = hex_digest(inputs);
    try {
      const double r = compute();
      c.residual = r;
      c.pass = std::isfinite(r) && r < cfg_.tol;
    } catch (const Error& e) {
      c.error = e.what();
    }
    results_.push_back(std::move(c));
  }

  std::vector<CheckResult> take() { return std::move(results_); }

 private:
  const SuiteConfig& cfg_;
  ModularParams params_;
  Rng rng_;
  std::string_view suite_;
  std::size_t next_xi_ = 0;
  std::vector<CheckResult> results_;
};

inline std::string inputs(std::initializer_list<std::pair<const char*, std::string>> kv) {
  std::string s;
  for (const auto& [k, v] : kv) s += std::string(k) + "=" + v + ";";
  return s;
}

inline std::string fmt(cplx z) { return format_complex(z); }
inline std::string fmt(int v) { return std::to_string(v); }

// Jacobi's product for the standard θ₁; the series θ[½;½] equals its negative.
inline cplx theta1_product(cplx z, cplx tau) {
  const cplx q = std::exp(kPi * kI * tau);
  const cplx c = std::cos(2.0 * kPi * z);
  cplx prod = 1.0;
  cplx q2m = q * q;
  while (std::abs(q2m) > 1e-18) {
    prod *= (1.0 - q2m) * (1.0 - 2.0 * q2m * c + q2m * q2m);
    q2m *= q * q;
  }
  return -2.0 * std::exp(kPi * kI * tau / 4.0) * std::sin(kPi * z) * prod;
}

inline const Parity kParities[] = {Parity::plus, Parity::minus};

// Exponent vectors of the (anti)periodic test functions.
inline constexpr int kTriExponents[5][3] = {{1, 2, 3}, {-1, 0, 2}, {2, -2, 1}, {0, 1, -1}, {-2, 1, 0}};
inline constexpr int kBiExponents[5][2] = {{1, -2}, {0, 1}, {2, 1}, {-1, -1}, {1, 0}};

inline Trivariate tri_test_function(int f, Parity p) {
  const auto& e = kTriExponents[f];
  const double half = p == Parity::minus ? 0.5 : 0.0;
  return [e, half](cplx a, cplx b, cplx c) {
    return std::exp(2.0 * kPi * kI * ((e[0] + half) * a + (e[1] + half) * b + (e[2] + half) * c));
  };
}

inline Bivariate bi_test_function(int f, Parity p) {
  const auto& e = kBiExponents[f];
  const double half = p == Parity::minus ? 0.5 : 0.0;
  const double a = e[0] + half;
  const double b = e[1] + half;
  Bivariate out;
  out.value = [a, b](cplx z1, cplx z2) { return std::exp(2.0 * kPi * kI * (a * z1 + b * z2)); };
  out.partials = [a, b](cplx z1, cplx z2) {
    const cplx v = std::exp(2.0 * kPi * kI * (a * z1 + b * z2));
    return std::array<cplx, 2>{2.0 * kPi * kI * a * v, 2.0 * kPi * kI * b * v};
  };
  return out;
}

// --- suites ---------------------------------------------------------------

inline void suite_theta(SuiteRun& run) {
  const cplx tau = run.tau();
  const int n = run.draws(100);
  for (int d = 0; d < n; ++d) {
    const auto draw = [&] { return cplx{run.uniform(-1.0, 1.0), run.uniform(-0.4, 0.4) * tau.imag()}; };
    const cplx z = draw();
    const cplx x = draw(), y = draw(), u = draw(), w = draw();
    const std::string in = inputs({{"z", fmt(z)}, {"tau", fmt(tau)}});
    const std::string tag = index_tag("d", d, 3);
    run.check("quasi-one/" + tag, in, [&] { return relative_difference(theta1(z + 1.0, tau), -theta1(z, tau)); });
    run.check("quasi-tau/" + tag, in, [&] {
      return relative_difference(theta1(z + tau, tau), -std::exp(-2.0 * kPi * kI * z - kPi * kI * tau) * theta1(z, tau));
    });
    run.check("odd/" + tag, in, [&] { return relative_difference(theta1(-z, tau), -theta1(z, tau)); });
    run.check("product-formula/" + tag, in,
              [&] { return relative_difference(theta_char(kThetaOne, z, tau), theta1_product(z, tau)); });
    run.check("three-term/" + tag, inputs({{"x", fmt(x)}, {"y", fmt(y)}, {"z", fmt(u)}, {"w", fmt(w)}}),
              [&] { return three_term_residual(x, y, u, w, tau); });
  }
  for (int m = -2; m <= 2; ++m) {
    for (int nn = -2; nn <= 2; ++nn) {
      const cplx p = double(m) + double(nn) * tau;
      char tag[32];
      std::snprintf(tag, sizeof tag, "zeros/m%+d_n%+d", m, nn);
      // |θ₁(p)/θ₁'(p)| is the distance from p to the computed zero.
      run.check(tag, inputs({{"p", fmt(p)}}), [&] { return std::abs(theta1(p, tau) / theta1_deriv(p, tau, 1)); });
    }
  }
  run.check("derivative-eta", inputs({{"tau", fmt(tau)}}), [&] {
    const cplx eta = dedekind_eta(tau);
    return relative_difference(theta1_deriv0(tau), -2.0 * kPi * eta * eta * eta);
  });
}

inline void suite_ybe_pointwise(SuiteRun& run) {
  const int n = run.draws(10);
  for (int d = 0; d < n; ++d) {
    const cplx x1 = run.spectral(), x2 = run.spectral(), x3 = run.spectral();
    std::vector<Point3> pts;
    for (int p = 0; p < 10; ++p) {
      const auto z = run.generic_points(3);
      pts.push_back({z[0], z[1], z[2]});
    }
    for (Parity par : kParities) {
      for (int f = 0; f < 5; ++f) {
        run.check(std::string(to_string(par)) + "/" + index_tag("d", d) + "/" + index_tag("f", f, 1),
                  inputs({{"xi1", fmt(x1)}, {"xi2", fmt(x2)}, {"xi3", fmt(x3)}, {"f", fmt(f)}, {"parity", to_string(par)}}),
                  [&] { return ybe_pointwise_residual(run.params(), x1, x2, x3, tri_test_function(f, par), pts); });
      }
    }
  }
}

inline void suite_subspace(SuiteRun& run) {
  const int n = run.draws(3);
  const auto ns = run.sizes({1, 2, 3, 4});
  for (int d = 0; d < n; ++d) {
    const cplx x1 = run.spectral(), x2 = run.spectral();
    for (int size : ns)
      for (Parity par : kParities)
        run.check(std::string(to_string(par)) + "/" + index_tag("n", size, 1) + "/" + index_tag("d", d),
                  inputs({{"n", fmt(size)}, {"xi1", fmt(x1)}, {"xi2", fmt(x2)}, {"parity", to_string(par)}}),
                  [&] { return subspace_mapping_residual(run.params(), size, x1, x2, par); });
  }
}

inline void suite_star_triangle(SuiteRun& run) {
  const WeightSequence lam = run.window();
  const int n = run.draws(5);
  for (int d = 0; d < n; ++d) {
    const cplx x1 = run.spectral(), x2 = run.spectral(), x3 = run.spectral();
    run.check(index_tag("d", d), inputs({{"xi1", fmt(x1)}, {"xi2", fmt(x2)}, {"xi3", fmt(x3)}}), [&] {
      double worst = 0.0;
      for (int i = lam.k1(); i <= lam.k2(); ++i)
        for (int j = lam.k1(); j <= lam.k2(); ++j)
          for (int l = lam.k1(); l <= lam.k2(); ++l)
            for (int a = 0; a < 3; ++a)
              for (int b = 0; b < 3; ++b)
                worst = std::max(worst, star_triangle_residual(lam, i, j, l, a, b, x1, x2, x3, run.params()));
      return worst;
    });
  }
}

inline void suite_vertex_irf(SuiteRun& run) {
  const WeightSequence lam = run.window();
  const int n = run.draws(5);
  for (int d = 0; d < n; ++d) {
    const cplx xi = run.spectral();
    for (Parity par : kParities) {
      for (int f = 0; f < 5; ++f) {
        run.check(std::string(to_string(par)) + "/" + index_tag("d", d) + "/" + index_tag("f", f, 1),
                  inputs({{"xi", fmt(xi)}, {"f", fmt(f)}, {"parity", to_string(par)}}), [&] {
                    const Bivariate g = bi_test_function(f, par);
                    double worst = 0.0;
                    for (int i = lam.k1(); i <= lam.k2(); ++i)
                      for (int j = lam.k1(); j <= lam.k2(); ++j)
                        worst = std::max(worst, vertex_irf_residual(lam, i, j, xi, g, run.params()));
                    return worst;
                  });
      }
    }
  }
}

inline void suite_duality(SuiteRun& run) {
  const int n = run.draws(5);
  const auto ks = run.sizes({1, 2, 3, 4});
  for (int d = 0; d < n; ++d) {
    const cplx xi = run.spectral();
    for (int k : ks) {
      const WeightSequence lam = run.window(k);
      for (Parity par : kParities)
        run.check(std::string(to_string(par)) + "/" + index_tag("k", k, 1) + "/" + index_tag("d", d),
                  inputs({{"k", fmt(k)}, {"xi", fmt(xi)}, {"parity", to_string(par)}}), [&] {
                    const auto m = outgoing_coeffs(xi, lam, par, run.params());
                    return std::max(m.duality_left, m.duality_right);
                  });
    }
  }
}

inline void suite_weyl_kac(SuiteRun& run) {
  const int n = run.draws(5);
  const auto ks = run.sizes({1, 2, 3, 4});
  for (int d = 0; d < n; ++d) {
    const cplx xi = run.spectral();
    for (int k : ks) {
      const WeightSequence lam = run.window(k);
      run.check(index_tag("k", k, 1) + "/" + index_tag("d", d), inputs({{"k", fmt(k)}, {"xi", fmt(xi)}}),
                [&] { return weyl_kac_det_residual(xi, lam, run.params()); });
    }
  }
}

inline void suite_exchange(SuiteRun& run) {
  const int n = run.draws(3);
  const auto ks = run.sizes({1, 2, 3});
  for (int d = 0; d < n; ++d) {
    const cplx x1 = run.spectral(), x2 = run.spectral();
    const auto za = run.generic_points(2);
    const auto zb = run.generic_points(2);
    for (int k : ks) {
      const WeightSequence lam = run.window(k);
      for (Parity par : kParities)
        run.check(std::string(to_string(par)) + "/" + index_tag("k", k, 1) + "/" + index_tag("d", d),
                  inputs({{"k", fmt(k)}, {"xi1", fmt(x1)}, {"xi2", fmt(x2)}, {"parity", to_string(par)}}), [&] {
                    double worst = 0.0;
                    for (int i = lam.k1(); i <= lam.k2(); ++i)
                      for (int j = lam.k1(); j <= lam.k2(); ++j)
                        for (const auto* z : {&za, &zb})
                          worst = std::max(worst,
                                           exchange_residual(x1, x2, lam, i, j, (*z)[0], (*z)[1], par, run.params()));
                    return worst;
                  });
    }
  }
}

inline void suite_rll(SuiteRun& run) {
  const int n = run.draws(3);
  const auto ks = run.sizes({1, 2, 3});
  for (int d = 0; d < n; ++d) {
    const cplx x1 = run.spectral(), x2 = run.spectral();
    std::vector<std::array<cplx, 2>> pts;
    for (int p = 0; p < 2; ++p) {
      const auto z = run.generic_points(2);
      pts.push_back({z[0], z[1]});
    }
    for (int k : ks) {
      const WeightSequence lam = run.window(k);
      for (Parity par : kParities) {
        const std::string base = std::string(to_string(par)) + "/" + index_tag("k", k, 1) + "/" + index_tag("d", d);
        const std::string in =
            inputs({{"k", fmt(k)}, {"xi1", fmt(x1)}, {"xi2", fmt(x2)}, {"parity", to_string(par)}});
        const Bivariate f = bi_test_function(0, par);
        run.check(base + "/pairs", in, [&] {
          double worst = 0.0;
          for (int i = lam.k1(); i <= lam.k2(); ++i)
            for (int j = lam.k1(); j <= lam.k2(); ++j)
              worst = std::max(worst, rll_pointwise_residual(x1, x2, lam, i, j, f, pts, par, run.params()));
          return worst;
        });
        run.check(base + "/assembled", in, [&] {
          const WeightSequence nu = lam.stepped(lam.k1()).stepped(lam.k2());
          return rll_assembled_residual(x1, x2, nu, f, pts, par, run.params());
        });
      }
    }
  }
}

inline void suite_belavin_props(SuiteRun& run) {
  const int n = run.draws(3);
  const auto ks = run.sizes({1, 2, 3, 4});
  for (int k : ks) {
    run.check(index_tag("k", k, 1) + "/unitality", inputs({{"k", fmt(k)}}), [&] {
      const Eigen::MatrixXcd r0 = rk_matrix(k, 0.0, run.params()).entries;
      return matrix_relative_residual(r0, theta1_deriv0(run.tau()) * Eigen::MatrixXcd::Identity(k * k, k * k));
    });
  }
  for (int d = 0; d < n; ++d) {
    const cplx xi = run.spectral();
    for (int k : ks) {
      const std::string base = index_tag("k", k, 1) + "/" + index_tag("d", d);
      const std::string in = inputs({{"k", fmt(k)}, {"xi", fmt(xi)}});
      std::optional<BelavinResiduals> res;
      std::string err;
      try {
        res = belavin_property_residuals(k, xi, run.params());
      } catch (const Error& e) {
        err = e.what();
      }
      const auto get = [&](double BelavinResiduals::*field) {
        if (!res) throw Error(err);
        return (*res).*field;
      };
      run.check(base + "/shift-one", in, [&] { return get(&BelavinResiduals::shift_one); });
      run.check(base + "/shift-tau", in, [&] { return get(&BelavinResiduals::shift_tau); });
      run.check(base + "/symmetry-a", in, [&] { return get(&BelavinResiduals::symmetry_a); });
      run.check(base + "/symmetry-b", in, [&] { return get(&BelavinResiduals::symmetry_b); });
    }
  }
}

inline void suite_ybe_matrix(SuiteRun& run) {
  const int n = run.draws(3);
  const auto ks = run.sizes({1, 2, 3, 4});
  for (int d = 0; d < n; ++d) {
    const cplx x1 = run.spectral(), x2 = run.spectral(), x3 = run.spectral();
    for (int k : ks)
      run.check(index_tag("k", k, 1) + "/" + index_tag("d", d),
                inputs({{"k", fmt(k)}, {"xi1", fmt(x1)}, {"xi2", fmt(x2)}, {"xi3", fmt(x3)}}),
                [&] { return ybe_matrix_residual(k, x1, x2, x3, run.params()); });
  }
}

inline void suite_belavin_vertex_irf(SuiteRun& run) {
  const int n = run.draws(3);
  const auto ks = run.sizes({1, 2, 3});
  for (int d = 0; d < n; ++d) {
    const cplx x1 = run.spectral(), x2 = run.spectral();
    for (int k : ks) {
      const WeightSequence base = run.window(k);
      run.check(index_tag("k", k, 1) + "/" + index_tag("d", d),
                inputs({{"k", fmt(k)}, {"xi1", fmt(x1)}, {"xi2", fmt(x2)}}), [&] {
                  const Eigen::MatrixXcd star = rk_star_matrix(k, x1 - x2, run.params()).entries;
                  double worst = 0.0;
                  for (int a = base.k1(); a <= base.k2(); ++a)
                    for (int b = base.k1(); b <= base.k2(); ++b) {
                      const WeightSequence lam = base.stepped(a).stepped(b);
                      worst = std::max(worst, belavin_vertex_irf_residual(x1, x2, lam, a, b, run.params(), &star));
                    }
                  return worst;
                });
    }
  }
}

inline void suite_belavin_rll(SuiteRun& run) {
  const int n = run.draws(3);
  const auto ks = run.sizes({1, 2, 3});
  for (int d = 0; d < n; ++d) {
    const cplx x1 = run.spectral(), x2 = run.spectral();
    for (int k : ks) {
      if (k > 4) continue;
      const WeightSequence base = run.window(k);
      const std::string tag = index_tag("k", k, 1) + "/" + index_tag("d", d);
      const std::string in = inputs({{"k", fmt(k)}, {"xi1", fmt(x1)}, {"xi2", fmt(x2)}});
      run.check(tag + "/pairs", in, [&] {
        const Eigen::MatrixXcd star = rk_star_matrix(k, x1 - x2, run.params()).entries;
        double worst = 0.0;
        for (int a = base.k1(); a <= base.k2(); ++a)
          for (int b = base.k1(); b <= base.k2(); ++b) {
            const WeightSequence lam = base.stepped(a).stepped(b);
            worst = std::max(worst, belavin_rll_residual(x1, x2, lam, a, b, run.params(), &star));
          }
        return worst;
      });
      run.check(tag + "/assembled", in, [&] { return belavin_rll_assembled_residual(x1, x2, base, run.params()); });
    }
  }
}

using SuiteFn = void (*)(SuiteRun&);

struct SuiteEntry {
  std::string_view name;
  SuiteFn fn;
  bool face;  // needs μ ∈ ℝ \ ℤ and a generic λ window
};

inline constexpr SuiteEntry kSuites[] = {
    {"theta", suite_theta, false},
    {"ybe-pointwise", suite_ybe_pointwise, false},
    {"subspace", suite_subspace, false},
    {"belavin-props", suite_belavin_props, false},
    {"ybe-matrix", suite_ybe_matrix, false},
    {"irf-star-triangle", suite_star_triangle, true},
    {"vertex-irf", suite_vertex_irf, true},
    {"duality", suite_duality, true},
    {"weyl-kac", suite_weyl_kac, true},
    {"exchange", suite_exchange, true},
    {"rll", suite_rll, true},
    {"belavin-vertex-irf", suite_belavin_vertex_irf, true},
    {"belavin-rll", suite_belavin_rll, true},
};

inline nlohmann::json params_echo(const SuiteConfig& cfg) {
  nlohmann::json p;
  p["tau"] = complex_json(cfg.tau);
  p["mu"] = complex_json(cfg.mu);
  p["window"] = {cfg.k1, cfg.k2};
  p["k"] = cfg.k ? nlohmann::json(*cfg.k) : nlohmann::json(nullptr);
  auto lam = nlohmann::json::array();
  for (auto v : cfg.lambda) lam.push_back(complex_json(v));
  p["lambda"] = lam.empty() ? nlohmann::json("default") : lam;
  auto xi = nlohmann::json::array();
  for (auto v : cfg.xi) xi.push_back(complex_json(v));
  p["xi"] = xi;
  p["draws"] = cfg.draws ? nlohmann::json(*cfg.draws) : nlohmann::json(nullptr);
  p["seed"] = cfg.seed;
  p["tol"] = cfg.tol;
  return p;
}

}  // namespace detail

/// Runs the configured suite. Configuration and genericity problems throw
/// (ConfigError, DomainError, GenericityError); numerical failures inside a
/// check become failed checks.
inline ResidualReport run_suite(const SuiteConfig& cfg) {
  cfg.validate();
  const ModularParams params = cfg.params();
  params.validate();

  const auto start = std::chrono::steady_clock::now();
  ResidualReport report;
  report.suite = cfg.suite;
  report.params = detail::params_echo(cfg);

  for (const auto& entry : detail::kSuites) {
    if (cfg.suite != "all" && cfg.suite != entry.name) continue;
    if (entry.face) {
      params.validate(/*require_real_mu=*/true);
    }
    detail::SuiteRun run(cfg, entry.name);
    if (entry.face) run.window();  // surfaces λ genericity violations before any check
    entry.fn(run);
    for (auto& c : run.take()) report.checks.push_back(std::move(c));
  }

  std::sort(report.checks.begin(), report.checks.end(),
            [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
  report.pass = !report.checks.empty();
  for (const auto& c : report.checks) {
    report.max_residual = std::max(report.max_residual, c.residual ? *c.residual : std::numeric_limits<double>::infinity());
    report.pass = report.pass && c.pass;
  }
  report.pass = report.pass && report.max_residual < cfg.tol;
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

struct SweepRow {
  std::string value;
  std::optional<double> max_residual;
  bool pass = false;
  std::string skipped;                 // reason, empty when the point ran
  std::optional<double> matrix_norm;   // max |entry| of Ř_2(ξ) for ξ sweeps
};

struct SweepTable {
  std::string suite;
  std::string param;
  std::vector<SweepRow> rows;

  bool pass() const {
    for (const auto& r : rows)
      if (r.skipped.empty() && !r.pass) return false;
    return true;
  }

  std::string to_csv() const {
    std::ostringstream os;
    os << "param,value,max_residual,pass\n";
    for (const auto& r : rows) {
      char buf[32] = "";
      if (r.max_residual) std::snprintf(buf, sizeof buf, "%.6e", *r.max_residual);
      os << param << ',' << r.value << ',' << buf << ',' << (r.skipped.empty() ? (r.pass ? "true" : "false") : "skipped")
         << '\n';
    }
    return os.str();
  }

  nlohmann::json to_json() const {
    nlohmann::json j{{"schema", 1}, {"suite", suite}, {"param", param}};
    auto arr = nlohmann::json::array();
    for (const auto& r : rows) {
      nlohmann::json e{{"value", r.value}, {"pass", r.pass}};
      e["max_residual"] = r.max_residual ? nlohmann::json(*r.max_residual) : nlohmann::json(nullptr);
      e["matrix_norm"] = r.matrix_norm ? nlohmann::json(*r.matrix_norm) : nlohmann::json(nullptr);
      if (!r.skipped.empty()) e["skipped"] = r.skipped;
      arr.push_back(std::move(e));
    }
    j["rows"] = std::move(arr);
    return j;
  }
};

/// Re-runs the suite with one parameter replaced by each grid value: "xi"
/// (the value becomes the first spectral parameter), "mu", or "tau-imag".
/// Grid points on a forbidden lattice, or that make λ non-generic, are
/// reported as skipped.
inline SweepTable sweep(const SuiteConfig& cfg, const std::string& param, const std::vector<std::string>& grid) {
  if (param != "xi" && param != "mu" && param != "tau-imag")
    throw ConfigError("sweep parameter must be xi, mu or tau-imag");
  cfg.validate();
  SweepTable table{cfg.suite, param, {}};
  for (const auto& g : grid) {
    SuiteConfig c = cfg;
    SweepRow row;
    if (param == "xi") {
      const cplx v = parse_complex(g);
      row.value = format_complex(v);
      if (lattice_distance(v, c.tau) <= kGenericityTol) {
        row.skipped = "xi lies on the lattice Z + Z*tau";
        table.rows.push_back(row);
        continue;
      }
      c.xi.insert(c.xi.begin(), v);
    } else if (param == "mu") {
      c.mu = parse_complex(g);
      row.value = format_complex(c.mu);
    } else {
      const double t = parse_complex(g).real();
      row.value = g;
      if (!(t > 0.0)) {
        row.skipped = "Im(tau) must be positive";
        table.rows.push_back(row);
        continue;
      }
      c.tau = {c.tau.real(), t};
    }
    try {
      const auto rep = run_suite(c);
      row.max_residual = rep.max_residual;
      row.pass = rep.pass;
      if (param == "xi") row.matrix_norm = rk_matrix(2, c.xi.front(), c.params()).entries.cwiseAbs().maxCoeff();
    } catch (const GenericityError& e) {
      row.skipped = e.what();
    } catch (const DomainError& e) {
      row.skipped = e.what();
    }
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace ellr

#endif  // ELLR_VERIFY_HPP_
