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

// verify: run a verification suite and write a residual report.
//
// Exit status: 0 all checks pass, 1 some check failed, 2 bad configuration or
// violated precondition.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "ellr/verify.hpp"

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ellr::ConfigError("cannot open output file '" + path + "'");
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Run numerical verification suites for elliptic R-operators and face models"};
  app.option_defaults()->always_capture_default();

  std::string suite;
  std::string config_path, tau, mu, window, sweep_param, grid, out, format;
  std::optional<int> k, draws;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::vector<std::string> xi, lambda;

  std::string names;
  for (auto n : ellr::kSuiteNames) names += (names.empty() ? "" : " | ") + std::string(n);
  app.add_option("suite", suite, "Suite to run: " + names)->required();
  app.add_option("--config", config_path, "JSON config file; command-line flags override its fields");
  app.add_option("--tau", tau, "Modular parameter, e.g. 0.2+1i");
  app.add_option("--mu", mu, "Shift parameter mu");
  app.add_option("--window", window, "Weight window K1,K2");
  app.add_option("--k", k, "Restrict k-indexed suites to this size");
  app.add_option("--lambda", lambda, "Explicit window values (one per index)")->delimiter(',');
  auto* xi_opt = app.add_option("--xi", xi, "Spectral parameters used before random draws")->delimiter(',');
  app.add_option("--draws", draws, "Number of spectral draws per suite")->excludes(xi_opt);
  app.add_option("--seed", seed, "PRNG seed");
  app.add_option("--tol", tol, "Pass threshold for every residual");
  app.add_option("--out", out, "Output path (stdout if omitted)");
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--sweep", sweep_param, "Sweep a parameter: xi | mu | tau-imag")
      ->check(CLI::IsMember({"xi", "mu", "tau-imag"}));
  app.add_option("--grid", grid, "Comma-separated sweep values");

  CLI11_PARSE(app, argc, argv);

  try {
    ellr::SuiteConfig cfg;
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw ellr::ConfigError("cannot read config file '" + config_path + "'");
      nlohmann::json j;
      try {
        f >> j;
      } catch (const nlohmann::json::exception& e) {
        throw ellr::ConfigError(std::string("config is not valid JSON: ") + e.what());
      }
      cfg = ellr::config_from_json(j);
    }
    cfg.suite = suite;
    if (!tau.empty()) cfg.tau = ellr::parse_complex(tau);
    if (!mu.empty()) cfg.mu = ellr::parse_complex(mu);
    if (!window.empty()) {
      const auto parts = split_list(window);
      if (parts.size() != 2) throw ellr::ConfigError("--window expects K1,K2");
      try {
        cfg.k1 = std::stoi(parts[0]);
        cfg.k2 = std::stoi(parts[1]);
      } catch (const std::exception&) {
        throw ellr::ConfigError("--window expects integers K1,K2");
      }
    }
    if (k) cfg.k = k;
    if (!lambda.empty()) {
      cfg.lambda.clear();
      for (const auto& v : lambda) cfg.lambda.push_back(ellr::parse_complex(v));
    }
    if (!xi.empty()) {
      cfg.xi.clear();
      for (const auto& v : xi) cfg.xi.push_back(ellr::parse_complex(v));
    }
    if (draws) cfg.draws = draws;
    if (seed) cfg.seed = *seed;
    if (tol) cfg.tol = *tol;
    if (!out.empty()) cfg.out = out;
    if (!format.empty()) cfg.format = format;

    if (!sweep_param.empty()) {
      if (grid.empty()) throw ellr::ConfigError("--sweep requires --grid");
      const auto table = ellr::sweep(cfg, sweep_param, split_list(grid));
      emit(cfg.format == "csv" ? table.to_csv() : table.to_json().dump(2) + "\n", cfg.out);
      return table.pass() ? 0 : 1;
    }

    const auto report = ellr::run_suite(cfg);
    emit(cfg.format == "csv" ? report.to_csv() : report.to_json().dump(2) + "\n", cfg.out);
    if (!cfg.out.empty())
      std::cerr << report.suite << ": " << report.checks.size() << " checks, max residual " << report.max_residual
                << (report.pass ? ", pass\n" : ", FAIL\n");
    return report.pass ? 0 : 1;
  } catch (const ellr::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
