/*
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "iafeas/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "iafeas/classify.hpp"
#include "iafeas/conditions.hpp"
#include "iafeas/config.hpp"
#include "iafeas/jacobian.hpp"
#include "iafeas/numeric.hpp"

namespace iafeas {

namespace {

// Rounds to 12 significant digits so serialized numbers stay short and
// stable; the parsed-back double prints the same through any
// shortest-round-trip formatter.
double sig12(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return std::strtod(buf, nullptr);
}

std::string format12(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot open " << path << " for writing\n";
    return false;
  }
  out << content;
  out.close();
  if (!out) {
    std::cerr << "failed writing " << path << "\n";
    return false;
  }
  return true;
}

int cmd_check(const std::string& config_path) {
  const NetworkConfig config = load_config(config_path);
  nlohmann::ordered_json out;
  out["necessary"] = nlohmann::ordered_json::parse(necessary_report_json(config));
  const FeasibilityVerdict verdict = classify(config);
  out["verdict"] = nlohmann::ordered_json::parse(verdict_json(verdict));
  std::cout << out.dump() << "\n";
  return verdict.cls == FeasibilityClass::Feasible ? 0 : 1;
}

int cmd_sweep(int G, int K, int d, int m_min, int m_max, int n_min, int n_max,
              const std::string& csv_path, const std::string& svg_path) {
  const RegionGrid grid = sweep_region(G, K, d, m_min, m_max, n_min, n_max);
  if (!write_file(csv_path, region_csv(grid))) {
    return 2;
  }
  if (!svg_path.empty() && !write_file(svg_path, region_svg(grid))) {
    return 2;
  }
  return 0;
}

int cmd_certify(const std::string& config_path, double tol_factor,
                const std::string& out_path) {
  const NetworkConfig config = load_config(config_path);
  const FeasibilityCertificate cert = certify_feasibility(config, tol_factor);
  if (!cert.applicable) {
    std::cerr << "not applicable: " << cert.reason << "\n";
    return 1;
  }
  const std::string json = certificate_json(cert);
  std::cout << json << "\n";
  if (!out_path.empty() && !write_file(out_path, json + "\n")) {
    return 2;
  }
  return cert.pass ? 0 : 1;
}

std::string trace_csv(const std::vector<double>& trace) {
  std::string out = "iter,leakage\n";
  for (size_t i = 0; i < trace.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += format12(trace[i]);
    out += '\n';
  }
  return out;
}

int cmd_align(const std::string& config_path, int trials,
              const AlternatingOptions& options,
              const std::string& trace_prefix) {
  const NetworkConfig config = load_config(config_path);
  const EmpiricalReport report = empirical_feasibility(config, trials, options);

  nlohmann::ordered_json out;
  switch (report.verdict) {
    case EmpiricalVerdict::Feasible:
      out["verdict"] = "feasible";
      break;
    case EmpiricalVerdict::Infeasible:
      out["verdict"] = "infeasible";
      break;
    case EmpiricalVerdict::Inconclusive:
      out["verdict"] = "inconclusive";
      break;
  }
  nlohmann::ordered_json trials_json = nlohmann::ordered_json::array();
  for (const TrialSummary& trial : report.trials) {
    trials_json.push_back({{"seed", trial.seed},
                           {"final_leakage", sig12(trial.final_leakage)},
                           {"converged", trial.converged},
                           {"rank_ok", trial.rank_ok}});
  }
  out["trials"] = trials_json;
  std::cout << out.dump() << "\n";

  if (!trace_prefix.empty()) {
    for (size_t t = 0; t < report.trials.size(); ++t) {
      const std::string path = trace_prefix + std::to_string(t) + ".csv";
      if (!write_file(path, trace_csv(report.trials[t].trace))) {
        return 2;
      }
    }
  }
  return report.verdict == EmpiricalVerdict::Feasible ? 0 : 1;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"linear interference alignment feasibility tools"};
  app.require_subcommand(1);

  std::string check_path;
  CLI::App* check = app.add_subcommand(
      "check", "evaluate the necessary conditions and classify a config");
  check->add_option("config", check_path, "configuration JSON file")
      ->required();

  int G = 0;
  int K = 0;
  int d = 0;
  int m_min = 0;
  int m_max = 0;
  int n_min = 0;
  int n_max = 0;
  std::string csv_path;
  std::string svg_path;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "classify a symmetric antenna grid and write it as CSV");
  sweep->add_option("--cells", G, "number of cells")->required();
  sweep->add_option("--users-per-cell", K, "users per cell")->required();
  sweep->add_option("--streams", d, "streams per user")->required();
  sweep->add_option("--tx-min", m_min, "smallest tx antenna count")
      ->required();
  sweep->add_option("--tx-max", m_max, "largest tx antenna count")
      ->required();
  sweep->add_option("--rx-min", n_min, "smallest rx antenna count")
      ->required();
  sweep->add_option("--rx-max", n_max, "largest rx antenna count")
      ->required();
  sweep->add_option("--out", csv_path, "output CSV path")->required();
  sweep->add_option("--svg", svg_path, "optional heatmap SVG path");

  std::string certify_path;
  std::string certify_out;
  double tol_factor = 100.0;
  CLI::App* certify = app.add_subcommand(
      "certify", "build an alignment system and verify its rank");
  certify->add_option("config", certify_path, "configuration JSON file")
      ->required();
  certify->add_option("--tol-factor", tol_factor,
                      "rank tolerance multiplier on machine epsilon");
  certify->add_option("--out", certify_out, "also write the certificate here");

  std::string align_path;
  std::string trace_prefix;
  int trials = 5;
  AlternatingOptions options;
  CLI::App* align = app.add_subcommand(
      "align", "search for an alignment numerically on random channels");
  align->add_option("config", align_path, "configuration JSON file")
      ->required();
  align->add_option("--trials", trials, "independent channel draws");
  align->add_option("--max-iters", options.max_iters,
                    "iterations per restart");
  align->add_option("--eps", options.eps, "leakage convergence threshold");
  align->add_option("--restarts", options.restarts, "restarts per trial");
  align->add_option("--seed", options.seed, "base seed");
  align->add_option("--tol-rank", options.tol_rank,
                    "direct-link rank tolerance");
  align->add_option("--trace-prefix", trace_prefix,
                    "write per-trial leakage traces to <prefix><t>.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(check)) {
      return cmd_check(check_path);
    }
    if (app.got_subcommand(sweep)) {
      return cmd_sweep(G, K, d, m_min, m_max, n_min, n_max, csv_path,
                       svg_path);
    }
    if (app.got_subcommand(certify)) {
      return cmd_certify(certify_path, tol_factor, certify_out);
    }
    if (app.got_subcommand(align)) {
      if (trials < 1) {
        std::cerr << "align needs at least one trial\n";
        return 2;
      }
      return cmd_align(align_path, trials, options, trace_prefix);
    }
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const LimitError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace iafeas
