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

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "iafeas/config.hpp"

using namespace iafeas;

namespace {

struct RunResult {
  int code = -1;
  std::string output;
};

RunResult run(const std::string& command) {
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  char buf[4096];
  size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) {
    result.output.append(buf, n);
  }
  const int status = pclose(pipe);
  result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string binary() {
  const char* bin = std::getenv("IAFEAS_BIN");
  REQUIRE(bin != nullptr);
  return bin;
}

std::string write_config(const std::string& name, const NetworkConfig& config) {
  const std::string path = "cli_" + name + ".json";
  std::ofstream out(path);
  REQUIRE(out.good());
  out << serialize_config(config);
  REQUIRE(out.good());
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("check prints both reports and encodes the class in its exit") {
  const std::string feasible = write_config("feasible", symmetric_config(2, 2, 3, 3, 1));
  const RunResult good = run(binary() + " check " + feasible);
  CHECK(good.code == 0);
  const auto report = nlohmann::json::parse(good.output);
  CHECK(report["necessary"]["overall"]["ok"] == true);
  CHECK(report["verdict"]["class"] == "feasible");
  CHECK(report["verdict"]["p"] == 0);

  const std::string improper = write_config("improper", symmetric_config(2, 1, 3, 2, 2));
  const RunResult bad = run(binary() + " check " + improper);
  CHECK(bad.code == 1);
  const auto verdict = nlohmann::json::parse(bad.output);
  CHECK(verdict["verdict"]["class"] == "improper");
  CHECK(verdict["verdict"]["witness"]["kind"] == "counting");
}

TEST_CASE("usage and input errors exit with 2") {
  CHECK(run(binary() + " check /does/not/exist.json 2>/dev/null").code == 2);

  std::ofstream bad("cli_bad.json");
  bad << "not json";
  bad.close();
  CHECK(run(binary() + " check cli_bad.json 2>/dev/null").code == 2);

  CHECK(run(binary() + " 2>/dev/null").code == 2);
  CHECK(run(binary() + " check 2>/dev/null").code == 2);
  CHECK(run(binary() + " sweep --bogus 2>/dev/null").code == 2);

  const RunResult help = run(binary() + " --help");
  CHECK(help.code == 0);
  CHECK(help.output.find("sweep") != std::string::npos);
  CHECK(help.output.find("certify") != std::string::npos);
}

TEST_CASE("sweep writes the CSV and optional SVG deterministically") {
  const std::string base = binary() +
      " sweep --cells 2 --users-per-cell 2 --streams 1"
      " --tx-min 2 --tx-max 4 --rx-min 1 --rx-max 3";
  CHECK(run(base + " --out cli_a.csv --svg cli_a.svg").code == 0);

  const std::string csv = slurp("cli_a.csv");
  std::istringstream lines(csv);
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "M,N,class,p_witness");
  int rows = 0;
  bool saw_improper = false;
  while (std::getline(lines, line)) {
    ++rows;
    saw_improper = saw_improper || line == "2,1,improper,";
  }
  CHECK(rows == 9);
  CHECK(saw_improper);

  const std::string svg = slurp("cli_a.svg");
  CHECK(svg.rfind("<svg", 0) == 0);

  CHECK(run(base + " --out cli_b.csv").code == 0);
  CHECK(slurp("cli_b.csv") == csv);

  const RunResult inverted = run(
      binary() +
      " sweep --cells 2 --users-per-cell 2 --streams 1 --tx-min 4 --tx-max 2"
      " --rx-min 1 --rx-max 3 --out cli_c.csv 2>/dev/null");
  CHECK(inverted.code == 2);
}

TEST_CASE("certify exits by certificate outcome") {
  const std::string small = write_config("cert", symmetric_config(2, 1, 2, 2, 1));
  const RunResult pass =
      run(binary() + " certify " + small + " --out cli_cert.json");
  CHECK(pass.code == 0);
  const auto cert = nlohmann::json::parse(pass.output);
  CHECK(cert["pass"] == true);
  CHECK(cert["L_e"] == 2);
  CHECK(cert["rank"] == 2);
  REQUIRE(cert["matching"].is_array());
  CHECK(cert["matching"].size() == 2);
  CHECK(slurp("cli_cert.json") == pass.output);

  // Proper counting fails here, so no certificate can be built.
  const std::string improper = write_config("cert_improper", symmetric_config(2, 2, 2, 2, 1));
  const RunResult fail = run(binary() + " certify " + improper);
  CHECK(fail.code == 1);
  CHECK(nlohmann::json::parse(fail.output)["pass"] == false);

  NetworkConfig mixed = symmetric_config(2, 2, 4, 4, 1);
  mixed.cells[0].users[0].streams = 2;
  const std::string mixed_path = write_config("cert_mixed", mixed);
  const RunResult inapplicable =
      run(binary() + " certify " + mixed_path + " 2>&1");
  CHECK(inapplicable.code == 1);
  CHECK(inapplicable.output.find("not applicable") != std::string::npos);
}

TEST_CASE("align reports trials and writes traces") {
  const std::string feasible = write_config("align", symmetric_config(2, 2, 3, 3, 1));
  const std::string cmd = binary() + " align " + feasible +
                          " --trials 2 --seed 21 --trace-prefix cli_trace_";
  const RunResult good = run(cmd);
  CHECK(good.code == 0);
  const auto report = nlohmann::json::parse(good.output);
  CHECK(report["verdict"] == "feasible");
  REQUIRE(report["trials"].size() == 2);
  CHECK(report["trials"][0]["seed"] == 21);
  CHECK(report["trials"][1]["seed"] == 22);
  CHECK(report["trials"][0]["converged"].is_boolean());
  CHECK(report["trials"][0]["rank_ok"] == true);

  const std::string trace = slurp("cli_trace_0.csv");
  CHECK(trace.rfind("iter,leakage\n0,", 0) == 0);
  REQUIRE(std::ifstream("cli_trace_1.csv").good());

  const RunResult again = run(cmd);
  CHECK(again.output == good.output);

  const std::string improper = write_config("align_improper", symmetric_config(2, 1, 3, 2, 2));
  const RunResult stuck = run(binary() + " align " + improper +
                              " --trials 1 --max-iters 40 --restarts 1");
  CHECK(stuck.code == 1);
  CHECK(nlohmann::json::parse(stuck.output)["verdict"] == "infeasible");

  CHECK(run(binary() + " align " + feasible + " --trials 0 2>/dev/null").code ==
        2);
}
