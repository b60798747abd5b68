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

#include <sstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "iafeas/classify.hpp"
#include "iafeas/config.hpp"

using namespace iafeas;

TEST_CASE("divisible reduction applies only to uniform divisible configs") {
  SUBCASE("uniform and proper") {
    const DivisibleClassResult r =
        check_divisible_class(symmetric_config(2, 2, 6, 4, 2));
    CHECK(r.applicable);
    CHECK(r.feasible);
    CHECK(r.reason.empty());
  }
  SUBCASE("mixed streams") {
    NetworkConfig config = symmetric_config(2, 2, 6, 4, 2);
    config.cells[0].users[1].streams = 1;
    const DivisibleClassResult r = check_divisible_class(config);
    CHECK_FALSE(r.applicable);
    CHECK(r.reason == "streams differ across users");
  }
  SUBCASE("indivisible antennas") {
    CHECK(check_divisible_class(symmetric_config(2, 1, 3, 2, 2)).reason ==
          "tx antenna counts are not multiples of the stream count");
    CHECK(check_divisible_class(symmetric_config(2, 1, 4, 3, 2)).reason ==
          "rx antenna counts are not multiples of the stream count");
  }
  SUBCASE("separability failure is decided, not skipped") {
    const DivisibleClassResult r =
        check_divisible_class(symmetric_config(2, 2, 2, 2, 2));
    CHECK(r.applicable);
    CHECK_FALSE(r.feasible);
    CHECK(r.reason == "separability");
    REQUIRE(r.separability_witness.has_value());
    CHECK(r.separability_witness->tx_slack == -2);
  }
  SUBCASE("unit configuration improper") {
    const DivisibleClassResult r =
        check_divisible_class(symmetric_config(2, 1, 2, 2, 2));
    CHECK(r.applicable);
    CHECK_FALSE(r.feasible);
    CHECK(r.reason == "unit-properness");
    REQUIRE(r.unit_counting_witness.has_value());
    const CountingWitness& w = *r.unit_counting_witness;
    CHECK(w.lhs < w.rhs);
  }
}

TEST_CASE("symmetric properness closed form") {
  CHECK(symmetric_proper(2, 2, 3, 3, 1));
  CHECK(symmetric_proper(3, 2, 5, 2, 1));        // 7 >= 7, tight
  CHECK_FALSE(symmetric_proper(3, 2, 4, 2, 1));  // 6 < 7
  CHECK_FALSE(symmetric_proper(2, 1, 3, 2, 2));  // 5 < 6
  CHECK_FALSE(symmetric_proper(4, 2, 15, 2, 2));  // 17 < 18
  CHECK(symmetric_proper(4, 2, 16, 2, 2));        // 18 >= 18
}

TEST_CASE("antenna split witness returns the smallest valid split") {
  CHECK(symmetric_split_witness(4, 2, 6, 12, 2) == 1);
  CHECK(symmetric_split_witness(2, 2, 3, 3, 1) == 0);
  CHECK(symmetric_split_witness(2, 2, 7, 5, 2) == 1);
  CHECK_FALSE(symmetric_split_witness(2, 1, 3, 2, 2).has_value());
  // Proper, but no split: every p leaves one side short.
  CHECK_FALSE(symmetric_split_witness(2, 2, 5, 5, 2).has_value());
}

TEST_CASE("cluster case labels") {
  CHECK(symmetric_cluster_case(2, 2, 5, 5, 2) == 2);
  // Both closed forms fire here; the one-cell side takes precedence.
  CHECK(symmetric_cluster_case(2, 1, 3, 3, 2) == 1);
  // Not proper, so no label even though the bound would be violated.
  CHECK(symmetric_cluster_case(2, 1, 3, 2, 2) == 0);
  // Violated only at an intermediate split, outside both closed forms.
  CHECK(symmetric_cluster_case(2, 3, 19, 9, 4) == 0);
  CHECK(symmetric_cluster_case(1, 2, 4, 2, 1) == 0);
  CHECK(symmetric_cluster_case(2, 2, 3, 3, 1) == 0);
}

TEST_CASE("diagonal-assignment exclusion needs a gap in the subset sums") {
  // Square system, surplus 3 per user, interfering stream sums {0, 2, 4}.
  CHECK(permutation_jacobian_excluded(symmetric_config(3, 2, 3, 4, 1)));
  // Not square.
  CHECK_FALSE(permutation_jacobian_excluded(symmetric_config(2, 2, 3, 3, 1)));
  // Square, but surplus 1 is a reachable sum.
  CHECK_FALSE(permutation_jacobian_excluded(symmetric_config(3, 1, 2, 2, 1)));
}

TEST_CASE("single-user cells lift to single-stream users") {
  NetworkConfig config;
  config.cells.push_back(CellConfig{4, {UserConfig{4, 2}}});
  config.cells.push_back(CellConfig{3, {UserConfig{3, 1}}});
  const NetworkConfig lifted = lift_ic_to_ibc(config);
  REQUIRE(lifted.num_cells() == 2);
  REQUIRE(lifted.num_users(0) == 2);
  CHECK(lifted.cells[0].tx_antennas == 4);
  CHECK(lifted.cells[0].users[0].rx_antennas == 3);
  CHECK(lifted.cells[0].users[0].streams == 1);
  CHECK(lifted.cells[0].users[1].rx_antennas == 3);
  REQUIRE(lifted.num_users(1) == 1);
  CHECK(lifted.cells[1].users[0].rx_antennas == 3);

  NetworkConfig multi = config;
  multi.cells[0].users.push_back(UserConfig{2, 1});
  CHECK_THROWS_AS(lift_ic_to_ibc(multi), ConfigError);

  NetworkConfig starved = config;
  starved.cells[0].users[0].streams = 5;
  CHECK_THROWS_AS(lift_ic_to_ibc(starved), ConfigError);
}

TEST_CASE("classification precedence") {
  SUBCASE("separability loss") {
    const FeasibilityVerdict v = classify(symmetric_config(2, 2, 3, 4, 2));
    CHECK(v.cls == FeasibilityClass::Improper);
    CHECK(v.reason == "separability");
    CHECK(v.separability_witness.has_value());
    CHECK(verdict_class_string(v) == "improper");
  }
  SUBCASE("counting loss") {
    const FeasibilityVerdict v = classify(symmetric_config(2, 1, 3, 2, 2));
    CHECK(v.cls == FeasibilityClass::Improper);
    CHECK(v.reason == "counting");
    REQUIRE(v.counting_witness.has_value());
    CHECK(v.counting_witness->lhs == 2);
    CHECK(v.counting_witness->rhs == 4);
    CHECK_FALSE(v.deficiency_witness.has_value());
  }
  SUBCASE("counting loss past the enumeration guard keeps a witness") {
    const FeasibilityVerdict v = classify(symmetric_config(5, 1, 1, 1, 1));
    CHECK(v.cls == FeasibilityClass::Improper);
    CHECK(v.reason == "counting");
    CHECK_FALSE(v.counting_witness.has_value());
    REQUIRE(v.deficiency_witness.has_value());
    CHECK(v.deficiency_witness->deficiency > 0);
  }
  SUBCASE("cluster loss, one-cell shape") {
    const FeasibilityVerdict v = classify(symmetric_config(2, 1, 3, 3, 2));
    CHECK(v.cls == FeasibilityClass::ProperInfeasible);
    CHECK(v.reason == "cluster");
    CHECK(v.case_label == 1);
    CHECK(v.cluster_witness.has_value());
    CHECK(verdict_class_string(v) == "proper_infeasible_case1");
  }
  SUBCASE("cluster loss, one-user shape") {
    const FeasibilityVerdict v = classify(symmetric_config(2, 2, 5, 5, 2));
    CHECK(v.cls == FeasibilityClass::ProperInfeasible);
    CHECK(v.case_label == 2);
    CHECK(verdict_class_string(v) == "proper_infeasible_case2");
  }
  SUBCASE("cluster loss at an intermediate split") {
    const FeasibilityVerdict v = classify(symmetric_config(2, 3, 19, 9, 4));
    CHECK(v.cls == FeasibilityClass::ProperInfeasible);
    CHECK(v.case_label == 0);
    CHECK(verdict_class_string(v) == "proper_infeasible");
    REQUIRE(v.cluster_witness.has_value());
    const auto [lhs, rhs] = evaluate_cluster_witness(
        symmetric_config(2, 3, 19, 9, 4), *v.cluster_witness);
    CHECK(lhs < rhs);
  }
  SUBCASE("feasible through the divisible reduction") {
    const FeasibilityVerdict v = classify(symmetric_config(2, 2, 3, 3, 1));
    CHECK(v.cls == FeasibilityClass::Feasible);
    CHECK(v.reason == "divisible-class");
    CHECK(v.p == 0);
    CHECK(verdict_class_string(v) == "feasible");
  }
  SUBCASE("feasible through the split witness alone") {
    const FeasibilityVerdict v = classify(symmetric_config(2, 2, 7, 5, 2));
    CHECK(v.cls == FeasibilityClass::Feasible);
    CHECK(v.reason == "split-witness");
    CHECK(v.p == 1);
  }
  SUBCASE("isolated cell is feasible") {
    const FeasibilityVerdict v = classify(symmetric_config(1, 3, 6, 2, 2));
    CHECK(v.cls == FeasibilityClass::Feasible);
    CHECK(v.reason == "divisible-class");
  }
  SUBCASE("uneven streams with every check passing stays open") {
    NetworkConfig config;
    config.cells.push_back(CellConfig{4, {UserConfig{3, 2}}});
    config.cells.push_back(CellConfig{4, {UserConfig{3, 1}, UserConfig{2, 1}}});
    const FeasibilityVerdict v = classify(config);
    CHECK(v.cls == FeasibilityClass::ProperUnknown);
    CHECK(v.reason == "outside-known-results");
    CHECK(verdict_class_string(v) == "unknown");
  }
  SUBCASE("large symmetric networks classify via the scan paths") {
    const FeasibilityVerdict v = classify(symmetric_config(5, 1, 6, 6, 1));
    CHECK(v.cls == FeasibilityClass::Feasible);
    CHECK(v.p == 0);
  }
}

TEST_CASE("verdict JSON carries class, label and witness") {
  const auto feasible =
      nlohmann::json::parse(verdict_json(classify(symmetric_config(2, 2, 3, 3, 1))));
  CHECK(feasible["class"] == "feasible");
  CHECK(feasible["case"].is_null());
  CHECK(feasible["p"] == 0);
  CHECK(feasible["witness"].is_null());

  const auto cluster =
      nlohmann::json::parse(verdict_json(classify(symmetric_config(2, 2, 5, 5, 2))));
  CHECK(cluster["class"] == "proper_infeasible_case2");
  CHECK(cluster["case"] == 2);
  CHECK(cluster["p"].is_null());
  CHECK(cluster["witness"]["kind"] == "cluster");

  const auto improper =
      nlohmann::json::parse(verdict_json(classify(symmetric_config(2, 1, 3, 2, 2))));
  CHECK(improper["class"] == "improper");
  CHECK(improper["witness"]["kind"] == "counting");
  CHECK(improper["witness"]["lhs"] == 2);
}

TEST_CASE("region sweep walks the grid in declared order") {
  const RegionGrid grid = sweep_region(2, 2, 1, 2, 4, 1, 3);
  REQUIRE(grid.cells.size() == 9);
  int idx = 0;
  for (int M = 2; M <= 4; ++M) {
    for (int N = 1; N <= 3; ++N) {
      const RegionCell& cell = grid.cells[idx++];
      CHECK(cell.M == M);
      CHECK(cell.N == N);
      const FeasibilityVerdict direct =
          classify(symmetric_config(2, 2, M, N, 1));
      CHECK(cell.verdict.cls == direct.cls);
      CHECK(cell.verdict.reason == direct.reason);
    }
  }

  CHECK_THROWS_AS(sweep_region(0, 2, 1, 2, 4, 1, 3), std::invalid_argument);
  CHECK_THROWS_AS(sweep_region(2, 2, 1, 4, 2, 1, 3), std::invalid_argument);
  CHECK_THROWS_AS(sweep_region(2, 2, 1, 2, 4, 0, 3), std::invalid_argument);
}

TEST_CASE("region CSV lists one row per cell") {
  const RegionGrid grid = sweep_region(2, 2, 1, 2, 4, 1, 3);
  const std::string csv = region_csv(grid);
  std::istringstream lines(csv);
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "M,N,class,p_witness");
  int rows = 0;
  bool saw_improper = false;
  bool saw_feasible = false;
  while (std::getline(lines, line)) {
    ++rows;
    if (line == "2,1,improper,") {
      saw_improper = true;
    }
    if (line == "4,3,feasible,0") {
      saw_feasible = true;
    }
  }
  CHECK(rows == 9);
  CHECK(saw_improper);
  CHECK(saw_feasible);
}

TEST_CASE("region SVG is deterministic and self-contained") {
  const RegionGrid grid = sweep_region(2, 2, 1, 2, 4, 1, 3);
  const std::string svg = region_svg(grid);
  CHECK(svg == region_svg(grid));
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("feasible") != std::string::npos);
  CHECK(svg.find("improper") != std::string::npos);
  size_t rects = 0;
  for (size_t pos = svg.find("<rect"); pos != std::string::npos;
       pos = svg.find("<rect", pos + 1)) {
    ++rects;
  }
  // 9 grid cells plus the legend swatches.
  CHECK(rects >= 15);
}
