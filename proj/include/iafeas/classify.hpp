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

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "iafeas/conditions.hpp"
#include "iafeas/config.hpp"

namespace iafeas {

enum class FeasibilityClass {
  Improper,
  ProperInfeasible,
  Feasible,
  ProperUnknown,
};

// Verdict precedence: a violated necessary condition always wins over a
// feasibility construction, and a construction wins over "unknown".
struct FeasibilityVerdict {
  FeasibilityClass cls = FeasibilityClass::ProperUnknown;
  // One of: separability, counting, cluster, divisible-class,
  // split-witness, outside-known-results.
  std::string reason;
  // 1 or 2 when a symmetric cluster violation matches one of the two
  // closed-form shapes, 0 otherwise.
  int case_label = 0;
  // Antenna split index for symmetric feasible configurations.
  std::optional<int> p;
  std::optional<SeparabilityWitness> separability_witness;
  std::optional<CountingWitness> counting_witness;
  std::optional<DeficiencyWitness> deficiency_witness;
  std::optional<ClusterWitness> cluster_witness;
};

// Decision for configurations where every user carries the same number of
// streams d and all antenna counts are multiples of d: feasibility reduces
// to separability plus properness of the d-divided configuration.
struct DivisibleClassResult {
  bool applicable = false;
  // Why the reduction does not apply, or which sub-check failed.
  std::string reason;
  bool feasible = false;
  std::optional<SeparabilityWitness> separability_witness;
  std::optional<CountingWitness> unit_counting_witness;
  std::optional<DeficiencyWitness> unit_deficiency_witness;
};

DivisibleClassResult check_divisible_class(const NetworkConfig& config);

// Closed-form properness for symmetric configurations; valid under
// M >= K*d and N >= d.
bool symmetric_proper(int G, int K, int M, int N, int d);

// Smallest p with M >= (K+p)d and N >= ((G-1)K+1-p)d, if any. Such a split
// certifies feasibility of the symmetric configuration.
std::optional<int> symmetric_split_witness(int G, int K, int M, int N, int d);

// 1 or 2 when the symmetric configuration is proper by the closed form yet
// violates the one-cell/rest or rest/one-user cluster bound (1 preferred on
// ties), 0 otherwise.
int symmetric_cluster_case(int G, int K, int M, int N, int d);

// True when square systems of this configuration admit no equation-to-
// variable assignment whose diagonal blocks could be completed one
// receiver at a time: some user's surplus antenna count cannot be written
// as a sum of interfering cells' stream counts. This rules out one proof
// device, not feasibility itself.
bool permutation_jacobian_excluded(const NetworkConfig& config);

// Rewrites a network of single-user cells with multiple streams into the
// equivalent multi-user form: a cell with N antennas and S streams becomes
// S single-stream users with N-S+1 antennas each.
NetworkConfig lift_ic_to_ibc(const NetworkConfig& config);

FeasibilityVerdict classify(const NetworkConfig& config);

// improper | proper_infeasible[_case1|_case2] | feasible | unknown
std::string verdict_class_string(const FeasibilityVerdict& verdict);
std::string verdict_json(const FeasibilityVerdict& verdict);

struct RegionCell {
  int M = 0;
  int N = 0;
  FeasibilityVerdict verdict;
};

struct RegionGrid {
  int G = 0;
  int K = 0;
  int d = 0;
  int m_min = 0;
  int m_max = 0;
  int n_min = 0;
  int n_max = 0;
  std::vector<RegionCell> cells;  // M ascending, then N ascending
};

RegionGrid sweep_region(int G, int K, int d, int m_min, int m_max, int n_min,
                        int n_max);

// Header M,N,class,p_witness; one row per grid cell in grid order.
std::string region_csv(const RegionGrid& grid);

// Standalone heatmap of the grid, M on the horizontal axis.
std::string region_svg(const RegionGrid& grid);

}  // namespace iafeas
