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
#include <utility>
#include <vector>

#include "iafeas/config.hpp"
#include "iafeas/jacobian.hpp"

namespace iafeas {

// Necessary conditions for a zero-forcing alignment solution to exist. Each
// check returns ok plus, on failure, the first violated inequality in a
// fixed canonical enumeration order so callers can re-derive the numbers.

struct SeparabilityWitness {
  int cell = 0;
  int user = 0;
  int tx_slack = 0;  // M_i - d_i
  int rx_slack = 0;  // N_ik - d_ik
};

struct SeparabilityResult {
  bool ok = true;
  std::optional<SeparabilityWitness> witness;
};

// A violated variable-counting inequality: over the chosen interference
// pairs, the free variables of the named tx cells and rx users cannot cover
// the interference equations those pairs generate.
struct CountingWitness {
  std::vector<std::pair<int, int>> pairs;  // (rx cell i, tx cell j), sorted
  std::vector<int> tx_cells;               // distinct transmitters in pairs
  // Receiver cells with the user subset counted for each, sorted by cell.
  std::vector<std::pair<int, std::vector<int>>> rx_users;
  long long lhs = 0;
  long long rhs = 0;
};

struct CountingResult {
  bool ok = true;
  std::optional<CountingWitness> witness;
};

struct MatchingProperResult {
  bool ok = true;
  std::optional<DeficiencyWitness> witness;
};

// A violated two-cluster antenna bound: the named tx cells and rx users need
// more combined antenna headroom on one of the two sides than available.
struct ClusterWitness {
  std::vector<int> tx_cells;  // cluster A
  std::vector<std::pair<int, std::vector<int>>> rx_users;  // cluster B
  long long tx_antennas = 0;  // sum of M_j over A
  long long rx_antennas = 0;  // sum of N_ik over B
  long long rhs = 0;          // total streams of both clusters
};

struct ClusterResult {
  bool ok = true;
  std::optional<ClusterWitness> witness;
};

// Can an interference path exist that no counting argument removes? Per
// base station: its antenna count covers some other-cell user group's
// receive antennas. Per user: its antennas cover some other-cell tx group.
struct ExistenceFlags {
  std::vector<bool> bs_side;
  std::vector<std::vector<bool>> user_side;
};

SeparabilityResult check_separability(const NetworkConfig& config);

// Exhaustive counting check over interference-pair subsets and per-receiver
// user subsets. Throws LimitError beyond the enumeration guard
// (more than 4 cells or more than 2^20 subset combinations).
CountingResult check_proper_structured(const NetworkConfig& config);

// Equivalent check at scalar granularity via bipartite matching; scales to
// configurations the structured enumeration cannot reach.
MatchingProperResult check_proper_matching(const NetworkConfig& config);

// Two-cluster check over disjoint nonempty cell sets with per-receiver user
// subsets. Throws LimitError beyond the enumeration guard.
ClusterResult check_irreducible(const NetworkConfig& config);

ExistenceFlags irreducible_existence(const NetworkConfig& config);

// Recompute both sides of a witnessed inequality from the config alone.
std::pair<long long, long long> evaluate_counting_witness(
    const NetworkConfig& config, const CountingWitness& witness);
std::pair<long long, long long> evaluate_cluster_witness(
    const NetworkConfig& config, const ClusterWitness& witness);

struct NecessaryReport {
  SeparabilityResult separability;
  MatchingProperResult proper;
  // Cross-check of the matching verdict, present within the enumeration
  // guard. A verdict mismatch raises std::logic_error.
  std::optional<CountingResult> proper_structured;
  // Absent when the cluster enumeration guard is exceeded.
  std::optional<ClusterResult> irreducible;
  // False when an evaluated check fails; true when all three were evaluated
  // and hold; nullopt when undetermined.
  std::optional<bool> overall;
};

NecessaryReport necessary_report(const NetworkConfig& config);
std::string necessary_report_json(const NetworkConfig& config);

}  // namespace iafeas
