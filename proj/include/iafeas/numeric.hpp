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

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "iafeas/config.hpp"

namespace iafeas {

// channel[i][k][j]: matrix from the cell-j transmitter to user k of cell i,
// rx_antennas(i,k) rows by tx_antennas(j) columns.
struct ChannelSet {
  std::vector<std::vector<std::vector<Eigen::MatrixXcd>>> channel;
};

// Circularly symmetric unit-variance complex Gaussian entries, reproducible
// for a given seed: one generator, receivers in cell/user order, then
// transmitter cells, entries row by row.
ChannelSet sample_channels(const NetworkConfig& config, std::uint64_t seed);

struct IASolution {
  // tx[j][l]: precoder of user l in cell j, tx_antennas(j) x streams(j,l).
  std::vector<std::vector<Eigen::MatrixXcd>> tx;
  // rx[i][k]: combiner of user k in cell i, rx_antennas(i,k) x streams(i,k).
  std::vector<std::vector<Eigen::MatrixXcd>> rx;
};

// Sum of squared interference seen through the combiners, over every
// (receiver, foreign precoder) pair, normalized by the total stream-product
// count of those pairs. Zero when the network has a single user.
double interference_leakage(const NetworkConfig& config,
                            const ChannelSet& channels,
                            const IASolution& solution);

struct AlternatingOptions {
  int max_iters = 5000;  // full iterations per restart
  double eps = 1e-9;     // stop once leakage drops this low
  int restarts = 5;
  std::uint64_t seed = 0;
  double tol_rank = 1e-6;
};

struct AlternatingResult {
  IASolution solution;
  // Leakage after each half-iteration (combiner or precoder update);
  // trace[0] is the leakage of the random starting point.
  std::vector<double> trace;
  double final_leakage = 0.0;
  bool converged = false;
  int half_iterations = 0;
  int restart_index = 0;
  std::vector<std::vector<double>> all_traces;  // one per restart run
};

// Minimizes leakage by alternating exact per-user updates: each combiner
// (then each precoder) is set to the least-eigenvalue eigenvectors of its
// interference covariance, so the leakage never increases between
// half-iterations. Restarts stop at the first run that converges with
// full direct-link rank; the result prefers such a run, then any
// converged run, then the lowest final leakage.
AlternatingResult alternating_min(const NetworkConfig& config,
                                  const ChannelSet& channels,
                                  const AlternatingOptions& options = {});

// True when every user's effective direct-link matrix keeps full stream
// rank: its smallest singular value exceeds tol.
bool rank_condition(const NetworkConfig& config, const ChannelSet& channels,
                    const IASolution& solution, double tol);

enum class EmpiricalVerdict { Feasible, Infeasible, Inconclusive };

struct TrialSummary {
  std::uint64_t seed = 0;
  double final_leakage = 0.0;
  bool converged = false;
  bool rank_ok = false;
  std::vector<double> trace;  // from the restart the trial reported
};

struct EmpiricalReport {
  EmpiricalVerdict verdict = EmpiricalVerdict::Inconclusive;
  std::vector<TrialSummary> trials;
};

// Runs independent channel draws (trial t uses seed+t). Feasible when at
// least half the trials converge with full stream rank; infeasible when
// every trial stalls at least two orders of magnitude above eps.
EmpiricalReport empirical_feasibility(const NetworkConfig& config, int trials,
                                      const AlternatingOptions& options = {});

}  // namespace iafeas
