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

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "iafeas/config.hpp"

namespace iafeas {

class LimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Scalar interference constraint: entry (row, col) of the residual block for
// receiver user (rx_cell, rx_user) hit by stream block (tx_cell, tx_stream).
// All indices 0-based; row indexes the receiver dimension (combiner column),
// col the transmit dimension (precoder column).
struct EquationIndex {
  int rx_cell = 0;
  int rx_user = 0;
  int tx_cell = 0;
  int tx_stream = 0;
  int row = 0;
  int col = 0;
  bool operator==(const EquationIndex&) const = default;
};

// Free scalar unknown of the zero-forcing system. Tx variables are entries
// (inner=t, outer=c) of the precoder tail of stream block (cell, member);
// Rx variables entries (inner=s, outer=r) of the combiner tail of user
// (cell, member).
struct VariableIndex {
  enum class Kind { Tx, Rx };
  Kind kind = Kind::Tx;
  int cell = 0;
  int member = 0;
  int inner = 0;
  int outer = 0;
  bool operator==(const VariableIndex&) const = default;
};

// Scalar equation/variable incidence of the linearized alignment system.
// Equation (i,k,j,l,r,c) touches the tx variables of column c of stream
// block (j,l) and the rx variables of column r of user (i,k)'s combiner.
// Equations are ordered lexicographically by (j, l, i, k, c, r); variables
// list every tx entry ordered by (j, l, c, t) followed by every rx entry
// ordered by (i, k, s, r).
struct BipartiteSystem {
  NetworkConfig config;
  std::vector<EquationIndex> equations;
  std::vector<VariableIndex> variables;
  int tx_variable_count = 0;
  std::vector<std::vector<int>> eq_vars;

  long long edge_count() const;
};

BipartiteSystem build_bipartite(const NetworkConfig& config);

struct Matching {
  std::vector<int> eq_to_var;  // -1 when unmatched
  std::vector<int> var_to_eq;  // -1 when unmatched
  int size = 0;
};

// Hopcroft-Karp with deterministic traversal order.
Matching maximum_matching(const BipartiteSystem& system);

// Equation set violating the marriage condition, grown by alternating paths
// from every unmatched equation. |N(S)| = |S| - deficiency.
// Requires an unsaturated maximum matching.
struct DeficiencyWitness {
  std::vector<int> equations;
  long long neighborhood = 0;
  long long deficiency = 0;
};
DeficiencyWitness deficiency_witness(const BipartiteSystem& system,
                                     const Matching& matching);

// Restriction of the system to matched variables only. Keeps equation order;
// variable ids are re-indexed (kept_variables maps new -> old). The carried
// matching is perfect on the trimmed system.
struct TrimmedSystem {
  BipartiteSystem system;
  std::vector<int> kept_variables;
  Matching matching;
};
TrimmedSystem trim_to_square(const BipartiteSystem& system,
                             const Matching& matching);

// Dense Jacobian of the alignment residual at the anti-diagonal channel
// point, with bookkeeping for structure tests. values(r, c) pairs
// rows[r] with cols[c]; cols[0..tx_cols) are tx variables.
struct JacobianMatrix {
  Eigen::MatrixXd values;
  std::vector<EquationIndex> rows;
  std::vector<VariableIndex> cols;
  int tx_cols = 0;
};

// Single-stream construction: combiner-side entries replicate the perfect
// matching as a partial permutation; precoder-side blocks share one
// Vandermonde panel per transmit cell (nodes 1,2,3,... indexed by the
// interfered user order), replicated across the cell's stream blocks.
// Throws LimitError when the trimmed system exceeds max_dim, and
// std::invalid_argument when a stream count exceeds 1 or no saturating
// matching exists.
JacobianMatrix construct_jacobian_d1(const NetworkConfig& config,
                                     int max_dim = 4096);

// Value and pattern lift: out = base kron I_{d*d}.
Eigen::MatrixXd lift_kronecker(const Eigen::MatrixXd& base, int d);

// Singular values >= max(rows, cols) * sigma_max * machine_eps * tol_factor
// count toward the rank.
long long numeric_rank(const Eigen::MatrixXd& m, double tol_factor = 100.0);

// Constructive full-rank certificate for networks where every user carries
// d streams and all antenna counts are divisible by d: the unit-stream
// reduction is built, matched, trimmed, constructed, lifted by kron I_{d*d},
// and its numeric rank compared against the interference equation count.
struct FeasibilityCertificate {
  bool applicable = false;
  std::string reason;  // set when not applicable or when matching fails
  int divisor = 1;     // common stream count d
  long long L_e = 0;
  long long L_v_kept = 0;
  long long rank = 0;
  bool pass = false;
  // Perfect matching on the unit-stream system: (equation id, variable id).
  std::vector<std::pair<int, int>> matching;
};

FeasibilityCertificate certify_feasibility(const NetworkConfig& config,
                                           double tol_factor = 100.0);

// {"L_e":..,"L_v_kept":..,"rank":..,"pass":..,"matching":[[e,v],...]}
std::string certificate_json(const FeasibilityCertificate& cert);

}  // namespace iafeas
