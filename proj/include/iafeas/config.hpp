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
#include <stdexcept>
#include <string>
#include <vector>

namespace iafeas {

// One mobile station: it receives `streams` spatial streams from the base
// station of its own cell through `rx_antennas` receive antennas.
struct UserConfig {
  int rx_antennas = 0;
  int streams = 0;
  bool operator==(const UserConfig&) const = default;
};

// One cell: a base station with `tx_antennas` transmit antennas serving the
// listed users via linear precoding.
struct CellConfig {
  int tx_antennas = 0;
  std::vector<UserConfig> users;
  bool operator==(const CellConfig&) const = default;
};

// A downlink cellular network in which every base station interferes with
// the users of every other cell.
struct NetworkConfig {
  std::vector<CellConfig> cells;

  int num_cells() const { return static_cast<int>(cells.size()); }
  int num_users(int cell) const {
    return static_cast<int>(cells[cell].users.size());
  }
  // Total streams sent by cell i.
  int cell_streams(int cell) const;
  int total_streams() const;

  bool operator==(const NetworkConfig&) const = default;
};

// Detected when every cell has the same antenna count and user list shape.
struct SymmetricShape {
  int G = 0;  // cells
  int K = 0;  // users per cell
  int M = 0;  // tx antennas per cell
  int N = 0;  // rx antennas per user
  int d = 0;  // streams per user
  bool operator==(const SymmetricShape&) const = default;
};

// Aggregate sizes of the zero-forcing equation system behind a config:
// tx_variables counts the free entries of all precoder tails,
// rx_variables the free entries of all combiner tails, and num_equations
// the scalar cross-cell interference constraints.
struct CountSummary {
  std::vector<int> cell_streams;
  int total_streams = 0;
  long long tx_variables = 0;
  long long rx_variables = 0;
  long long num_variables = 0;
  long long num_equations = 0;
  std::optional<SymmetricShape> symmetric;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Builds the fully expanded config for a symmetric network.
NetworkConfig symmetric_config(int G, int K, int M, int N, int d);

// Throws ConfigError unless all dimensions are positive and within bounds.
void validate_config(const NetworkConfig& config);

// Parses either the explicit {"cells":[...]} schema or the shorthand
// {"symmetric":{"G":..,"K":..,"M":..,"N":..,"d":..}}. Throws ConfigError on
// malformed input.
NetworkConfig parse_config(const std::string& json_text);

// Reads and parses a config file. Throws ConfigError.
NetworkConfig load_config(const std::string& path);

// Canonical serialization ({"cells":[...]}); parse_config(serialize_config(c))
// reproduces c exactly.
std::string serialize_config(const NetworkConfig& config);

std::optional<SymmetricShape> symmetric_shape(const NetworkConfig& config);

CountSummary derived_counts(const NetworkConfig& config);

}  // namespace iafeas
