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

#include "iafeas/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace iafeas {

namespace {

// Keeps every derived count comfortably inside long long.
constexpr int kMaxDimension = 1 << 20;
constexpr int kMaxCells = 1 << 10;
constexpr int kMaxUsersPerCell = 1 << 10;

int require_positive_int(const nlohmann::json& node, const char* what) {
  if (!node.is_number_integer()) {
    throw ConfigError(std::string(what) + " must be an integer");
  }
  const long long v = node.get<long long>();
  if (v < 1 || v > kMaxDimension) {
    throw ConfigError(std::string(what) + " out of range [1, " +
                      std::to_string(kMaxDimension) + "]");
  }
  return static_cast<int>(v);
}

}  // namespace

int NetworkConfig::cell_streams(int cell) const {
  int total = 0;
  for (const UserConfig& u : cells[cell].users) total += u.streams;
  return total;
}

int NetworkConfig::total_streams() const {
  int total = 0;
  for (int i = 0; i < num_cells(); ++i) total += cell_streams(i);
  return total;
}

NetworkConfig symmetric_config(int G, int K, int M, int N, int d) {
  NetworkConfig config;
  config.cells.assign(static_cast<size_t>(G),
                      CellConfig{M, std::vector<UserConfig>(
                                        static_cast<size_t>(K), UserConfig{N, d})});
  validate_config(config);
  return config;
}

void validate_config(const NetworkConfig& config) {
  if (config.cells.empty()) {
    throw ConfigError("config needs at least one cell");
  }
  if (config.cells.size() > kMaxCells) {
    throw ConfigError("too many cells");
  }
  for (size_t i = 0; i < config.cells.size(); ++i) {
    const CellConfig& cell = config.cells[i];
    if (cell.tx_antennas < 1 || cell.tx_antennas > kMaxDimension) {
      throw ConfigError("cell " + std::to_string(i) +
                        ": tx_antennas must be in [1, " +
                        std::to_string(kMaxDimension) + "]");
    }
    if (cell.users.empty()) {
      throw ConfigError("cell " + std::to_string(i) + " has no users");
    }
    if (cell.users.size() > kMaxUsersPerCell) {
      throw ConfigError("cell " + std::to_string(i) + " has too many users");
    }
    for (size_t k = 0; k < cell.users.size(); ++k) {
      const UserConfig& user = cell.users[k];
      if (user.rx_antennas < 1 || user.rx_antennas > kMaxDimension) {
        throw ConfigError("cell " + std::to_string(i) + " user " +
                          std::to_string(k) + ": rx_antennas must be in [1, " +
                          std::to_string(kMaxDimension) + "]");
      }
      if (user.streams < 1 || user.streams > kMaxDimension) {
        throw ConfigError("cell " + std::to_string(i) + " user " +
                          std::to_string(k) + ": streams must be in [1, " +
                          std::to_string(kMaxDimension) + "]");
      }
    }
  }
}

NetworkConfig parse_config(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ConfigError("config root must be an object");
  }

  if (doc.contains("symmetric")) {
    if (doc.contains("cells")) {
      throw ConfigError("config must use either \"cells\" or \"symmetric\", not both");
    }
    const nlohmann::json& sym = doc["symmetric"];
    if (!sym.is_object()) {
      throw ConfigError("\"symmetric\" must be an object");
    }
    for (const char* key : {"G", "K", "M", "N", "d"}) {
      if (!sym.contains(key)) {
        throw ConfigError(std::string("\"symmetric\" is missing \"") + key + "\"");
      }
    }
    const int G = require_positive_int(sym["G"], "G");
    const int K = require_positive_int(sym["K"], "K");
    const int M = require_positive_int(sym["M"], "M");
    const int N = require_positive_int(sym["N"], "N");
    const int d = require_positive_int(sym["d"], "d");
    return symmetric_config(G, K, M, N, d);
  }

  if (!doc.contains("cells")) {
    throw ConfigError("config is missing \"cells\"");
  }
  const nlohmann::json& cells = doc["cells"];
  if (!cells.is_array() || cells.empty()) {
    throw ConfigError("\"cells\" must be a non-empty array");
  }

  NetworkConfig config;
  config.cells.reserve(cells.size());
  for (size_t i = 0; i < cells.size(); ++i) {
    const nlohmann::json& cell = cells[i];
    if (!cell.is_object() || !cell.contains("tx_antennas") ||
        !cell.contains("users")) {
      throw ConfigError("cell " + std::to_string(i) +
                        " needs \"tx_antennas\" and \"users\"");
    }
    CellConfig out;
    out.tx_antennas = require_positive_int(cell["tx_antennas"], "tx_antennas");
    const nlohmann::json& users = cell["users"];
    if (!users.is_array() || users.empty()) {
      throw ConfigError("cell " + std::to_string(i) +
                        ": \"users\" must be a non-empty array");
    }
    out.users.reserve(users.size());
    for (size_t k = 0; k < users.size(); ++k) {
      const nlohmann::json& user = users[k];
      if (!user.is_object() || !user.contains("rx_antennas") ||
          !user.contains("streams")) {
        throw ConfigError("cell " + std::to_string(i) + " user " +
                          std::to_string(k) +
                          " needs \"rx_antennas\" and \"streams\"");
      }
      out.users.push_back(UserConfig{
          require_positive_int(user["rx_antennas"], "rx_antennas"),
          require_positive_int(user["streams"], "streams")});
    }
    config.cells.push_back(std::move(out));
  }
  validate_config(config);
  return config;
}

NetworkConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const NetworkConfig& config) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  for (const CellConfig& cell : config.cells) {
    nlohmann::ordered_json users = nlohmann::ordered_json::array();
    for (const UserConfig& user : cell.users) {
      users.push_back({{"rx_antennas", user.rx_antennas},
                       {"streams", user.streams}});
    }
    cells.push_back({{"tx_antennas", cell.tx_antennas},
                     {"users", std::move(users)}});
  }
  doc["cells"] = std::move(cells);
  return doc.dump();
}

std::optional<SymmetricShape> symmetric_shape(const NetworkConfig& config) {
  if (config.cells.empty()) return std::nullopt;
  const CellConfig& first = config.cells[0];
  if (first.users.empty()) return std::nullopt;
  const UserConfig& u0 = first.users[0];
  for (const CellConfig& cell : config.cells) {
    if (cell.tx_antennas != first.tx_antennas ||
        cell.users.size() != first.users.size()) {
      return std::nullopt;
    }
    for (const UserConfig& user : cell.users) {
      if (user != u0) return std::nullopt;
    }
  }
  return SymmetricShape{config.num_cells(), static_cast<int>(first.users.size()),
                        first.tx_antennas, u0.rx_antennas, u0.streams};
}

CountSummary derived_counts(const NetworkConfig& config) {
  CountSummary out;
  const int G = config.num_cells();
  out.cell_streams.resize(G);
  for (int i = 0; i < G; ++i) {
    out.cell_streams[i] = config.cell_streams(i);
    out.total_streams += out.cell_streams[i];
  }
  for (int j = 0; j < G; ++j) {
    const long long dj = out.cell_streams[j];
    out.tx_variables += (config.cells[j].tx_antennas - dj) * dj;
    for (const UserConfig& user : config.cells[j].users) {
      out.rx_variables +=
          static_cast<long long>(user.rx_antennas - user.streams) * user.streams;
    }
  }
  out.num_variables = out.tx_variables + out.rx_variables;
  for (int i = 0; i < G; ++i) {
    for (int j = 0; j < G; ++j) {
      if (i == j) continue;
      out.num_equations +=
          static_cast<long long>(out.cell_streams[i]) * out.cell_streams[j];
    }
  }
  out.symmetric = symmetric_shape(config);
  return out;
}

}  // namespace iafeas
