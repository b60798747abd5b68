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

#include <json.hpp>

#include "iafeas/conditions.hpp"
#include "iafeas/jacobian.hpp"

namespace iafeas::detail {

inline nlohmann::ordered_json to_json(const SeparabilityWitness& w) {
  return {{"kind", "separability"},
          {"cell", w.cell},
          {"user", w.user},
          {"tx_slack", w.tx_slack},
          {"rx_slack", w.rx_slack}};
}

inline nlohmann::ordered_json rx_users_json(
    const std::vector<std::pair<int, std::vector<int>>>& rx_users) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& [cell, users] : rx_users) {
    out.push_back({cell, users});
  }
  return out;
}

inline nlohmann::ordered_json to_json(const CountingWitness& w) {
  nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
  for (const auto& [i, j] : w.pairs) {
    pairs.push_back({i, j});
  }
  return {{"kind", "counting"},
          {"pairs", pairs},
          {"tx_cells", w.tx_cells},
          {"rx_users", rx_users_json(w.rx_users)},
          {"lhs", w.lhs},
          {"rhs", w.rhs}};
}

inline nlohmann::ordered_json to_json(const DeficiencyWitness& w) {
  return {{"kind", "deficiency"},
          {"equations", w.equations},
          {"neighborhood", w.neighborhood},
          {"deficiency", w.deficiency}};
}

inline nlohmann::ordered_json to_json(const ClusterWitness& w) {
  return {{"kind", "cluster"},
          {"tx_cells", w.tx_cells},
          {"rx_users", rx_users_json(w.rx_users)},
          {"tx_antennas", w.tx_antennas},
          {"rx_antennas", w.rx_antennas},
          {"rhs", w.rhs}};
}

}  // namespace iafeas::detail
