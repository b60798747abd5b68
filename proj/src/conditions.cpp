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

#include "iafeas/conditions.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "witness_json.hpp"

namespace iafeas {

namespace {

constexpr int kMaxEnumCells = 4;
constexpr unsigned long long kMaxEnumWork = 1ULL << 20;

long long clamped_tx_vars(const NetworkConfig& config, int j) {
  const long long slack = config.cells[j].tx_antennas - config.cell_streams(j);
  return std::max(0LL, slack) * config.cell_streams(j);
}

long long clamped_rx_vars(const NetworkConfig& config, int i, int k) {
  const UserConfig& u = config.cells[i].users[k];
  const long long slack = u.rx_antennas - u.streams;
  return std::max(0LL, slack) * u.streams;
}

unsigned long long sat_mul(unsigned long long a, unsigned long long b) {
  if (a != 0 && b > std::numeric_limits<unsigned long long>::max() / a) {
    return std::numeric_limits<unsigned long long>::max();
  }
  return a * b;
}

unsigned long long sat_add(unsigned long long a, unsigned long long b) {
  if (b > std::numeric_limits<unsigned long long>::max() - a) {
    return std::numeric_limits<unsigned long long>::max();
  }
  return a + b;
}

// Combinations of nonempty per-receiver user subsets for one receiver set.
unsigned long long subset_work(const NetworkConfig& config,
                               const std::vector<int>& receivers) {
  unsigned long long prod = 1;
  for (int i : receivers) {
    const int k = config.num_users(i);
    const unsigned long long options =
        k >= 63 ? std::numeric_limits<unsigned long long>::max()
                : (1ULL << k) - 1;
    prod = sat_mul(prod, options);
  }
  return prod;
}

std::vector<int> mask_to_users(unsigned mask) {
  std::vector<int> users;
  for (int k = 0; mask != 0; ++k, mask >>= 1) {
    if (mask & 1u) {
      users.push_back(k);
    }
  }
  return users;
}

// Advances the per-receiver subset odometer; the last receiver varies
// fastest. Returns false once every combination has been visited.
bool advance_odometer(std::vector<unsigned>& masks,
                      const std::vector<unsigned>& limits) {
  for (int pos = static_cast<int>(masks.size()) - 1; pos >= 0; --pos) {
    if (++masks[pos] < limits[pos]) {
      return true;
    }
    masks[pos] = 1;
  }
  return false;
}

}  // namespace

SeparabilityResult check_separability(const NetworkConfig& config) {
  for (int i = 0; i < config.num_cells(); ++i) {
    const int tx_slack = config.cells[i].tx_antennas - config.cell_streams(i);
    for (int k = 0; k < config.num_users(i); ++k) {
      const UserConfig& u = config.cells[i].users[k];
      const int rx_slack = u.rx_antennas - u.streams;
      if (tx_slack < 0 || rx_slack < 0) {
        return {false, SeparabilityWitness{i, k, tx_slack, rx_slack}};
      }
    }
  }
  return {true, std::nullopt};
}

CountingResult check_proper_structured(const NetworkConfig& config) {
  const int G = config.num_cells();
  if (G > kMaxEnumCells) {
    throw LimitError("counting enumeration limited to 4 cells, got " +
                     std::to_string(G));
  }

  std::vector<std::pair<int, int>> all_pairs;
  for (int i = 0; i < G; ++i) {
    for (int j = 0; j < G; ++j) {
      if (i != j) {
        all_pairs.emplace_back(i, j);
      }
    }
  }
  const int P = static_cast<int>(all_pairs.size());

  // Bound the total number of inequalities before enumerating any.
  unsigned long long work = 0;
  for (unsigned mask = 1; mask < (1u << P); ++mask) {
    std::vector<int> receivers;
    for (int b = 0; b < P; ++b) {
      if ((mask >> b) & 1u) {
        const int i = all_pairs[b].first;
        if (receivers.empty() || receivers.back() != i) {
          receivers.push_back(i);
        }
      }
    }
    work = sat_add(work, subset_work(config, receivers));
    if (work > kMaxEnumWork) {
      throw LimitError("counting enumeration exceeds the work limit");
    }
  }

  for (unsigned mask = 1; mask < (1u << P); ++mask) {
    std::vector<std::pair<int, int>> pairs;
    std::vector<int> receivers;
    std::vector<int> transmitters;
    for (int b = 0; b < P; ++b) {
      if ((mask >> b) & 1u) {
        pairs.push_back(all_pairs[b]);
        receivers.push_back(all_pairs[b].first);
        transmitters.push_back(all_pairs[b].second);
      }
    }
    std::sort(receivers.begin(), receivers.end());
    receivers.erase(std::unique(receivers.begin(), receivers.end()),
                    receivers.end());
    std::sort(transmitters.begin(), transmitters.end());
    transmitters.erase(std::unique(transmitters.begin(), transmitters.end()),
                       transmitters.end());

    long long tx_lhs = 0;
    for (int j : transmitters) {
      tx_lhs += clamped_tx_vars(config, j);
    }

    const int R = static_cast<int>(receivers.size());
    std::vector<unsigned> masks(R, 1);
    std::vector<unsigned> limits(R);
    for (int r = 0; r < R; ++r) {
      limits[r] = 1u << config.num_users(receivers[r]);
    }

    do {
      long long rx_lhs = 0;
      std::vector<long long> rx_streams(R, 0);
      for (int r = 0; r < R; ++r) {
        const int i = receivers[r];
        for (int k = 0; k < config.num_users(i); ++k) {
          if ((masks[r] >> k) & 1u) {
            rx_lhs += clamped_rx_vars(config, i, k);
            rx_streams[r] += config.cells[i].users[k].streams;
          }
        }
      }
      long long rhs = 0;
      for (const auto& [i, j] : pairs) {
        const int r = static_cast<int>(
            std::lower_bound(receivers.begin(), receivers.end(), i) -
            receivers.begin());
        rhs += static_cast<long long>(config.cell_streams(j)) * rx_streams[r];
      }
      if (tx_lhs + rx_lhs < rhs) {
        CountingWitness w;
        w.pairs = pairs;
        w.tx_cells = transmitters;
        for (int r = 0; r < R; ++r) {
          w.rx_users.emplace_back(receivers[r], mask_to_users(masks[r]));
        }
        w.lhs = tx_lhs + rx_lhs;
        w.rhs = rhs;
        return {false, std::move(w)};
      }
    } while (advance_odometer(masks, limits));
  }
  return {true, std::nullopt};
}

MatchingProperResult check_proper_matching(const NetworkConfig& config) {
  const BipartiteSystem sys = build_bipartite(config);
  const Matching matching = maximum_matching(sys);
  if (matching.size == static_cast<int>(sys.equations.size())) {
    return {true, std::nullopt};
  }
  return {false, deficiency_witness(sys, matching)};
}

namespace {

ClusterResult symmetric_cluster_scan(const NetworkConfig& config,
                                     const SymmetricShape& s) {
  for (int p = 1; p <= s.G - 1; ++p) {
    for (int q = 1; q <= (s.G - p) * s.K; ++q) {
      const long long tx = static_cast<long long>(p) * s.M;
      const long long rx = static_cast<long long>(q) * s.N;
      const long long rhs = static_cast<long long>(p) * s.K * s.d +
                            static_cast<long long>(q) * s.d;
      if (std::max(tx, rx) < rhs) {
        ClusterWitness w;
        for (int j = 0; j < p; ++j) {
          w.tx_cells.push_back(j);
        }
        int remaining = q;
        for (int i = p; i < s.G && remaining > 0; ++i) {
          std::vector<int> users;
          for (int k = 0; k < s.K && remaining > 0; ++k, --remaining) {
            users.push_back(k);
          }
          w.rx_users.emplace_back(i, std::move(users));
        }
        w.tx_antennas = tx;
        w.rx_antennas = rx;
        w.rhs = rhs;
        return {false, std::move(w)};
      }
    }
  }
  (void)config;
  return {true, std::nullopt};
}

}  // namespace

ClusterResult check_irreducible(const NetworkConfig& config) {
  const int G = config.num_cells();
  const std::optional<SymmetricShape> sym = symmetric_shape(config);
  if (G > kMaxEnumCells) {
    // All cells are interchangeable in a symmetric configuration, so only
    // the cluster sizes matter and a linear scan replaces the enumeration.
    if (sym) {
      return symmetric_cluster_scan(config, *sym);
    }
    throw LimitError("cluster enumeration limited to 4 cells, got " +
                     std::to_string(G));
  }

  unsigned long long work = 0;
  for (unsigned amask = 1; amask < (1u << G); ++amask) {
    for (unsigned bmask = 1; bmask < (1u << G); ++bmask) {
      if ((amask & bmask) != 0) {
        continue;
      }
      std::vector<int> receivers;
      for (int i = 0; i < G; ++i) {
        if ((bmask >> i) & 1u) {
          receivers.push_back(i);
        }
      }
      work = sat_add(work, subset_work(config, receivers));
      if (work > kMaxEnumWork) {
        if (sym) {
          return symmetric_cluster_scan(config, *sym);
        }
        throw LimitError("cluster enumeration exceeds the work limit");
      }
    }
  }

  for (unsigned amask = 1; amask < (1u << G); ++amask) {
    long long tx_antennas = 0;
    long long tx_streams = 0;
    std::vector<int> tx_cells;
    for (int j = 0; j < G; ++j) {
      if ((amask >> j) & 1u) {
        tx_cells.push_back(j);
        tx_antennas += config.cells[j].tx_antennas;
        tx_streams += config.cell_streams(j);
      }
    }
    for (unsigned bmask = 1; bmask < (1u << G); ++bmask) {
      if ((amask & bmask) != 0) {
        continue;
      }
      std::vector<int> receivers;
      for (int i = 0; i < G; ++i) {
        if ((bmask >> i) & 1u) {
          receivers.push_back(i);
        }
      }
      const int R = static_cast<int>(receivers.size());
      std::vector<unsigned> masks(R, 1);
      std::vector<unsigned> limits(R);
      for (int r = 0; r < R; ++r) {
        limits[r] = 1u << config.num_users(receivers[r]);
      }
      do {
        long long rx_antennas = 0;
        long long rx_streams = 0;
        for (int r = 0; r < R; ++r) {
          const int i = receivers[r];
          for (int k = 0; k < config.num_users(i); ++k) {
            if ((masks[r] >> k) & 1u) {
              rx_antennas += config.cells[i].users[k].rx_antennas;
              rx_streams += config.cells[i].users[k].streams;
            }
          }
        }
        const long long rhs = tx_streams + rx_streams;
        if (std::max(tx_antennas, rx_antennas) < rhs) {
          ClusterWitness w;
          w.tx_cells = tx_cells;
          for (int r = 0; r < R; ++r) {
            w.rx_users.emplace_back(receivers[r], mask_to_users(masks[r]));
          }
          w.tx_antennas = tx_antennas;
          w.rx_antennas = rx_antennas;
          w.rhs = rhs;
          return {false, std::move(w)};
        }
      } while (advance_odometer(masks, limits));
    }
  }
  return {true, std::nullopt};
}

ExistenceFlags irreducible_existence(const NetworkConfig& config) {
  const int G = config.num_cells();
  ExistenceFlags flags;
  flags.bs_side.resize(G, true);
  flags.user_side.resize(G);

  for (int j = 0; j < G; ++j) {
    int min_rx = std::numeric_limits<int>::max();
    for (int i = 0; i < G; ++i) {
      if (i == j) {
        continue;
      }
      for (const UserConfig& u : config.cells[i].users) {
        min_rx = std::min(min_rx, u.rx_antennas);
      }
    }
    if (min_rx != std::numeric_limits<int>::max()) {
      flags.bs_side[j] = config.cells[j].tx_antennas >= min_rx;
    }
  }

  for (int i = 0; i < G; ++i) {
    int min_tx = std::numeric_limits<int>::max();
    for (int j = 0; j < G; ++j) {
      if (j != i) {
        min_tx = std::min(min_tx, config.cells[j].tx_antennas);
      }
    }
    flags.user_side[i].resize(config.num_users(i), true);
    if (min_tx == std::numeric_limits<int>::max()) {
      continue;
    }
    for (int k = 0; k < config.num_users(i); ++k) {
      flags.user_side[i][k] = config.cells[i].users[k].rx_antennas >= min_tx;
    }
  }
  return flags;
}

std::pair<long long, long long> evaluate_counting_witness(
    const NetworkConfig& config, const CountingWitness& witness) {
  const int G = config.num_cells();
  auto user_set = [&](int cell) -> const std::vector<int>* {
    for (const auto& [i, users] : witness.rx_users) {
      if (i == cell) {
        return &users;
      }
    }
    return nullptr;
  };

  long long lhs = 0;
  for (int j : witness.tx_cells) {
    if (j < 0 || j >= G) {
      throw std::out_of_range("witness references tx cell " +
                              std::to_string(j));
    }
    lhs += clamped_tx_vars(config, j);
  }
  for (const auto& [i, users] : witness.rx_users) {
    if (i < 0 || i >= G) {
      throw std::out_of_range("witness references rx cell " +
                              std::to_string(i));
    }
    for (int k : users) {
      if (k < 0 || k >= config.num_users(i)) {
        throw std::out_of_range("witness references user " +
                                std::to_string(k));
      }
      lhs += clamped_rx_vars(config, i, k);
    }
  }

  long long rhs = 0;
  for (const auto& [i, j] : witness.pairs) {
    if (i < 0 || i >= G || j < 0 || j >= G || i == j) {
      throw std::out_of_range("witness holds an invalid interference pair");
    }
    const std::vector<int>* users = user_set(i);
    if (users == nullptr) {
      throw std::out_of_range("witness pair lacks a user subset for cell " +
                              std::to_string(i));
    }
    long long streams = 0;
    for (int k : *users) {
      streams += config.cells[i].users[k].streams;
    }
    rhs += static_cast<long long>(config.cell_streams(j)) * streams;
  }
  return {lhs, rhs};
}

std::pair<long long, long long> evaluate_cluster_witness(
    const NetworkConfig& config, const ClusterWitness& witness) {
  const int G = config.num_cells();
  long long tx_antennas = 0;
  long long rhs = 0;
  for (int j : witness.tx_cells) {
    if (j < 0 || j >= G) {
      throw std::out_of_range("witness references tx cell " +
                              std::to_string(j));
    }
    tx_antennas += config.cells[j].tx_antennas;
    rhs += config.cell_streams(j);
  }
  long long rx_antennas = 0;
  for (const auto& [i, users] : witness.rx_users) {
    if (i < 0 || i >= G) {
      throw std::out_of_range("witness references rx cell " +
                              std::to_string(i));
    }
    for (int j : witness.tx_cells) {
      if (j == i) {
        throw std::out_of_range("witness clusters overlap at cell " +
                                std::to_string(i));
      }
    }
    for (int k : users) {
      if (k < 0 || k >= config.num_users(i)) {
        throw std::out_of_range("witness references user " +
                                std::to_string(k));
      }
      rx_antennas += config.cells[i].users[k].rx_antennas;
      rhs += config.cells[i].users[k].streams;
    }
  }
  return {std::max(tx_antennas, rx_antennas), rhs};
}

NecessaryReport necessary_report(const NetworkConfig& config) {
  NecessaryReport report;
  report.separability = check_separability(config);
  report.proper = check_proper_matching(config);
  try {
    report.proper_structured = check_proper_structured(config);
    if (report.proper_structured->ok != report.proper.ok) {
      throw std::logic_error(
          "matching and counting properness verdicts disagree");
    }
  } catch (const LimitError&) {
  }
  try {
    report.irreducible = check_irreducible(config);
  } catch (const LimitError&) {
  }

  if (!report.separability.ok || !report.proper.ok ||
      (report.irreducible && !report.irreducible->ok)) {
    report.overall = false;
  } else if (report.irreducible) {
    report.overall = true;
  }
  return report;
}

std::string necessary_report_json(const NetworkConfig& config) {
  const NecessaryReport report = necessary_report(config);
  nlohmann::ordered_json out;

  nlohmann::ordered_json sep;
  sep["ok"] = report.separability.ok;
  sep["witness"] = report.separability.witness
                       ? detail::to_json(*report.separability.witness)
                       : nlohmann::ordered_json(nullptr);
  out["separability"] = sep;

  nlohmann::ordered_json proper;
  proper["ok"] = report.proper.ok;
  if (report.proper_structured && report.proper_structured->witness) {
    proper["witness"] = detail::to_json(*report.proper_structured->witness);
  } else if (report.proper.witness) {
    proper["witness"] = detail::to_json(*report.proper.witness);
  } else {
    proper["witness"] = nullptr;
  }
  out["proper"] = proper;

  nlohmann::ordered_json irr;
  if (report.irreducible) {
    irr["ok"] = report.irreducible->ok;
    irr["witness"] = report.irreducible->witness
                         ? detail::to_json(*report.irreducible->witness)
                         : nlohmann::ordered_json(nullptr);
  } else {
    irr["ok"] = nullptr;
    irr["witness"] = nullptr;
  }
  out["irreducible"] = irr;

  nlohmann::ordered_json overall;
  overall["ok"] = report.overall ? nlohmann::ordered_json(*report.overall)
                                 : nlohmann::ordered_json(nullptr);
  out["overall"] = overall;
  return out.dump();
}

}  // namespace iafeas
