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

#include "iafeas/jacobian.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace iafeas {

namespace {

int tail_height_tx(const NetworkConfig& config, int j) {
  return std::max(0, config.cells[j].tx_antennas - config.cell_streams(j));
}

int tail_height_rx(const UserConfig& user) {
  return std::max(0, user.rx_antennas - user.streams);
}

}  // namespace

long long BipartiteSystem::edge_count() const {
  long long total = 0;
  for (const std::vector<int>& vars : eq_vars) total += vars.size();
  return total;
}

BipartiteSystem build_bipartite(const NetworkConfig& config) {
  validate_config(config);
  BipartiteSystem sys;
  sys.config = config;
  const int G = config.num_cells();

  // Variable layout: tx blocks by (j, l, c, t), then rx blocks by (i, k, s, r).
  std::vector<std::vector<int>> tx_offset(G), rx_offset(G);
  int next = 0;
  for (int j = 0; j < G; ++j) {
    const int height = tail_height_tx(config, j);
    tx_offset[j].resize(config.num_users(j));
    for (int l = 0; l < config.num_users(j); ++l) {
      tx_offset[j][l] = next;
      const int width = config.cells[j].users[l].streams;
      for (int c = 0; c < width; ++c) {
        for (int t = 0; t < height; ++t) {
          sys.variables.push_back(
              {VariableIndex::Kind::Tx, j, l, t, c});
        }
      }
      next += height * width;
    }
  }
  sys.tx_variable_count = next;
  for (int i = 0; i < G; ++i) {
    rx_offset[i].resize(config.num_users(i));
    for (int k = 0; k < config.num_users(i); ++k) {
      rx_offset[i][k] = next;
      const UserConfig& user = config.cells[i].users[k];
      const int height = tail_height_rx(user);
      for (int s = 0; s < height; ++s) {
        for (int r = 0; r < user.streams; ++r) {
          sys.variables.push_back(
              {VariableIndex::Kind::Rx, i, k, s, r});
        }
      }
      next += height * user.streams;
    }
  }

  for (int j = 0; j < G; ++j) {
    const int tx_height = tail_height_tx(config, j);
    for (int l = 0; l < config.num_users(j); ++l) {
      const int width = config.cells[j].users[l].streams;
      for (int i = 0; i < G; ++i) {
        if (i == j) continue;
        for (int k = 0; k < config.num_users(i); ++k) {
          const UserConfig& user = config.cells[i].users[k];
          const int rx_height = tail_height_rx(user);
          for (int c = 0; c < width; ++c) {
            for (int r = 0; r < user.streams; ++r) {
              sys.equations.push_back({i, k, j, l, r, c});
              std::vector<int> vars;
              vars.reserve(static_cast<size_t>(tx_height) + rx_height);
              for (int t = 0; t < tx_height; ++t) {
                vars.push_back(tx_offset[j][l] + c * tx_height + t);
              }
              for (int s = 0; s < rx_height; ++s) {
                vars.push_back(rx_offset[i][k] + s * user.streams + r);
              }
              sys.eq_vars.push_back(std::move(vars));
            }
          }
        }
      }
    }
  }
  return sys;
}

Matching maximum_matching(const BipartiteSystem& sys) {
  const int nl = static_cast<int>(sys.equations.size());
  const int nr = static_cast<int>(sys.variables.size());
  constexpr int kInf = std::numeric_limits<int>::max();

  Matching m;
  m.eq_to_var.assign(nl, -1);
  m.var_to_eq.assign(nr, -1);

  std::vector<int> dist(nl, 0);
  std::vector<int> queue(nl, 0);

  auto bfs = [&]() -> bool {
    int head = 0, tail = 0;
    for (int u = 0; u < nl; ++u) {
      if (m.eq_to_var[u] < 0) {
        dist[u] = 0;
        queue[tail++] = u;
      } else {
        dist[u] = kInf;
      }
    }
    bool reachable_free = false;
    while (head < tail) {
      const int u = queue[head++];
      for (int v : sys.eq_vars[u]) {
        const int w = m.var_to_eq[v];
        if (w < 0) {
          reachable_free = true;
        } else if (dist[w] == kInf) {
          dist[w] = dist[u] + 1;
          queue[tail++] = w;
        }
      }
    }
    return reachable_free;
  };

  // Iterative DFS over the layered graph; frames track the adjacency cursor.
  std::vector<int> frame_eq(nl + 1), frame_pos(nl + 1);
  auto dfs = [&](int root) -> bool {
    int top = 0;
    frame_eq[0] = root;
    frame_pos[0] = 0;
    while (top >= 0) {
      const int u = frame_eq[top];
      bool advanced = false;
      while (frame_pos[top] < static_cast<int>(sys.eq_vars[u].size())) {
        const int v = sys.eq_vars[u][frame_pos[top]++];
        const int w = m.var_to_eq[v];
        if (w < 0) {
          // Augment along the stacked path.
          int var = v;
          for (int s = top; s >= 0; --s) {
            const int e = frame_eq[s];
            const int prev = m.eq_to_var[e];
            m.eq_to_var[e] = var;
            m.var_to_eq[var] = e;
            var = prev;
          }
          return true;
        }
        if (dist[w] == dist[u] + 1) {
          ++top;
          frame_eq[top] = w;
          frame_pos[top] = 0;
          advanced = true;
          break;
        }
      }
      if (!advanced) {
        dist[u] = kInf;
        --top;
      }
    }
    return false;
  };

  while (bfs()) {
    for (int u = 0; u < nl; ++u) {
      if (m.eq_to_var[u] < 0 && dfs(u)) ++m.size;
    }
  }
  return m;
}

DeficiencyWitness deficiency_witness(const BipartiteSystem& sys,
                                     const Matching& m) {
  const int nl = static_cast<int>(sys.equations.size());
  const int nr = static_cast<int>(sys.variables.size());
  if (m.size >= nl) {
    throw std::invalid_argument("matching saturates the equations");
  }
  std::vector<char> eq_in(nl, 0), var_in(nr, 0);
  std::vector<int> queue;
  queue.reserve(nl);
  for (int u = 0; u < nl; ++u) {
    if (m.eq_to_var[u] < 0) {
      eq_in[u] = 1;
      queue.push_back(u);
    }
  }
  for (size_t head = 0; head < queue.size(); ++head) {
    const int u = queue[head];
    for (int v : sys.eq_vars[u]) {
      if (var_in[v]) continue;
      var_in[v] = 1;
      const int w = m.var_to_eq[v];
      // With a maximum matching every neighbor of the reachable set is
      // matched; follow its partner.
      if (w >= 0 && !eq_in[w]) {
        eq_in[w] = 1;
        queue.push_back(w);
      }
    }
  }
  DeficiencyWitness witness;
  for (int u = 0; u < nl; ++u) {
    if (eq_in[u]) witness.equations.push_back(u);
  }
  for (int v = 0; v < nr; ++v) {
    if (var_in[v]) ++witness.neighborhood;
  }
  witness.deficiency =
      static_cast<long long>(witness.equations.size()) - witness.neighborhood;
  return witness;
}

TrimmedSystem trim_to_square(const BipartiteSystem& sys, const Matching& m) {
  if (m.size != static_cast<int>(sys.equations.size())) {
    throw std::invalid_argument(
        "trim_to_square needs a matching that saturates the equations");
  }
  TrimmedSystem out;
  std::vector<int> old_to_new(sys.variables.size(), -1);
  for (size_t v = 0; v < sys.variables.size(); ++v) {
    if (m.var_to_eq[v] >= 0) {
      old_to_new[v] = static_cast<int>(out.kept_variables.size());
      out.kept_variables.push_back(static_cast<int>(v));
    }
  }
  out.system.config = sys.config;
  out.system.equations = sys.equations;
  out.system.variables.reserve(out.kept_variables.size());
  int tx_kept = 0;
  for (int v : out.kept_variables) {
    out.system.variables.push_back(sys.variables[v]);
    if (sys.variables[v].kind == VariableIndex::Kind::Tx) ++tx_kept;
  }
  out.system.tx_variable_count = tx_kept;
  out.system.eq_vars.resize(sys.equations.size());
  for (size_t e = 0; e < sys.equations.size(); ++e) {
    for (int v : sys.eq_vars[e]) {
      if (old_to_new[v] >= 0) out.system.eq_vars[e].push_back(old_to_new[v]);
    }
  }
  out.matching.eq_to_var.resize(sys.equations.size());
  out.matching.var_to_eq.assign(out.kept_variables.size(), -1);
  for (size_t e = 0; e < sys.equations.size(); ++e) {
    const int v = old_to_new[m.eq_to_var[e]];
    out.matching.eq_to_var[e] = v;
    out.matching.var_to_eq[v] = static_cast<int>(e);
  }
  out.matching.size = m.size;
  return out;
}

JacobianMatrix construct_jacobian_d1(const NetworkConfig& config, int max_dim) {
  validate_config(config);
  const int G = config.num_cells();
  for (const CellConfig& cell : config.cells) {
    for (const UserConfig& user : cell.users) {
      if (user.streams != 1) {
        throw std::invalid_argument(
            "single-stream construction requires one stream per user");
      }
    }
  }

  BipartiteSystem sys = build_bipartite(config);
  if (static_cast<int>(sys.equations.size()) > max_dim) {
    throw LimitError("equation system exceeds the dense construction limit");
  }
  Matching m = maximum_matching(sys);
  if (m.size != static_cast<int>(sys.equations.size())) {
    const DeficiencyWitness w = deficiency_witness(sys, m);
    std::ostringstream msg;
    msg << "no saturating matching: " << w.equations.size()
        << " equations reach only " << w.neighborhood << " variables";
    throw std::invalid_argument(msg.str());
  }
  TrimmedSystem trimmed = trim_to_square(sys, m);

  const int n = static_cast<int>(trimmed.system.equations.size());
  JacobianMatrix jac;
  jac.values = Eigen::MatrixXd::Zero(n, n);
  jac.rows = trimmed.system.equations;
  jac.cols = trimmed.system.variables;
  jac.tx_cols = trimmed.system.tx_variable_count;

  // Row index of user (i,k) inside the shared panel of transmit cell j:
  // interfered users ordered by (i, k).
  std::vector<std::vector<std::vector<int>>> panel_row(
      G, std::vector<std::vector<int>>(G));
  for (int j = 0; j < G; ++j) {
    int rho = 0;
    for (int i = 0; i < G; ++i) {
      panel_row[j][i].assign(config.num_users(i), -1);
      if (i == j) continue;
      for (int k = 0; k < config.num_users(i); ++k) {
        panel_row[j][i][k] = rho++;
      }
    }
  }

  for (int e = 0; e < n; ++e) {
    const EquationIndex& eq = trimmed.system.equations[e];
    for (int v : trimmed.system.eq_vars[e]) {
      const VariableIndex& var = trimmed.system.variables[v];
      if (var.kind == VariableIndex::Kind::Tx) {
        // Shared panel value: node^power with the node fixed by the
        // interfered user and the power by the tail entry. Stream blocks of
        // the same cell replicate the panel exactly.
        const double node = panel_row[eq.tx_cell][eq.rx_cell][eq.rx_user] + 1;
        jac.values(e, v) = std::pow(node, var.inner);
      } else if (trimmed.matching.eq_to_var[e] == v) {
        jac.values(e, v) = 1.0;
      }
    }
  }
  return jac;
}

Eigen::MatrixXd lift_kronecker(const Eigen::MatrixXd& base, int d) {
  if (d < 1) throw std::invalid_argument("lift factor must be positive");
  const long long block = static_cast<long long>(d) * d;
  Eigen::MatrixXd out =
      Eigen::MatrixXd::Zero(base.rows() * block, base.cols() * block);
  for (Eigen::Index r = 0; r < base.rows(); ++r) {
    for (Eigen::Index c = 0; c < base.cols(); ++c) {
      const double v = base(r, c);
      if (v == 0.0) continue;
      for (long long b = 0; b < block; ++b) {
        out(r * block + b, c * block + b) = v;
      }
    }
  }
  return out;
}

long long numeric_rank(const Eigen::MatrixXd& m, double tol_factor) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double eps = std::numeric_limits<double>::epsilon();
  const double tol =
      static_cast<double>(std::max(m.rows(), m.cols())) * sv(0) * eps * tol_factor;
  long long rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol) ++rank;
  }
  return rank;
}

FeasibilityCertificate certify_feasibility(const NetworkConfig& config,
                                           double tol_factor) {
  validate_config(config);
  FeasibilityCertificate cert;

  int d = 0;
  for (const CellConfig& cell : config.cells) {
    for (const UserConfig& user : cell.users) {
      if (d == 0) {
        d = user.streams;
      } else if (user.streams != d) {
        cert.reason = "users carry different stream counts";
        return cert;
      }
    }
  }
  for (const CellConfig& cell : config.cells) {
    if (cell.tx_antennas % d != 0) {
      cert.reason = "tx antenna count not divisible by the stream count";
      return cert;
    }
    for (const UserConfig& user : cell.users) {
      if (user.rx_antennas % d != 0) {
        cert.reason = "rx antenna count not divisible by the stream count";
        return cert;
      }
    }
  }

  cert.applicable = true;
  cert.divisor = d;
  cert.L_e = derived_counts(config).num_equations;
  if (cert.L_e > 4096) {
    throw LimitError("certified system exceeds the dense construction limit");
  }

  NetworkConfig unit = config;
  for (CellConfig& cell : unit.cells) {
    cell.tx_antennas /= d;
    for (UserConfig& user : cell.users) {
      user.rx_antennas /= d;
      user.streams = 1;
    }
  }

  JacobianMatrix base;
  try {
    base = construct_jacobian_d1(unit);
  } catch (const std::invalid_argument& e) {
    cert.reason = e.what();
    cert.pass = false;
    return cert;
  }

  const BipartiteSystem unit_sys = build_bipartite(unit);
  const Matching unit_match = maximum_matching(unit_sys);
  for (size_t e = 0; e < unit_match.eq_to_var.size(); ++e) {
    cert.matching.emplace_back(static_cast<int>(e), unit_match.eq_to_var[e]);
  }

  const Eigen::MatrixXd lifted =
      d == 1 ? base.values : lift_kronecker(base.values, d);
  cert.L_v_kept = lifted.cols();
  cert.rank = numeric_rank(lifted, tol_factor);
  cert.pass = (cert.rank == cert.L_e);
  return cert;
}

std::string certificate_json(const FeasibilityCertificate& cert) {
  nlohmann::ordered_json doc;
  doc["L_e"] = cert.L_e;
  doc["L_v_kept"] = cert.L_v_kept;
  doc["rank"] = cert.rank;
  doc["pass"] = cert.pass;
  nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
  for (const auto& [e, v] : cert.matching) {
    pairs.push_back({e, v});
  }
  doc["matching"] = std::move(pairs);
  return doc.dump();
}

}  // namespace iafeas
