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

#include "iafeas/classify.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "iafeas/jacobian.hpp"
#include "witness_json.hpp"

namespace iafeas {

DivisibleClassResult check_divisible_class(const NetworkConfig& config) {
  DivisibleClassResult result;
  const int d = config.cells[0].users[0].streams;
  for (const CellConfig& cell : config.cells) {
    for (const UserConfig& user : cell.users) {
      if (user.streams != d) {
        result.reason = "streams differ across users";
        return result;
      }
    }
  }
  for (const CellConfig& cell : config.cells) {
    if (cell.tx_antennas % d != 0) {
      result.reason = "tx antenna counts are not multiples of the stream count";
      return result;
    }
    for (const UserConfig& user : cell.users) {
      if (user.rx_antennas % d != 0) {
        result.reason =
            "rx antenna counts are not multiples of the stream count";
        return result;
      }
    }
  }
  result.applicable = true;

  const SeparabilityResult sep = check_separability(config);
  if (!sep.ok) {
    result.reason = "separability";
    result.separability_witness = sep.witness;
    return result;
  }

  NetworkConfig unit = config;
  for (CellConfig& cell : unit.cells) {
    cell.tx_antennas /= d;
    for (UserConfig& user : cell.users) {
      user.rx_antennas /= d;
      user.streams = 1;
    }
  }
  const MatchingProperResult match = check_proper_matching(unit);
  if (!match.ok) {
    result.reason = "unit-properness";
    try {
      const CountingResult structured = check_proper_structured(unit);
      if (structured.ok) {
        throw std::logic_error(
            "matching and counting properness verdicts disagree");
      }
      result.unit_counting_witness = structured.witness;
    } catch (const LimitError&) {
      result.unit_deficiency_witness = match.witness;
    }
    return result;
  }
  result.feasible = true;
  return result;
}

bool symmetric_proper(int G, int K, int M, int N, int d) {
  return static_cast<long long>(M) + N >=
         (static_cast<long long>(G) * K + 1) * d;
}

std::optional<int> symmetric_split_witness(int G, int K, int M, int N,
                                           int d) {
  for (int p = 0; p <= (G - 1) * K; ++p) {
    const long long m_need = static_cast<long long>(K + p) * d;
    const long long n_need =
        (static_cast<long long>(G - 1) * K + 1 - p) * static_cast<long long>(d);
    if (M >= m_need && N >= n_need) {
      return p;
    }
  }
  return std::nullopt;
}

int symmetric_cluster_case(int G, int K, int M, int N, int d) {
  if (G < 2) {
    return 0;
  }
  if (M < static_cast<long long>(K) * d || N < d ||
      !symmetric_proper(G, K, M, N, d)) {
    return 0;
  }
  const long long case1_lhs =
      std::max<long long>(M, static_cast<long long>(G - 1) * K * N);
  const long long case1_rhs = static_cast<long long>(G) * K * d;
  if (case1_lhs < case1_rhs) {
    return 1;
  }
  const long long case2_lhs =
      std::max<long long>(static_cast<long long>(G - 1) * M, N);
  const long long case2_rhs =
      (static_cast<long long>(G - 1) * K + 1) * static_cast<long long>(d);
  if (case2_lhs < case2_rhs) {
    return 2;
  }
  return 0;
}

bool permutation_jacobian_excluded(const NetworkConfig& config) {
  const CountSummary counts = derived_counts(config);
  if (counts.num_variables != counts.num_equations) {
    return false;
  }
  if (!check_separability(config).ok) {
    return false;
  }
  if (!check_proper_matching(config).ok) {
    return false;
  }

  const int G = config.num_cells();
  for (int i = 0; i < G; ++i) {
    long long total = 0;
    for (int j = 0; j < G; ++j) {
      if (j != i) {
        total += config.cell_streams(j);
      }
    }
    std::vector<char> reachable(static_cast<size_t>(total) + 1, 0);
    reachable[0] = 1;
    for (int j = 0; j < G; ++j) {
      if (j == i) {
        continue;
      }
      const long long dj = config.cell_streams(j);
      for (long long s = total - dj; s >= 0; --s) {
        if (reachable[s]) {
          reachable[s + dj] = 1;
        }
      }
    }
    for (const UserConfig& user : config.cells[i].users) {
      const long long surplus = user.rx_antennas - user.streams;
      if (surplus > 0 && surplus <= total && !reachable[surplus]) {
        return true;
      }
    }
  }
  return false;
}

NetworkConfig lift_ic_to_ibc(const NetworkConfig& config) {
  NetworkConfig out;
  for (const CellConfig& cell : config.cells) {
    if (cell.users.size() != 1) {
      throw ConfigError("point-to-point lift needs exactly one user per cell");
    }
    const UserConfig& user = cell.users[0];
    if (user.rx_antennas < user.streams) {
      throw ConfigError("point-to-point lift needs rx_antennas >= streams");
    }
    CellConfig lifted;
    lifted.tx_antennas = cell.tx_antennas;
    lifted.users.assign(
        user.streams,
        UserConfig{user.rx_antennas - user.streams + 1, 1});
    out.cells.push_back(std::move(lifted));
  }
  validate_config(out);
  return out;
}

FeasibilityVerdict classify(const NetworkConfig& config) {
  FeasibilityVerdict verdict;

  const SeparabilityResult sep = check_separability(config);
  if (!sep.ok) {
    verdict.cls = FeasibilityClass::Improper;
    verdict.reason = "separability";
    verdict.separability_witness = sep.witness;
    return verdict;
  }

  const MatchingProperResult match = check_proper_matching(config);
  if (!match.ok) {
    verdict.cls = FeasibilityClass::Improper;
    verdict.reason = "counting";
    try {
      const CountingResult structured = check_proper_structured(config);
      if (structured.ok) {
        throw std::logic_error(
            "matching and counting properness verdicts disagree");
      }
      verdict.counting_witness = structured.witness;
    } catch (const LimitError&) {
      verdict.deficiency_witness = match.witness;
    }
    return verdict;
  }

  try {
    const ClusterResult cluster = check_irreducible(config);
    if (!cluster.ok) {
      verdict.cls = FeasibilityClass::ProperInfeasible;
      verdict.reason = "cluster";
      verdict.cluster_witness = cluster.witness;
      if (const std::optional<SymmetricShape> s = symmetric_shape(config)) {
        verdict.case_label =
            symmetric_cluster_case(s->G, s->K, s->M, s->N, s->d);
      }
      return verdict;
    }
  } catch (const LimitError&) {
    // Cluster status unknown; a positive construction below may still
    // settle feasibility, otherwise the verdict stays unknown.
  }

  std::optional<int> p;
  if (const std::optional<SymmetricShape> s = symmetric_shape(config)) {
    p = symmetric_split_witness(s->G, s->K, s->M, s->N, s->d);
  }

  const DivisibleClassResult divisible = check_divisible_class(config);
  if (divisible.applicable && divisible.feasible) {
    verdict.cls = FeasibilityClass::Feasible;
    verdict.reason = "divisible-class";
    verdict.p = p;
    return verdict;
  }
  if (p) {
    verdict.cls = FeasibilityClass::Feasible;
    verdict.reason = "split-witness";
    verdict.p = p;
    return verdict;
  }

  verdict.cls = FeasibilityClass::ProperUnknown;
  verdict.reason = "outside-known-results";
  return verdict;
}

std::string verdict_class_string(const FeasibilityVerdict& verdict) {
  switch (verdict.cls) {
    case FeasibilityClass::Improper:
      return "improper";
    case FeasibilityClass::ProperInfeasible:
      if (verdict.case_label == 1) {
        return "proper_infeasible_case1";
      }
      if (verdict.case_label == 2) {
        return "proper_infeasible_case2";
      }
      return "proper_infeasible";
    case FeasibilityClass::Feasible:
      return "feasible";
    case FeasibilityClass::ProperUnknown:
      return "unknown";
  }
  return "unknown";
}

std::string verdict_json(const FeasibilityVerdict& verdict) {
  nlohmann::ordered_json out;
  out["class"] = verdict_class_string(verdict);
  out["reason"] = verdict.reason;
  out["case"] = verdict.case_label == 0
                    ? nlohmann::ordered_json(nullptr)
                    : nlohmann::ordered_json(verdict.case_label);
  out["p"] = verdict.p ? nlohmann::ordered_json(*verdict.p)
                       : nlohmann::ordered_json(nullptr);
  if (verdict.separability_witness) {
    out["witness"] = detail::to_json(*verdict.separability_witness);
  } else if (verdict.counting_witness) {
    out["witness"] = detail::to_json(*verdict.counting_witness);
  } else if (verdict.deficiency_witness) {
    out["witness"] = detail::to_json(*verdict.deficiency_witness);
  } else if (verdict.cluster_witness) {
    out["witness"] = detail::to_json(*verdict.cluster_witness);
  } else {
    out["witness"] = nullptr;
  }
  return out.dump();
}

RegionGrid sweep_region(int G, int K, int d, int m_min, int m_max, int n_min,
                        int n_max) {
  if (G < 1 || K < 1 || d < 1) {
    throw std::invalid_argument("sweep needs positive G, K, d");
  }
  if (m_min < 1 || n_min < 1 || m_min > m_max || n_min > n_max) {
    throw std::invalid_argument("sweep needs nonempty antenna ranges");
  }
  RegionGrid grid;
  grid.G = G;
  grid.K = K;
  grid.d = d;
  grid.m_min = m_min;
  grid.m_max = m_max;
  grid.n_min = n_min;
  grid.n_max = n_max;
  grid.cells.reserve(static_cast<size_t>(m_max - m_min + 1) *
                     static_cast<size_t>(n_max - n_min + 1));
  for (int M = m_min; M <= m_max; ++M) {
    for (int N = n_min; N <= n_max; ++N) {
      RegionCell cell;
      cell.M = M;
      cell.N = N;
      cell.verdict = classify(symmetric_config(G, K, M, N, d));
      grid.cells.push_back(std::move(cell));
    }
  }
  return grid;
}

std::string region_csv(const RegionGrid& grid) {
  std::ostringstream out;
  out << "M,N,class,p_witness\n";
  for (const RegionCell& cell : grid.cells) {
    out << cell.M << ',' << cell.N << ','
        << verdict_class_string(cell.verdict) << ',';
    if (cell.verdict.cls == FeasibilityClass::Feasible && cell.verdict.p) {
      out << *cell.verdict.p;
    }
    out << '\n';
  }
  return out.str();
}

namespace {

const char* class_color(const std::string& cls) {
  if (cls == "improper") {
    return "#9e9e9e";
  }
  if (cls == "proper_infeasible_case1") {
    return "#b71c1c";
  }
  if (cls == "proper_infeasible_case2") {
    return "#ef9a9a";
  }
  if (cls == "proper_infeasible") {
    return "#e53935";
  }
  if (cls == "feasible") {
    return "#2e7d32";
  }
  return "#fdd835";
}

int label_step(int count) {
  if (count <= 30) {
    return 1;
  }
  if (count <= 60) {
    return 2;
  }
  return 5;
}

}  // namespace

std::string region_svg(const RegionGrid& grid) {
  constexpr int kCell = 16;
  constexpr int kLeft = 44;
  constexpr int kTop = 16;
  constexpr int kRight = 16;
  constexpr int kAxis = 28;
  constexpr int kLegendRow = 18;

  static const char* kClasses[] = {
      "feasible",       "proper_infeasible_case1", "proper_infeasible_case2",
      "proper_infeasible", "improper",             "unknown"};

  const int m_count = grid.m_max - grid.m_min + 1;
  const int n_count = grid.n_max - grid.n_min + 1;
  const int plot_w = m_count * kCell;
  const int plot_h = n_count * kCell;
  const int legend_h = 6 * kLegendRow + 8;
  const int width = kLeft + plot_w + kRight;
  const int height = kTop + plot_h + kAxis + legend_h;

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
      << height << "\">\n";
  out << "<rect width=\"" << width << "\" height=\"" << height
      << "\" fill=\"#ffffff\"/>\n";
  out << "<g font-family=\"sans-serif\" font-size=\"10\" fill=\"#212121\">\n";

  for (const RegionCell& cell : grid.cells) {
    const std::string cls = verdict_class_string(cell.verdict);
    const int x = kLeft + (cell.M - grid.m_min) * kCell;
    const int y = kTop + (grid.n_max - cell.N) * kCell;
    out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << kCell
        << "\" height=\"" << kCell << "\" fill=\"" << class_color(cls)
        << "\" stroke=\"#ffffff\" stroke-width=\"1\"><title>M=" << cell.M
        << " N=" << cell.N << " " << cls;
    if (cell.verdict.cls == FeasibilityClass::Feasible && cell.verdict.p) {
      out << " p=" << *cell.verdict.p;
    }
    out << "</title></rect>\n";
  }

  const int m_step = label_step(m_count);
  for (int M = grid.m_min; M <= grid.m_max; M += m_step) {
    const int x = kLeft + (M - grid.m_min) * kCell + kCell / 2;
    out << "<text x=\"" << x << "\" y=\"" << kTop + plot_h + 12
        << "\" text-anchor=\"middle\">" << M << "</text>\n";
  }
  const int n_step = label_step(n_count);
  for (int N = grid.n_min; N <= grid.n_max; N += n_step) {
    const int y = kTop + (grid.n_max - N) * kCell + kCell / 2 + 3;
    out << "<text x=\"" << kLeft - 6 << "\" y=\"" << y
        << "\" text-anchor=\"end\">" << N << "</text>\n";
  }
  out << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\""
      << kTop + plot_h + 24 << "\" text-anchor=\"middle\">M</text>\n";
  out << "<text x=\"" << 12 << "\" y=\"" << kTop + plot_h / 2
      << "\" text-anchor=\"middle\">N</text>\n";

  int legend_y = kTop + plot_h + kAxis + 8;
  for (const char* cls : kClasses) {
    out << "<rect x=\"" << kLeft << "\" y=\"" << legend_y - 9
        << "\" width=\"12\" height=\"12\" fill=\"" << class_color(cls)
        << "\" stroke=\"#bdbdbd\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << kLeft + 18 << "\" y=\"" << legend_y + 1 << "\">"
        << cls << "</text>\n";
    legend_y += kLegendRow;
  }

  out << "</g>\n</svg>\n";
  return out.str();
}

}  // namespace iafeas
