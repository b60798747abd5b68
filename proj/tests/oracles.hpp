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

// Reference implementations the tests trust instead of the library under
// test: a plain augmenting-path matcher, an exhaustive marriage-condition
// scan, and exact integer rank over a prime field. Deliberately naive.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <vector>

namespace oracles {

// Kuhn's algorithm, O(V*E).
inline int matching_size(int n_left, int n_right,
                         const std::vector<std::vector<int>>& adj) {
  std::vector<int> match_right(n_right, -1);
  std::vector<char> visited(n_right, 0);

  struct Augment {
    const std::vector<std::vector<int>>& adj;
    std::vector<int>& match_right;
    std::vector<char>& visited;
    bool operator()(int u) const {
      for (int v : adj[u]) {
        if (visited[v]) {
          continue;
        }
        visited[v] = 1;
        if (match_right[v] < 0 || (*this)(match_right[v])) {
          match_right[v] = u;
          return true;
        }
      }
      return false;
    }
  } augment{adj, match_right, visited};

  int size = 0;
  for (int u = 0; u < n_left; ++u) {
    std::fill(visited.begin(), visited.end(), 0);
    if (augment(u)) {
      ++size;
    }
  }
  return size;
}

// Largest |S| - |N(S)| over every subset S of the left side. Zero means the
// marriage condition holds. Only for n_left <= 20.
inline long long max_deficiency(int n_left, int n_right,
                                const std::vector<std::vector<int>>& adj) {
  long long worst = 0;
  std::vector<char> seen(n_right);
  for (unsigned mask = 1; mask < (1u << n_left); ++mask) {
    std::fill(seen.begin(), seen.end(), 0);
    long long size = 0;
    long long neighborhood = 0;
    for (int u = 0; u < n_left; ++u) {
      if (!((mask >> u) & 1u)) {
        continue;
      }
      ++size;
      for (int v : adj[u]) {
        if (!seen[v]) {
          seen[v] = 1;
          ++neighborhood;
        }
      }
    }
    worst = std::max(worst, size - neighborhood);
  }
  return worst;
}

// Exact rank of an integer matrix over GF(p), p = 2^61 - 1. Never larger
// than the rational rank, so a full mod-p rank proves full rational rank.
inline int rank_mod_p(const Eigen::MatrixXd& m) {
  constexpr std::uint64_t P = 2305843009213693951ULL;
  auto mulmod = [](std::uint64_t a, std::uint64_t b) -> std::uint64_t {
    return static_cast<std::uint64_t>(
        static_cast<unsigned __int128>(a) * b % P);
  };
  auto powmod = [&](std::uint64_t base, std::uint64_t exp) {
    std::uint64_t acc = 1;
    while (exp != 0) {
      if (exp & 1ULL) {
        acc = mulmod(acc, base);
      }
      base = mulmod(base, base);
      exp >>= 1;
    }
    return acc;
  };

  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  std::vector<std::vector<std::uint64_t>> a(rows,
                                            std::vector<std::uint64_t>(cols));
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const long long v = std::llround(m(r, c));
      const long long rem = v % static_cast<long long>(P);
      a[r][c] =
          static_cast<std::uint64_t>(rem < 0 ? rem + static_cast<long long>(P)
                                             : rem);
    }
  }

  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r) {
      if (a[r][c] != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) {
      continue;
    }
    std::swap(a[rank], a[pivot]);
    const std::uint64_t inv = powmod(a[rank][c], P - 2);
    for (int r = rank + 1; r < rows; ++r) {
      if (a[r][c] == 0) {
        continue;
      }
      const std::uint64_t factor = mulmod(a[r][c], inv);
      for (int cc = c; cc < cols; ++cc) {
        const std::uint64_t sub = mulmod(factor, a[rank][cc]);
        a[r][cc] = a[r][cc] >= sub ? a[r][cc] - sub : a[r][cc] + P - sub;
      }
    }
    ++rank;
  }
  return rank;
}

inline long long symmetric_variables(int G, int K, int M, int N, int d) {
  return static_cast<long long>(G) *
         ((static_cast<long long>(M) - static_cast<long long>(K) * d) * K * d +
          static_cast<long long>(K) * (N - d) * d);
}

inline long long symmetric_equations(int G, int K, int d) {
  const long long kd = static_cast<long long>(K) * d;
  return static_cast<long long>(G) * (G - 1) * kd * kd;
}

}  // namespace oracles
