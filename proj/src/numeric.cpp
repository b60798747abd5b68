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

#include "iafeas/numeric.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

namespace iafeas {

namespace {

// Fixed Gaussian sampling on top of the raw generator, so draws do not
// depend on the standard library's distribution implementation.
class ComplexGaussian {
 public:
  explicit ComplexGaussian(std::uint64_t seed) : rng_(seed) {}

  std::complex<double> operator()() {
    const double u1 = 1.0 - unit();  // (0, 1]
    const double u2 = unit();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    // Two independent N(0,1) draws give one unit-variance complex sample.
    return {radius * std::cos(angle) * M_SQRT1_2,
            radius * std::sin(angle) * M_SQRT1_2};
  }

  Eigen::MatrixXcd matrix(int rows, int cols) {
    Eigen::MatrixXcd m(rows, cols);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        m(r, c) = (*this)();
      }
    }
    return m;
  }

 private:
  double unit() {  // [0, 1) with 53 random bits
    return static_cast<double>(rng_() >> 11) * 0x1p-53;
  }

  std::mt19937_64 rng_;
};

Eigen::MatrixXcd orthonormal_columns(ComplexGaussian& gaussian, int rows,
                                     int cols) {
  const Eigen::MatrixXcd g = gaussian.matrix(rows, cols);
  const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(rows, cols);
}

// Eigenvectors of the count smallest eigenvalues of a Hermitian matrix.
Eigen::MatrixXcd least_eigenvectors(const Eigen::MatrixXcd& hermitian,
                                    int count) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian);
  return solver.eigenvectors().leftCols(count);
}

IASolution random_solution(const NetworkConfig& config,
                           ComplexGaussian& gaussian) {
  IASolution s;
  s.tx.resize(config.num_cells());
  s.rx.resize(config.num_cells());
  for (int j = 0; j < config.num_cells(); ++j) {
    const CellConfig& cell = config.cells[j];
    s.tx[j].reserve(cell.users.size());
    s.rx[j].reserve(cell.users.size());
    for (const UserConfig& user : cell.users) {
      s.tx[j].push_back(
          orthonormal_columns(gaussian, cell.tx_antennas, user.streams));
      s.rx[j].push_back(
          orthonormal_columns(gaussian, user.rx_antennas, user.streams));
    }
  }
  return s;
}

long long cross_stream_weight(const NetworkConfig& config) {
  long long weight = 0;
  for (int i = 0; i < config.num_cells(); ++i) {
    for (int k = 0; k < config.num_users(i); ++k) {
      const long long di = config.cells[i].users[k].streams;
      for (int j = 0; j < config.num_cells(); ++j) {
        for (int l = 0; l < config.num_users(j); ++l) {
          if (i == j && k == l) {
            continue;
          }
          weight += di * config.cells[j].users[l].streams;
        }
      }
    }
  }
  return weight;
}

}  // namespace

ChannelSet sample_channels(const NetworkConfig& config, std::uint64_t seed) {
  ComplexGaussian gaussian(seed);
  ChannelSet set;
  set.channel.resize(config.num_cells());
  for (int i = 0; i < config.num_cells(); ++i) {
    set.channel[i].resize(config.num_users(i));
    for (int k = 0; k < config.num_users(i); ++k) {
      set.channel[i][k].reserve(config.num_cells());
      for (int j = 0; j < config.num_cells(); ++j) {
        set.channel[i][k].push_back(gaussian.matrix(
            config.cells[i].users[k].rx_antennas,
            config.cells[j].tx_antennas));
      }
    }
  }
  return set;
}

double interference_leakage(const NetworkConfig& config,
                            const ChannelSet& channels,
                            const IASolution& solution) {
  const long long weight = cross_stream_weight(config);
  if (weight == 0) {
    return 0.0;
  }
  double sum = 0.0;
  for (int i = 0; i < config.num_cells(); ++i) {
    for (int k = 0; k < config.num_users(i); ++k) {
      const Eigen::MatrixXcd& u = solution.rx[i][k];
      for (int j = 0; j < config.num_cells(); ++j) {
        const Eigen::MatrixXcd& h = channels.channel[i][k][j];
        for (int l = 0; l < config.num_users(j); ++l) {
          if (i == j && k == l) {
            continue;
          }
          sum += (u.adjoint() * h * solution.tx[j][l]).squaredNorm();
        }
      }
    }
  }
  return sum / static_cast<double>(weight);
}

AlternatingResult alternating_min(const NetworkConfig& config,
                                  const ChannelSet& channels,
                                  const AlternatingOptions& options) {
  if (options.max_iters < 0 || options.restarts < 1) {
    throw std::invalid_argument("alternating_min needs restarts >= 1");
  }

  AlternatingResult best;
  bool have_best = false;

  for (int restart = 0; restart < options.restarts; ++restart) {
    ComplexGaussian gaussian(options.seed + static_cast<std::uint64_t>(restart));
    IASolution solution = random_solution(config, gaussian);

    std::vector<double> trace;
    trace.reserve(1 + 2 * static_cast<size_t>(options.max_iters));
    double leakage = interference_leakage(config, channels, solution);
    trace.push_back(leakage);
    bool converged = leakage <= options.eps;

    for (int iter = 0; iter < options.max_iters && !converged; ++iter) {
      // Combiner half-step: each receiver takes the least-interference
      // subspace of what all foreign precoders currently leak into it.
      for (int i = 0; i < config.num_cells(); ++i) {
        for (int k = 0; k < config.num_users(i); ++k) {
          const UserConfig& user = config.cells[i].users[k];
          Eigen::MatrixXcd cov = Eigen::MatrixXcd::Zero(user.rx_antennas,
                                                        user.rx_antennas);
          for (int j = 0; j < config.num_cells(); ++j) {
            const Eigen::MatrixXcd& h = channels.channel[i][k][j];
            for (int l = 0; l < config.num_users(j); ++l) {
              if (i == j && k == l) {
                continue;
              }
              const Eigen::MatrixXcd hv = h * solution.tx[j][l];
              cov += hv * hv.adjoint();
            }
          }
          solution.rx[i][k] = least_eigenvectors(cov, user.streams);
        }
      }
      leakage = interference_leakage(config, channels, solution);
      trace.push_back(leakage);
      if (leakage <= options.eps) {
        converged = true;
        break;
      }

      // Precoder half-step on the reciprocal network.
      for (int j = 0; j < config.num_cells(); ++j) {
        for (int l = 0; l < config.num_users(j); ++l) {
          const int tx_antennas = config.cells[j].tx_antennas;
          Eigen::MatrixXcd cov =
              Eigen::MatrixXcd::Zero(tx_antennas, tx_antennas);
          for (int i = 0; i < config.num_cells(); ++i) {
            for (int k = 0; k < config.num_users(i); ++k) {
              if (i == j && k == l) {
                continue;
              }
              const Eigen::MatrixXcd hu =
                  channels.channel[i][k][j].adjoint() * solution.rx[i][k];
              cov += hu * hu.adjoint();
            }
          }
          solution.tx[j][l] =
              least_eigenvectors(cov, config.cells[j].users[l].streams);
        }
      }
      leakage = interference_leakage(config, channels, solution);
      trace.push_back(leakage);
      converged = leakage <= options.eps;
    }

    AlternatingResult run;
    run.solution = std::move(solution);
    run.final_leakage = leakage;
    run.converged = converged;
    run.half_iterations = static_cast<int>(trace.size()) - 1;
    run.restart_index = restart;
    run.trace = std::move(trace);

    // Leakage alone can converge onto a solution whose direct link is
    // degenerate, so a converged restart that also keeps stream rank
    // outranks one that merely converged.
    const bool run_clean =
        converged &&
        rank_condition(config, channels, run.solution, options.tol_rank);
    const bool best_clean =
        have_best && best.converged &&
        rank_condition(config, channels, best.solution, options.tol_rank);
    const bool better =
        !have_best || (run_clean && !best_clean) ||
        (run_clean == best_clean &&
         ((converged && !best.converged) ||
          (converged == best.converged && leakage < best.final_leakage)));
    if (better) {
      std::vector<std::vector<double>> keep = std::move(best.all_traces);
      best = std::move(run);
      best.all_traces = std::move(keep);
      have_best = true;
      best.all_traces.push_back(best.trace);
    } else {
      best.all_traces.push_back(std::move(run.trace));
    }
    if (run_clean) {
      break;
    }
  }
  return best;
}

bool rank_condition(const NetworkConfig& config, const ChannelSet& channels,
                    const IASolution& solution, double tol) {
  for (int i = 0; i < config.num_cells(); ++i) {
    for (int k = 0; k < config.num_users(i); ++k) {
      const int d = config.cells[i].users[k].streams;
      const Eigen::MatrixXcd effective = solution.rx[i][k].adjoint() *
                                         channels.channel[i][k][i] *
                                         solution.tx[i][k];
      const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(effective);
      if (svd.singularValues()(d - 1) <= tol) {
        return false;
      }
    }
  }
  return true;
}

EmpiricalReport empirical_feasibility(const NetworkConfig& config, int trials,
                                      const AlternatingOptions& options) {
  if (trials < 1) {
    throw std::invalid_argument("empirical_feasibility needs trials >= 1");
  }
  EmpiricalReport report;
  int successes = 0;
  bool all_stuck = true;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t trial_seed = options.seed + static_cast<std::uint64_t>(t);
    const ChannelSet channels = sample_channels(config, trial_seed);
    AlternatingOptions trial_options = options;
    trial_options.seed = trial_seed;
    const AlternatingResult result =
        alternating_min(config, channels, trial_options);

    TrialSummary summary;
    summary.seed = trial_seed;
    summary.final_leakage = result.final_leakage;
    summary.converged = result.converged;
    summary.trace = result.trace;
    summary.rank_ok = result.converged &&
                      rank_condition(config, channels, result.solution,
                                     options.tol_rank);
    if (summary.converged && summary.rank_ok) {
      ++successes;
    }
    if (summary.final_leakage < 100.0 * options.eps) {
      all_stuck = false;
    }
    report.trials.push_back(summary);
  }
  const int needed = (trials + 1) / 2;
  if (successes >= needed) {
    report.verdict = EmpiricalVerdict::Feasible;
  } else if (all_stuck) {
    report.verdict = EmpiricalVerdict::Infeasible;
  } else {
    report.verdict = EmpiricalVerdict::Inconclusive;
  }
  return report;
}

}  // namespace iafeas
