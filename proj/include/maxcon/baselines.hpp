/*
 * Copyright 2026 The maxcon Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MAXCON_BASELINES_HPP_
#define MAXCON_BASELINES_HPP_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Dense>

#include "maxcon/convex.hpp"
#include "maxcon/errors.hpp"
#include "maxcon/fit_result.hpp"
#include "maxcon/residual_system.hpp"
#include "maxcon/rng.hpp"

namespace maxcon {

struct RansacConfig {
  double confidence = 0.99;  // rho
  int max_iterations = 10000;
  int min_sample_size = 0;  // groups per sample; 0 = enough groups for d rows
  std::uint64_t seed = 0;
  double time_budget_s = 0.0;  // > 0: run for this long instead of the
                               // adaptive stop (the harness's L-RANSAC mode)

  void validate() const {
    if (confidence <= 0 || confidence >= 1)
      throw std::invalid_argument("confidence must be in (0,1)");
    if (max_iterations < 1) throw std::invalid_argument("max_iterations >= 1");
  }
};

struct MlesacConfig {
  int iterations = 500;
  int em_steps = 10;
  double inlier_sigma = 0.0;  // 0: epsilon / 2
  double outlier_span = 0.0;  // 0: spread of the offsets plus 2 epsilon
  std::uint64_t seed = 0;

  void validate() const {
    if (iterations < 1) throw std::invalid_argument("iterations >= 1");
    if (em_steps < 1) throw std::invalid_argument("em_steps >= 1");
  }
};

/// Hypothesis count needed for confidence rho at inlier ratio w with samples
/// of `sample_size` groups: ceil(log(1-rho) / log(1-w^m)).
inline int ransac_required_iters(double rho, double inlier_ratio,
                                 int sample_size) {
  if (inlier_ratio >= 1.0) return 1;
  if (inlier_ratio <= 0.0) return std::numeric_limits<int>::max();
  const double success = std::pow(inlier_ratio, sample_size);
  if (success <= 0.0) return std::numeric_limits<int>::max();
  const double k = std::log1p(-rho) / std::log1p(-success);
  if (k >= static_cast<double>(std::numeric_limits<int>::max()))
    return std::numeric_limits<int>::max();
  return std::max(1, static_cast<int>(std::ceil(k)));
}

namespace detail {

inline int default_sample_groups(const ResidualSystem& system) {
  // Enough groups that their rows determine the d parameters: d groups for
  // one-row points, d/2 correspondences for the two-row homography groups.
  const double avg_rows =
      static_cast<double>(system.num_rows()) / system.size();
  return std::max(1, static_cast<int>(std::ceil(system.dim() / avg_rows)));
}

// Exact fit from the sampled groups' rows: rows are taken round-robin (first
// row of every group, then second rows, ...) until d are collected, and the
// square system is solved. Returns nothing for degenerate samples.
inline std::optional<Vec> minimal_fit(
    const ResidualSystem& system,
    const std::vector<std::vector<int>>& group_rows,
    const std::vector<int>& sample) {
  const int d = system.dim();
  Mat A(d, d);
  Vec b(d);
  int got = 0;
  for (size_t pass = 0; got < d; ++pass) {
    bool any = false;
    for (int g : sample) {
      if (pass >= group_rows[g].size()) continue;
      any = true;
      const int row = group_rows[g][pass];
      A.row(got) = system.coeffs.row(row);
      b[got] = system.offsets[row];
      if (++got == d) break;
    }
    if (!any) return std::nullopt;  // ran out of rows
  }
  Eigen::FullPivLU<Mat> lu(A);
  if (!lu.isInvertible()) return std::nullopt;
  Vec theta = lu.solve(b);
  if (!theta.allFinite()) return std::nullopt;
  return theta;
}

// Least-squares fit over all rows of the given groups.
inline std::optional<Vec> least_squares_fit(
    const ResidualSystem& system,
    const std::vector<std::vector<int>>& group_rows,
    const std::vector<int>& groups) {
  int rows = 0;
  for (int g : groups) rows += static_cast<int>(group_rows[g].size());
  if (rows < system.dim()) return std::nullopt;
  Mat A(rows, system.dim());
  Vec b(rows);
  int t = 0;
  for (int g : groups)
    for (int j : group_rows[g]) {
      A.row(t) = system.coeffs.row(j);
      b[t] = system.offsets[j];
      ++t;
    }
  Eigen::ColPivHouseholderQR<Mat> qr(A);
  if (qr.rank() < system.dim()) return std::nullopt;
  Vec theta = qr.solve(b);
  if (!theta.allFinite()) return std::nullopt;
  return theta;
}

inline double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace detail

/// Vanilla RANSAC with the adaptive hypothesis count. Deterministic for a
/// fixed seed (except in time-budget mode).
inline ConsensusResult ransac_fit(const ResidualSystem& system, double epsilon,
                                  const RansacConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  system.validate();
  cfg.validate();
  const int k = cfg.min_sample_size > 0 ? cfg.min_sample_size
                                        : detail::default_sample_groups(system);
  if (system.size() < k)
    throw std::invalid_argument("fewer groups than the minimal sample size");
  const auto group_rows = group_row_lists(system);
  Rng rng(derive_seed(cfg.seed, /*method=*/1));

  ConsensusResult best;
  best.count = -1;
  int required = std::numeric_limits<int>::max();
  bool any_valid = false;
  int iter = 0;
  for (; iter < cfg.max_iterations; ++iter) {
    if (cfg.time_budget_s > 0) {
      if (detail::elapsed_s(t0) >= cfg.time_budget_s && iter > 0) break;
    } else if (iter >= required) {
      break;
    }
    const auto sample = rng.sample_without_replacement(system.size(), k);
    const auto theta = detail::minimal_fit(system, group_rows, sample);
    if (!theta) continue;
    any_valid = true;
    const int count = consensus_count(system, *theta, epsilon);
    if (count > best.count) {
      best.count = count;
      best.theta = *theta;
      best.trace.iterations.push_back({0.0, 0.0, count, 0, 0.0});
      const double w = static_cast<double>(count) / system.size();
      required = ransac_required_iters(cfg.confidence, w, k);
    }
  }
  if (!any_valid) throw DegenerateDataError("all RANSAC samples degenerate");
  best.inliers = consensus(system, best.theta, epsilon);
  best.count = static_cast<int>(best.inliers.size());
  best.terminated_by = iter >= cfg.max_iterations ? Termination::kIterationLimit
                                                  : Termination::kTolerance;
  best.wall_time_s = detail::elapsed_s(t0);
  return best;
}

/// RANSAC with local optimization on every new best model: inner resamples of
/// the inlier set, least-squares refits with the threshold annealed from
/// 4*eps down to eps. Stopping rule is the vanilla one.
inline ConsensusResult lo_ransac_fit(const ResidualSystem& system,
                                     double epsilon,
                                     const RansacConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  system.validate();
  cfg.validate();
  const int k = cfg.min_sample_size > 0 ? cfg.min_sample_size
                                        : detail::default_sample_groups(system);
  if (system.size() < k)
    throw std::invalid_argument("fewer groups than the minimal sample size");
  const auto group_rows = group_row_lists(system);
  Rng rng(derive_seed(cfg.seed, /*method=*/2));

  constexpr int kInnerResamples = 10;
  constexpr int kAnnealSteps = 4;  // thresholds 4e, 3e, 2e, 1e

  ConsensusResult best;
  best.count = -1;
  int required = std::numeric_limits<int>::max();
  bool any_valid = false;
  int iter = 0;
  for (; iter < cfg.max_iterations && iter < required; ++iter) {
    const auto sample = rng.sample_without_replacement(system.size(), k);
    const auto theta = detail::minimal_fit(system, group_rows, sample);
    if (!theta) continue;
    any_valid = true;
    int count = consensus_count(system, *theta, epsilon);
    if (count <= best.count) continue;
    Vec refined = *theta;

    // Local optimization of the new best candidate.
    const std::vector<int> base = consensus(system, *theta, epsilon);
    const int sample_size =
        std::min(14, std::max(k, static_cast<int>(base.size()) / 2));
    for (int rep = 0; rep < kInnerResamples; ++rep) {
      if (static_cast<int>(base.size()) < sample_size) break;
      std::vector<int> subset;
      subset.reserve(sample_size);
      for (int idx : rng.sample_without_replacement(
               static_cast<int>(base.size()), sample_size))
        subset.push_back(base[idx]);
      auto cand = detail::least_squares_fit(system, group_rows, subset);
      if (!cand) continue;
      for (int m = kAnnealSteps; m >= 1; --m) {
        const auto inl = consensus(system, *cand, m * epsilon);
        auto next = detail::least_squares_fit(system, group_rows, inl);
        if (!next) break;
        cand = next;
      }
      const int cand_count = consensus_count(system, *cand, epsilon);
      if (cand_count > count) {
        count = cand_count;
        refined = *cand;
      }
    }

    if (count > best.count) {
      best.count = count;
      best.theta = refined;
      best.trace.iterations.push_back({0.0, 0.0, count, 0, 0.0});
      const double w = static_cast<double>(count) / system.size();
      required = ransac_required_iters(cfg.confidence, w, k);
    }
  }
  if (!any_valid) throw DegenerateDataError("all RANSAC samples degenerate");
  best.inliers = consensus(system, best.theta, epsilon);
  best.count = static_cast<int>(best.inliers.size());
  best.terminated_by = iter >= cfg.max_iterations ? Termination::kIterationLimit
                                                  : Termination::kTolerance;
  best.wall_time_s = detail::elapsed_s(t0);
  return best;
}

struct MixtureFit {
  double mixing = 0.5;  // inlier fraction estimate
  double nll = 0.0;
};

/// EM estimate of the inlier mixing coefficient for a Gaussian-inlier /
/// uniform-outlier residual mixture, plus the resulting negative
/// log-likelihood.
inline MixtureFit fit_residual_mixture(const Vec& residuals, double sigma,
                                       double span, int em_steps) {
  if (sigma <= 0 || span <= 0)
    throw std::invalid_argument("sigma and span must be positive");
  const double norm = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
  const Vec gauss =
      (residuals.array().square() / (-2.0 * sigma * sigma)).exp() * norm;
  const double uniform = 1.0 / span;
  MixtureFit fit;
  for (int step = 0; step < em_steps; ++step) {
    const Eigen::ArrayXd p_in = fit.mixing * gauss.array();
    const Eigen::ArrayXd denom = p_in + (1.0 - fit.mixing) * uniform + 1e-300;
    fit.mixing = (p_in / denom).mean();
  }
  fit.nll = -((fit.mixing * gauss.array() + (1.0 - fit.mixing) * uniform)
                  .max(1e-300)
                  .log())
                 .sum();
  return fit;
}

/// RANSAC-style sampling scored by mixture likelihood instead of consensus
/// size. Runs a fixed number of hypotheses; the reported consensus set is
/// re-counted at epsilon.
inline ConsensusResult mlesac_fit(const ResidualSystem& system, double epsilon,
                                  const MlesacConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  system.validate();
  cfg.validate();
  const int k = detail::default_sample_groups(system);
  if (system.size() < k)
    throw std::invalid_argument("fewer groups than the minimal sample size");
  const auto group_rows = group_row_lists(system);
  Rng rng(derive_seed(cfg.seed, /*method=*/3));

  const double sigma = cfg.inlier_sigma > 0 ? cfg.inlier_sigma : epsilon / 2;
  double span = cfg.outlier_span;
  if (span <= 0) {
    span = system.offsets.maxCoeff() - system.offsets.minCoeff() + 2 * epsilon;
    span = std::max(span, 10 * sigma);
  }

  ConsensusResult best;
  double best_nll = std::numeric_limits<double>::infinity();
  bool any_valid = false;
  for (int iter = 0; iter < cfg.iterations; ++iter) {
    const auto sample = rng.sample_without_replacement(system.size(), k);
    const auto theta = detail::minimal_fit(system, group_rows, sample);
    if (!theta) continue;
    any_valid = true;
    const Vec r = residuals(system, *theta);
    const MixtureFit fit = fit_residual_mixture(r, sigma, span, cfg.em_steps);
    if (fit.nll < best_nll) {
      best_nll = fit.nll;
      best.theta = *theta;
      best.trace.iterations.push_back(
          {0.0, fit.nll, consensus_count(system, *theta, epsilon), 0,
           fit.mixing});
    }
  }
  if (!any_valid) throw DegenerateDataError("all MLEsac samples degenerate");
  best.inliers = consensus(system, best.theta, epsilon);
  best.count = static_cast<int>(best.inliers.size());
  best.terminated_by = Termination::kTolerance;
  best.wall_time_s = detail::elapsed_s(t0);
  return best;
}

/// Outlier removal by repeated slack-l1 solves: groups with positive slack
/// are removed until the remaining set fits within epsilon. Consensus is
/// counted on the original system. Deterministic.
inline ConsensusResult iterative_l1_fit(const ResidualSystem& system,
                                        double epsilon,
                                        SolverTolerances tol = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  system.validate();
  ConsensusResult out;
  std::vector<int> remaining(system.size());
  std::iota(remaining.begin(), remaining.end(), 0);

  for (;;) {
    const ResidualSystem sub = subsystem(system, remaining);
    const SlackSolution sol = solve_slack_l1(sub, epsilon, tol);
    if (sol.status == SolveStatus::kInfeasibleNumerics)
      throw SolverError("slack l1 subproblem failed");
    if (sol.status == SolveStatus::kIterationLimit)
      throw SolverError("slack l1 subproblem hit the pivot cap");
    out.theta = sol.theta;
    std::vector<int> keep;
    keep.reserve(remaining.size());
    for (size_t i = 0; i < remaining.size(); ++i)
      if (sol.slacks[i] <= tol.feasibility_tol) keep.push_back(remaining[i]);
    out.trace.iterations.push_back(
        {0.0, sol.objective, consensus_count(system, sol.theta, epsilon),
         static_cast<int>(remaining.size() - keep.size()),
         sol.slacks.maxCoeff()});
    if (keep.size() == remaining.size()) break;  // all slacks zero
    if (keep.empty())
      throw DegenerateDataError("l1 removal discarded every point");
    remaining.swap(keep);
  }
  out.inliers = consensus(system, out.theta, epsilon);
  out.count = static_cast<int>(out.inliers.size());
  out.terminated_by = Termination::kTolerance;
  out.wall_time_s = detail::elapsed_s(t0);
  return out;
}

/// Chebyshev-based outlier removal: solve the minmax problem, stop once the
/// bound is within epsilon, otherwise drop every group attaining the max.
inline ConsensusResult iterative_linf_fit(const ResidualSystem& system,
                                          double epsilon,
                                          SolverTolerances tol = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  system.validate();
  ConsensusResult out;
  std::vector<int> remaining(system.size());
  std::iota(remaining.begin(), remaining.end(), 0);

  for (;;) {
    const MinMaxSolution mm = solve_minmax(system, remaining, tol);
    if (mm.status == SolveStatus::kInfeasibleNumerics)
      throw SolverError("minmax subproblem failed");
    if (mm.status == SolveStatus::kIterationLimit)
      throw SolverError("minmax subproblem hit the pivot cap");
    out.theta = mm.theta;
    out.trace.iterations.push_back(
        {0.0, mm.max_residual, consensus_count(system, mm.theta, epsilon), 0,
         mm.max_residual});
    if (mm.max_residual <= epsilon) break;
    const Vec r = residuals(system, mm.theta);
    const double cutoff =
        mm.max_residual - tol.feasibility_tol * (1.0 + mm.max_residual) - 1e-9;
    std::vector<int> keep;
    keep.reserve(remaining.size());
    for (int g : remaining)
      if (r[g] < cutoff) keep.push_back(g);
    // Once every survivor attains the max (the Chebyshev fit has d+1 active
    // groups, so this is the normal end state when the bound stays above
    // epsilon) there is nothing left to remove; keep the current fit.
    if (keep.empty()) break;
    remaining.swap(keep);
  }
  out.inliers = consensus(system, out.theta, epsilon);
  out.count = static_cast<int>(out.inliers.size());
  out.terminated_by = Termination::kTolerance;
  out.wall_time_s = detail::elapsed_s(t0);
  return out;
}

struct EnumerationLimits {
  double max_candidates = 2e6;  // guard on C(R, d) * (2^d + 1)
};

/// Exhaustive small-instance oracle: every optimal theta of a linear-residual
/// MaxCon instance lies at an intersection of d residual boundaries
/// r_j(theta) = +-eps (or anywhere inside the consensus region when it is
/// full-dimensional), so enumerating all d-subsets of rows with all boundary
/// sign patterns plus the exact-fit offsets finds a global optimum.
inline ConsensusResult exact_maxcon(const ResidualSystem& system,
                                    double epsilon,
                                    EnumerationLimits limits = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  system.validate();
  if (epsilon < 0) throw std::invalid_argument("epsilon must be >= 0");
  const int R = system.num_rows();
  const int d = system.dim();
  const int k = std::min(R, d);

  double subsets = 1.0;
  for (int i = 0; i < k; ++i) subsets = subsets * (R - i) / (i + 1);
  const double patterns = std::pow(2.0, k) + 1.0;
  if (subsets * patterns > limits.max_candidates)
    throw LimitExceededError("instance too large for exhaustive enumeration");

  ConsensusResult best;
  best.count = -1;
  Mat A(k, d);
  Vec b(k);
  const auto consider = [&](const Vec& theta) {
    const int count = consensus_count(system, theta, epsilon);
    if (count > best.count) {
      best.count = count;
      best.theta = theta;
    }
  };
  consider(Vec::Zero(d));

  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  const int npat = 1 << k;
  for (;;) {
    for (int t = 0; t < k; ++t) A.row(t) = system.coeffs.row(idx[t]);
    Eigen::CompleteOrthogonalDecomposition<Mat> cod(A);
    // Sign patterns +-eps per chosen row; pattern `npat` is the exact fit.
    for (int pat = 0; pat <= npat; ++pat) {
      for (int t = 0; t < k; ++t) {
        double off = 0.0;
        if (pat < npat) off = (pat >> t) & 1 ? epsilon : -epsilon;
        b[t] = system.offsets[idx[t]] + off;
      }
      const Vec theta = cod.solve(b);
      if (theta.allFinite()) consider(theta);
      if (epsilon == 0.0) break;  // all patterns coincide
    }
    // Next lexicographic k-subset of {0..R-1}.
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == R - k + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int t = pos + 1; t < k; ++t) idx[t] = idx[t - 1] + 1;
  }

  best.inliers = consensus(system, best.theta, epsilon);
  best.count = static_cast<int>(best.inliers.size());
  best.terminated_by = Termination::kTolerance;
  best.wall_time_s = detail::elapsed_s(t0);
  return best;
}

}  // namespace maxcon

#endif  // MAXCON_BASELINES_HPP_
