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

#ifndef MAXCON_REWEIGHT_HPP_
#define MAXCON_REWEIGHT_HPP_

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "maxcon/baselines.hpp"
#include "maxcon/convex.hpp"
#include "maxcon/errors.hpp"
#include "maxcon/fit_result.hpp"
#include "maxcon/residual_system.hpp"

namespace maxcon {

enum class InitMode { kOnes, kLinf, kRansac, kCustom };

struct IRConfig {
  double gamma = 0.01;
  int max_iters = 25;  // L
  double zeta = 1e-4;  // absolute drop of the weighted objective
  InitMode init = InitMode::kOnes;
  double epsilon = 0.1;
  std::uint64_t init_seed = 0;  // seeds the RANSAC initializer when used
  SolverTolerances tol;

  void validate() const {
    if (gamma <= 0) throw std::invalid_argument("gamma must be positive");
    if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
    if (zeta <= 0) throw std::invalid_argument("zeta must be positive");
    if (epsilon < 0) throw std::invalid_argument("epsilon must be >= 0");
    tol.validate();
  }
};

/// Smoothed outlier-count surrogate sum_i log(s_i + gamma).
inline double surrogate_value(const Vec& s, double gamma) {
  if (gamma <= 0) throw std::invalid_argument("gamma must be positive");
  if ((s.array() < 0).any())
    throw std::invalid_argument("slacks must be non-negative");
  return (s.array() + gamma).log().sum();
}

/// LP-scheme weights w_i = 1 / (s_i + gamma).
inline Vec update_weights_lp(const Vec& s, double gamma) {
  if (gamma <= 0) throw std::invalid_argument("gamma must be positive");
  if ((s.array() < 0).any())
    throw std::invalid_argument("slacks must be non-negative");
  return (s.array() + gamma).inverse();
}

/// QP-scheme weights w_i = 1 / (s_i^2 + gamma).
inline Vec update_weights_qp(const Vec& s, double gamma) {
  if (gamma <= 0) throw std::invalid_argument("gamma must be positive");
  if ((s.array() < 0).any())
    throw std::invalid_argument("slacks must be non-negative");
  return (s.array().square() + gamma).inverse();
}

namespace detail {

inline Vec slacks_at(const ResidualSystem& system, const Vec& theta,
                     double epsilon) {
  return (residuals(system, theta).array() - epsilon).max(0.0);
}

struct InitState {
  Vec s0;
  std::optional<Vec> theta0;
};

inline InitState initial_state(const ResidualSystem& system,
                               const IRConfig& config,
                               const std::optional<Vec>& init_theta) {
  switch (config.init) {
    case InitMode::kOnes:
      return {Vec::Ones(system.size()), std::nullopt};
    case InitMode::kCustom: {
      if (!init_theta)
        throw std::invalid_argument("custom init requires a theta");
      return {slacks_at(system, *init_theta, config.epsilon), *init_theta};
    }
    case InitMode::kLinf: {
      const Vec theta =
          iterative_linf_fit(system, config.epsilon, config.tol).theta;
      return {slacks_at(system, theta, config.epsilon), theta};
    }
    case InitMode::kRansac: {
      RansacConfig rc;
      rc.seed = config.init_seed;
      const Vec theta = ransac_fit(system, config.epsilon, rc).theta;
      return {slacks_at(system, theta, config.epsilon), theta};
    }
  }
  throw std::invalid_argument("unknown init mode");
}

template <typename Solver, typename WeightFn>
ConsensusResult reweighted_fit(const ResidualSystem& system,
                               const IRConfig& config, Solver&& solve_step,
                               WeightFn&& weights_of, const Vec& s0) {
  const auto t0 = std::chrono::steady_clock::now();
  ConsensusResult out;
  Vec s = s0;
  Vec theta;
  out.terminated_by = Termination::kIterationLimit;
  for (int l = 0; l < config.max_iters; ++l) {
    const Vec w = weights_of(s, config.gamma);
    const SlackSolution sol = solve_step(w);
    if (sol.status == SolveStatus::kInfeasibleNumerics)
      throw SolverError("slack subproblem failed numerically");
    if (sol.status == SolveStatus::kIterationLimit)
      throw SolverError("slack subproblem hit its iteration cap");
    theta = sol.theta;
    const double delta = w.dot(s - sol.slacks);
    s = sol.slacks;
    IterRecord rec;
    rec.surrogate = surrogate_value(s, config.gamma);
    rec.weighted_objective = sol.objective;
    rec.consensus_count = consensus_count(system, theta, config.epsilon);
    rec.positive_slacks = static_cast<int>((s.array() > 0).count());
    rec.max_slack = s.size() ? s.maxCoeff() : 0.0;
    out.trace.iterations.push_back(rec);
    // The objective-drop test presumes the previous s came from a feasible
    // pair, which the all-ones seed need not be; it applies from l >= 1.
    if (l >= 1 && delta <= config.zeta) {
      out.terminated_by = Termination::kTolerance;
      break;
    }
  }
  out.theta = theta;
  // Consensus reported from theta directly, not from the LP slacks, so the
  // inlier test is the same one `consensus` applies everywhere.
  out.inliers = consensus(system, theta, config.epsilon);
  out.count = static_cast<int>(out.inliers.size());
  out.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return out;
}

}  // namespace detail

/// Reweighted-l1 consensus maximization: each outer iteration solves the
/// weighted slack LP with weights 1/(s_i + gamma), warm-started from the
/// previous basis, until the weighted objective stops improving by more
/// than zeta or L iterations elapse.
inline ConsensusResult irlp_fit(const ResidualSystem& system,
                                const IRConfig& config,
                                std::optional<Vec> init_theta = std::nullopt) {
  system.validate();
  config.validate();
  const auto init = detail::initial_state(system, config, init_theta);
  SlackLpEngine engine(system, config.epsilon, config.tol);
  return detail::reweighted_fit(
      system, config, [&](const Vec& w) { return engine.solve(w); },
      [](const Vec& s, double gamma) { return update_weights_lp(s, gamma); },
      init.s0);
}

/// Reweighted-least-squares variant: weighted slack QP subproblems with
/// weights 1/(s_i^2 + gamma). Slower per iteration than the LP scheme.
inline ConsensusResult irqp_fit(const ResidualSystem& system,
                                const IRConfig& config,
                                std::optional<Vec> init_theta = std::nullopt) {
  system.validate();
  config.validate();
  const auto init = detail::initial_state(system, config, init_theta);
  WeightedSlackQpEngine engine(system, config.epsilon, config.tol);
  if (init.theta0) engine.reset_start(*init.theta0);
  return detail::reweighted_fit(
      system, config, [&](const Vec& w) { return engine.solve(w); },
      [](const Vec& s, double gamma) { return update_weights_qp(s, gamma); },
      init.s0);
}

/// Stationarity diagnostic for the smoothed surrogate at theta: the norm of
/// the weighted outlier-gradient sum
///
///   sum_{i : r_i > eps}  sign(a.theta - b) a / (r_i - eps + gamma),
///
/// after granting rows that sit exactly on the threshold |r - eps| <= tol a
/// bounded multiplier in [0, 1/gamma] (such rows carry the remaining active
/// constraints at a subproblem vertex; their multiplier range follows from
/// the same first-order conditions). Zero signals stationarity.
inline double kkt_stationarity_gap(const ResidualSystem& system,
                                   const Vec& theta, double epsilon,
                                   double gamma) {
  if (gamma <= 0) throw std::invalid_argument("gamma must be positive");
  if (epsilon < 0) throw std::invalid_argument("epsilon must be >= 0");
  if (theta.size() != system.dim())
    throw std::invalid_argument("theta dimension mismatch");
  const int d = system.dim();
  const Vec signed_res = system.coeffs * theta - system.offsets;
  const Vec abs_res = signed_res.cwiseAbs();

  // Active row per group.
  std::vector<int> active(system.size(), -1);
  for (int j = 0; j < system.num_rows(); ++j) {
    const int g = system.row_group[j];
    if (active[g] < 0 || abs_res[j] > abs_res[active[g]]) active[g] = j;
  }

  const double btol = 1e-7 * (1.0 + epsilon);
  Vec g_sum = Vec::Zero(d);
  std::vector<char> is_outlier_active(system.num_rows(), 0);
  for (int i = 0; i < system.size(); ++i) {
    const int j = active[i];
    const double r = abs_res[j];
    if (r > epsilon + btol) {
      const double sgn = signed_res[j] >= 0 ? 1.0 : -1.0;
      g_sum += sgn * system.coeffs.row(j).transpose() / (r - epsilon + gamma);
      is_outlier_active[j] = 1;
    }
  }

  // Threshold-active rows enter as bounded non-negative multipliers; the gap
  // is the distance from -g_sum to their generated cone (a tiny box-
  // constrained least squares, solved by an active-set iteration).
  std::vector<int> boundary;
  for (int j = 0; j < system.num_rows(); ++j)
    if (!is_outlier_active[j] && std::abs(abs_res[j] - epsilon) <= btol)
      boundary.push_back(j);
  if (boundary.empty()) return g_sum.norm();

  const int k = static_cast<int>(boundary.size());
  Mat U(d, k);
  for (int t = 0; t < k; ++t) {
    const int j = boundary[t];
    const double sgn = signed_res[j] >= 0 ? 1.0 : -1.0;
    U.col(t) = sgn * system.coeffs.row(j).transpose();
  }
  // min ||g_sum + U lambda|| over 0 <= lambda <= 1/gamma, by active-set
  // bounded least squares (k is tiny: at most ~d boundary rows).
  const double cap = 1.0 / gamma;
  enum class At { kLower, kUpper, kFree };
  std::vector<At> state(k, At::kLower);
  Vec lambda = Vec::Zero(k);
  for (int pass = 0; pass < 50 + 10 * k; ++pass) {
    std::vector<int> free_idx;
    Vec base = g_sum;
    for (int t = 0; t < k; ++t) {
      if (state[t] == At::kFree)
        free_idx.push_back(t);
      else if (state[t] == At::kUpper)
        base += cap * U.col(t);
    }
    if (!free_idx.empty()) {
      Mat Uf(d, free_idx.size());
      for (size_t c = 0; c < free_idx.size(); ++c)
        Uf.col(c) = U.col(free_idx[c]);
      const Vec lf = Uf.completeOrthogonalDecomposition().solve(-base);
      // Clamp the worst out-of-box free variable, if any.
      int worst = -1;
      double excess = 1e-12;
      for (size_t c = 0; c < free_idx.size(); ++c) {
        const double over = std::max(-lf[c], lf[c] - cap);
        if (over > excess) {
          excess = over;
          worst = static_cast<int>(c);
        }
      }
      if (worst >= 0) {
        state[free_idx[worst]] =
            lf[worst] < 0 ? At::kLower : At::kUpper;
        continue;
      }
      for (size_t c = 0; c < free_idx.size(); ++c)
        lambda[free_idx[c]] = lf[c];
    }
    // Optimality over the clamped variables: release the worst violator.
    for (int t = 0; t < k; ++t)
      if (state[t] == At::kLower)
        lambda[t] = 0.0;
      else if (state[t] == At::kUpper)
        lambda[t] = cap;
    Vec resid = g_sum;
    for (int t = 0; t < k; ++t) resid += lambda[t] * U.col(t);
    int release = -1;
    double worst_grad = 1e-12 * (1.0 + resid.norm());
    for (int t = 0; t < k; ++t) {
      const double grad = U.col(t).dot(resid);
      if (state[t] == At::kLower && -grad > worst_grad) {
        worst_grad = -grad;
        release = t;
      } else if (state[t] == At::kUpper && grad > worst_grad) {
        worst_grad = grad;
        release = t;
      }
    }
    if (release < 0) return resid.norm();
    state[release] = At::kFree;
  }
  Vec resid = g_sum;
  for (int t = 0; t < k; ++t) resid += lambda[t] * U.col(t);
  return resid.norm();
}

}  // namespace maxcon

#endif  // MAXCON_REWEIGHT_HPP_
