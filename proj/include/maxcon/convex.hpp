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

#ifndef MAXCON_CONVEX_HPP_
#define MAXCON_CONVEX_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Dense>

#include "maxcon/residual_system.hpp"
#include "maxcon/simplex.hpp"

namespace maxcon {

enum class SolveStatus { kOptimal, kInfeasibleNumerics, kIterationLimit };

struct SolverTolerances {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-8;
  int max_pivots = 0;  // 0: auto, 50 * (n + d) scaled by rows per group
  double theta_box = 1e6;  // |theta_j| <= theta_box keeps the polytope bounded

  void validate() const {
    if (feasibility_tol <= 0 || optimality_tol <= 0 || theta_box <= 0 ||
        max_pivots < 0)
      throw std::invalid_argument("tolerances must be strictly positive");
  }
};

/// Solution of one convex slack subproblem.
struct SlackSolution {
  Vec theta;
  Vec slacks;  // one per group, >= 0, entries below feasibility_tol set to 0
  double objective = 0.0;
  SolveStatus status = SolveStatus::kInfeasibleNumerics;
  int iterations = 0;          // simplex pivots / active-set steps
  double dual_objective = 0.0;  // LP lower bound (diagnostics; 0 for QP)
  int basis_size = 0;
  bool rank_deficient = false;  // coefficient matrix has rank < d
};

namespace detail {

inline int auto_pivot_cap(const ResidualSystem& s, const SolverTolerances& t) {
  if (t.max_pivots > 0) return t.max_pivots;
  // 50*(n+d) per the group count, widened by the per-group row multiplicity
  // so two-row groups get the same headroom per algebraic row.
  const int rows_per_group = (s.num_rows() + s.size() - 1) / s.size();
  return 50 * (s.size() + s.dim()) * std::max(1, rows_per_group);
}

inline bool coeff_rank_deficient(const Mat& coeffs) {
  Eigen::ColPivHouseholderQR<Mat> qr(coeffs);
  return qr.rank() < coeffs.cols();
}

}  // namespace detail

/// Shared LP machinery for the weighted slack problem
///
///   min sum_i w_i s_i   s.t.  |a_j.theta - b_j| <= eps + s_{g(j)},  s >= 0,
///                              |theta_k| <= theta_box.
///
/// The constraint tableau is built once; solve() can be called repeatedly
/// with different weights and warm-starts from the previous basis, which is
/// what the reweighting outer loop relies on.
class SlackLpEngine {
 public:
  SlackLpEngine(const ResidualSystem& system, double epsilon,
                SolverTolerances tol = {})
      : n_(system.size()), d_(system.dim()), tol_(tol) {
    system.validate();
    tol.validate();
    if (epsilon < 0) throw std::invalid_argument("epsilon must be >= 0");
    rank_deficient_ = detail::coeff_rank_deficient(system.coeffs);

    const int rows = system.num_rows();
    const int ns = 2 * d_ + n_;
    const int m = 2 * rows + d_;
    Mat G = Mat::Zero(m, ns);
    Vec h(m);
    for (int j = 0; j < rows; ++j) {
      const int g = system.row_group[j];
      G.row(2 * j).head(d_) = system.coeffs.row(j);
      G.row(2 * j).segment(d_, d_) = -system.coeffs.row(j);
      G(2 * j, 2 * d_ + g) = -1.0;
      h[2 * j] = epsilon + system.offsets[j];
      G.row(2 * j + 1).head(d_) = -system.coeffs.row(j);
      G.row(2 * j + 1).segment(d_, d_) = system.coeffs.row(j);
      G(2 * j + 1, 2 * d_ + g) = -1.0;
      h[2 * j + 1] = epsilon - system.offsets[j];
    }
    for (int k = 0; k < d_; ++k) {
      G(2 * rows + k, k) = 1.0;
      G(2 * rows + k, d_ + k) = 1.0;
      h[2 * rows + k] = tol.theta_box;
    }
    h_ = h;
    solver_.emplace(std::move(G), std::move(h), tol.feasibility_tol,
                    detail::auto_pivot_cap(system, tol));
  }

  SlackSolution solve(const Vec& weights) {
    if (weights.size() != n_)
      throw std::invalid_argument("weights size mismatch");
    if (!(weights.array() > 0).all() || !weights.allFinite())
      throw std::invalid_argument("weights must be strictly positive");
    Vec c = Vec::Zero(2 * d_ + n_);
    c.tail(n_) = weights;
    const LpResult lp = solver_->minimize(c);

    SlackSolution out;
    out.theta = lp.x.head(d_) - lp.x.segment(d_, d_);
    out.slacks = lp.x.tail(n_);
    for (int i = 0; i < n_; ++i)
      if (out.slacks[i] <= tol_.feasibility_tol) out.slacks[i] = 0.0;
    out.objective = weights.dot(out.slacks);
    out.iterations = lp.pivots;
    out.dual_objective = lp.duals.dot(h_);
    out.basis_size = lp.basic_structural;
    out.rank_deficient = rank_deficient_;
    switch (lp.status) {
      case LpStatus::kOptimal:
        out.status = SolveStatus::kOptimal;
        break;
      case LpStatus::kIterationLimit:
        out.status = SolveStatus::kIterationLimit;
        break;
      case LpStatus::kNumericalTrouble:
        out.status = SolveStatus::kInfeasibleNumerics;
        break;
    }
    return out;
  }

 private:
  int n_, d_;
  SolverTolerances tol_;
  Vec h_;
  bool rank_deficient_ = false;
  std::optional<SimplexSolver> solver_;
};

/// Global optimum of the weighted slack LP (scheme step of the reweighted
/// iteration). One-shot wrapper over SlackLpEngine.
inline SlackSolution solve_weighted_slack_lp(const ResidualSystem& system,
                                             double epsilon,
                                             const Vec& weights,
                                             SolverTolerances tol = {}) {
  SlackLpEngine engine(system, epsilon, tol);
  return engine.solve(weights);
}

/// Plain slack l1 minimization (unit weights).
inline SlackSolution solve_slack_l1(const ResidualSystem& system,
                                    double epsilon,
                                    SolverTolerances tol = {}) {
  return solve_weighted_slack_lp(system, epsilon, Vec::Ones(system.size()),
                                 tol);
}

struct MinMaxSolution {
  Vec theta;
  double max_residual = 0.0;
  SolveStatus status = SolveStatus::kInfeasibleNumerics;
  int iterations = 0;
};

/// Chebyshev fit: minimizes t subject to every selected group's residual
/// <= t. `subset` holds group indices into `system`.
inline MinMaxSolution solve_minmax(const ResidualSystem& system,
                                   std::span<const int> subset,
                                   SolverTolerances tol = {}) {
  system.validate();
  tol.validate();
  if (subset.empty()) throw std::invalid_argument("empty subset");
  const int d = system.dim();
  std::vector<char> selected(system.size(), 0);
  for (int g : subset) {
    if (g < 0 || g >= system.size())
      throw std::invalid_argument("subset index out of range");
    selected[g] = 1;
  }
  std::vector<int> rows;
  for (int j = 0; j < system.num_rows(); ++j)
    if (selected[system.row_group[j]]) rows.push_back(j);

  const int ns = 2 * d + 1;  // theta split plus the bound t
  const int m = 2 * static_cast<int>(rows.size()) + d;
  Mat G = Mat::Zero(m, ns);
  Vec h(m);
  for (size_t k = 0; k < rows.size(); ++k) {
    const int j = rows[k];
    G.row(2 * k).head(d) = system.coeffs.row(j);
    G.row(2 * k).segment(d, d) = -system.coeffs.row(j);
    G(2 * k, 2 * d) = -1.0;
    h[2 * k] = system.offsets[j];
    G.row(2 * k + 1).head(d) = -system.coeffs.row(j);
    G.row(2 * k + 1).segment(d, d) = system.coeffs.row(j);
    G(2 * k + 1, 2 * d) = -1.0;
    h[2 * k + 1] = -system.offsets[j];
  }
  for (int k = 0; k < d; ++k) {
    G(2 * rows.size() + k, k) = 1.0;
    G(2 * rows.size() + k, d + k) = 1.0;
    h[2 * rows.size() + k] = tol.theta_box;
  }
  SimplexSolver solver(std::move(G), std::move(h), tol.feasibility_tol,
                       detail::auto_pivot_cap(system, tol));
  Vec c = Vec::Zero(ns);
  c[2 * d] = 1.0;
  const LpResult lp = solver.minimize(c);

  MinMaxSolution out;
  out.theta = lp.x.head(d) - lp.x.segment(d, d);
  out.max_residual = std::max(0.0, lp.x[2 * d]);
  out.iterations = lp.pivots;
  out.status = lp.status == LpStatus::kOptimal
                   ? SolveStatus::kOptimal
                   : (lp.status == LpStatus::kIterationLimit
                          ? SolveStatus::kIterationLimit
                          : SolveStatus::kInfeasibleNumerics);
  return out;
}

inline MinMaxSolution solve_minmax(const ResidualSystem& system,
                                   SolverTolerances tol = {}) {
  std::vector<int> all(system.size());
  std::iota(all.begin(), all.end(), 0);
  return solve_minmax(system, all, tol);
}

/// Primal active-set solver for the weighted slack QP
///
///   min sum_i w_i s_i^2   s.t.  |a_j.theta - b_j| <= eps + s_{g(j)},
///                                s >= 0, |theta_k| <= theta_box.
///
/// The Hessian is singular in theta, which only enters through the
/// constraints; a tiny ridge keeps the KKT systems nonsingular. The working
/// set carries over between solve() calls.
class WeightedSlackQpEngine {
 public:
  WeightedSlackQpEngine(const ResidualSystem& system, double epsilon,
                        SolverTolerances tol = {})
      : system_(system), epsilon_(epsilon), tol_(tol) {
    system.validate();
    tol.validate();
    if (epsilon < 0) throw std::invalid_argument("epsilon must be >= 0");
    n_ = system.size();
    d_ = system.dim();
    nv_ = d_ + n_;
    rank_deficient_ = detail::coeff_rank_deficient(system.coeffs);

    const int rows = system.num_rows();
    mc_ = 2 * rows + n_ + 2 * d_;
    C_ = Mat::Zero(mc_, nv_);
    e_.resize(mc_);
    for (int j = 0; j < rows; ++j) {
      const int g = system.row_group[j];
      C_.row(2 * j).head(d_) = system.coeffs.row(j);
      C_(2 * j, d_ + g) = -1.0;
      e_[2 * j] = epsilon + system.offsets[j];
      C_.row(2 * j + 1).head(d_) = -system.coeffs.row(j);
      C_(2 * j + 1, d_ + g) = -1.0;
      e_[2 * j + 1] = epsilon - system.offsets[j];
    }
    for (int i = 0; i < n_; ++i) {
      C_(2 * rows + i, d_ + i) = -1.0;  // -s_i <= 0
      e_[2 * rows + i] = 0.0;
    }
    for (int k = 0; k < d_; ++k) {
      C_(2 * rows + n_ + 2 * k, k) = 1.0;
      e_[2 * rows + n_ + 2 * k] = tol.theta_box;
      C_(2 * rows + n_ + 2 * k + 1, k) = -1.0;
      e_[2 * rows + n_ + 2 * k + 1] = tol.theta_box;
    }
    x_ = Vec::Zero(nv_);
    reset_start(Vec::Zero(d_));
  }

  /// Feasible restart from a given theta (slacks set to the residual excess).
  void reset_start(const Vec& theta) {
    x_.head(d_) = theta.cwiseMax(-tol_.theta_box).cwiseMin(tol_.theta_box);
    const Vec r = residuals(system_, x_.head(d_));
    for (int i = 0; i < n_; ++i) x_[d_ + i] = std::max(0.0, r[i] - epsilon_);
    working_.clear();
  }

  SlackSolution solve(const Vec& weights) {
    if (weights.size() != n_)
      throw std::invalid_argument("weights size mismatch");
    if (!(weights.array() > 0).all() || !weights.allFinite())
      throw std::invalid_argument("weights must be strictly positive");

    Vec hdiag(nv_);
    hdiag.head(d_).setConstant(kRidge);
    hdiag.tail(n_) = 2.0 * weights;

    const int max_iters = detail::auto_pivot_cap(system_, tol_);
    Vec cx = C_ * x_;
    int iters = 0;
    bool optimal = false;
    while (iters++ < max_iters) {
      const int k = static_cast<int>(working_.size());
      Mat kkt = Mat::Zero(nv_ + k, nv_ + k);
      kkt.topLeftCorner(nv_, nv_).diagonal() = hdiag;
      for (int t = 0; t < k; ++t) {
        kkt.block(nv_ + t, 0, 1, nv_) = C_.row(working_[t]);
        kkt.block(0, nv_ + t, nv_, 1) = C_.row(working_[t]).transpose();
      }
      Vec rhs = Vec::Zero(nv_ + k);
      rhs.head(nv_) = -(hdiag.asDiagonal() * x_);
      Eigen::PartialPivLU<Mat> lu(kkt);
      Vec sol = lu.solve(rhs);
      if (!sol.allFinite()) {
        // Dependent working set; drop the newest row and retry.
        if (working_.empty()) break;
        working_.pop_back();
        continue;
      }
      const Vec p = sol.head(nv_);
      const Vec lambda = sol.tail(k);

      if (p.lpNorm<Eigen::Infinity>() <= 1e-11 * (1.0 + x_.norm())) {
        int drop = -1;
        double most_negative = -tol_.optimality_tol;
        for (int t = 0; t < k; ++t)
          if (lambda[t] < most_negative) {
            most_negative = lambda[t];
            drop = t;
          }
        if (drop < 0) {
          optimal = true;
          break;
        }
        working_.erase(working_.begin() + drop);
        continue;
      }

      const Vec cp = C_ * p;
      double alpha = 1.0;
      int blocking = -1;
      for (int cidx = 0; cidx < mc_; ++cidx) {
        if (cp[cidx] <= 1e-12) continue;
        bool in_w = false;
        for (int w : working_)
          if (w == cidx) {
            in_w = true;
            break;
          }
        if (in_w) continue;
        const double a = (e_[cidx] - cx[cidx]) / cp[cidx];
        if (a < alpha - 1e-14) {
          alpha = std::max(0.0, a);
          blocking = cidx;
        }
      }
      x_ += alpha * p;
      cx += alpha * cp;
      if (blocking >= 0) working_.push_back(blocking);
    }

    SlackSolution out;
    out.theta = x_.head(d_);
    out.slacks = x_.tail(n_).cwiseMax(0.0);
    for (int i = 0; i < n_; ++i)
      if (out.slacks[i] <= tol_.feasibility_tol) out.slacks[i] = 0.0;
    out.objective = weights.dot(out.slacks.cwiseAbs2());
    out.iterations = iters;
    out.basis_size = static_cast<int>(working_.size());
    out.rank_deficient = rank_deficient_;
    if (optimal) {
      out.status = SolveStatus::kOptimal;
    } else if (iters >= max_iters) {
      out.status = SolveStatus::kIterationLimit;
    } else {
      out.status = SolveStatus::kInfeasibleNumerics;
    }
    return out;
  }

 private:
  static constexpr double kRidge = 1e-10;

  ResidualSystem system_;
  double epsilon_;
  SolverTolerances tol_;
  int n_ = 0, d_ = 0, nv_ = 0, mc_ = 0;
  Mat C_;
  Vec e_, x_;
  std::vector<int> working_;
  bool rank_deficient_ = false;
};

/// Global optimum of the weighted slack QP (one-shot).
inline SlackSolution solve_weighted_slack_qp(const ResidualSystem& system,
                                             double epsilon,
                                             const Vec& weights,
                                             SolverTolerances tol = {}) {
  WeightedSlackQpEngine engine(system, epsilon, tol);
  return engine.solve(weights);
}

}  // namespace maxcon

#endif  // MAXCON_CONVEX_HPP_
