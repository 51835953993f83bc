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

#ifndef MAXCON_SIMPLEX_HPP_
#define MAXCON_SIMPLEX_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "maxcon/residual_system.hpp"

namespace maxcon {

enum class LpStatus { kOptimal, kIterationLimit, kNumericalTrouble };

struct LpResult {
  LpStatus status = LpStatus::kNumericalTrouble;
  Vec x;              // structural variable values
  double objective = 0.0;
  Vec duals;          // per original row, <= 0 for a min / Gx<=h / x>=0 problem
  int pivots = 0;
  int basic_structural = 0;  // structural variables in the final basis
  double max_violation = 0.0;
};

/// Dense two-phase primal simplex for  min c'x  s.t.  G x <= h,  x >= 0.
///
/// Dantzig pricing with lowest-index tie-breaks; after a run of degenerate
/// steps the pivot rule switches to Bland's (anti-cycling) until progress
/// resumes. The constraint tableau is kept between calls, so re-solving with
/// a different cost vector warm-starts from the previous optimal basis.
class SimplexSolver {
 public:
  SimplexSolver(Mat G, Vec h, double feas_tol = 1e-9, int max_pivots = 0)
      : G_(std::move(G)), h_(std::move(h)), feas_tol_(feas_tol) {
    m_ = static_cast<int>(G_.rows());
    ns_ = static_cast<int>(G_.cols());
    max_pivots_ = max_pivots > 0 ? max_pivots : 200 * (m_ + ns_);
    if (h_.size() != m_) throw std::invalid_argument("G/h size mismatch");
  }

  int num_rows() const { return m_; }
  int num_structural() const { return ns_; }

  /// Solves with the given structural cost vector. The first call runs
  /// phase 1; later calls re-price the existing basis and continue.
  LpResult minimize(const Vec& c) {
    if (c.size() != ns_) throw std::invalid_argument("cost size mismatch");
    LpResult res;
    const int start_pivots = pivots_;
    budget_ = pivots_ + max_pivots_;  // per-call pivot budget
    res.x = Vec::Zero(ns_);
    res.duals = Vec::Zero(m_);
    if (!initialized_) {
      if (!phase1()) {
        res.status = pivots_ >= budget_ ? LpStatus::kIterationLimit
                                        : LpStatus::kNumericalTrouble;
        res.pivots = pivots_ - start_pivots;
        return res;
      }
    } else if (!feasible_) {
      // A failed phase 1 leaves no usable basis to warm-start from.
      res.status = LpStatus::kNumericalTrouble;
      return res;
    }
    set_costs(c);
    const bool ok = iterate();
    extract(c, &res);
    res.pivots = pivots_ - start_pivots;
    res.status = ok ? LpStatus::kOptimal
                    : (pivots_ >= budget_ ? LpStatus::kIterationLimit
                                          : LpStatus::kNumericalTrouble);
    if (res.max_violation > 1e4 * feas_tol_ * (1.0 + h_.cwiseAbs().maxCoeff()))
      res.status = LpStatus::kNumericalTrouble;
    return res;
  }

 private:
  static constexpr double kPivTol = 1e-10;
  static constexpr int kStallLimit = 200;

  bool is_artificial(int j) const { return j >= ns_ + m_; }

  void build_tableau() {
    flip_.assign(m_, false);
    std::vector<int> art_of_row(m_, -1);
    na_ = 0;
    for (int r = 0; r < m_; ++r)
      if (h_[r] < 0) {
        flip_[r] = true;
        art_of_row[r] = na_++;
      }
    const int ncols = ns_ + m_ + na_;
    T_.setZero(m_, ncols);
    xb_.resize(m_);
    basis_.resize(m_);
    for (int r = 0; r < m_; ++r) {
      const double sgn = flip_[r] ? -1.0 : 1.0;
      T_.row(r).head(ns_) = sgn * G_.row(r);
      T_(r, ns_ + r) = sgn;  // row slack
      xb_[r] = sgn * h_[r];
      if (flip_[r]) {
        const int art_col = ns_ + m_ + art_of_row[r];
        T_(r, art_col) = 1.0;
        basis_[r] = art_col;
      } else {
        basis_[r] = ns_ + r;
      }
    }
    rc_.resize(ncols);
  }

  bool phase1() {
    build_tableau();
    initialized_ = true;
    feasible_ = false;
    if (na_ > 0) {
      // Phase-1 costs: 1 on artificials. rc = c - c_B' T with c_B picked
      // from the artificial rows.
      rc_.setZero();
      for (int r = 0; r < m_; ++r)
        if (is_artificial(basis_[r])) rc_ -= T_.row(r);
      for (int r = 0; r < m_; ++r)
        if (is_artificial(basis_[r])) rc_[basis_[r]] = 0.0;
      in_phase1_ = true;
      const bool ok = iterate();
      in_phase1_ = false;
      if (!ok) return false;
      double infeas = 0.0;
      for (int r = 0; r < m_; ++r)
        if (is_artificial(basis_[r])) infeas += xb_[r];
      if (infeas > 1e-7 * (1.0 + h_.cwiseAbs().maxCoeff())) return false;
      // Pivot residual basic artificials (stuck at zero) out where possible.
      for (int r = 0; r < m_; ++r) {
        if (!is_artificial(basis_[r])) continue;
        xb_[r] = 0.0;
        for (int j = 0; j < ns_ + m_; ++j) {
          if (std::abs(T_(r, j)) > 1e-7) {
            pivot(r, j);
            break;
          }
        }
      }
    }
    feasible_ = true;
    return true;
  }

  void set_costs(const Vec& c) {
    const int ncols = static_cast<int>(T_.cols());
    Vec c_ext = Vec::Zero(ncols);
    c_ext.head(ns_) = c;
    Vec cb(m_);
    for (int r = 0; r < m_; ++r) cb[r] = c_ext[basis_[r]];
    rc_ = c_ext;
    rc_.noalias() -= T_.transpose() * cb;
    for (int r = 0; r < m_; ++r) rc_[basis_[r]] = 0.0;
    rc_tol_ = 1e-9 * std::max(1.0, c.cwiseAbs().maxCoeff());
  }

  int entering() const {
    // Artificials never re-enter once they have left the basis.
    const int limit = ns_ + m_;
    if (bland_) {
      for (int j = 0; j < limit; ++j)
        if (rc_[j] < -rc_tol_) return j;
      return -1;
    }
    int best = -1;
    double best_rc = -rc_tol_;
    for (int j = 0; j < limit; ++j)
      if (rc_[j] < best_rc) {
        best_rc = rc_[j];
        best = j;
      }
    return best;
  }

  int leaving(int q) const {
    // Basic artificials sit at zero and must not move; they leave first.
    for (int r = 0; r < m_; ++r)
      if (is_artificial(basis_[r]) && !in_phase1_ &&
          std::abs(T_(r, q)) > kPivTol)
        return r;
    int best = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int r = 0; r < m_; ++r) {
      const double g = T_(r, q);
      if (g <= kPivTol) continue;
      const double ratio = std::max(0.0, xb_[r]) / g;
      if (ratio < best_ratio - 1e-12 ||
          (ratio < best_ratio + 1e-12 &&
           (best < 0 || basis_[r] < basis_[best]))) {
        best_ratio = ratio;
        best = r;
      }
    }
    return best;
  }

  void pivot(int r, int q) {
    const double piv = T_(r, q);
    T_.row(r) /= piv;
    xb_[r] /= piv;
    Vec col = T_.col(q);
    col[r] = 0.0;
    T_.noalias() -= col * T_.row(r);
    xb_.noalias() -= col * xb_[r];
    rc_.noalias() -= rc_[q] * T_.row(r);
    T_.col(q).setZero();
    T_(r, q) = 1.0;
    rc_[q] = 0.0;
    basis_[r] = q;
    ++pivots_;
  }

  bool iterate() {
    int stall = 0;
    while (pivots_ < budget_) {
      const int q = entering();
      if (q < 0) return true;  // optimal for the current costs
      const int r = leaving(q);
      if (r < 0) return false;  // numerically unbounded; callers treat as failure
      const double step = std::max(0.0, xb_[r]) / std::max(T_(r, q), kPivTol);
      pivot(r, q);
      if (step < 1e-12) {
        if (++stall > kStallLimit) bland_ = true;
      } else {
        stall = 0;
        bland_ = false;
      }
    }
    return false;
  }

  void extract(const Vec& c, LpResult* res) const {
    res->x = Vec::Zero(ns_);
    res->basic_structural = 0;
    double obj = 0.0;
    for (int r = 0; r < m_; ++r) {
      const int j = basis_[r];
      if (j < ns_) {
        res->x[j] = std::max(0.0, xb_[r]);
        obj += c[j] * res->x[j];
        ++res->basic_structural;
      }
    }
    res->objective = obj;
    res->duals.resize(m_);
    for (int r = 0; r < m_; ++r) res->duals[r] = -rc_[ns_ + r];
    res->pivots = pivots_;
    res->max_violation = (G_ * res->x - h_).maxCoeff();
  }

  Mat G_;
  Vec h_;
  double feas_tol_;
  int max_pivots_;
  int m_ = 0, ns_ = 0, na_ = 0;

  Mat T_;
  Vec xb_, rc_;
  std::vector<int> basis_;
  std::vector<bool> flip_;
  double rc_tol_ = 1e-9;
  int pivots_ = 0;
  int budget_ = 0;
  bool initialized_ = false;
  bool feasible_ = false;
  bool in_phase1_ = false;
  bool bland_ = false;
};

}  // namespace maxcon

#endif  // MAXCON_SIMPLEX_HPP_
