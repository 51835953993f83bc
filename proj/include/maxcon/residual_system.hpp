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

#ifndef MAXCON_RESIDUAL_SYSTEM_HPP_
#define MAXCON_RESIDUAL_SYSTEM_HPP_

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "maxcon/errors.hpp"

namespace maxcon {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// A linear residual model. Each algebraic row contributes |a_j.theta - b_j|;
/// rows are partitioned into groups, one group per data point, and a point's
/// residual is the max of its rows' absolute residuals. Plain 1D/hyperplane
/// data uses one row per group; linearized homography puts the two transfer
/// rows of a correspondence into one group so the point keeps a single
/// inlier/outlier decision.
struct ResidualSystem {
  Mat coeffs;                  // one row per algebraic equation, R x d
  Vec offsets;                 // R
  std::vector<int> row_group;  // size R, values in [0, num_groups)
  int num_groups = 0;

  int dim() const { return static_cast<int>(coeffs.cols()); }
  int num_rows() const { return static_cast<int>(coeffs.rows()); }
  // Number of data points n.
  int size() const { return num_groups; }

  void validate() const {
    const int rows = num_rows();
    if (rows == 0 || num_groups < 1)
      throw std::invalid_argument("residual system must be nonempty");
    if (offsets.size() != rows ||
        static_cast<int>(row_group.size()) != rows)
      throw std::invalid_argument("rows/offsets/groups size mismatch");
    if (!coeffs.allFinite() || !offsets.allFinite())
      throw std::invalid_argument("non-finite coefficients");
    std::vector<char> seen(num_groups, 0);
    for (int g : row_group) {
      if (g < 0 || g >= num_groups)
        throw std::invalid_argument("row group index out of range");
      seen[g] = 1;
    }
    for (char s : seen)
      if (!s) throw std::invalid_argument("empty group in residual system");
  }
};

inline std::vector<std::vector<int>> group_row_lists(
    const ResidualSystem& system) {
  std::vector<std::vector<int>> lists(system.num_groups);
  for (int j = 0; j < system.num_rows(); ++j)
    lists[system.row_group[j]].push_back(j);
  return lists;
}

/// Per-point residual vector: entry i is max over the rows of group i of
/// |a_j.theta - b_j|.
inline Vec residuals(const ResidualSystem& system, const Vec& theta) {
  if (theta.size() != system.dim())
    throw std::invalid_argument("theta dimension mismatch");
  const Vec row_res = (system.coeffs * theta - system.offsets).cwiseAbs();
  Vec out = Vec::Zero(system.num_groups);
  for (int j = 0; j < system.num_rows(); ++j) {
    double& r = out[system.row_group[j]];
    if (row_res[j] > r) r = row_res[j];
  }
  return out;
}

// The inlier test is inclusive; residuals within rounding noise of the
// threshold count as at the threshold, since solver solutions routinely sit
// on constraint boundaries r_i = epsilon exactly and double arithmetic lands
// an ulp to either side.
inline double inlier_cutoff(double epsilon) {
  return epsilon + 1e-9 * (1.0 + epsilon);
}

inline int consensus_count(const ResidualSystem& system, const Vec& theta,
                           double epsilon) {
  if (epsilon < 0) throw std::invalid_argument("epsilon must be >= 0");
  const Vec r = residuals(system, theta);
  const double cutoff = inlier_cutoff(epsilon);
  int count = 0;
  for (int i = 0; i < r.size(); ++i)
    if (r[i] <= cutoff) ++count;
  return count;
}

/// Indices of the consensus set {i : r_i(theta) <= epsilon}.
inline std::vector<int> consensus(const ResidualSystem& system,
                                  const Vec& theta, double epsilon) {
  if (epsilon < 0) throw std::invalid_argument("epsilon must be >= 0");
  const Vec r = residuals(system, theta);
  const double cutoff = inlier_cutoff(epsilon);
  std::vector<int> inliers;
  inliers.reserve(r.size());
  for (int i = 0; i < r.size(); ++i)
    if (r[i] <= cutoff) inliers.push_back(i);
  return inliers;
}

/// System restricted to the given groups, renumbered 0..k-1 in the order
/// given. Row order within each group is preserved.
inline ResidualSystem subsystem(const ResidualSystem& system,
                                std::span<const int> groups) {
  std::vector<int> new_id(system.num_groups, -1);
  for (int k = 0; k < static_cast<int>(groups.size()); ++k) {
    const int g = groups[k];
    if (g < 0 || g >= system.num_groups)
      throw std::invalid_argument("group index out of range");
    new_id[g] = k;
  }
  std::vector<int> kept_rows;
  for (int j = 0; j < system.num_rows(); ++j)
    if (new_id[system.row_group[j]] >= 0) kept_rows.push_back(j);

  ResidualSystem out;
  out.coeffs.resize(kept_rows.size(), system.dim());
  out.offsets.resize(kept_rows.size());
  out.row_group.resize(kept_rows.size());
  for (size_t t = 0; t < kept_rows.size(); ++t) {
    out.coeffs.row(t) = system.coeffs.row(kept_rows[t]);
    out.offsets[t] = system.offsets[kept_rows[t]];
    out.row_group[t] = new_id[system.row_group[kept_rows[t]]];
  }
  out.num_groups = static_cast<int>(groups.size());
  return out;
}

/// A pixel correspondence between two images.
struct PointMatch {
  Eigen::Vector2d p;  // image 1
  Eigen::Vector2d q;  // image 2
};

struct GroundTruth {
  Vec theta;                          // true parameters (in system coordinates)
  std::vector<std::uint8_t> inlier_mask;  // length n, 1 = planted inlier
};

struct ProblemInstance {
  ResidualSystem system;
  double epsilon = 0.0;
  std::optional<GroundTruth> ground_truth;

  void validate() const {
    system.validate();
    if (epsilon < 0) throw std::invalid_argument("epsilon must be >= 0");
    if (ground_truth &&
        static_cast<int>(ground_truth->inlier_mask.size()) != system.size())
      throw std::invalid_argument("ground-truth mask length != n");
  }
};

}  // namespace maxcon

#endif  // MAXCON_RESIDUAL_SYSTEM_HPP_
