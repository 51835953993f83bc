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

#ifndef MAXCON_GEOMETRY_HPP_
#define MAXCON_GEOMETRY_HPP_

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Dense>

#include "maxcon/errors.hpp"
#include "maxcon/residual_system.hpp"

namespace maxcon {

using Mat3 = Eigen::Matrix3d;

struct NormalizedMatches {
  std::vector<PointMatch> matches;
  Mat3 T1;  // similarity applied to image-1 points
  Mat3 T2;  // similarity applied to image-2 points
};

inline Eigen::Vector2d apply_similarity(const Mat3& T,
                                        const Eigen::Vector2d& x) {
  const Eigen::Vector3d y = T * x.homogeneous();
  return y.head<2>() / y[2];
}

namespace detail {

// Similarity taking the point set to centroid 0 and per-coordinate standard
// deviation sqrt(2), the coordinates of both axes pooled. Throws on zero
// spread.
template <typename GetPoint>
Mat3 normalizing_similarity(const std::vector<PointMatch>& matches,
                            GetPoint get) {
  const double m = static_cast<double>(matches.size());
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  for (const auto& pm : matches) centroid += get(pm);
  centroid /= m;
  double pooled_var = 0.0;
  for (const auto& pm : matches)
    pooled_var += (get(pm) - centroid).squaredNorm();
  pooled_var /= (2.0 * m);
  if (pooled_var <= 0.0)
    throw DegenerateDataError("zero spread: cannot normalize point set");
  const double s = std::sqrt(2.0 / pooled_var);
  Mat3 T;
  T << s, 0, -s * centroid.x(), 0, s, -s * centroid.y(), 0, 0, 1;
  return T;
}

}  // namespace detail

/// Hartley-style conditioning: each image's points are independently
/// translated to centroid 0 and scaled so the pooled per-coordinate standard
/// deviation is sqrt(2). Returns the transformed matches together with the
/// two similarity transforms.
inline NormalizedMatches normalize_matches(
    const std::vector<PointMatch>& matches) {
  if (matches.empty()) throw std::invalid_argument("no matches");
  NormalizedMatches out;
  out.T1 = detail::normalizing_similarity(
      matches, [](const PointMatch& pm) { return pm.p; });
  out.T2 = detail::normalizing_similarity(
      matches, [](const PointMatch& pm) { return pm.q; });
  out.matches.reserve(matches.size());
  for (const auto& pm : matches)
    out.matches.push_back(
        {apply_similarity(out.T1, pm.p), apply_similarity(out.T2, pm.q)});
  return out;
}

/// DLT rows for homography transfer, h33 fixed to 1, theta in R^8 ordered
/// (h11,h12,h13,h21,h22,h23,h31,h32). The two rows of a correspondence share
/// one group: each point owns a single slack.
inline ResidualSystem linearize_homography(
    const std::vector<PointMatch>& matches) {
  const int n = static_cast<int>(matches.size());
  if (n < 5) throw std::invalid_argument("homography linearization needs >= 5 matches");
  ResidualSystem sys;
  sys.coeffs.setZero(2 * n, 8);
  sys.offsets.resize(2 * n);
  sys.row_group.resize(2 * n);
  for (int i = 0; i < n; ++i) {
    const double x = matches[i].p.x(), y = matches[i].p.y();
    const double xp = matches[i].q.x(), yp = matches[i].q.y();
    sys.coeffs.row(2 * i) << x, y, 1, 0, 0, 0, -xp * x, -xp * y;
    sys.offsets[2 * i] = xp;
    sys.coeffs.row(2 * i + 1) << 0, 0, 0, x, y, 1, -yp * x, -yp * y;
    sys.offsets[2 * i + 1] = yp;
    sys.row_group[2 * i] = i;
    sys.row_group[2 * i + 1] = i;
  }
  sys.num_groups = n;
  return sys;
}

/// Epipolar constraint rows q^T F p = 0, f33 fixed to 1, theta in R^8 ordered
/// (f11,f12,f13,f21,f22,f23,f31,f32). One row per correspondence, each its
/// own group.
inline ResidualSystem linearize_fundamental(
    const std::vector<PointMatch>& matches) {
  const int n = static_cast<int>(matches.size());
  if (n < 9) throw std::invalid_argument("fundamental linearization needs >= 9 matches");
  ResidualSystem sys;
  sys.coeffs.resize(n, 8);
  sys.offsets.resize(n);
  sys.row_group.resize(n);
  for (int i = 0; i < n; ++i) {
    const double x = matches[i].p.x(), y = matches[i].p.y();
    const double xp = matches[i].q.x(), yp = matches[i].q.y();
    sys.coeffs.row(i) << xp * x, xp * y, xp, yp * x, yp * y, yp, x, y;
    sys.offsets[i] = -1.0;
    sys.row_group[i] = i;
  }
  sys.num_groups = n;
  return sys;
}

/// theta vector of a 3x3 model matrix under the bottom-right-fixed-to-1
/// parameterization used by the linearizers.
inline Vec model_to_theta(const Mat3& model) {
  const double w = model(2, 2);
  if (std::abs(w) < 1e-12)
    throw DegenerateDataError("model has (3,3) entry ~ 0; cannot normalize");
  Vec theta(8);
  theta << model(0, 0), model(0, 1), model(0, 2), model(1, 0), model(1, 1),
      model(1, 2), model(2, 0), model(2, 1);
  return theta / w;
}

enum class MatchModel { kHomography, kFundamental };

/// Pixel-frame model re-expressed in the normalized frame defined by T1/T2:
/// H' = T2 H T1^-1 for homographies, F' = T2^-T F T1^-1 for fundamental
/// matrices.
inline Mat3 model_in_normalized_frame(const Mat3& model, const Mat3& T1,
                                      const Mat3& T2, MatchModel kind) {
  switch (kind) {
    case MatchModel::kHomography:
      return T2 * model * T1.inverse();
    case MatchModel::kFundamental:
      return T2.inverse().transpose() * model * T1.inverse();
  }
  throw std::invalid_argument("unknown match model");
}

}  // namespace maxcon

#endif  // MAXCON_GEOMETRY_HPP_
