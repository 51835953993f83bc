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

#ifndef MAXCON_SYNTHETIC_HPP_
#define MAXCON_SYNTHETIC_HPP_

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "maxcon/geometry.hpp"
#include "maxcon/residual_system.hpp"
#include "maxcon/rng.hpp"

namespace maxcon {

/// Regression points around a random unit-normal hyperplane y = theta.x.
/// Inliers carry Gaussian noise of sd sigma_in on y; floor(outlier_frac * n)
/// points additionally get a uniform offset in [-outlier_range, outlier_range].
/// One row per point: a_i = x_i (uniform in [-1,1]^d), b_i = y_i.
inline ProblemInstance synth_hyperplane(int n, int d, double sigma_in,
                                        double outlier_frac,
                                        double outlier_range,
                                        std::uint64_t seed,
                                        double epsilon = 0.3) {
  if (d < 1 || n <= d) throw std::invalid_argument("need n > d >= 1");
  if (sigma_in <= 0 || outlier_range <= 0)
    throw std::invalid_argument("noise scales must be positive");
  if (outlier_frac < 0 || outlier_frac > 1)
    throw std::invalid_argument("outlier_frac must be in [0,1]");

  Rng rng(derive_seed(seed, 0x68706c6eULL));  // "hpln"
  Vec theta(d);
  for (int k = 0; k < d; ++k) theta[k] = rng.normal();
  theta.normalize();

  ProblemInstance inst;
  inst.epsilon = epsilon;
  inst.system.coeffs.resize(n, d);
  inst.system.offsets.resize(n);
  inst.system.row_group.resize(n);
  inst.system.num_groups = n;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < d; ++k) inst.system.coeffs(i, k) = rng.uniform(-1, 1);
    inst.system.offsets[i] =
        inst.system.coeffs.row(i).dot(theta) + rng.normal(0, sigma_in);
    inst.system.row_group[i] = i;
  }

  const int num_outliers = static_cast<int>(std::floor(outlier_frac * n));
  std::vector<std::uint8_t> mask(n, 1);
  for (int i : rng.sample_without_replacement(n, num_outliers)) {
    inst.system.offsets[i] += rng.uniform(-outlier_range, outlier_range);
    mask[i] = 0;
  }
  inst.ground_truth = GroundTruth{theta, std::move(mask)};
  return inst;
}

struct SynthMatches {
  std::vector<PointMatch> matches;
  Mat3 model;  // pixel-frame ground truth (homography or fundamental matrix)
  std::vector<std::uint8_t> inlier_mask;
};

namespace detail {

constexpr double kImageW = 640.0;
constexpr double kImageH = 480.0;

inline Mat3 random_homography(Rng& rng) {
  const double angle = rng.uniform(-0.3, 0.3);
  const double scale = rng.uniform(0.85, 1.2);
  const double tx = rng.uniform(-50, 50), ty = rng.uniform(-50, 50);
  const double p1 = rng.uniform(-1e-4, 1e-4), p2 = rng.uniform(-1e-4, 1e-4);
  const double c = std::cos(angle), s = std::sin(angle);
  // Similarity about the image center plus a mild perspective row.
  Mat3 center_in, center_out, core;
  center_in << 1, 0, -kImageW / 2, 0, 1, -kImageH / 2, 0, 0, 1;
  center_out << 1, 0, kImageW / 2 + tx, 0, 1, kImageH / 2 + ty, 0, 0, 1;
  core << scale * c, -scale * s, 0, scale * s, scale * c, 0, p1, p2, 1;
  return center_out * core * center_in;
}

struct StereoRig {
  Mat3 K, R, F;
  Eigen::Vector3d t;
};

inline StereoRig random_rig(Rng& rng) {
  StereoRig rig;
  const double f = 520.0;
  rig.K << f, 0, kImageW / 2, 0, f, kImageH / 2, 0, 0, 1;
  for (;;) {
    Eigen::Vector3d axis(rng.normal(), rng.normal(), rng.normal());
    axis.normalize();
    const double angle = rng.uniform(0.08, 0.25);
    rig.R = Eigen::AngleAxisd(angle, axis).toRotationMatrix();
    rig.t = Eigen::Vector3d(rng.normal(), rng.normal(), 0.3 * rng.normal());
    rig.t.normalize();
    rig.t *= 0.8;  // baseline small relative to scene depth
    Mat3 tx;
    tx << 0, -rig.t.z(), rig.t.y(), rig.t.z(), 0, -rig.t.x(), -rig.t.y(),
        rig.t.x(), 0;
    rig.F = rig.K.inverse().transpose() * tx * rig.R * rig.K.inverse();
    if (std::abs(rig.F(2, 2)) > 1e-4 * rig.F.norm()) return rig;
  }
}

inline Eigen::Vector2d project(const Mat3& K, const Eigen::Vector3d& X) {
  const Eigen::Vector3d x = K * X;
  return {x.x() / x.z(), x.y() / x.z()};
}

}  // namespace detail

/// Correspondences consistent with a random ground-truth model. Inlier second
/// points carry per-coordinate Gaussian pixel noise of sd `noise`; outlier
/// second points are redrawn uniformly in the image. Deterministic in `seed`.
inline SynthMatches synth_matches(MatchModel kind, int n, double noise,
                                  double outlier_frac, std::uint64_t seed) {
  const int min_n = (kind == MatchModel::kHomography) ? 5 : 9;
  if (n < min_n) throw std::invalid_argument("too few matches requested");
  if (noise < 0) throw std::invalid_argument("noise must be >= 0");
  if (outlier_frac < 0 || outlier_frac > 1)
    throw std::invalid_argument("outlier_frac must be in [0,1]");
  using detail::kImageH;
  using detail::kImageW;

  Rng rng(derive_seed(seed, 0x6d746368ULL, static_cast<int>(kind)));  // "mtch"
  SynthMatches out;
  out.inlier_mask.assign(n, 1);
  out.matches.resize(n);

  if (kind == MatchModel::kHomography) {
    out.model = detail::random_homography(rng);
    for (int i = 0; i < n; ++i) {
      const Eigen::Vector2d p(rng.uniform(0, kImageW), rng.uniform(0, kImageH));
      Eigen::Vector2d q = apply_similarity(out.model, p);
      q.x() += rng.normal(0, noise);
      q.y() += rng.normal(0, noise);
      out.matches[i] = {p, q};
    }
  } else {
    const detail::StereoRig rig = detail::random_rig(rng);
    out.model = rig.F;
    for (int i = 0; i < n; ++i) {
      // 3D point inside the first camera's frustum, then imaged by both views.
      const double Z = rng.uniform(4.0, 10.0);
      const Eigen::Vector3d X(rng.uniform(-0.45, 0.45) * Z,
                              rng.uniform(-0.34, 0.34) * Z, Z);
      const Eigen::Vector2d p = detail::project(rig.K, X);
      Eigen::Vector2d q = detail::project(rig.K, rig.R * X + rig.t);
      q.x() += rng.normal(0, noise);
      q.y() += rng.normal(0, noise);
      out.matches[i] = {p, q};
    }
  }

  const int num_outliers = static_cast<int>(std::floor(outlier_frac * n));
  for (int i : rng.sample_without_replacement(n, num_outliers)) {
    out.matches[i].q =
        Eigen::Vector2d(rng.uniform(0, kImageW), rng.uniform(0, kImageH));
    out.inlier_mask[i] = 0;
  }
  return out;
}

}  // namespace maxcon

#endif  // MAXCON_SYNTHETIC_HPP_
