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

#ifndef MAXCON_DIVERSITY_HPP_
#define MAXCON_DIVERSITY_HPP_

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "maxcon/residual_system.hpp"

namespace maxcon {

/// Cumulative sums of the non-increasing rearrangement; plotting them
/// against k gives the Lorentz curve of the vector.
struct LorentzCurve {
  Vec partial_sums;  // S[k] = sum of the k+1 largest entries
};

inline LorentzCurve lorentz_partial_sums(const Vec& s) {
  if ((s.array() < 0).any())
    throw std::invalid_argument("entries must be non-negative");
  std::vector<double> sorted(s.data(), s.data() + s.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  LorentzCurve curve;
  curve.partial_sums.resize(s.size());
  double acc = 0.0;
  for (int k = 0; k < s.size(); ++k) {
    acc += sorted[k];
    curve.partial_sums[k] = acc;
  }
  return curve;
}

enum class MajorizationOrder {
  kMajorizedBy,   // s majorized by t (s is the more diverse one)
  kMajorizes,     // t majorized by s
  kEqual,         // equal up to permutation
  kIncomparable,  // Lorentz curves cross
};

/// Majorization comparison via sorted partial sums, with tolerance 1e-12.
/// Requires equal totals; vectors whose Lorentz curves cross (or whose sums
/// differ) are incomparable.
inline MajorizationOrder majorizes(const Vec& s, const Vec& t) {
  if (s.size() != t.size()) throw std::invalid_argument("length mismatch");
  const Vec Ss = lorentz_partial_sums(s).partial_sums;
  const Vec St = lorentz_partial_sums(t).partial_sums;
  const int n = static_cast<int>(s.size());
  constexpr double kTol = 1e-12;
  if (std::abs(Ss[n - 1] - St[n - 1]) > kTol)
    return MajorizationOrder::kIncomparable;
  bool s_below = true, t_below = true;
  for (int k = 0; k + 1 < n; ++k) {
    if (Ss[k] > St[k] + kTol) s_below = false;
    if (St[k] > Ss[k] + kTol) t_below = false;
  }
  if (s_below && t_below) return MajorizationOrder::kEqual;
  if (s_below) return MajorizationOrder::kMajorizedBy;
  if (t_below) return MajorizationOrder::kMajorizes;
  return MajorizationOrder::kIncomparable;
}

/// Schur-condition value of the surrogate G_gamma for the pair (i, j):
/// (s_i - s_j)(dG/ds_i - dG/ds_j) = -(s_i - s_j)^2 / ((s_i+g)(s_j+g)).
/// Non-positive everywhere, which is what makes G_gamma Schur-concave.
inline double schur_condition_check(double gamma, const Vec& s,
                                    std::pair<int, int> pair) {
  if (gamma <= 0) throw std::invalid_argument("gamma must be positive");
  if ((s.array() < 0).any())
    throw std::invalid_argument("entries must be non-negative");
  const auto [i, j] = pair;
  if (i < 0 || j < 0 || i >= s.size() || j >= s.size())
    throw std::invalid_argument("pair index out of range");
  const double di = 1.0 / (s[i] + gamma);
  const double dj = 1.0 / (s[j] + gamma);
  return (s[i] - s[j]) * (di - dj);
}

/// CSV dump of a Lorentz curve: `k,partial_sum` pairs, 1-based k.
inline void write_lorentz_csv(std::ostream& out, const LorentzCurve& curve) {
  out << "k,partial_sum\n";
  for (int k = 0; k < curve.partial_sums.size(); ++k)
    out << (k + 1) << ',' << curve.partial_sums[k] << '\n';
}

}  // namespace maxcon

#endif  // MAXCON_DIVERSITY_HPP_
