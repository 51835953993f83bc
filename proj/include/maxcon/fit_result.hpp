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

#ifndef MAXCON_FIT_RESULT_HPP_
#define MAXCON_FIT_RESULT_HPP_

#include <vector>

#include "maxcon/residual_system.hpp"

namespace maxcon {

enum class Termination { kTolerance, kIterationLimit };

struct IterRecord {
  double surrogate = 0.0;           // sum_i log(s_i + gamma)
  double weighted_objective = 0.0;  // subproblem objective at this iterate
  int consensus_count = 0;
  int positive_slacks = 0;
  double max_slack = 0.0;
};

struct IterTrace {
  std::vector<IterRecord> iterations;
};

/// Outcome of a consensus-maximization fit (reweighted schemes and the
/// baselines all report through this).
struct ConsensusResult {
  Vec theta;
  std::vector<int> inliers;
  int count = 0;
  IterTrace trace;
  double wall_time_s = 0.0;
  Termination terminated_by = Termination::kTolerance;
};

}  // namespace maxcon

#endif  // MAXCON_FIT_RESULT_HPP_
