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

// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the process exits non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "maxcon/maxcon.hpp"
#include "oracles.hpp"

using namespace maxcon;

namespace {

double now_s() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

constexpr std::uint64_t kBaseSeed = 20260809ULL;

bool criterion1_hyperplane_sweep(std::string& detail) {
  const double t0 = now_s();
  BenchSpec spec;
  spec.problem = BenchProblem::kHyperplane;
  spec.outlier_fractions = {0.2, 0.4, 0.6};
  spec.n = 250;
  spec.d = 8;
  spec.sigma_in = 0.1;
  spec.outlier_range = 10.0;
  spec.epsilon = 0.3;
  spec.methods = {"irlp", "ransac", "l1"};
  spec.trials = 20;
  spec.base_seed = kBaseSeed;
  const BenchReport rep = run_bench(spec);

  std::map<std::pair<std::string, std::string>, double> mean;
  for (const auto& c : rep.cells) mean[{c.method, c.cell}] = c.mean_count;
  bool ok = true;
  std::ostringstream os;
  for (const std::string cell : {"frac=0.20", "frac=0.40", "frac=0.60"}) {
    const double ir = mean[{"irlp", cell}];
    const double ra = mean[{"ransac", cell}];
    if (ir < ra) ok = false;
    os << cell << " irlp=" << ir << " ransac=" << ra
       << " l1=" << mean[{"l1", cell}] << "; ";
  }
  const double ir60 = mean[{"irlp", "frac=0.60"}];
  const double l160 = mean[{"l1", "frac=0.60"}];
  if (ir60 < l160 + 5.0) ok = false;
  const double dt = now_s() - t0;
  if (dt >= 120.0) ok = false;
  os << "elapsed=" << dt << "s";
  detail = os.str();
  return ok;
}

bool criterion2_global_optimality_rate(std::string& detail) {
  const double t0 = now_s();
  int optimal = 0, within2 = 0;
  const int trials = 100;
  for (int t = 0; t < trials; ++t) {
    const auto inst =
        synth_hyperplane(25, 2, 0.1, 0.4, 10, derive_seed(kBaseSeed, 2, t));
    IRConfig cfg;
    cfg.epsilon = inst.epsilon;
    const auto fit = irlp_fit(inst.system, cfg);
    const auto oracle = exact_maxcon(inst.system, inst.epsilon);
    if (fit.count == oracle.count) ++optimal;
    if (fit.count >= oracle.count - 2) ++within2;
  }
  const double dt = now_s() - t0;
  std::ostringstream os;
  os << "optimal " << optimal << "/100 (need >= 20), within-2 " << within2
     << "/100 (need >= 85), elapsed=" << dt << "s";
  detail = os.str();
  return optimal >= 20 && within2 >= 85 && dt < 60.0;
}

bool criterion3_descent_invariant(std::string& detail) {
  const int runs = 1000;
  int checked = 0;
  for (int r = 0; r < runs; ++r) {
    const int n = 15 + 10 * (r % 3);
    const int d = 1 + (r / 3) % 3;
    const double frac = 0.15 * ((r / 9) % 5);
    const auto inst =
        synth_hyperplane(n, d, 0.1, frac, 10, derive_seed(kBaseSeed, 3, r));
    IRConfig cfg;
    cfg.epsilon = inst.epsilon;
    const auto fit = irlp_fit(inst.system, cfg);
    const auto& tr = fit.trace.iterations;
    if (tr.empty() || static_cast<int>(tr.size()) > cfg.max_iters) {
      detail = "run " + std::to_string(r) + " exceeded L";
      return false;
    }
    for (size_t l = 1; l < tr.size(); ++l)
      if (tr[l].surrogate > tr[l - 1].surrogate + 1e-10) {
        detail = "surrogate increased in run " + std::to_string(r);
        return false;
      }
    ++checked;
  }
  detail = std::to_string(checked) + " runs, surrogate non-increasing, all " +
           "within L=25";
  return true;
}

bool criterion4_subsolver_correctness(std::string& detail) {
  Rng rng(derive_seed(kBaseSeed, 4));
  double worst = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 4 + static_cast<int>(rng.below(7));
    const int d = 1 + static_cast<int>(rng.below(2));
    ResidualSystem sys;
    sys.coeffs.resize(n, d);
    sys.offsets.resize(n);
    sys.row_group.resize(n);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < d; ++k) sys.coeffs(i, k) = rng.uniform(-1, 1);
      sys.offsets[i] = rng.uniform(-2, 2);
      sys.row_group[i] = i;
    }
    sys.num_groups = n;
    Vec w(n);
    for (int i = 0; i < n; ++i) w[i] = rng.uniform(0.05, 3.0);
    const double eps = rng.uniform(0.05, 0.5);
    const auto sol = solve_weighted_slack_lp(sys, eps, w);
    if (sol.status != SolveStatus::kOptimal) {
      detail = "LP not optimal on rep " + std::to_string(rep);
      return false;
    }
    const double oracle = testing::weighted_slack_oracle(sys, eps, w);
    worst = std::max(worst, std::abs(sol.objective - oracle));
    if (std::abs(sol.objective - oracle) > 1e-6) {
      detail = "objective off oracle by " +
               std::to_string(sol.objective - oracle) + " on rep " +
               std::to_string(rep);
      return false;
    }
    const Vec r = residuals(sys, sol.theta);
    for (int i = 0; i < n; ++i) {
      const bool zero_slack = sol.slacks[i] <= 1e-9;
      const bool active =
          std::abs(r[i] - eps - sol.slacks[i]) <= 1e-7 * (1.0 + r[i]);
      if (!zero_slack && !active) {
        detail = "complementary slackness violated on rep " +
                 std::to_string(rep);
        return false;
      }
    }
  }
  std::ostringstream os;
  os << "200 instances vs vertex enumeration, worst gap " << worst;
  detail = os.str();
  return true;
}

bool criterion5_majorization_fuzz(std::string& detail) {
  Rng rng(derive_seed(kBaseSeed, 5));
  int ordered_pairs = 0;
  for (int rep = 0; rep < 10000; ++rep) {
    const int n = 4 + static_cast<int>(rng.below(6));
    Vec t(n);
    for (int i = 0; i < n; ++i)
      t[i] = rng.uniform01() < 0.4 ? 0.0 : rng.uniform(0.1, 1.0);
    if (t.sum() <= 0) {
      t[0] = 1.0;
    }
    t /= t.sum();
    Vec s = Vec::Zero(n);
    double total = 0;
    for (int k = 0; k < 3; ++k) {
      const double a = rng.uniform(0.1, 1.0);
      total += a;
      const auto perm = rng.sample_without_replacement(n, n);
      for (int i = 0; i < n; ++i) s[i] += a * t[perm[i]];
    }
    s /= total;
    const auto order = majorizes(s, t);
    if (order == MajorizationOrder::kMajorizedBy ||
        order == MajorizationOrder::kEqual) {
      ++ordered_pairs;
      const int zs = static_cast<int>((s.array().abs() <= 1e-12).count());
      const int zt = static_cast<int>((t.array().abs() <= 1e-12).count());
      if (zt < zs) {
        detail = "zero-count violation at rep " + std::to_string(rep);
        return false;
      }
    }
  }

  for (int rep = 0; rep < 10000; ++rep) {
    Vec s(5);
    for (int i = 0; i < 5; ++i) s[i] = rng.uniform(0, 3);
    const int i = static_cast<int>(rng.below(5));
    const int j = static_cast<int>(rng.below(5));
    if (schur_condition_check(0.01, s, {i, j}) > 0) {
      detail = "positive Schur condition value";
      return false;
    }
  }

  const double gamma = 0.01, h = 1e-5;
  for (int rep = 0; rep < 200; ++rep) {
    Vec s(6);
    for (int i = 0; i < 6; ++i) s[i] = rng.uniform(0.05, 2.0);
    const Vec w = update_weights_lp(s, gamma);
    for (int i = 0; i < 6; ++i) {
      Vec up = s, dn = s;
      up[i] += h;
      dn[i] -= h;
      const double fd =
          (surrogate_value(up, gamma) - surrogate_value(dn, gamma)) / (2 * h);
      if (std::abs(fd - w[i]) > 1e-6 * std::abs(w[i])) {
        detail = "finite-difference gradient mismatch";
        return false;
      }
    }
  }
  detail = "10^4 majorized pairs (" + std::to_string(ordered_pairs) +
           " ordered), 10^4 Schur values, gradient checks: zero violations";
  return true;
}

bool criterion6_baseline_sanity(std::string& detail) {
  const double t0 = now_s();
  int violations = 0;
  for (int rep = 0; rep < 500; ++rep) {
    const auto inst = synth_hyperplane(12, 2, 0.1, 0.3 + 0.02 * (rep % 10), 8,
                                       derive_seed(kBaseSeed, 6, rep));
    const int opt = exact_maxcon(inst.system, inst.epsilon).count;
    RansacConfig rc;
    rc.seed = rep;
    MlesacConfig mc;
    mc.seed = rep;
    IRConfig ic;
    ic.epsilon = inst.epsilon;
    const int counts[] = {
        ransac_fit(inst.system, inst.epsilon, rc).count,
        lo_ransac_fit(inst.system, inst.epsilon, rc).count,
        mlesac_fit(inst.system, inst.epsilon, mc).count,
        iterative_l1_fit(inst.system, inst.epsilon).count,
        iterative_linf_fit(inst.system, inst.epsilon).count,
        irlp_fit(inst.system, ic).count,
        irqp_fit(inst.system, ic).count,
    };
    for (int c : counts)
      if (c > opt) ++violations;
  }

  BenchSpec spec;
  spec.problem = BenchProblem::kHyperplane;
  spec.outlier_fractions = {0.2, 0.5};
  spec.n = 25;
  spec.d = 2;
  spec.epsilon = 0.3;
  spec.methods = {"ransac", "lo-ransac", "mlesac", "l1", "linf", "irlp"};
  spec.trials = 3;
  spec.base_seed = kBaseSeed;
  spec.deterministic_output = true;
  std::ostringstream a, b;
  write_report_csv(a, run_bench(spec));
  write_report_csv(b, run_bench(spec));
  const bool deterministic = a.str() == b.str();

  std::ostringstream os;
  os << "500 instances x 7 methods, " << violations
     << " oracle violations; double-run CSV "
     << (deterministic ? "byte-identical" : "DIFFERS") << "; elapsed "
     << (now_s() - t0) << "s";
  detail = os.str();
  return violations == 0 && deterministic;
}

bool criterion7_kkt_diagnostics(std::string& detail) {
  double worst_rel = 0.0;
  int converged = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const auto inst =
        synth_hyperplane(30, 2, 0.1, 0.4, 10, derive_seed(kBaseSeed, 7, rep));
    IRConfig cfg;
    cfg.epsilon = inst.epsilon;
    // Run the iteration to its fixed point (the default zeta is a benchmark
    // budget; stationarity is a property of the converged iterate).
    cfg.zeta = 1e-12;
    cfg.max_iters = 100;
    const auto fit = irlp_fit(inst.system, cfg);
    if (fit.terminated_by != Termination::kTolerance) {
      detail = "run " + std::to_string(rep) + " did not converge within L";
      return false;
    }
    ++converged;
    const double scale = inst.system.coeffs.rowwise().norm().maxCoeff();
    const double gap =
        kkt_stationarity_gap(inst.system, fit.theta, inst.epsilon, cfg.gamma);
    worst_rel = std::max(worst_rel, gap / scale);
    if (gap > 1e-6 * scale) {
      std::ostringstream os;
      os << "gap " << gap << " > 1e-6*" << scale << " at rep " << rep;
      detail = os.str();
      return false;
    }
  }
  std::ostringstream os;
  os << converged << " converged runs, worst gap / max-row-norm = " << worst_rel;
  detail = os.str();
  return true;
}

bool criterion8_homography_end_to_end(std::string& detail) {
  int successes = 0;
  double worst_time = 0.0;
  for (int t = 0; t < 20; ++t) {
    const double t0 = now_s();
    const auto sm = synth_matches(MatchModel::kHomography, 200, 1.0, 0.5,
                                  derive_seed(kBaseSeed, 8, t));
    const auto nm = normalize_matches(sm.matches);
    const auto sys = linearize_homography(nm.matches);
    IRConfig cfg;
    cfg.epsilon = 0.1;
    const auto fit = irlp_fit(sys, cfg);
    int recovered = 0;
    for (int i : fit.inliers)
      if (sm.inlier_mask[i]) ++recovered;
    if (recovered >= 95) ++successes;
    worst_time = std::max(worst_time, now_s() - t0);
  }
  std::ostringstream os;
  os << successes << "/20 trials recovered >= 95 planted inliers (need 18); "
     << "slowest trial " << worst_time << "s (need < 5)";
  detail = os.str();
  return successes >= 18 && worst_time < 5.0;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    bool (*fn)(std::string&);
  };
  const Criterion criteria[] = {
      {1, "hyperplane sweep dominance (d=8, n=250)", criterion1_hyperplane_sweep},
      {2, "global-optimality rate vs exact oracle", criterion2_global_optimality_rate},
      {3, "surrogate descent over 1000 runs", criterion3_descent_invariant},
      {4, "slack LP vs exhaustive vertex enumeration", criterion4_subsolver_correctness},
      {5, "majorization / Schur-concavity fuzz", criterion5_majorization_fuzz},
      {6, "baseline sanity vs oracle + determinism", criterion6_baseline_sanity},
      {7, "KKT stationarity at convergence", criterion7_kkt_diagnostics},
      {8, "synthetic homography end-to-end", criterion8_homography_end_to_end},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = c.fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %d: %s — %s\n", ok ? "PASS" : "FAIL", c.id,
                c.name, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
