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

#ifndef MAXCON_BENCH_HPP_
#define MAXCON_BENCH_HPP_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "maxcon/baselines.hpp"
#include "maxcon/geometry.hpp"
#include "maxcon/io.hpp"
#include "maxcon/residual_system.hpp"
#include "maxcon/reweight.hpp"
#include "maxcon/rng.hpp"
#include "maxcon/synthetic.hpp"

namespace maxcon {

enum class BenchProblem {
  kHyperplane,
  kHomographyLinear,
  kFundamentalLinear,
  kFile,
};

struct BenchSpec {
  BenchProblem problem = BenchProblem::kHyperplane;
  std::vector<double> outlier_fractions = {0.2, 0.4, 0.6};
  int n = 250;
  int d = 8;
  double sigma_in = 0.1;
  double outlier_range = 10.0;
  double match_noise_px = 1.0;
  double epsilon = 0.3;
  std::vector<std::string> methods = {"irlp", "ransac", "l1"};
  int trials = 20;
  std::uint64_t base_seed = 0;
  double time_budget_s = 0.0;  // > 0 puts `ransac` into L-RANSAC mode
  bool run_oracle = false;     // skipped automatically when the guard trips
  EnumerationLimits oracle_limits;
  std::string instance_path;  // for BenchProblem::kFile
  bool deterministic_output = false;  // report wall times as 0 in emissions
  IRConfig reweight;  // gamma/max_iters/zeta/init; epsilon comes from above
  bool init_explicit = false;  // user picked reweight.init; don't auto-switch

  void validate() const {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (methods.empty()) throw std::invalid_argument("no methods selected");
    if (problem != BenchProblem::kFile) {
      if (outlier_fractions.empty())
        throw std::invalid_argument("no sweep cells");
      for (double f : outlier_fractions)
        if (f < 0 || f >= 1)
          throw std::invalid_argument("outlier fractions must be in [0,1)");
    }
  }
};

struct BenchCellStats {
  std::string method;
  std::string cell;
  int n = 0;
  double mean_count = 0.0;
  double std_count = 0.0;
  double mean_time_s = 0.0;
  bool oracle_ran = false;
  double oracle_opt_frac = 0.0;
};

struct BenchTrialRecord {
  int cell_index = 0;
  int trial = 0;
  std::string method;
  int count = 0;
  double time_s = 0.0;
  std::uint64_t instance_hash = 0;
};

struct BenchReport {
  std::vector<BenchCellStats> cells;
  std::vector<BenchTrialRecord> trials;
  bool deterministic_output = false;
};

inline std::uint64_t hash_system(const ResidualSystem& system,
                                 double epsilon) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto mix = [&h](const void* data, size_t bytes) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < bytes; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ULL;
    }
  };
  mix(system.coeffs.data(), sizeof(double) * system.coeffs.size());
  mix(system.offsets.data(), sizeof(double) * system.offsets.size());
  mix(system.row_group.data(), sizeof(int) * system.row_group.size());
  mix(&system.num_groups, sizeof(int));
  mix(&epsilon, sizeof(double));
  return h;
}

inline bool is_known_method(const std::string& m) {
  return m == "ransac" || m == "lo-ransac" || m == "mlesac" || m == "l1" ||
         m == "linf" || m == "irlp" || m == "irqp" || m == "exact";
}

/// Dispatch by CLI method name. `spec` supplies the reweight configuration,
/// the L-RANSAC time budget and the oracle guard.
inline ConsensusResult run_method(const std::string& method,
                                  const ResidualSystem& system, double epsilon,
                                  std::uint64_t seed, const BenchSpec& spec) {
  if (method == "ransac") {
    RansacConfig cfg;
    cfg.seed = seed;
    cfg.time_budget_s = spec.time_budget_s;
    return ransac_fit(system, epsilon, cfg);
  }
  if (method == "lo-ransac") {
    RansacConfig cfg;
    cfg.seed = seed;
    return lo_ransac_fit(system, epsilon, cfg);
  }
  if (method == "mlesac") {
    MlesacConfig cfg;
    cfg.seed = seed;
    return mlesac_fit(system, epsilon, cfg);
  }
  if (method == "l1") return iterative_l1_fit(system, epsilon);
  if (method == "linf") return iterative_linf_fit(system, epsilon);
  if (method == "irlp" || method == "irqp") {
    IRConfig cfg = spec.reweight;
    cfg.epsilon = epsilon;
    cfg.init_seed = seed;
    // Fundamental-matrix fitting defaults to the iterative-linf start.
    if (spec.problem == BenchProblem::kFundamentalLinear && !spec.init_explicit)
      cfg.init = InitMode::kLinf;
    return method == "irlp" ? irlp_fit(system, cfg) : irqp_fit(system, cfg);
  }
  if (method == "exact") return exact_maxcon(system, epsilon, spec.oracle_limits);
  throw std::invalid_argument("unknown method: " + method);
}

namespace detail {

inline ProblemInstance bench_instance(const BenchSpec& spec, int cell,
                                      double fraction, std::uint64_t seed) {
  switch (spec.problem) {
    case BenchProblem::kHyperplane:
      return synth_hyperplane(spec.n, spec.d, spec.sigma_in, fraction,
                              spec.outlier_range, seed, spec.epsilon);
    case BenchProblem::kHomographyLinear:
    case BenchProblem::kFundamentalLinear: {
      const MatchModel kind = spec.problem == BenchProblem::kHomographyLinear
                                  ? MatchModel::kHomography
                                  : MatchModel::kFundamental;
      const SynthMatches sm =
          synth_matches(kind, spec.n, spec.match_noise_px, fraction, seed);
      const NormalizedMatches nm = normalize_matches(sm.matches);
      ProblemInstance inst;
      inst.system = kind == MatchModel::kHomography
                        ? linearize_homography(nm.matches)
                        : linearize_fundamental(nm.matches);
      inst.epsilon = spec.epsilon;
      inst.ground_truth = GroundTruth{
          model_to_theta(model_in_normalized_frame(sm.model, nm.T1, nm.T2,
                                                   kind)),
          sm.inlier_mask};
      return inst;
    }
    case BenchProblem::kFile:
      return read_instance_file(spec.instance_path);
  }
  throw std::invalid_argument("unknown bench problem");
  (void)cell;
}

}  // namespace detail

/// Runs every selected method on identical seeded instances, cell by cell.
/// Per trial the instance is generated once and hashed before every method
/// invocation; wall time covers only the method call.
inline BenchReport run_bench(const BenchSpec& spec) {
  spec.validate();
  for (const auto& m : spec.methods)
    if (!is_known_method(m))
      throw std::invalid_argument("unknown method: " + m);

  const int num_cells = spec.problem == BenchProblem::kFile
                            ? 1
                            : static_cast<int>(spec.outlier_fractions.size());
  BenchReport report;
  report.deterministic_output = spec.deterministic_output;

  for (int cell = 0; cell < num_cells; ++cell) {
    const double fraction =
        spec.problem == BenchProblem::kFile ? 0.0 : spec.outlier_fractions[cell];
    std::string cell_label;
    if (spec.problem == BenchProblem::kFile) {
      cell_label = "file";
    } else {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "frac=%.2f", fraction);
      cell_label = buf;
    }

    std::vector<int> oracle_counts;
    bool oracle_every_trial = spec.run_oracle;
    std::vector<std::vector<int>> counts(spec.methods.size());
    std::vector<std::vector<double>> times(spec.methods.size());

    for (int trial = 0; trial < spec.trials; ++trial) {
      const std::uint64_t seed = derive_seed(spec.base_seed, cell, trial);
      const ProblemInstance inst = detail::bench_instance(spec, cell, fraction, seed);

      if (spec.run_oracle && oracle_every_trial) {
        try {
          oracle_counts.push_back(
              exact_maxcon(inst.system, inst.epsilon, spec.oracle_limits)
                  .count);
        } catch (const LimitExceededError&) {
          oracle_every_trial = false;  // cell reported without oracle column
        }
      }

      for (size_t mi = 0; mi < spec.methods.size(); ++mi) {
        const std::uint64_t h = hash_system(inst.system, inst.epsilon);
        const auto t0 = std::chrono::steady_clock::now();
        const ConsensusResult res = run_method(
            spec.methods[mi], inst.system, inst.epsilon, seed, spec);
        const double dt =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        counts[mi].push_back(res.count);
        times[mi].push_back(dt);
        report.trials.push_back(
            {cell, trial, spec.methods[mi], res.count, dt, h});
      }
    }

    const bool oracle_ok =
        spec.run_oracle && oracle_every_trial &&
        static_cast<int>(oracle_counts.size()) == spec.trials;
    for (size_t mi = 0; mi < spec.methods.size(); ++mi) {
      BenchCellStats stats;
      stats.method = spec.methods[mi];
      stats.cell = cell_label;
      stats.n = spec.problem == BenchProblem::kFile
                    ? detail::bench_instance(spec, cell, 0.0, 0).system.size()
                    : spec.n;
      double mean = 0;
      for (int c : counts[mi]) mean += c;
      mean /= spec.trials;
      double var = 0;
      for (int c : counts[mi]) var += (c - mean) * (c - mean);
      stats.mean_count = mean;
      stats.std_count = std::sqrt(var / spec.trials);
      double tmean = 0;
      for (double t : times[mi]) tmean += t;
      stats.mean_time_s = tmean / spec.trials;
      stats.oracle_ran = oracle_ok;
      if (oracle_ok) {
        int hits = 0;
        for (int t = 0; t < spec.trials; ++t)
          if (counts[mi][t] == oracle_counts[t]) ++hits;
        stats.oracle_opt_frac = static_cast<double>(hits) / spec.trials;
      }
      report.cells.push_back(stats);
    }
  }
  return report;
}

/// CSV schema: method,cell,n,mean_count,std_count,mean_time_s,oracle_opt_frac
inline void write_report_csv(std::ostream& out, const BenchReport& report) {
  out << "method,cell,n,mean_count,std_count,mean_time_s,oracle_opt_frac\n";
  char buf[256];
  for (const auto& c : report.cells) {
    const double t = report.deterministic_output ? 0.0 : c.mean_time_s;
    std::snprintf(buf, sizeof(buf), "%s,%s,%d,%.9g,%.9g,%.9g,", c.method.c_str(),
                  c.cell.c_str(), c.n, c.mean_count, c.std_count, t);
    out << buf;
    if (c.oracle_ran) {
      std::snprintf(buf, sizeof(buf), "%.9g", c.oracle_opt_frac);
      out << buf;
    }
    out << '\n';
  }
}

inline std::string format_report_table(const BenchReport& report) {
  std::ostringstream out;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-10s %-12s %6s %12s %10s %12s %10s\n",
                "method", "cell", "n", "mean", "std", "time(s)", "opt-frac");
  out << buf;
  for (const auto& c : report.cells) {
    const double t = report.deterministic_output ? 0.0 : c.mean_time_s;
    std::string opt = "-";
    if (c.oracle_ran) {
      std::snprintf(buf, sizeof(buf), "%.3f", c.oracle_opt_frac);
      opt = buf;
    }
    std::snprintf(buf, sizeof(buf), "%-10s %-12s %6d %12.2f %10.2f %12.4f %10s\n",
                  c.method.c_str(), c.cell.c_str(), c.n, c.mean_count,
                  c.std_count, t, opt.c_str());
    out << buf;
  }
  return out.str();
}

/// Consensus-vs-cell line chart, one polyline per method.
inline void write_report_svg(std::ostream& out, const BenchReport& report) {
  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                   "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};
  std::vector<std::string> methods, cells;
  double max_count = 1.0;
  for (const auto& c : report.cells) {
    if (std::find(methods.begin(), methods.end(), c.method) == methods.end())
      methods.push_back(c.method);
    if (std::find(cells.begin(), cells.end(), c.cell) == cells.end())
      cells.push_back(c.cell);
    max_count = std::max(max_count, c.mean_count);
  }
  const double W = 640, H = 480, L = 60, B = 40, T = 20, R = 20;
  const double plot_w = W - L - R, plot_h = H - T - B;
  const auto x_of = [&](size_t ci) {
    return cells.size() > 1
               ? L + plot_w * static_cast<double>(ci) / (cells.size() - 1)
               : L + plot_w / 2;
  };
  const auto y_of = [&](double v) { return T + plot_h * (1.0 - v / max_count); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << L << "\" y1=\"" << T + plot_h << "\" x2=\"" << L + plot_w
      << "\" y2=\"" << T + plot_h << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\""
      << T + plot_h << "\" stroke=\"black\"/>\n";
  for (size_t ci = 0; ci < cells.size(); ++ci)
    out << "<text x=\"" << x_of(ci) << "\" y=\"" << H - 10
        << "\" font-size=\"12\" text-anchor=\"middle\">" << cells[ci]
        << "</text>\n";
  for (size_t mi = 0; mi < methods.size(); ++mi) {
    out << "<polyline fill=\"none\" stroke=\"" << kPalette[mi % 8]
        << "\" stroke-width=\"2\" points=\"";
    for (size_t ci = 0; ci < cells.size(); ++ci)
      for (const auto& c : report.cells)
        if (c.method == methods[mi] && c.cell == cells[ci])
          out << x_of(ci) << ',' << y_of(c.mean_count) << ' ';
    out << "\"/>\n";
    out << "<text x=\"" << L + 10 << "\" y=\"" << T + 16 + 16 * mi
        << "\" font-size=\"12\" fill=\"" << kPalette[mi % 8] << "\">"
        << methods[mi] << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace maxcon

#endif  // MAXCON_BENCH_HPP_
