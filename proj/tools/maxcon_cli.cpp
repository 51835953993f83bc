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

// Command-line harness: synthetic data generation, single fits, and the
// seeded benchmark sweep. Exit codes: 0 ok, 2 usage, 3 data, 4 solver.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "maxcon/maxcon.hpp"

namespace {

using namespace maxcon;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitSolver = 4;

InitMode parse_init(const std::string& name) {
  if (name == "ones") return InitMode::kOnes;
  if (name == "linf") return InitMode::kLinf;
  if (name == "ransac") return InitMode::kRansac;
  throw CLI::ValidationError("--init", "unknown init mode: " + name);
}

struct FitArgs {
  std::string input;
  std::string problem = "instance";
  std::string method = "irlp";
  double epsilon = -1.0;  // <0: take it from the instance file
  double gamma = 0.01;
  int max_iters = 25;
  double zeta = 1e-4;
  std::string init = "ones";
  bool init_explicit = false;
  std::uint64_t seed = 0;
  double time_budget = 0.0;
  std::string inliers_out;
};

int run_fit(const FitArgs& args) {
  ProblemInstance inst;
  if (args.problem == "instance") {
    inst = read_instance_file(args.input);
    if (args.epsilon >= 0) inst.epsilon = args.epsilon;
  } else if (args.problem == "homography-linear" ||
             args.problem == "fundamental-linear") {
    const auto matches = read_matches_file(args.input);
    const auto nm = normalize_matches(matches);
    inst.system = args.problem == "homography-linear"
                      ? linearize_homography(nm.matches)
                      : linearize_fundamental(nm.matches);
    inst.epsilon = args.epsilon >= 0 ? args.epsilon : 0.1;
  } else {
    std::cerr << "unknown problem: " << args.problem << "\n";
    return kExitUsage;
  }

  BenchSpec spec;
  spec.problem = args.problem == "fundamental-linear"
                     ? BenchProblem::kFundamentalLinear
                     : BenchProblem::kHyperplane;
  spec.reweight.gamma = args.gamma;
  spec.reweight.max_iters = args.max_iters;
  spec.reweight.zeta = args.zeta;
  spec.reweight.init = parse_init(args.init);
  spec.init_explicit = args.init_explicit;
  spec.time_budget_s = args.time_budget;
  if (!is_known_method(args.method)) {
    std::cerr << "unknown method: " << args.method << "\n";
    return kExitUsage;
  }

  const ConsensusResult res =
      run_method(args.method, inst.system, inst.epsilon, args.seed, spec);

  std::printf("method:     %s\n", args.method.c_str());
  std::printf("points:     %d\n", inst.system.size());
  std::printf("epsilon:    %g\n", inst.epsilon);
  std::printf("consensus:  %d\n", res.count);
  std::printf("iterations: %zu\n", res.trace.iterations.size());
  std::printf("wall_time:  %.4f s\n", res.wall_time_s);
  std::printf("theta:     ");
  for (int k = 0; k < res.theta.size(); ++k)
    std::printf(" %.12g", res.theta[k]);
  std::printf("\n");

  if (!args.inliers_out.empty()) {
    std::ofstream out(args.inliers_out);
    if (!out) {
      std::cerr << "cannot write " << args.inliers_out << "\n";
      return kExitData;
    }
    write_inlier_mask(out, inst.system.size(), res.inliers);
  }
  return 0;
}

struct BenchArgs {
  std::string problem = "hyperplane";
  std::string input;
  std::vector<double> fractions = {0.2, 0.4, 0.6};
  int n = 250;
  int d = 8;
  double sigma_in = 0.1;
  double outlier_range = 10.0;
  double noise_px = 1.0;
  double epsilon = 0.3;
  std::vector<std::string> methods = {"irlp", "ransac", "l1"};
  int trials = 20;
  bool paper_scale = false;
  std::uint64_t seed = 0;
  double time_budget = 0.0;
  bool oracle = false;
  double gamma = 0.01;
  int max_iters = 25;
  double zeta = 1e-4;
  std::string init = "ones";
  bool init_explicit = false;
  bool no_timings = false;
  std::string out_csv;
  std::string out_svg;
  bool table = true;
};

int run_bench_cmd(const BenchArgs& args) {
  BenchSpec spec;
  if (args.problem == "hyperplane") {
    spec.problem = BenchProblem::kHyperplane;
  } else if (args.problem == "homography-linear") {
    spec.problem = BenchProblem::kHomographyLinear;
  } else if (args.problem == "fundamental-linear") {
    spec.problem = BenchProblem::kFundamentalLinear;
  } else if (args.problem == "file") {
    spec.problem = BenchProblem::kFile;
    spec.instance_path = args.input;
  } else {
    std::cerr << "unknown problem: " << args.problem << "\n";
    return kExitUsage;
  }
  spec.outlier_fractions = args.fractions;
  spec.n = args.n;
  spec.d = args.d;
  spec.sigma_in = args.sigma_in;
  spec.outlier_range = args.outlier_range;
  spec.match_noise_px = args.noise_px;
  spec.epsilon = args.epsilon;
  spec.methods = args.methods;
  spec.trials = args.paper_scale ? 100 : args.trials;
  spec.base_seed = args.seed;
  spec.time_budget_s = args.time_budget;
  spec.run_oracle = args.oracle;
  spec.deterministic_output = args.no_timings;
  spec.reweight.gamma = args.gamma;
  spec.reweight.max_iters = args.max_iters;
  spec.reweight.zeta = args.zeta;
  spec.reweight.init = parse_init(args.init);
  spec.init_explicit = args.init_explicit;

  const BenchReport report = run_bench(spec);
  if (args.table) std::cout << format_report_table(report);
  if (!args.out_csv.empty()) {
    std::ofstream out(args.out_csv);
    if (!out) {
      std::cerr << "cannot write " << args.out_csv << "\n";
      return kExitData;
    }
    write_report_csv(out, report);
  }
  if (!args.out_svg.empty()) {
    std::ofstream out(args.out_svg);
    if (!out) {
      std::cerr << "cannot write " << args.out_svg << "\n";
      return kExitData;
    }
    write_report_svg(out, report);
  }
  return 0;
}

struct SynthArgs {
  std::string problem = "hyperplane";
  int n = 250;
  int d = 8;
  double sigma_in = 0.1;
  double outlier_frac = 0.4;
  double outlier_range = 10.0;
  double noise_px = 1.0;
  double epsilon = 0.3;
  std::uint64_t seed = 0;
  std::string out;
};

int run_synth(const SynthArgs& args) {
  std::ofstream out(args.out);
  if (!out) {
    std::cerr << "cannot write " << args.out << "\n";
    return kExitData;
  }
  if (args.problem == "hyperplane") {
    const auto inst =
        synth_hyperplane(args.n, args.d, args.sigma_in, args.outlier_frac,
                         args.outlier_range, args.seed, args.epsilon);
    write_instance(out, inst);
  } else if (args.problem == "homography" || args.problem == "fundamental") {
    const auto kind = args.problem == "homography" ? MatchModel::kHomography
                                                   : MatchModel::kFundamental;
    const auto sm =
        synth_matches(kind, args.n, args.noise_px, args.outlier_frac, args.seed);
    write_matches(out, sm.matches);
  } else {
    std::cerr << "unknown problem: " << args.problem << "\n";
    return kExitUsage;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"maxcon: robust model fitting by maximum consensus"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Config file (key = value lines)");

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a model to one input file");
  fit_cmd->add_option("--input", fit.input, "Instance or match file")
      ->required();
  fit_cmd->add_option("--problem", fit.problem,
                      "instance | homography-linear | fundamental-linear");
  fit_cmd->add_option("--method", fit.method,
                      "ransac|lo-ransac|mlesac|l1|linf|irlp|irqp|exact");
  fit_cmd->add_option("--epsilon", fit.epsilon, "Inlier threshold");
  fit_cmd->add_option("--gamma", fit.gamma, "Surrogate damping");
  fit_cmd->add_option("--max-iters", fit.max_iters, "Outer iteration cap");
  fit_cmd->add_option("--zeta", fit.zeta, "Stopping tolerance");
  auto* fit_init = fit_cmd->add_option("--init", fit.init, "ones|linf|ransac");
  fit_cmd->add_option("--seed", fit.seed, "RNG seed");
  fit_cmd->add_option("--time-budget", fit.time_budget,
                      "Wall seconds for ransac (L-RANSAC mode)");
  fit_cmd->add_option("--inliers-out", fit.inliers_out,
                      "Write a 0/1 inlier mask here");

  BenchArgs bench;
  auto* bench_cmd =
      app.add_subcommand("bench", "Seeded multi-method benchmark sweep");
  bench_cmd->add_option("--problem", bench.problem,
                        "hyperplane | homography-linear | fundamental-linear | file");
  bench_cmd->add_option("--input", bench.input, "Instance file (problem=file)");
  bench_cmd->add_option("--fractions", bench.fractions,
                        "Outlier fractions to sweep");
  bench_cmd->add_option("--n", bench.n, "Points per instance");
  bench_cmd->add_option("--d", bench.d, "Parameter dimension");
  bench_cmd->add_option("--sigma-in", bench.sigma_in, "Inlier noise sd");
  bench_cmd->add_option("--outlier-range", bench.outlier_range,
                        "Uniform outlier half-range");
  bench_cmd->add_option("--noise-px", bench.noise_px,
                        "Match noise (pixels)");
  bench_cmd->add_option("--epsilon", bench.epsilon, "Inlier threshold");
  bench_cmd->add_option("--methods", bench.methods, "Methods to run");
  bench_cmd->add_option("--trials", bench.trials, "Trials per cell");
  bench_cmd->add_flag("--paper-scale", bench.paper_scale,
                      "Use 100 trials per cell");
  bench_cmd->add_option("--seed", bench.seed, "Base seed");
  bench_cmd->add_option("--time-budget", bench.time_budget,
                        "L-RANSAC wall budget (s)");
  bench_cmd->add_flag("--oracle", bench.oracle,
                      "Run the exact oracle when feasible");
  bench_cmd->add_option("--gamma", bench.gamma, "Surrogate damping");
  bench_cmd->add_option("--max-iters", bench.max_iters,
                        "Outer iteration cap");
  bench_cmd->add_option("--zeta", bench.zeta, "Stopping tolerance");
  auto* bench_init =
      bench_cmd->add_option("--init", bench.init, "ones|linf|ransac");
  bench_cmd->add_flag("--no-timings", bench.no_timings,
                      "Emit deterministic reports (times as 0)");
  bench_cmd->add_option("--out", bench.out_csv, "CSV output path");
  bench_cmd->add_option("--svg", bench.out_svg, "SVG chart output path");

  SynthArgs synth;
  auto* synth_cmd =
      app.add_subcommand("synth", "Write a synthetic instance or match file");
  synth_cmd->add_option("--problem", synth.problem,
                        "hyperplane | homography | fundamental");
  synth_cmd->add_option("--n", synth.n, "Points");
  synth_cmd->add_option("--d", synth.d, "Dimension (hyperplane)");
  synth_cmd->add_option("--sigma-in", synth.sigma_in, "Inlier noise sd");
  synth_cmd->add_option("--outlier-frac", synth.outlier_frac,
                        "Outlier fraction");
  synth_cmd->add_option("--outlier-range", synth.outlier_range,
                        "Uniform outlier half-range");
  synth_cmd->add_option("--noise-px", synth.noise_px,
                        "Match noise (pixels)");
  synth_cmd->add_option("--epsilon", synth.epsilon, "Inlier threshold");
  synth_cmd->add_option("--seed", synth.seed, "RNG seed");
  synth_cmd->add_option("--out", synth.out, "Output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  fit.init_explicit = fit_init->count() > 0;
  bench.init_explicit = bench_init->count() > 0;

  try {
    if (fit_cmd->parsed()) return run_fit(fit);
    if (bench_cmd->parsed()) return run_bench_cmd(bench);
    if (synth_cmd->parsed()) return run_synth(synth);
  } catch (const ParseError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const DegenerateDataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const LimitExceededError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
