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

#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "maxcon/bench.hpp"

using namespace maxcon;

namespace {

// Minimal CSV reader for the emitted schema.
std::vector<std::map<std::string, std::string>> parse_csv(
    const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> header;
  std::istringstream hs(line);
  std::string field;
  while (std::getline(hs, field, ',')) header.push_back(field);
  std::vector<std::map<std::string, std::string>> rows;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::map<std::string, std::string> row;
    for (size_t i = 0; i < header.size(); ++i) {
      std::getline(ls, field, ',');
      row[header[i]] = field;
    }
    rows.push_back(row);
  }
  return rows;
}

BenchSpec tiny_spec() {
  BenchSpec spec;
  spec.problem = BenchProblem::kHyperplane;
  spec.outlier_fractions = {0.0};
  spec.n = 20;
  spec.d = 2;
  spec.sigma_in = 0.01;
  spec.epsilon = 0.3;
  spec.methods = {"ransac"};
  spec.trials = 1;
  spec.base_seed = 5;
  spec.deterministic_output = true;
  return spec;
}

}  // namespace

TEST_CASE("single-trial all-inlier bench reports mean n and zero std",
          "[bench]") {
  const auto report = run_bench(tiny_spec());
  REQUIRE(report.cells.size() == 1);
  REQUIRE(report.cells[0].mean_count == 20.0);
  REQUIRE(report.cells[0].std_count == 0.0);
}

TEST_CASE("bench CSV is byte-identical across runs", "[bench]") {
  BenchSpec spec = tiny_spec();
  spec.outlier_fractions = {0.2, 0.4};
  spec.methods = {"ransac", "l1", "irlp"};
  spec.trials = 3;
  std::ostringstream a, b;
  write_report_csv(a, run_bench(spec));
  write_report_csv(b, run_bench(spec));
  REQUIRE(a.str() == b.str());
}

TEST_CASE("CSV round-trips the report values", "[bench]") {
  BenchSpec spec = tiny_spec();
  spec.outlier_fractions = {0.3};
  spec.methods = {"ransac", "irlp"};
  spec.trials = 2;
  spec.run_oracle = true;
  const auto report = run_bench(spec);
  std::ostringstream out;
  write_report_csv(out, report);
  const auto rows = parse_csv(out.str());
  REQUIRE(rows.size() == report.cells.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    REQUIRE(rows[i].at("method") == report.cells[i].method);
    REQUIRE(rows[i].at("cell") == report.cells[i].cell);
    REQUIRE(std::stod(rows[i].at("mean_count")) ==
            Catch::Approx(report.cells[i].mean_count));
    REQUIRE(std::stod(rows[i].at("std_count")) ==
            Catch::Approx(report.cells[i].std_count));
    REQUIRE(std::stod(rows[i].at("oracle_opt_frac")) ==
            Catch::Approx(report.cells[i].oracle_opt_frac));
  }
}

TEST_CASE("every method sees the identical instance per trial", "[bench]") {
  BenchSpec spec = tiny_spec();
  spec.outlier_fractions = {0.2};
  spec.methods = {"ransac", "mlesac", "l1", "linf", "irlp"};
  spec.trials = 2;
  const auto report = run_bench(spec);
  std::map<std::pair<int, int>, std::uint64_t> seen;
  for (const auto& t : report.trials) {
    const auto key = std::make_pair(t.cell_index, t.trial);
    if (seen.count(key))
      REQUIRE(seen[key] == t.instance_hash);
    else
      seen[key] = t.instance_hash;
  }
  REQUIRE(seen.size() == 2);
}

TEST_CASE("SVG has one polyline per method", "[bench]") {
  BenchSpec spec = tiny_spec();
  spec.outlier_fractions = {0.1, 0.3, 0.5};
  spec.methods = {"ransac", "l1", "irlp"};
  spec.trials = 1;
  std::ostringstream out;
  write_report_svg(out, run_bench(spec));
  const std::string svg = out.str();
  size_t count = 0, pos = 0;
  while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
    ++count;
    pos += 9;
  }
  REQUIRE(count == 3);
}

TEST_CASE("unknown methods are rejected", "[bench]") {
  BenchSpec spec = tiny_spec();
  spec.methods = {"gradient-descent"};
  REQUIRE_THROWS_AS(run_bench(spec), std::invalid_argument);
}

TEST_CASE("oracle column reports optimal fractions when it runs", "[bench]") {
  BenchSpec spec = tiny_spec();
  spec.outlier_fractions = {0.0};
  spec.methods = {"ransac"};
  spec.run_oracle = true;
  const auto report = run_bench(spec);
  REQUIRE(report.cells[0].oracle_ran);
  REQUIRE(report.cells[0].oracle_opt_frac == 1.0);  // clean data: both find n
}
