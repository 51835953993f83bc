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

#include <sstream>

#include "maxcon/io.hpp"
#include "maxcon/synthetic.hpp"

using namespace maxcon;

TEST_CASE("match files parse with comments and blanks", "[io]") {
  std::istringstream in(
      "# header comment\n"
      "1.0 2.0 3.0 4.0\n"
      "\n"
      "5 6 7 8  # trailing comment\n");
  const auto ms = read_matches(in);
  REQUIRE(ms.size() == 2);
  REQUIRE(ms[1].q.y() == 8.0);
}

TEST_CASE("match parse errors carry line numbers", "[io]") {
  std::istringstream in("1 2 3 4\n1 2 three 4\n");
  try {
    read_matches(in);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    REQUIRE(e.line() == 2);
  }
}

TEST_CASE("match round trip is exact", "[io]") {
  const auto sm = synth_matches(MatchModel::kHomography, 20, 0.7, 0.3, 9);
  std::ostringstream out;
  write_matches(out, sm.matches);
  std::istringstream in(out.str());
  const auto back = read_matches(in);
  REQUIRE(back.size() == sm.matches.size());
  for (size_t i = 0; i < back.size(); ++i) {
    REQUIRE(back[i].p == sm.matches[i].p);
    REQUIRE(back[i].q == sm.matches[i].q);
  }
}

TEST_CASE("instance round trip is exact", "[io]") {
  const auto inst = synth_hyperplane(30, 4, 0.1, 0.4, 10, 17);
  std::ostringstream out;
  write_instance(out, inst);
  std::istringstream in(out.str());
  const auto back = read_instance(in);
  REQUIRE(back.epsilon == inst.epsilon);
  REQUIRE(back.system.coeffs == inst.system.coeffs);
  REQUIRE(back.system.offsets == inst.system.offsets);
  REQUIRE(back.system.row_group == inst.system.row_group);
}

TEST_CASE("instance parser validates structure", "[io]") {
  SECTION("missing header") {
    std::istringstream in("");
    REQUIRE_THROWS_AS(read_instance(in), ParseError);
  }
  SECTION("row with too few coefficients") {
    std::istringstream in("2 2 0.1\n0 1.0 0.5\n");
    try {
      read_instance(in);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      REQUIRE(e.line() == 2);
    }
  }
  SECTION("group index out of range") {
    std::istringstream in("2 1 0.1\n0 1.0 0.5\n5 1.0 0.5\n");
    REQUIRE_THROWS_AS(read_instance(in), ParseError);
  }
  SECTION("empty group") {
    std::istringstream in("3 1 0.1\n0 1.0 0.5\n0 1.0 0.5\n1 1.0 0.5\n");
    REQUIRE_THROWS_AS(read_instance(in), std::invalid_argument);
  }
}

TEST_CASE("inlier mask output", "[io]") {
  std::ostringstream out;
  write_inlier_mask(out, 4, {0, 2});
  REQUIRE(out.str() == "1\n0\n1\n0\n");
}
