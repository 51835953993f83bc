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

#include "maxcon/diversity.hpp"
#include "maxcon/reweight.hpp"
#include "maxcon/rng.hpp"

using namespace maxcon;

namespace {

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

int zero_count(const Vec& v) {
  return static_cast<int>((v.array().abs() <= 1e-12).count());
}

// Random convex combination of permutations of t; Birkhoff mixing, so the
// result is always majorized by t.
Vec random_mix(const Vec& t, Rng& rng) {
  const int n = static_cast<int>(t.size());
  Vec s = Vec::Zero(n);
  double total = 0;
  for (int k = 0; k < 3; ++k) {
    const double a = rng.uniform(0.1, 1.0);
    total += a;
    const auto perm = rng.sample_without_replacement(n, n);
    for (int i = 0; i < n; ++i) s[i] += a * t[perm[i]];
  }
  return s / total;
}

}  // namespace

TEST_CASE("lorentz partial sums", "[diversity]") {
  REQUIRE(lorentz_partial_sums(vec({1, 1, 1, 1})).partial_sums ==
          vec({1, 2, 3, 4}));
  REQUIRE(lorentz_partial_sums(vec({0.7, 0.3, 0, 0})).partial_sums ==
          vec({0.7, 1.0, 1.0, 1.0}));
  REQUIRE(lorentz_partial_sums(vec({0.3, 0, 0.7, 0})).partial_sums ==
          lorentz_partial_sums(vec({0.7, 0.3, 0, 0})).partial_sums);
  REQUIRE_THROWS_AS(lorentz_partial_sums(vec({-0.1, 1})),
                    std::invalid_argument);
}

TEST_CASE("majorization order on the worked examples", "[diversity]") {
  REQUIRE(majorizes(vec({0.4, 0.3, 0.2, 0.1}), vec({0.7, 0.3, 0, 0})) ==
          MajorizationOrder::kMajorizedBy);
  REQUIRE(majorizes(vec({0.7, 0.3, 0, 0}), vec({0.4, 0.3, 0.2, 0.1})) ==
          MajorizationOrder::kMajorizes);
  REQUIRE(majorizes(vec({0.1, 0.4, 0.2, 0.3}), vec({0.4, 0.3, 0.2, 0.1})) ==
          MajorizationOrder::kEqual);
  // One curve lying fully below the other orders the pair even when the
  // leading entries disagree in the other direction elementwise.
  REQUIRE(majorizes(vec({0.6, 0.4, 0, 0}), vec({0.5, 0.2, 0.2, 0.1})) ==
          MajorizationOrder::kMajorizes);
  // Lorentz curves cross: partial sums 0.6,0.75 vs 0.5,0.8 with equal totals.
  REQUIRE(majorizes(vec({0.6, 0.1, 0.15, 0.15}), vec({0.5, 0.3, 0.2, 0.0})) ==
          MajorizationOrder::kIncomparable);
  REQUIRE_THROWS_AS(majorizes(vec({1, 0}), vec({1, 0, 0})),
                    std::invalid_argument);
}

TEST_CASE("schur condition closed form and sign", "[diversity]") {
  REQUIRE(schur_condition_check(0.01, vec({0.5, 0.5}), {0, 1}) == 0.0);
  REQUIRE_THAT(schur_condition_check(0.01, vec({1.0, 0.0}), {0, 1}),
               Catch::Matchers::WithinAbs(-1.0 / (1.01 * 0.01), 1e-9));
  Rng rng(8);
  for (int rep = 0; rep < 10000; ++rep) {
    Vec s(5);
    for (int i = 0; i < 5; ++i) s[i] = rng.uniform(0, 3);
    const int i = static_cast<int>(rng.below(5));
    const int j = static_cast<int>(rng.below(5));
    REQUIRE(schur_condition_check(0.01, s, {i, j}) <= 0.0);
  }
}

TEST_CASE("majorized pairs never have more zeros (fuzz)", "[diversity]") {
  Rng rng(99);
  int comparable = 0;
  for (int rep = 0; rep < 10000; ++rep) {
    const int n = 4 + static_cast<int>(rng.below(6));
    Vec t(n);
    for (int i = 0; i < n; ++i)
      t[i] = rng.uniform01() < 0.4 ? 0.0 : rng.uniform(0.1, 1.0);
    if (t.sum() <= 0) continue;
    t /= t.sum();  // normalized to sum 1
    const Vec s = random_mix(t, rng);
    const auto order = majorizes(s, t);
    if (order == MajorizationOrder::kMajorizedBy ||
        order == MajorizationOrder::kEqual) {
      ++comparable;
      REQUIRE(zero_count(t) >= zero_count(s));
    }
  }
  REQUIRE(comparable > 9000);  // the construction almost always orders them
}

TEST_CASE("surrogate is Schur-concave under majorization", "[diversity]") {
  Rng rng(123);
  for (int rep = 0; rep < 2000; ++rep) {
    const int n = 4 + static_cast<int>(rng.below(5));
    Vec t(n);
    for (int i = 0; i < n; ++i) t[i] = rng.uniform(0, 1);
    if (t.sum() <= 0) continue;
    t /= t.sum();
    const Vec s = random_mix(t, rng);
    if (majorizes(s, t) == MajorizationOrder::kMajorizedBy)
      REQUIRE(surrogate_value(s, 0.01) >= surrogate_value(t, 0.01) - 1e-10);
  }
}

TEST_CASE("surrogate gradient matches finite differences", "[diversity]") {
  Rng rng(7);
  const double gamma = 0.01, h = 1e-5;
  for (int rep = 0; rep < 50; ++rep) {
    Vec s(6);
    for (int i = 0; i < 6; ++i) s[i] = rng.uniform(0.05, 2.0);
    const Vec w = update_weights_lp(s, gamma);  // analytic dG/ds_i
    for (int i = 0; i < 6; ++i) {
      Vec up = s, dn = s;
      up[i] += h;
      dn[i] -= h;
      const double fd =
          (surrogate_value(up, gamma) - surrogate_value(dn, gamma)) / (2 * h);
      REQUIRE_THAT(fd, Catch::Matchers::WithinRel(w[i], 1e-6));
    }
  }
}

TEST_CASE("lorentz csv dump", "[diversity]") {
  std::ostringstream out;
  write_lorentz_csv(out, lorentz_partial_sums(vec({0.5, 1.5})));
  REQUIRE(out.str() == "k,partial_sum\n1,1.5\n2,2\n");
}
