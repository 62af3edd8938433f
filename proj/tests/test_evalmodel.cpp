/*
 * Copyright 2026 The RAC Simulator Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "rac/core.hpp"
#include "rac/evalmodel.hpp"

using namespace rac;
using namespace rac::evalmodel;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Closeness values from an independent script over the published matrix.
const double kF[] = {0.43339360962329476, 0.5160263002457851, 0.4097103040764131, 0.60349872842219,
                     0.5666063903767053};

}  // namespace

TEST_CASE("rubric answers reproduce the published matrix") {
  auto m = reference_matrix();
  auto fixture = parse_matrix_csv(read_file(RAC_SOURCE_DIR "/data/topsis_reference.csv"));
  REQUIRE(m.n() == 5);
  REQUIRE(m.m() == 7);
  CHECK(m.algorithms == fixture.algorithms);
  CHECK(m.indicators == fixture.indicators);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 7; ++j) CHECK(m.values[i][j] == doctest::Approx(fixture.values[i][j]).epsilon(1e-12));
}

TEST_CASE("ideal solutions match the published vectors") {
  auto ideals = ideal_solutions(reference_matrix());
  CHECK(ideals.positive == std::vector<double>{1, 1, 1, 0.7, 1, 1, 0.7});
  CHECK(ideals.negative == std::vector<double>{0, 0.5, 0, 0.3, 0, 0.3, 0.3});
}

TEST_CASE("closeness matches the oracle") {
  auto m = reference_matrix();
  auto scores = closeness(m, ideal_solutions(m));
  REQUIRE(scores.rows.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(scores.rows[i].f - kF[i]) < 1e-9);
  CHECK_FALSE(scores.degenerate_ideals);
  auto rank = scores.ranking();
  CHECK(rank.front().algorithm == "Tendermint BFT");
  CHECK(rank[1].algorithm == "RAC");
}

TEST_CASE("bft tolerance bands") {
  CHECK(score_bft_tolerance("51%") == 0.7);
  CHECK(score_bft_tolerance("33%") == 0.5);
  CHECK(score_bft_tolerance("16%") == 0.3);
  CHECK(score_bft_tolerance("0%") == 0.0);
  CHECK_THROWS_AS(score_bft_tolerance("lots"), Error);
}

TEST_CASE("a single row has degenerate ideals") {
  IndicatorMatrix m;
  m.algorithms = {"only"};
  m.indicators = rubric_indicators();
  m.values = {{0, 0.5, 1, 0.7, 0, 0.3, 0.7}};
  auto scores = closeness(m, ideal_solutions(m));
  CHECK(scores.degenerate_ideals);
  CHECK(scores.rows[0].f == 0.5);
}

TEST_CASE("matrix csv parsing") {
  CHECK_THROWS_AS(parse_matrix_csv("algorithm,a,b\nx,1\n"), Error);
  CHECK_THROWS_AS(parse_matrix_csv("algorithm,a\nx,abc\n"), Error);
  auto m = reference_matrix();
  auto again = parse_matrix_csv(matrix_csv(m));
  CHECK(again.values == m.values);
  auto normalized = vector_normalized(m);
  for (std::size_t j = 0; j < m.m(); ++j) {
    double ss = 0;
    for (std::size_t i = 0; i < m.n(); ++i) ss += normalized.values[i][j] * normalized.values[i][j];
    CHECK(std::abs(ss - 1.0) < 1e-12);
  }
}
