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

#ifndef RAC_EVALMODEL_HPP_
#define RAC_EVALMODEL_HPP_

#include <string>
#include <string_view>
#include <vector>

// TOPSIS evaluation of consensus algorithms over seven rubric indicators.
namespace rac::evalmodel {

struct IndicatorMatrix {
  std::vector<std::string> algorithms;  // rows
  std::vector<std::string> indicators;  // columns
  std::vector<std::vector<double>> values;

  std::size_t n() const { return algorithms.size(); }
  std::size_t m() const { return indicators.size(); }
};

// Qualitative answers, one per rubric table.
struct RubricAnswers {
  std::string consensus_nodes;       // Part | All
  std::string selection_method;      // Competing | Voting | Polling
  std::string node_weight;           // No | Yes
  std::string bft_tolerance;         // percentage, e.g. "51%"
  std::string byzantine_control;     // No | Yes
  std::string attack_cost;           // None | Low | Middle | High
  std::string resource_consumption;  // >O(n^2) | O(n^2) | O(n log n) | O(n) | O(1)
};

const std::vector<std::string>& rubric_indicators();

// Throws kUnknownLevel.
double score_bft_tolerance(std::string_view percent);
std::vector<double> score_rubric(const RubricAnswers& answers);

struct IdealSolutions {
  std::vector<double> positive;
  std::vector<double> negative;
};

IdealSolutions ideal_solutions(const IndicatorMatrix& matrix);

struct Closeness {
  std::string algorithm;
  double s_plus = 0.0;
  double s_minus = 0.0;
  double f = 0.0;
};

struct ClosenessScores {
  std::vector<Closeness> rows;  // matrix row order
  // Positive and negative ideals coincide; every f is reported as 0.5.
  bool degenerate_ideals = false;

  // Descending f, ties broken by algorithm name.
  std::vector<Closeness> ranking() const;
};

ClosenessScores closeness(const IndicatorMatrix& matrix, const IdealSolutions& ideals);

// Column-wise vector normalization b_ij / ||b_.j||, for sensitivity runs.
IndicatorMatrix vector_normalized(const IndicatorMatrix& matrix);

// The five-algorithm comparison built from the published rubric answers.
IndicatorMatrix reference_matrix();
std::vector<RubricAnswers> reference_answers();

// Throws kParseError with row/column detail.
IndicatorMatrix parse_matrix_csv(std::string_view text);
std::string matrix_csv(const IndicatorMatrix& matrix);
std::string closeness_csv(const ClosenessScores& scores);

}  // namespace rac::evalmodel

#endif  // RAC_EVALMODEL_HPP_
