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

#include "rac/evalmodel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "rac/core.hpp"

namespace rac::evalmodel {

namespace {

double lookup(std::string_view table, std::string_view answer,
              std::initializer_list<std::pair<std::string_view, double>> levels) {
  for (const auto& [name, value] : levels)
    if (name == answer) return value;
  throw Error(ErrorCode::kUnknownLevel,
              std::string(table) + ": unknown level '" + std::string(answer) + "'");
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

}  // namespace

const std::vector<std::string>& rubric_indicators() {
  static const std::vector<std::string> names = {
      "consensus_nodes", "selection_method",   "node_weight",         "bft_tolerance",
      "byzantine_control", "attack_cost", "resource_consumption"};
  return names;
}

double score_bft_tolerance(std::string_view percent) {
  std::string s = trim(percent);
  if (!s.empty() && s.back() == '%') s.pop_back();
  double p = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), p);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || p < 0.0 || p > 100.0) {
    throw Error(ErrorCode::kUnknownLevel, "bft_tolerance: cannot read '" + std::string(percent) + "'");
  }
  if (p == 0.0) return 0.0;
  if (p <= 16.0) return 0.3;
  if (p <= 33.0) return 0.5;
  if (p <= 51.0) return 0.7;
  return 1.0;
}

std::vector<double> score_rubric(const RubricAnswers& a) {
  return {
      lookup("consensus_nodes", a.consensus_nodes, {{"Part", 0.0}, {"All", 1.0}}),
      lookup("selection_method", a.selection_method,
             {{"Competing", 0.0}, {"Voting", 0.5}, {"Polling", 1.0}}),
      lookup("node_weight", a.node_weight, {{"No", 0.0}, {"Yes", 1.0}}),
      score_bft_tolerance(a.bft_tolerance),
      lookup("byzantine_control", a.byzantine_control, {{"No", 0.0}, {"Yes", 1.0}}),
      lookup("attack_cost", a.attack_cost, {{"None", 0.0}, {"Low", 0.3}, {"Middle", 0.6}, {"High", 1.0}}),
      lookup("resource_consumption", a.resource_consumption,
             {{">O(n^2)", 0.0}, {"O(n^2)", 0.3}, {"O(n log n)", 0.5}, {"O(n)", 0.7}, {"O(1)", 1.0}}),
  };
}

IdealSolutions ideal_solutions(const IndicatorMatrix& matrix) {
  if (matrix.n() == 0) throw Error(ErrorCode::kDegenerateInput, "indicator matrix has no rows");
  IdealSolutions ideals{matrix.values.front(), matrix.values.front()};
  for (const auto& row : matrix.values) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      ideals.positive[j] = std::max(ideals.positive[j], row[j]);
      ideals.negative[j] = std::min(ideals.negative[j], row[j]);
    }
  }
  return ideals;
}

ClosenessScores closeness(const IndicatorMatrix& matrix, const IdealSolutions& ideals) {
  ClosenessScores out;
  out.degenerate_ideals = ideals.positive == ideals.negative;
  for (std::size_t i = 0; i < matrix.n(); ++i) {
    const auto& row = matrix.values[i];
    if (row.size() != ideals.positive.size()) {
      throw Error(ErrorCode::kDegenerateInput, "row '" + matrix.algorithms[i] + "' has wrong width");
    }
    double plus = 0.0, minus = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      plus += (row[j] - ideals.positive[j]) * (row[j] - ideals.positive[j]);
      minus += (row[j] - ideals.negative[j]) * (row[j] - ideals.negative[j]);
    }
    Closeness c{matrix.algorithms[i], std::sqrt(plus), std::sqrt(minus), 0.5};
    if (c.s_plus + c.s_minus > 0.0) c.f = c.s_minus / (c.s_minus + c.s_plus);
    out.rows.push_back(c);
  }
  return out;
}

std::vector<Closeness> ClosenessScores::ranking() const {
  std::vector<Closeness> r = rows;
  std::stable_sort(r.begin(), r.end(), [](const Closeness& a, const Closeness& b) {
    if (a.f != b.f) return a.f > b.f;
    return a.algorithm < b.algorithm;
  });
  return r;
}

IndicatorMatrix vector_normalized(const IndicatorMatrix& matrix) {
  IndicatorMatrix out = matrix;
  for (std::size_t j = 0; j < matrix.m(); ++j) {
    double norm = 0.0;
    for (const auto& row : matrix.values) norm += row[j] * row[j];
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    for (auto& row : out.values) row[j] /= norm;
  }
  return out;
}

std::vector<RubricAnswers> reference_answers() {
  return {
      {"Part", "Voting", "No", "51%", "Yes", "Middle", "O(n)"},     // Beh-Raft
      {"Part", "Voting", "Yes", "16%", "Yes", "Low", "O(n)"},       // HHRAFT
      {"All", "Voting", "No", "51%", "No", "Low", "O(n)"},          // CRAFT
      {"All", "Polling", "Yes", "33%", "No", "High", "O(n^2)"},     // Tendermint BFT
      {"Part", "Voting", "Yes", "51%", "Yes", "Middle", "O(n)"},    // RAC
  };
}

IndicatorMatrix reference_matrix() {
  IndicatorMatrix m;
  m.algorithms = {"Beh-Raft", "HHRAFT", "CRAFT", "Tendermint BFT", "RAC"};
  m.indicators = rubric_indicators();
  for (const auto& answers : reference_answers()) m.values.push_back(score_rubric(answers));
  return m;
}

IndicatorMatrix parse_matrix_csv(std::string_view text) {
  IndicatorMatrix m;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty() || trim(line).front() == '#') continue;
    auto cells = split_csv_line(line);
    if (m.indicators.empty()) {
      if (cells.size() < 2) throw Error(ErrorCode::kParseError, "header needs at least one indicator");
      m.indicators.assign(cells.begin() + 1, cells.end());
      continue;
    }
    if (cells.size() != m.indicators.size() + 1) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": expected " +
                                              std::to_string(m.indicators.size() + 1) + " cells, got " +
                                              std::to_string(cells.size()));
    }
    m.algorithms.push_back(cells[0]);
    std::vector<double> row;
    for (std::size_t j = 1; j < cells.size(); ++j) {
      double v = 0.0;
      const std::string& c = cells[j];
      auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (c.empty() || ec != std::errc() || ptr != c.data() + c.size()) {
        throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ", column '" +
                                                m.indicators[j - 1] + "': not a number: '" + c + "'");
      }
      row.push_back(v);
    }
    m.values.push_back(std::move(row));
  }
  if (m.indicators.empty()) throw Error(ErrorCode::kParseError, "missing header row");
  if (m.algorithms.empty()) throw Error(ErrorCode::kParseError, "no algorithm rows");
  return m;
}

std::string matrix_csv(const IndicatorMatrix& matrix) {
  std::ostringstream os;
  os << "algorithm";
  for (const auto& name : matrix.indicators) os << ',' << name;
  os << '\n';
  for (std::size_t i = 0; i < matrix.n(); ++i) {
    os << matrix.algorithms[i];
    for (double v : matrix.values[i]) os << ',' << v;
    os << '\n';
  }
  return os.str();
}

std::string closeness_csv(const ClosenessScores& scores) {
  std::ostringstream os;
  os.precision(12);
  os << "algorithm,s_plus,s_minus,f,rank\n";
  auto ranked = scores.ranking();
  for (const auto& c : scores.rows) {
    std::size_t rank = 0;
    while (ranked[rank].algorithm != c.algorithm) ++rank;
    os << c.algorithm << ',' << c.s_plus << ',' << c.s_minus << ',' << c.f << ',' << rank + 1 << '\n';
  }
  return os.str();
}

}  // namespace rac::evalmodel
