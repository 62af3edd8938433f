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

#ifndef RAC_CLI_HPP_
#define RAC_CLI_HPP_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rac/simnet.hpp"

namespace rac::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitViolation = 3;

// Names the environment variable holding the default output directory.
inline constexpr const char* kOutDirEnv = "RACSIM_OUT";

std::string default_out_dir();

struct RunManifest {
  std::string command;
  std::string scenario_path;
  std::vector<std::uint64_t> seeds;
  std::string out_dir;
  std::string build_id;
  std::string created;

  std::string to_json() const;
};

std::string build_id();

// "7" or "1..20", inclusive. Throws kInvalidScenario.
std::vector<std::uint64_t> parse_seeds(const std::string& text);

struct RunOptions {
  std::string scenario_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
};

// Writes events.tsv, metrics.csv, verdicts.csv and manifest.json.
int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);

struct CompareOptions {
  std::vector<simnet::Algorithm> algorithms{simnet::Algorithm::kRac, simnet::Algorithm::kRaft};
  std::vector<std::size_t> nodes{5, 10, 20, 30};
  std::vector<double> byz{0.0};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  // Optional base scenario; its orgs and faults are replaced per cell.
  std::string scenario_path;
  std::string out_dir;
};

struct CompareRow {
  simnet::Algorithm algorithm = simnet::Algorithm::kRac;
  std::size_t n = 0;
  double byz_fraction = 0.0;
  std::uint64_t seed = 0;
  double latency_p50 = 0.0;
  std::optional<double> throughput;
  std::optional<double> election_cost;
  double msgs_per_round = 0.0;
  std::size_t committed_tampered = 0;
  std::size_t violations = 0;
};

std::vector<CompareRow> run_grid(const simnet::Scenario& base, const CompareOptions& options);
std::string compare_csv(const std::vector<CompareRow>& rows);

// Writes compare.csv and manifest.json.
int cmd_compare(const CompareOptions& options, std::ostream& out, std::ostream& err);

struct TopsisOptions {
  // Empty: the built-in reference matrix.
  std::string matrix_path;
  std::string out_dir;
};

int cmd_eval_topsis(const TopsisOptions& options, std::ostream& out, std::ostream& err);

struct RiskDemoOptions {
  // Empty: synthesize honest + attacker traces.
  std::string traces_dir;
  std::size_t nodes = 10;
  std::size_t attackers = 1;
  std::uint64_t seed = 1;
  std::string out_dir;
};

int cmd_risk_demo(const RiskDemoOptions& options, std::ostream& out, std::ostream& err);

}  // namespace rac::cli

#endif  // RAC_CLI_HPP_
