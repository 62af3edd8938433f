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

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "rac/cli.hpp"

using namespace rac;
using namespace rac::cli;
namespace fs = std::filesystem;

namespace {

std::string source(const std::string& rel) { return std::string(RAC_SOURCE_DIR) + "/" + rel; }

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("racsim_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("run writes its artifacts") {
  auto dir = scratch("run");
  std::ostringstream out, err;
  RunOptions o{source("scenarios/nominal.yaml"), 4, dir.string()};
  CHECK(cmd_run(o, out, err) == kExitOk);
  for (const char* f : {"events.tsv", "metrics.csv", "verdicts.csv", "manifest.json"})
    CHECK(fs::exists(dir / f));
  auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["command"] == "run");
  CHECK(manifest["seeds"] == nlohmann::json::array({4}));
  CHECK(manifest["build"].get<std::string>() == build_id());
  CHECK(slurp(dir / "metrics.csv").find("committed,1000\n") != std::string::npos);
}

TEST_CASE("invalid scenarios exit 2") {
  auto dir = scratch("bad");
  std::ostringstream out, err;
  RunOptions o{source("tests/fixtures/bad_field.yaml"), std::nullopt, dir.string()};
  CHECK(cmd_run(o, out, err) == kExitInvalid);
  CHECK(err.str().find("jiter_ms") != std::string::npos);
  o.scenario_path = source("tests/fixtures/missing.yaml");
  CHECK(cmd_run(o, out, err) == kExitInvalid);
}

TEST_CASE("safety violations exit 3") {
  auto dir = scratch("violation");
  std::ostringstream out, err;
  RunOptions o{source("tests/fixtures/double_vote.yaml"), std::nullopt, dir.string()};
  CHECK(cmd_run(o, out, err) == kExitViolation);
}

TEST_CASE("seed ranges") {
  CHECK(parse_seeds("7") == std::vector<std::uint64_t>{7});
  CHECK(parse_seeds("2..5") == std::vector<std::uint64_t>{2, 3, 4, 5});
  CHECK_THROWS_AS(parse_seeds("5..2"), Error);
  CHECK_THROWS_AS(parse_seeds("x"), Error);
  CHECK_THROWS_AS(parse_seeds("1..y"), Error);
}

TEST_CASE("compare emits one row per cell and seed") {
  auto dir = scratch("compare");
  CompareOptions o;
  o.nodes = {5, 6};
  o.byz = {0.0};
  o.seeds = {1, 2};
  o.scenario_path = source("scenarios/nominal.yaml");
  o.out_dir = dir.string();
  std::ostringstream out, err;
  REQUIRE(cmd_compare(o, out, err) == kExitOk);
  std::istringstream csv(slurp(dir / "compare.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line ==
        "algorithm,n,byz_fraction,seed,latency_p50,throughput,election_cost,msgs_per_round,committed_tampered");
  std::size_t rows = 0;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 2 * 2 * 2);
}

TEST_CASE("topsis command") {
  auto dir = scratch("topsis");
  std::ostringstream out, err;
  CHECK(cmd_eval_topsis({"", dir.string()}, out, err) == kExitOk);
  CHECK(out.str().find("Tendermint") != std::string::npos);
  CHECK(fs::exists(dir / "topsis.csv"));

  std::ofstream(dir / "short.csv") << "algorithm,consensus_nodes\nA,1\n";
  std::ostringstream out2, err2;
  CHECK(cmd_eval_topsis({(dir / "short.csv").string(), dir.string()}, out2, err2) == kExitInvalid);
  CHECK(err2.str().find("missing column 'selection_method'") != std::string::npos);

  std::ofstream(dir / "one.csv")
      << "algorithm,consensus_nodes,selection_method,node_weight,bft_tolerance,byzantine_control,"
         "attack_cost,resource_consumption\nA,1,1,1,0.5,1,1,0.5\n";
  std::ostringstream out3, err3;
  cmd_eval_topsis({(dir / "one.csv").string(), dir.string()}, out3, err3);
  CHECK((out3.str() + err3.str()).find("DegenerateIdeals") != std::string::npos);
}

TEST_CASE("risk demo flags the attacker") {
  auto dir = scratch("risk");
  std::ostringstream out, err;
  RiskDemoOptions o;
  o.nodes = 11;
  o.attackers = 1;
  o.out_dir = dir.string();
  CHECK(cmd_risk_demo(o, out, err) == kExitOk);
  CHECK(out.str().find("flagged 1 of 11") != std::string::npos);
  CHECK(fs::exists(dir / "risk_scores.csv"));

  std::ostringstream out2, err2;
  o.attackers = 0;
  CHECK(cmd_risk_demo(o, out2, err2) == kExitOk);
  CHECK(out2.str().find("flagged 0 of 11") != std::string::npos);
}

TEST_CASE("risk demo on too few traces") {
  auto dir = scratch("risk_few");
  fs::create_directories(dir / "traces");
  std::ofstream(dir / "traces" / "node_0.txt") << "1 2 3 4 5 6 7 8\n";
  std::ofstream(dir / "traces" / "node_1.txt") << "1 2 3 4 5 6 7 9\n";
  RiskDemoOptions o;
  o.traces_dir = (dir / "traces").string();
  o.out_dir = dir.string();
  std::ostringstream out, err;
  CHECK(cmd_risk_demo(o, out, err) == kExitOk);
  CHECK(out.str().find("assessment skipped") != std::string::npos);
}
