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

#include <CLI11.hpp>
#include <iostream>
#include <sstream>

#include "rac/cli.hpp"

namespace {

template <typename T>
std::vector<T> split_list(const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::istringstream is(tok);
    T v{};
    if (!(is >> v) || !is.eof()) throw rac::Error(rac::ErrorCode::kInvalidScenario, "bad list item '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace rac;
  CLI::App app{"Discrete-event simulator for the RAC consensus protocol and a Raft baseline"};
  app.require_subcommand(1);

  cli::RunOptions run;
  std::optional<std::uint64_t> run_seed;
  auto* run_cmd = app.add_subcommand("run", "Run one scenario and write its log, metrics and verdicts");
  run_cmd->add_option("--scenario", run.scenario_path, "Scenario YAML file")->required();
  run_cmd->add_option("--seed", run_seed, "Override the scenario seed");
  run_cmd->add_option("--out", run.out_dir, "Output directory (default $RACSIM_OUT or ./out)");

  cli::CompareOptions cmp;
  std::string algos = "rac,raft", nodes = "5,10,20,30", byz = "0", seeds = "1..5";
  auto* cmp_cmd = app.add_subcommand("compare", "Run a paired RAC/Raft grid and write long-format CSV");
  cmp_cmd->add_option("--algo", algos, "Comma list of rac, raft");
  cmp_cmd->add_option("--nodes", nodes, "Comma list of node counts");
  cmp_cmd->add_option("--byz", byz, "Comma list of Byzantine fractions");
  cmp_cmd->add_option("--seeds", seeds, "Seed or inclusive range A..B");
  cmp_cmd->add_option("--scenario", cmp.scenario_path, "Base scenario for timing and workload");
  cmp_cmd->add_option("--out", cmp.out_dir, "Output directory");

  cli::TopsisOptions topsis;
  auto* topsis_cmd = app.add_subcommand("eval-topsis", "Rank algorithms by TOPSIS closeness");
  topsis_cmd->add_option("--matrix", topsis.matrix_path, "Indicator matrix CSV (default: built-in)");
  topsis_cmd->add_option("--out", topsis.out_dir, "Output directory");

  cli::RiskDemoOptions demo;
  auto* demo_cmd = app.add_subcommand("risk-demo", "Score syscall traces and print the flagged set");
  demo_cmd->add_option("--traces", demo.traces_dir, "Directory of node_<id>.txt traces");
  demo_cmd->add_option("--nodes", demo.nodes, "Synthesized node count");
  demo_cmd->add_option("--attackers", demo.attackers, "Synthesized attack-trace nodes");
  demo_cmd->add_option("--seed", demo.seed, "Seed");
  demo_cmd->add_option("--out", demo.out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitInvalid;
  }

  try {
    if (*run_cmd) {
      run.seed = run_seed;
      return cli::cmd_run(run, std::cout, std::cerr);
    }
    if (*cmp_cmd) {
      cmp.algorithms.clear();
      for (const auto& a : split_list<std::string>(algos)) {
        if (a == "rac") {
          cmp.algorithms.push_back(simnet::Algorithm::kRac);
        } else if (a == "raft") {
          cmp.algorithms.push_back(simnet::Algorithm::kRaft);
        } else {
          throw Error(ErrorCode::kInvalidScenario, "unknown algorithm '" + a + "'");
        }
      }
      cmp.nodes = split_list<std::size_t>(nodes);
      cmp.byz = split_list<double>(byz);
      cmp.seeds = cli::parse_seeds(seeds);
      return cli::cmd_compare(cmp, std::cout, std::cerr);
    }
    if (*topsis_cmd) return cli::cmd_eval_topsis(topsis, std::cout, std::cerr);
    if (*demo_cmd) return cli::cmd_risk_demo(demo, std::cout, std::cerr);
  } catch (const Error& e) {
    std::cerr << "racsim: " << e.what() << '\n';
    return cli::kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "racsim: " << e.what() << '\n';
    return 1;
  }
  return cli::kExitInvalid;
}
