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

#include "rac/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <sstream>

#include "rac/evalmodel.hpp"
#include "rac/risk.hpp"
#include "rac/traces.hpp"

#ifndef RAC_BUILD_ID
#define RAC_BUILD_ID "unknown"
#endif

namespace rac::cli {

namespace fs = std::filesystem;

namespace {

std::string now_utc() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

void write_manifest(const fs::path& dir, RunManifest m) {
  m.out_dir = dir.string();
  m.build_id = build_id();
  m.created = now_utc();
  open_out(dir / "manifest.json") << m.to_json() << '\n';
}

// Reorders columns to the rubric order; every rubric indicator must be present.
evalmodel::IndicatorMatrix rubric_columns(const evalmodel::IndicatorMatrix& in) {
  evalmodel::IndicatorMatrix m;
  m.algorithms = in.algorithms;
  m.indicators = evalmodel::rubric_indicators();
  m.values.assign(in.n(), {});
  for (const auto& name : m.indicators) {
    auto it = std::find(in.indicators.begin(), in.indicators.end(), name);
    if (it == in.indicators.end()) throw Error(ErrorCode::kParseError, "missing column '" + name + "'");
    auto j = static_cast<std::size_t>(it - in.indicators.begin());
    for (std::size_t i = 0; i < in.n(); ++i) m.values[i].push_back(in.values[i][j]);
  }
  return m;
}

std::string fixed(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << v;
  return os.str();
}

}  // namespace

std::string default_out_dir() {
  const char* env = std::getenv(kOutDirEnv);
  return env && *env ? env : "out";
}

std::string build_id() { return RAC_BUILD_ID; }

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["scenario"] = scenario_path;
  j["seeds"] = seeds;
  j["out_dir"] = out_dir;
  j["build"] = build_id;
  j["created"] = created;
  return j.dump(2);
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  auto bad = [&] { return Error(ErrorCode::kInvalidScenario, "seed range '" + text + "'"); };
  auto number = [&](const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) throw bad();
    return std::stoull(s);
  };
  auto dots = text.find("..");
  if (dots == std::string::npos) return {number(text)};
  auto lo = number(text.substr(0, dots));
  auto hi = number(text.substr(dots + 2));
  if (hi < lo) throw bad();
  std::vector<std::uint64_t> out;
  for (auto s = lo; s <= hi; ++s) out.push_back(s);
  return out;
}

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  simnet::Scenario scenario;
  try {
    scenario = simnet::load_scenario(options.scenario_path);
    if (options.seed) scenario.seed = *options.seed;
  } catch (const Error& e) {
    err << "racsim run: " << e.what() << '\n';
    return kExitInvalid;
  }
  auto result = simnet::run_scenario(scenario);
  fs::path dir = options.out_dir.empty() ? default_out_dir() : options.out_dir;
  fs::create_directories(dir);
  {
    auto os = open_out(dir / "events.tsv");
    write_log(os, result.log);
  }
  {
    auto os = open_out(dir / "metrics.csv");
    metrics::write_report_csv(os, result.report);
  }
  {
    auto os = open_out(dir / "verdicts.csv");
    simnet::write_verdicts_csv(os, result.verdicts);
  }
  write_manifest(dir, RunManifest{"run", options.scenario_path, {scenario.seed}, {}, {}, {}});
  out << "committed " << result.report.committed << "/" << result.report.submitted << ", "
      << result.report.elections.size() << " elections, " << result.report.empty_blocks
      << " empty blocks, output in " << dir.string() << '\n';
  if (!result.violations.empty()) {
    for (const auto& v : result.violations) err << "racsim run: invariant violated: " << v << '\n';
    return kExitViolation;
  }
  return kExitOk;
}

std::vector<CompareRow> run_grid(const simnet::Scenario& base, const CompareOptions& options) {
  std::vector<CompareRow> rows;
  for (auto algo : options.algorithms) {
    for (auto n : options.nodes) {
      for (auto byz : options.byz) {
        for (auto seed : options.seeds) {
          auto s = simnet::grid_scenario(base, algo, n, byz, seed);
          auto r = simnet::run_scenario(s);
          CompareRow row;
          row.algorithm = algo;
          row.n = n;
          row.byz_fraction = byz;
          row.seed = seed;
          row.latency_p50 = r.report.latency_p50();
          row.throughput = r.report.throughput_tps;
          if (!r.report.elections.empty()) row.election_cost = r.report.mean_election_cost();
          row.msgs_per_round = r.report.msgs_per_round;
          row.committed_tampered = r.report.committed_tampered;
          row.violations = r.violations.size();
          rows.push_back(row);
        }
      }
    }
  }
  return rows;
}

std::string compare_csv(const std::vector<CompareRow>& rows) {
  std::ostringstream os;
  os << "algorithm,n,byz_fraction,seed,latency_p50,throughput,election_cost,msgs_per_round,"
        "committed_tampered\n";
  for (const auto& r : rows) {
    os << simnet::algorithm_name(r.algorithm) << ',' << r.n << ',' << fixed(r.byz_fraction) << ','
       << r.seed << ',' << fixed(r.latency_p50) << ',' << (r.throughput ? fixed(*r.throughput) : "")
       << ',' << (r.election_cost ? fixed(*r.election_cost) : "") << ',' << fixed(r.msgs_per_round)
       << ',' << r.committed_tampered << '\n';
  }
  return os.str();
}

int cmd_compare(const CompareOptions& options, std::ostream& out, std::ostream& err) {
  if (options.algorithms.empty() || options.nodes.empty() || options.byz.empty() || options.seeds.empty()) {
    err << "racsim compare: every grid axis needs at least one value\n";
    return kExitInvalid;
  }
  simnet::Scenario base;
  std::vector<CompareRow> rows;
  try {
    if (!options.scenario_path.empty()) base = simnet::load_scenario(options.scenario_path);
    for (auto n : options.nodes) {
      if (n < 3) throw Error(ErrorCode::kInvalidScenario, "grid node count below 3");
    }
    for (auto b : options.byz) {
      if (b < 0 || b >= 1) throw Error(ErrorCode::kInvalidScenario, "byz fraction outside [0, 1)");
    }
    rows = run_grid(base, options);
  } catch (const Error& e) {
    err << "racsim compare: " << e.what() << '\n';
    return kExitInvalid;
  }
  fs::path dir = options.out_dir.empty() ? default_out_dir() : options.out_dir;
  fs::create_directories(dir);
  open_out(dir / "compare.csv") << compare_csv(rows);
  write_manifest(dir, RunManifest{"compare", options.scenario_path, options.seeds, {}, {}, {}});
  std::size_t violations = 0;
  for (const auto& r : rows) violations += r.violations;
  out << rows.size() << " rows written to " << (dir / "compare.csv").string() << '\n';
  if (violations) {
    err << "racsim compare: " << violations << " invariant violations across the grid\n";
    return kExitViolation;
  }
  return kExitOk;
}

int cmd_eval_topsis(const TopsisOptions& options, std::ostream& out, std::ostream& err) {
  evalmodel::IndicatorMatrix matrix;
  try {
    if (options.matrix_path.empty()) {
      matrix = evalmodel::reference_matrix();
    } else {
      std::ifstream in(options.matrix_path);
      if (!in) throw Error(ErrorCode::kParseError, "cannot open " + options.matrix_path);
      std::stringstream ss;
      ss << in.rdbuf();
      matrix = rubric_columns(evalmodel::parse_matrix_csv(ss.str()));
    }
  } catch (const Error& e) {
    err << "racsim eval-topsis: " << e.what() << '\n';
    return kExitInvalid;
  }
  auto ideals = evalmodel::ideal_solutions(matrix);
  auto scores = evalmodel::closeness(matrix, ideals);
  if (scores.degenerate_ideals) out << "warning: DegenerateIdeals, positive and negative ideals coincide\n";
  out << std::left << std::setw(16) << "algorithm" << std::setw(12) << "s+" << std::setw(12) << "s-"
      << "f\n";
  for (const auto& r : scores.rows) {
    out << std::setw(16) << r.algorithm << std::setw(12) << fixed(r.s_plus) << std::setw(12)
        << fixed(r.s_minus) << fixed(r.f) << '\n';
  }
  out << "ranking:";
  for (const auto& r : scores.ranking()) out << ' ' << r.algorithm;
  out << '\n';
  fs::path dir = options.out_dir.empty() ? default_out_dir() : options.out_dir;
  fs::create_directories(dir);
  open_out(dir / "topsis.csv") << evalmodel::closeness_csv(scores);
  write_manifest(dir, RunManifest{"eval-topsis", options.matrix_path, {}, {}, {}, {}});
  return kExitOk;
}

int cmd_risk_demo(const RiskDemoOptions& options, std::ostream& out, std::ostream& err) {
  std::vector<risk::SyscallTrace> traces;
  std::set<NodeId> attackers;
  try {
    if (!options.traces_dir.empty()) {
      traces = simnet::load_traces(options.traces_dir);
    } else {
      if (options.attackers > options.nodes) {
        throw Error(ErrorCode::kInvalidScenario, "more attackers than nodes");
      }
      std::vector<NodeId> nodes;
      for (std::uint32_t v = 0; v < options.nodes; ++v) nodes.push_back(NodeId{v, 0});
      for (std::size_t k = 0; k < options.attackers; ++k) attackers.insert(nodes[options.nodes - 1 - k]);
      traces = simnet::synthesize_traces(nodes, Term{1}, attackers, simnet::TraceConfig{}, options.seed);
    }
  } catch (const Error& e) {
    err << "racsim risk-demo: " << e.what() << '\n';
    return kExitInvalid;
  }
  fs::path dir = options.out_dir.empty() ? default_out_dir() : options.out_dir;
  fs::create_directories(dir);
  risk::RiskConfig cfg;
  cfg.seed = options.seed;
  std::ostringstream csv;
  csv << "node,score,flagged\n";
  try {
    auto report = risk::assess(traces, cfg);
    out << "threshold " << fixed(report.threshold) << '\n';
    for (const auto& [node, score] : report.scores) {
      bool flagged = report.flagged.contains(node);
      out << "node " << node.value << " score " << fixed(score) << (flagged ? " FLAGGED" : "") << '\n';
      csv << node.value << ',' << fixed(score) << ',' << (flagged ? 1 : 0) << '\n';
    }
    out << "flagged " << report.flagged.size() << " of " << traces.size() << '\n';
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegenerateInput) throw;
    out << "assessment skipped: " << traces.size() << " traces, at least 3 are needed\n";
  }
  open_out(dir / "risk_scores.csv") << csv.str();
  write_manifest(dir, RunManifest{"risk-demo", options.traces_dir, {options.seed}, {}, {}, {}});
  return kExitOk;
}

}  // namespace rac::cli
