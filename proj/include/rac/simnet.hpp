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

#ifndef RAC_SIMNET_HPP_
#define RAC_SIMNET_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rac/behavior.hpp"
#include "rac/eventlog.hpp"
#include "rac/metrics.hpp"
#include "rac/node.hpp"
#include "rac/protocol.hpp"
#include "rac/traces.hpp"

namespace rac::simnet {

enum class Algorithm { kRac, kRaft };
enum class LatencyDistribution { kNormal, kUniform, kConstant };

std::string_view algorithm_name(Algorithm a);

struct LatencyModel {
  double mean_ms = 5.0;
  double jitter_ms = 2.0;
  double floor_ms = 0.1;
  // kNormal is a normal truncated below at floor_ms; kUniform spans
  // mean +- jitter.
  LatencyDistribution distribution = LatencyDistribution::kNormal;
};

struct OrgSpec {
  std::string name;
  std::size_t nodes = 0;
  // Optional per-node assets, in node order; missing entries are 0.
  std::vector<double> assets;
};

// Links between `group` and every other node are cut during [start, end).
struct Partition {
  double start_ms = 0.0;
  double end_ms = 0.0;
  std::set<std::uint32_t> group;
};

struct CrashFault {
  std::uint32_t node = 0;
  double at_ms = 0.0;
  // Negative: never recovers.
  double recover_ms = -1.0;
};

struct TargetedDos {
  bool enabled = false;
  std::optional<std::uint32_t> attacker;
  double delay_ms = 0.0;
  // Negative: the victim stays down until the next accountant is established.
  double downtime_ms = -1.0;
};

struct FaultPlan {
  std::vector<CrashFault> crash;
  std::set<std::uint32_t> tamper_accountant;
  std::set<std::uint32_t> collude_evaluator;
  std::set<std::uint32_t> sybil;
  // Voters that grant every request; only for checking the safety monitor.
  std::set<std::uint32_t> double_vote;
  // Byzantine behavior and attack traces start at this term.
  std::uint64_t byzantine_from_term = 1;
  TargetedDos targeted_dos;

  std::set<std::uint32_t> byzantine() const;
};

struct Workload {
  double rate_per_ms = 1.0;
  std::size_t total_requests = 1000;
  std::size_t payload_bytes = 32;
  std::size_t clients = 1;
  double start_ms = 400.0;
  double retry_ms = 500.0;
};

struct Scenario {
  std::uint64_t seed = 1;
  Algorithm algorithm = Algorithm::kRac;
  std::vector<OrgSpec> orgs;
  std::size_t evaluators_per_org = 1;
  LatencyModel latency;
  double drop_probability = 0.0;
  std::vector<Partition> partitions;
  FaultPlan faults;
  Workload workload;
  double duration_ms = 10000.0;
  // Stop once every request has been answered and this long has passed.
  std::optional<double> settle_ms = 200.0;
  // Stop after this many accountants have been established.
  std::optional<std::size_t> max_terms;
  std::optional<std::uint32_t> bootstrap_candidate;
  TimingConfig timing;
  SimTime judgment_timeout = from_ms(50);
  SimTime evaluator_grace = from_ms(15);
  SimTime risk_window = from_ms(30);
  SimTime risk_wait = from_ms(60);
  std::size_t evaluator_offense_limit = 1;
  risk::RiskConfig risk;
  TraceConfig traces;
  double initial_stake = 100.0;
  double penalty_fraction = 0.05;
  // Log every send/recv; metrics over message counts need it.
  bool log_messages = true;

  std::size_t node_count() const;
  std::vector<NodeId> node_ids() const;
};

// Throws kInvalidScenario naming the offending field.
void validate(const Scenario& scenario);
// Parses the YAML scenario schema in docs/scenario.md, then validates.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

struct VerdictRecord {
  NodeId node;
  behavior::BehaviorRole role = behavior::BehaviorRole::kFollower;
  std::uint64_t term = 0;
  std::uint64_t index = 0;
  std::vector<behavior::ActionSymbol> trace;
  behavior::Classification result;
};

struct NodeSummary {
  NodeId id;
  std::string role;
  std::uint64_t term = 0;
  std::uint64_t commit_index = 0;
  bool byzantine = false;
  bool down = false;
  std::set<NodeId> rnl;
};

struct RunResult {
  EventLog log;
  metrics::MetricsReport report;
  std::vector<VerdictRecord> verdicts;
  std::vector<Chain> chains;
  std::vector<NodeSummary> nodes;
  behavior::StakeLedger stake;
  std::map<RequestKey, TransactionRequest> submitted;
  // Election-safety and log-safety violations found after the run.
  std::vector<std::string> violations;
  SimTime end_time = 0;
};

RunResult run_scenario(const Scenario& scenario);

// One cell of an experiment grid: `base` resized to n nodes spread over
// min(5, n/2) orgs, with round(byz_fraction * n) nodes made Byzantine
// (sybil identities plus tampering when accountant). Byzantine nodes are
// taken from the tail of each org so evaluators stay honest while possible,
// and misbehave from the first term.
Scenario grid_scenario(const Scenario& base, Algorithm algorithm, std::size_t n, double byz_fraction,
                       std::uint64_t seed);

// Chi-square uniformity of elected accountants, with each election's
// expectation spread over the nodes eligible at that moment.
struct UniformityTest {
  std::size_t elections = 0;
  std::map<std::uint32_t, std::size_t> observed;
  std::map<std::uint32_t, double> expected;
  double chi_square = 0.0;
  std::size_t dof = 0;
  double p_value = 1.0;
};

UniformityTest accountant_uniformity(const EventLog& log);

void write_verdicts_csv(std::ostream& os, const std::vector<VerdictRecord>& verdicts);

}  // namespace rac::simnet

#endif  // RAC_SIMNET_HPP_
