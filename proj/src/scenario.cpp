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

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <sstream>

#include "rac/simnet.hpp"

namespace rac::simnet {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::kInvalidScenario, what); }

template <typename T>
void read(const YAML::Node& node, const char* key, T& out, const std::string& path) {
  if (!node[key]) return;
  try {
    out = node[key].as<T>();
  } catch (const YAML::Exception&) {
    invalid(path + key + " has the wrong type");
  }
}

void read_ms(const YAML::Node& node, const char* key, SimTime& out, const std::string& path) {
  if (!node[key]) return;
  double ms = 0;
  read(node, key, ms, path);
  out = from_ms(ms);
}

template <typename T>
void read_opt(const YAML::Node& node, const char* key, std::optional<T>& out,
              const std::string& path) {
  if (!node[key]) return;
  if (node[key].IsNull()) {
    out.reset();
    return;
  }
  T v{};
  read(node, key, v, path);
  out = v;
}

std::set<std::uint32_t> read_set(const YAML::Node& node, const char* key, const std::string& path) {
  std::vector<std::uint32_t> v;
  read(node, key, v, path);
  return {v.begin(), v.end()};
}

void check_keys(const YAML::Node& node, std::initializer_list<std::string_view> known,
                const std::string& path) {
  if (!node.IsMap()) invalid(path + " must be a mapping");
  for (const auto& kv : node) {
    auto key = kv.first.as<std::string>();
    if (std::find(known.begin(), known.end(), key) == known.end()) invalid("unknown key " + path + key);
  }
}

}  // namespace

void validate(const Scenario& s) {
  if (s.orgs.empty()) invalid("orgs is empty");
  std::set<std::string> names;
  for (const auto& o : s.orgs) {
    if (o.name.empty()) invalid("orgs[].name is empty");
    if (!names.insert(o.name).second) invalid("duplicate org " + o.name);
    if (o.nodes == 0) invalid("org " + o.name + " has no nodes");
    if (o.assets.size() > o.nodes) invalid("org " + o.name + " lists more assets than nodes");
  }
  auto n = s.node_count();
  if (n < 3) invalid("at least 3 nodes are required");
  if (s.algorithm == Algorithm::kRac) {
    if (s.orgs.size() < 2) invalid("rac needs at least 2 orgs");
    if (s.evaluators_per_org == 0) invalid("evaluators_per_org must be positive");
  }
  auto in_range = [n](std::uint32_t v) { return v < n; };
  auto check_nodes = [&](const std::set<std::uint32_t>& set, const char* what) {
    for (auto v : set) {
      if (!in_range(v)) invalid(std::string(what) + " names node " + std::to_string(v));
    }
  };
  check_nodes(s.faults.tamper_accountant, "faults.tamper_accountant");
  check_nodes(s.faults.collude_evaluator, "faults.collude_evaluator");
  check_nodes(s.faults.sybil, "faults.sybil");
  check_nodes(s.faults.double_vote, "faults.double_vote");
  for (const auto& c : s.faults.crash) {
    if (!in_range(c.node)) invalid("faults.crash names node " + std::to_string(c.node));
    if (c.at_ms < 0) invalid("faults.crash.at_ms is negative");
    if (c.recover_ms >= 0 && c.recover_ms < c.at_ms) invalid("faults.crash.recover_ms precedes at_ms");
  }
  if (s.faults.targeted_dos.attacker && !in_range(*s.faults.targeted_dos.attacker)) {
    invalid("faults.targeted_dos.attacker is out of range");
  }
  for (const auto& p : s.partitions) {
    if (p.end_ms < p.start_ms) invalid("partition ends before it starts");
    check_nodes(p.group, "partitions.group");
  }
  if (s.bootstrap_candidate && !in_range(*s.bootstrap_candidate)) invalid("bootstrap_candidate is out of range");
  if (s.drop_probability < 0 || s.drop_probability >= 1) invalid("drop_probability must be in [0, 1)");
  if (s.latency.mean_ms < 0 || s.latency.jitter_ms < 0 || s.latency.floor_ms <= 0) {
    invalid("latency values must be non-negative with a positive floor");
  }
  if (s.workload.rate_per_ms <= 0) invalid("workload.rate_per_ms must be positive");
  if (s.workload.clients == 0) invalid("workload.clients must be positive");
  if (s.workload.retry_ms <= 0) invalid("workload.retry_ms must be positive");
  if (s.duration_ms <= 0) invalid("duration_ms must be positive");
  if (s.timing.election_min <= 0 || s.timing.election_max < s.timing.election_min) {
    invalid("timing.election_min/max are inconsistent");
  }
  if (s.timing.heartbeat_interval <= 0 || s.timing.batch_interval <= 0 || s.timing.batch_max == 0) {
    invalid("timing intervals must be positive");
  }
  if (s.penalty_fraction < 0 || s.penalty_fraction > 1) invalid("penalty_fraction must be in [0, 1]");
  if (s.risk.window == 0 || s.risk.tree_count == 0 || s.risk.subsample_size < 2) {
    invalid("risk parameters are degenerate");
  }
  if (s.traces.length < s.risk.window) invalid("traces.length is shorter than risk.window");
}

Scenario parse_scenario(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  Scenario s;
  if (!root || root.IsNull()) invalid("empty document");
  check_keys(root,
             {"seed", "algorithm", "orgs", "evaluators_per_org", "latency", "drop_probability",
              "partitions", "faults", "workload", "duration_ms", "settle_ms", "max_terms",
              "bootstrap_candidate", "timing", "judgment_timeout_ms", "evaluator_grace_ms",
              "risk_window_ms", "risk_wait_ms", "evaluator_offense_limit", "risk", "traces",
              "initial_stake", "penalty_fraction", "log_messages"},
             "");
  read(root, "seed", s.seed, "");
  if (root["algorithm"]) {
    std::string a;
    read(root, "algorithm", a, "");
    if (a == "rac") {
      s.algorithm = Algorithm::kRac;
    } else if (a == "raft") {
      s.algorithm = Algorithm::kRaft;
    } else {
      invalid("algorithm must be rac or raft");
    }
  }
  if (const auto orgs = root["orgs"]) {
    if (!orgs.IsSequence()) invalid("orgs must be a list");
    for (const auto& o : orgs) {
      check_keys(o, {"name", "nodes", "assets"}, "orgs[].");
      OrgSpec spec;
      read(o, "name", spec.name, "orgs[].");
      read(o, "nodes", spec.nodes, "orgs[].");
      read(o, "assets", spec.assets, "orgs[].");
      s.orgs.push_back(std::move(spec));
    }
  }
  read(root, "evaluators_per_org", s.evaluators_per_org, "");
  if (const auto l = root["latency"]) {
    check_keys(l, {"mean_ms", "jitter_ms", "floor_ms", "distribution"}, "latency.");
    read(l, "mean_ms", s.latency.mean_ms, "latency.");
    read(l, "jitter_ms", s.latency.jitter_ms, "latency.");
    read(l, "floor_ms", s.latency.floor_ms, "latency.");
    std::string d = "normal";
    read(l, "distribution", d, "latency.");
    if (d == "normal") {
      s.latency.distribution = LatencyDistribution::kNormal;
    } else if (d == "uniform") {
      s.latency.distribution = LatencyDistribution::kUniform;
    } else if (d == "constant") {
      s.latency.distribution = LatencyDistribution::kConstant;
    } else {
      invalid("latency.distribution must be normal, uniform or constant");
    }
  }
  read(root, "drop_probability", s.drop_probability, "");
  if (const auto ps = root["partitions"]) {
    for (const auto& p : ps) {
      check_keys(p, {"start_ms", "end_ms", "group"}, "partitions[].");
      Partition part;
      read(p, "start_ms", part.start_ms, "partitions[].");
      read(p, "end_ms", part.end_ms, "partitions[].");
      part.group = read_set(p, "group", "partitions[].");
      s.partitions.push_back(std::move(part));
    }
  }
  if (const auto f = root["faults"]) {
    check_keys(f, {"crash", "tamper_accountant", "collude_evaluator", "sybil", "double_vote", "byzantine_from_term",
                   "targeted_dos"},
               "faults.");
    if (const auto cs = f["crash"]) {
      for (const auto& c : cs) {
        check_keys(c, {"node", "at_ms", "recover_ms"}, "faults.crash[].");
        CrashFault cf;
        read(c, "node", cf.node, "faults.crash[].");
        read(c, "at_ms", cf.at_ms, "faults.crash[].");
        read(c, "recover_ms", cf.recover_ms, "faults.crash[].");
        s.faults.crash.push_back(cf);
      }
    }
    s.faults.tamper_accountant = read_set(f, "tamper_accountant", "faults.");
    s.faults.collude_evaluator = read_set(f, "collude_evaluator", "faults.");
    s.faults.sybil = read_set(f, "sybil", "faults.");
    s.faults.double_vote = read_set(f, "double_vote", "faults.");
    read(f, "byzantine_from_term", s.faults.byzantine_from_term, "faults.");
    if (const auto d = f["targeted_dos"]) {
      check_keys(d, {"enabled", "attacker", "delay_ms", "downtime_ms"}, "faults.targeted_dos.");
      auto& dos = s.faults.targeted_dos;
      read(d, "enabled", dos.enabled, "faults.targeted_dos.");
      read_opt(d, "attacker", dos.attacker, "faults.targeted_dos.");
      read(d, "delay_ms", dos.delay_ms, "faults.targeted_dos.");
      read(d, "downtime_ms", dos.downtime_ms, "faults.targeted_dos.");
    }
  }
  if (const auto w = root["workload"]) {
    check_keys(w, {"rate_per_ms", "total_requests", "payload_bytes", "clients", "start_ms", "retry_ms"},
               "workload.");
    read(w, "rate_per_ms", s.workload.rate_per_ms, "workload.");
    read(w, "total_requests", s.workload.total_requests, "workload.");
    read(w, "payload_bytes", s.workload.payload_bytes, "workload.");
    read(w, "clients", s.workload.clients, "workload.");
    read(w, "start_ms", s.workload.start_ms, "workload.");
    read(w, "retry_ms", s.workload.retry_ms, "workload.");
  }
  read(root, "duration_ms", s.duration_ms, "");
  read_opt(root, "settle_ms", s.settle_ms, "");
  read_opt(root, "max_terms", s.max_terms, "");
  read_opt(root, "bootstrap_candidate", s.bootstrap_candidate, "");
  if (const auto t = root["timing"]) {
    check_keys(t, {"election_min_ms", "election_max_ms", "heartbeat_ms", "batch_interval_ms", "batch_max",
                   "catchup_window", "resend_guard_ms"},
               "timing.");
    read_ms(t, "election_min_ms", s.timing.election_min, "timing.");
    read_ms(t, "election_max_ms", s.timing.election_max, "timing.");
    read_ms(t, "heartbeat_ms", s.timing.heartbeat_interval, "timing.");
    read_ms(t, "batch_interval_ms", s.timing.batch_interval, "timing.");
    read(t, "batch_max", s.timing.batch_max, "timing.");
    read(t, "catchup_window", s.timing.catchup_window, "timing.");
    read_ms(t, "resend_guard_ms", s.timing.resend_guard, "timing.");
  }
  read_ms(root, "judgment_timeout_ms", s.judgment_timeout, "");
  read_ms(root, "evaluator_grace_ms", s.evaluator_grace, "");
  read_ms(root, "risk_window_ms", s.risk_window, "");
  read_ms(root, "risk_wait_ms", s.risk_wait, "");
  read(root, "evaluator_offense_limit", s.evaluator_offense_limit, "");
  if (const auto r = root["risk"]) {
    check_keys(r, {"window", "tree_count", "subsample_size", "kappa", "score_floor", "min_margin", "rule", "tf_mode", "seed"},
               "risk.");
    read(r, "window", s.risk.window, "risk.");
    read(r, "tree_count", s.risk.tree_count, "risk.");
    read(r, "subsample_size", s.risk.subsample_size, "risk.");
    read(r, "kappa", s.risk.kappa, "risk.");
    read(r, "score_floor", s.risk.score_floor, "risk.");
    read(r, "min_margin", s.risk.min_margin, "risk.");
    read(r, "seed", s.risk.seed, "risk.");
    std::string rule = "lower_majority";
    read(r, "rule", rule, "risk.");
    if (rule == "lower_majority") {
      s.risk.rule = risk::FlagRule::kLowerMajority;
    } else if (rule == "median_mad") {
      s.risk.rule = risk::FlagRule::kMedianMad;
    } else if (rule == "mean_std") {
      s.risk.rule = risk::FlagRule::kMeanStd;
    } else {
      invalid("risk.rule must be lower_majority, median_mad or mean_std");
    }
    std::string tf = "column";
    read(r, "tf_mode", tf, "risk.");
    if (tf == "column") {
      s.risk.tf_mode = risk::TfMode::kColumn;
    } else if (tf == "row") {
      s.risk.tf_mode = risk::TfMode::kRow;
    } else {
      invalid("risk.tf_mode must be column or row");
    }
  }
  if (const auto t = root["traces"]) {
    check_keys(t, {"alphabet", "length", "branching", "noise", "attack_injections"}, "traces.");
    read(t, "alphabet", s.traces.alphabet, "traces.");
    read(t, "length", s.traces.length, "traces.");
    read(t, "branching", s.traces.branching, "traces.");
    read(t, "noise", s.traces.noise, "traces.");
    read(t, "attack_injections", s.traces.attack_injections, "traces.");
  }
  read(root, "initial_stake", s.initial_stake, "");
  read(root, "penalty_fraction", s.penalty_fraction, "");
  read(root, "log_messages", s.log_messages, "");
  validate(s);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

}  // namespace rac::simnet
