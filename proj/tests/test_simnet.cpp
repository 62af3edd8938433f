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
#include <sstream>

#include "rac/simnet.hpp"

using namespace rac;
using namespace rac::simnet;

namespace {

Scenario load(const std::string& name) { return load_scenario(std::string(RAC_SOURCE_DIR) + "/scenarios/" + name); }

std::string log_text(const RunResult& r) {
  std::ostringstream os;
  write_log(os, r.log);
  return os.str();
}

ErrorCode code_of(const Scenario& s) {
  try {
    validate(s);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kDecodeError;
}

}  // namespace

TEST_CASE("runs are deterministic in the seed") {
  auto s = load("nominal.yaml");
  s.workload.total_requests = 200;
  auto a = run_scenario(s);
  auto b = run_scenario(s);
  CHECK(log_text(a) == log_text(b));
  s.seed = 2;
  auto c = run_scenario(s);
  CHECK(log_text(a) != log_text(c));
}

TEST_CASE("nominal runs commit everything on every node") {
  for (auto algo : {Algorithm::kRac, Algorithm::kRaft}) {
    auto s = load("nominal.yaml");
    s.algorithm = algo;
    auto r = run_scenario(s);
    CHECK(r.report.submitted == 1000);
    CHECK(r.report.committed == 1000);
    CHECK(r.violations.empty());
    CHECK(r.report.committed_tampered == 0);
    REQUIRE(r.chains.size() == 5);
    for (const auto& c : r.chains) CHECK(c.last_digest() == r.chains[0].last_digest());
  }
}

TEST_CASE("scenario validation names the field") {
  auto s = load("nominal.yaml");
  auto bad = s;
  bad.drop_probability = 1.0;
  CHECK(code_of(bad) == ErrorCode::kInvalidScenario);
  bad = s;
  bad.faults.tamper_accountant = {5};
  CHECK_THROWS_WITH(validate(bad), doctest::Contains("faults.tamper_accountant"));
  bad = s;
  bad.orgs.resize(1);
  CHECK_THROWS_WITH(validate(bad), doctest::Contains("2 orgs"));
  bad.algorithm = Algorithm::kRaft;
  CHECK_NOTHROW(validate(bad));
  CHECK_THROWS_WITH(parse_scenario("seed: 1\norgs: [{name: a, nodes: 3}]\nlatency: {jiter_ms: 1}\n"),
                    doctest::Contains("latency.jiter_ms"));
  CHECK_THROWS_WITH(parse_scenario("seed: one\n"), doctest::Contains("seed"));
}

TEST_CASE("judgment stops tampering accountants") {
  auto s = load("tamper.yaml");
  auto r = run_scenario(s);
  CHECK(r.report.committed_tampered == 0);
  CHECK(r.report.committed == 500);
  CHECK(r.violations.empty());
  for (const auto& n : r.nodes) {
    if (n.byzantine) continue;
    for (std::uint32_t t : {6u, 7u, 8u, 9u}) {
      bool seen_lead = false;
      for (const auto& rec : r.log)
        if (rec.event == "established" && rec.actor == "n" + std::to_string(t)) seen_lead = true;
      if (seen_lead) CHECK(n.rnl.contains(NodeId{t, 1}));
    }
  }
}

TEST_CASE("raft commits what a tampering leader proposes") {
  auto s = load("raft_tamper.yaml");
  auto r = run_scenario(s);
  CHECK(r.report.committed_tampered > 0);
}

TEST_CASE("grid scenarios place Byzantine nodes at org tails") {
  auto base = load("nominal.yaml");
  auto g = grid_scenario(base, Algorithm::kRac, 20, 0.2, 9);
  CHECK(g.seed == 9);
  CHECK(g.node_count() == 20);
  CHECK(g.orgs.size() == 5);
  auto byz = g.faults.byzantine();
  CHECK(byz.size() == 4);
  for (auto b : byz) CHECK(b % 4 == 3);
  CHECK(g.faults.byzantine_from_term == 0);
  auto small = grid_scenario(base, Algorithm::kRaft, 6, 0.0, 1);
  CHECK(small.orgs.size() == 3);
  CHECK(small.faults.byzantine().empty());
  CHECK_NOTHROW(validate(small));
}

TEST_CASE("uniformity statistic against a closed form") {
  EventLog log;
  for (int w : {0, 0, 0, 1}) log.push_back({0, "sim", 0, "-", "election_outcome", "winner=" + std::to_string(w) + " eligible=0,1"});
  auto t = accountant_uniformity(log);
  CHECK(t.elections == 4);
  CHECK(t.chi_square == doctest::Approx(1.0));
  CHECK(t.dof == 1);
  // One degree of freedom: P(X > x) = erfc(sqrt(x / 2)).
  CHECK(t.p_value == doctest::Approx(std::erfc(std::sqrt(0.5))).epsilon(1e-9));
}

TEST_CASE("verdict csv layout") {
  VerdictRecord v;
  v.node = {2, 0};
  v.term = 3;
  v.trace = {behavior::ActionSymbol::kReceive};
  std::ostringstream os;
  write_verdicts_csv(os, {v});
  auto text = os.str();
  CHECK(text.rfind("node,role,term,index,trace,verdict,final_state,protocol_violation\n", 0) == 0);
  CHECK(text.find("\n2,") != std::string::npos);
}
