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

#include "harness.hpp"
#include "rac/protocol.hpp"
#include "rac/traces.hpp"

using namespace rac;
using rac::testing::Net;
using rac::testing::request;

namespace {

// Two orgs of three: 0..2 and 3..5. Nodes 0 and 3 hold the most assets and
// form the evaluator group. Unless `suspicious`, every trace is honest, so
// tamperers pass the risk round and only judgment can stop them.
struct Cluster {
  Net net;
  std::vector<NodeId> ids;

  RacNode& node(std::uint32_t i) { return dynamic_cast<RacNode&>(net.at(i)); }
};

Cluster rac_cluster(std::uint64_t seed, std::set<std::uint32_t> tamper, std::uint32_t first,
                    std::set<std::uint32_t> suspicious = {}) {
  Cluster c;
  for (std::uint32_t i = 0; i < 6; ++i) c.ids.push_back({i, i / 3});
  simnet::TraceConfig tcfg;
  tcfg.length = 600;
  tcfg.attack_injections = 20;
  TraceSource traces = [tcfg, seed, suspicious](NodeId n, Term t) {
    return simnet::synthesize_trace(n, t, suspicious.contains(n.value), tcfg, seed);
  };
  for (std::uint32_t i = 0; i < 6; ++i) {
    RacConfig cfg;
    cfg.assets = {{0, 10.0}, {3, 10.0}};
    cfg.risk.tree_count = 50;
    cfg.risk.seed = seed;
    if (i == first) cfg.timing.first_election = from_ms(20);
    NodeFaults f;
    f.tamper = tamper.contains(i);
    c.net.add(std::make_unique<RacNode>(c.ids[i], c.ids, cfg, traces, seed * 31 + i, f));
  }
  return c;
}

std::vector<std::uint32_t> established(const Net& net) {
  std::vector<std::uint32_t> out;
  for (const auto& [who, r] : net.records)
    if (r.event == "established") out.push_back(who);
  return out;
}

}  // namespace

TEST_CASE("evaluator group takes the richest nodes of each org") {
  std::map<std::uint32_t, std::vector<NodeAsset>> orgs{
      {0, {{{0, 0}, 5.0}, {{1, 0}, 9.0}, {{2, 0}, 9.0}}},
      {1, {{{3, 1}, 1.0}, {{4, 1}, 2.0}}},
  };
  auto g = init_evaluator_group(orgs, 1);
  CHECK(g == std::set<NodeId>{{1, 0}, {4, 1}});
  RiskNodeList rnl;
  rnl.add({1, 0}, Term{1});
  g = init_evaluator_group(orgs, 1, rnl);
  CHECK(g == std::set<NodeId>{{2, 0}, {4, 1}});
  CHECK(init_evaluator_group(orgs, 2).size() == 4);
}

TEST_CASE("evaluator group errors") {
  std::map<std::uint32_t, std::vector<NodeAsset>> one{{0, {{{0, 0}, 1.0}, {{1, 0}, 1.0}}}};
  try {
    init_evaluator_group(one, 1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSingleOrg);
  }
  std::map<std::uint32_t, std::vector<NodeAsset>> two{{0, {{{0, 0}, 1.0}}},
                                                      {1, {{{1, 1}, 1.0}, {{2, 1}, 1.0}}}};
  try {
    init_evaluator_group(two, 2);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInsufficientNodes);
  }
}

TEST_CASE("honest cluster elects a non-evaluator and commits") {
  auto c = rac_cluster(1, {}, 1);
  c.net.run_until(from_ms(500));
  for (std::uint32_t i = 0; i < 6; ++i)
    CHECK(c.node(i).evaluators() == std::set<NodeId>{{0, 0}, {3, 1}});
  for (std::uint64_t i = 1; i <= 30; ++i) c.net.submit(request(i));
  c.net.run_until(from_ms(1500));
  std::set<std::uint64_t> answered;
  for (const auto& r : c.net.replies) answered.insert(r.request_id);
  CHECK(answered.size() == 30);
  for (std::uint32_t i = 1; i < 6; ++i)
    CHECK(c.net.at(i).chain().last_digest() == c.net.at(0).chain().last_digest());
  for (auto who : established(c.net)) CHECK_FALSE(c.node(who).is_evaluator());
}

TEST_CASE("a tampering accountant yields an empty block and is listed") {
  auto c = rac_cluster(2, {1}, 1);
  c.net.run_until(from_ms(500));
  auto first = established(c.net);
  REQUIRE_FALSE(first.empty());
  REQUIRE(first[0] == 1);
  for (std::uint64_t i = 1; i <= 10; ++i) c.net.submit(request(i));
  c.net.run_until(from_ms(3000));

  bool saw_empty = false;
  const auto& chain = c.net.at(0).chain();
  for (std::uint64_t b = 1; b <= c.net.at(0).commit_index(); ++b) {
    if (chain.at(b).empty_flag) saw_empty = true;
    for (const auto& e : chain.at(b).entries) CHECK(e == request(e.request_id, e.client_id));
  }
  CHECK(saw_empty);
  for (std::uint32_t i = 0; i < 6; ++i) {
    if (i == 1) continue;
    CHECK(c.node(i).rnl().contains({1, 0}));
  }
  // After the first term the tamperer never leads again.
  auto all = established(c.net);
  for (std::size_t k = 1; k < all.size(); ++k)
    if (c.node(all[k]).term() > c.node(0).term()) CHECK(all[k] != 1);
  std::set<std::uint64_t> answered;
  for (const auto& r : c.net.replies) answered.insert(r.request_id);
  CHECK(answered.size() == 10);
}

TEST_CASE("listed candidates are refused votes") {
  auto c = rac_cluster(2, {1}, 1);
  for (std::uint64_t i = 1; i <= 5; ++i) c.net.submit(request(i));
  c.net.run_until(from_ms(3000));
  REQUIRE(c.node(2).rnl().contains({1, 0}));
  auto before = c.net.records.size();
  RequestVote rv;
  rv.term = Term{c.node(2).term().value + 1};
  rv.candidate_id = {1, 0};
  rv.last_block_num = c.net.at(2).chain().last_num();
  rv.last_block_term = c.node(2).log().last_term();
  c.net.inject(2, 1, rv);
  c.net.run_until(c.net.now() + from_ms(200));
  bool granted = false;
  for (std::size_t k = before; k < c.net.records.size(); ++k) {
    const auto& [who, r] = c.net.records[k];
    if (who == 2 && r.event == "vote" && r.detail.find("candidate=1 ") == 0 &&
        r.detail.find("granted=1") != std::string::npos)
      granted = true;
  }
  CHECK_FALSE(granted);
  CHECK(c.node(2).voted_for() != std::optional<NodeId>(NodeId{1, 0}));
}

TEST_CASE("a flagged candidate is refused by the risk round") {
  auto c = rac_cluster(4, {}, 1, {1});
  c.net.run_until(from_ms(1000));
  auto all = established(c.net);
  REQUIRE_FALSE(all.empty());
  CHECK(all[0] != 1);
  std::size_t refused = 0;
  for (const auto& [who, r] : c.net.records)
    if (r.event == "vote" && r.detail == "candidate=1 granted=0 reason=rnl") ++refused;
  CHECK(refused >= 3);
  CHECK(c.node(2).rnl().contains({1, 0}));
}
