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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>

#include "rac/traces.hpp"

using namespace rac;
using namespace rac::simnet;

namespace {

std::map<std::pair<risk::Syscall, risk::Syscall>, double> bigram_freq(const std::vector<risk::Syscall>& calls) {
  std::map<std::pair<risk::Syscall, risk::Syscall>, double> f;
  for (std::size_t i = 0; i + 1 < calls.size(); ++i) f[{calls[i], calls[i + 1]}] += 1.0;
  for (auto& [k, v] : f) v /= static_cast<double>(calls.size() - 1);
  return f;
}

double total_variation(const std::vector<risk::Syscall>& a, const std::vector<risk::Syscall>& b) {
  auto fa = bigram_freq(a), fb = bigram_freq(b);
  double d = 0;
  for (const auto& [k, v] : fa) d += std::abs(v - (fb.contains(k) ? fb.at(k) : 0.0));
  for (const auto& [k, v] : fb)
    if (!fa.contains(k)) d += v;
  return d / 2;
}

bool contains_chain(const std::vector<risk::Syscall>& calls, const std::vector<risk::Syscall>& chain) {
  return std::search(calls.begin(), calls.end(), chain.begin(), chain.end()) != calls.end();
}

}  // namespace

TEST_CASE("honest traces share one profile") {
  TraceConfig cfg;
  auto a = synthesize_trace(NodeId{0, 0}, Term{1}, false, cfg, 7);
  auto b = synthesize_trace(NodeId{1, 0}, Term{1}, false, cfg, 7);
  CHECK(a.calls.size() == cfg.length);
  CHECK(a.calls != b.calls);
  CHECK(total_variation(a.calls, b.calls) < 0.15);
  for (auto s : a.calls) CHECK(s < cfg.alphabet);
  auto bad = synthesize_trace(NodeId{2, 0}, Term{1}, true, cfg, 7);
  CHECK(total_variation(a.calls, bad.calls) > total_variation(a.calls, b.calls));
}

TEST_CASE("compromised traces carry the kill chain") {
  TraceConfig cfg;
  auto chain = kill_chain(cfg);
  CHECK(chain.size() == kKillChainStages);
  auto bad = synthesize_trace(NodeId{3, 0}, Term{2}, true, cfg, 1);
  CHECK(contains_chain(bad.calls, chain));
  auto good = synthesize_trace(NodeId{3, 0}, Term{2}, false, cfg, 1);
  CHECK_FALSE(contains_chain(good.calls, chain));
}

TEST_CASE("synthesis is deterministic and term dependent") {
  TraceConfig cfg;
  auto a = synthesize_trace(NodeId{4, 0}, Term{3}, false, cfg, 9);
  CHECK(a.calls == synthesize_trace(NodeId{4, 0}, Term{3}, false, cfg, 9).calls);
  CHECK(a.calls != synthesize_trace(NodeId{4, 0}, Term{4}, false, cfg, 9).calls);
}

TEST_CASE("a trace shorter than the window has no n-grams") {
  TraceConfig cfg;
  cfg.length = 3;
  cfg.attack_injections = 0;
  auto t = synthesize_trace(NodeId{0, 0}, Term{1}, false, cfg, 1);
  CHECK(risk::extract_ngrams(t.calls, 5).empty());
  cfg.alphabet = 1;
  CHECK_THROWS_AS(synthesize_trace(NodeId{0, 0}, Term{1}, false, cfg, 1), Error);
}

TEST_CASE("trace text parsing") {
  CHECK(parse_trace_text("1 2 3\n") == std::vector<risk::Syscall>{1, 2, 3});
  CHECK(parse_trace_text("").empty());
  try {
    parse_trace_text("1 2 x3 4");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kParseError);
    CHECK(std::string(e.what()).find("offset 4") != std::string::npos);
  }
}

TEST_CASE("trace directories bind files to nodes") {
  auto dir = std::filesystem::temp_directory_path() / "rac_trace_dir_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "node_2.txt") << "4 5 6\n";
  std::ofstream(dir / "node_10.txt") << "";
  std::ofstream(dir / "notes.txt") << "ignored";
  auto traces = load_traces(dir);
  REQUIRE(traces.size() == 2);
  CHECK(traces[0].node.value == 2);
  CHECK(traces[0].calls == std::vector<risk::Syscall>{4, 5, 6});
  CHECK(traces[1].node.value == 10);
  CHECK(traces[1].calls.empty());
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(load_traces(dir), Error);
}
