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

#include "rac/traces.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <regex>
#include <sstream>

#include "rac/random.hpp"

namespace rac::simnet {

namespace {

struct Profile {
  std::vector<std::vector<risk::Syscall>> successors;
};

// The shared honest profile depends only on the scenario seed.
Profile make_profile(const TraceConfig& config, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x70726f66696c65ULL));
  Profile p;
  p.successors.resize(config.alphabet);
  const std::uint32_t b = std::clamp<std::uint32_t>(config.branching, 1, config.alphabet);
  for (std::uint32_t s = 0; s < config.alphabet; ++s) {
    // The cycle edge s -> s+1 keeps the chain irreducible, so every honest
    // trace visits the same recurrent class whatever its start symbol.
    const risk::Syscall cycle = (s + 1) % config.alphabet;
    std::vector<risk::Syscall> others;
    for (std::uint32_t i = 0; i < config.alphabet; ++i)
      if (i != cycle) others.push_back(i);
    p.successors[s].push_back(cycle);
    for (std::uint32_t i = 0; i + 1 < b; ++i) {
      std::swap(others[i], others[i + rng.index(others.size() - i)]);
      p.successors[s].push_back(others[i]);
    }
  }
  return p;
}

}  // namespace

std::vector<risk::Syscall> kill_chain(const TraceConfig& config) {
  std::vector<risk::Syscall> chain;
  for (std::uint32_t i = 0; i < kKillChainStages; ++i) chain.push_back(config.alphabet + i);
  return chain;
}

risk::SyscallTrace synthesize_trace(NodeId node, Term term, bool compromised, const TraceConfig& config,
                                    std::uint64_t seed) {
  if (config.alphabet + kKillChainStages < 8 || config.alphabet < 2) {
    throw Error(ErrorCode::kInvalidScenario, "trace alphabet must have at least 8 symbols");
  }
  const Profile profile = make_profile(config, seed);
  Rng rng(derive_seed(seed, node.value, 0x7472616365ULL ^ (term.value << 20)));
  risk::SyscallTrace trace{node, term, {}};
  trace.calls.reserve(config.length);
  risk::Syscall s = static_cast<risk::Syscall>(rng.index(config.alphabet));
  for (std::size_t i = 0; i < config.length; ++i) {
    trace.calls.push_back(s);
    const auto& next = profile.successors[s];
    s = next[rng.index(next.size())];
    if (rng.bernoulli(config.noise)) s = static_cast<risk::Syscall>(rng.index(config.alphabet));
  }
  if (compromised && config.length >= kKillChainStages) {
    const auto chain = kill_chain(config);
    for (std::size_t k = 0; k < config.attack_injections; ++k) {
      std::size_t at = rng.index(config.length - kKillChainStages + 1);
      std::copy(chain.begin(), chain.end(), trace.calls.begin() + static_cast<std::ptrdiff_t>(at));
    }
  }
  return trace;
}

std::vector<risk::SyscallTrace> synthesize_traces(const std::vector<NodeId>& nodes, Term term,
                                                  const std::set<NodeId>& compromised,
                                                  const TraceConfig& config, std::uint64_t seed) {
  std::vector<risk::SyscallTrace> out;
  out.reserve(nodes.size());
  for (NodeId n : nodes) out.push_back(synthesize_trace(n, term, compromised.contains(n), config, seed));
  return out;
}

std::vector<risk::Syscall> parse_trace_text(std::string_view text, const std::string& source) {
  std::vector<risk::Syscall> calls;
  std::size_t i = 0;
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; };
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    if (i >= text.size()) break;
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    std::string_view token = text.substr(start, i - start);
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      throw Error(ErrorCode::kParseError, source + ": offset " + std::to_string(start) +
                                              ": not a non-negative integer: '" + std::string(token) + "'");
    }
    calls.push_back(v);
  }
  return calls;
}

std::vector<risk::SyscallTrace> load_traces(const std::filesystem::path& directory, Term term) {
  static const std::regex kName(R"(node_(\d+)\.txt)");
  std::vector<risk::SyscallTrace> traces;
  if (!std::filesystem::is_directory(directory)) {
    throw Error(ErrorCode::kParseError, directory.string() + ": not a directory");
  }
  for (const auto& entry : std::filesystem::directory_iterator(directory)) {
    std::smatch m;
    const std::string name = entry.path().filename().string();
    if (!entry.is_regular_file() || !std::regex_match(name, m, kName)) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    NodeId id{static_cast<std::uint32_t>(std::stoul(m[1].str())), 0};
    traces.push_back({id, term, parse_trace_text(buf.str(), entry.path().string())});
  }
  std::sort(traces.begin(), traces.end(), [](const auto& a, const auto& b) { return a.node < b.node; });
  return traces;
}

}  // namespace rac::simnet
