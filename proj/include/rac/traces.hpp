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

#ifndef RAC_TRACES_HPP_
#define RAC_TRACES_HPP_

#include <cstdint>
#include <filesystem>
#include <set>
#include <vector>

#include "rac/core.hpp"
#include "rac/risk.hpp"

namespace rac::simnet {

struct TraceConfig {
  // Honest symbols are 0..alphabet-1; the six kill-chain stages use
  // alphabet..alphabet+5.
  std::uint32_t alphabet = 30;
  std::size_t length = 2000;
  // Successors per symbol in the shared honest Markov profile.
  std::uint32_t branching = 2;
  // Per-position probability of a uniformly random honest symbol.
  double noise = 0.001;
  // Kill-chain splices per compromised trace.
  std::size_t attack_injections = 60;
};

inline constexpr std::uint32_t kKillChainStages = 6;

std::vector<risk::Syscall> kill_chain(const TraceConfig& config);

// One node's syscalls during `term`. Deterministic in (seed, node, term).
risk::SyscallTrace synthesize_trace(NodeId node, Term term, bool compromised,
                                    const TraceConfig& config, std::uint64_t seed);

std::vector<risk::SyscallTrace> synthesize_traces(const std::vector<NodeId>& nodes, Term term,
                                                  const std::set<NodeId>& compromised,
                                                  const TraceConfig& config, std::uint64_t seed);

// Whitespace-separated non-negative integers. Throws kParseError naming the
// byte offset of the offending token.
std::vector<risk::Syscall> parse_trace_text(std::string_view text, const std::string& source = "<text>");

// Reads node_<id>.txt files, ordered by id.
std::vector<risk::SyscallTrace> load_traces(const std::filesystem::path& directory, Term term = {});

}  // namespace rac::simnet

#endif  // RAC_TRACES_HPP_
