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

#ifndef RAC_MESSAGES_HPP_
#define RAC_MESSAGES_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "rac/core.hpp"
#include "rac/risk.hpp"

namespace rac {

// Why a node is on the risk node list. Assessment flags are refreshed at
// every election; punishments persist until compensated.
enum class RnlKind : std::uint8_t { kRisk, kPunishment };

struct RnlEntry {
  NodeId node;
  Term term;
  RnlKind kind = RnlKind::kRisk;

  friend bool operator==(const RnlEntry&, const RnlEntry&) = default;
};

enum class EvaluatorVerdict : std::uint8_t { kSuccess, kFail, kMissing };

struct CertificateEntry {
  NodeId evaluator;
  EvaluatorVerdict verdict = EvaluatorVerdict::kMissing;

  friend bool operator==(const CertificateEntry&, const CertificateEntry&) = default;
};

struct RiskCompute {
  Term term;
  NodeId node_id;
  risk::SyscallTrace system_call;
};

struct RiskComputeReply {
  Term term;
  NodeId evaluator;
  std::vector<RnlEntry> rnl;
};

struct RequestVote {
  Term term;
  NodeId candidate_id;
  std::uint64_t last_block_num = 0;
  Term last_block_term;
};

struct RequestVoteReply {
  Term term;
  NodeId voter;
  bool vote_granted = false;
};

struct Judgment {
  Term term;
  NodeId accountant_id;
  Block block;
};

struct JudgmentReply {
  Term term;
  NodeId evaluator;
  std::uint64_t block_num = 0;
  Digest block_digest{};
  bool success = false;
};

struct AppendEntries {
  Term term;
  NodeId accountant_id;
  Block block;
  Term block_term;
  std::vector<CertificateEntry> verdict_certificate;
  std::uint64_t leader_commit = 0;
};

struct AppendEntriesReply {
  Term term;
  NodeId follower;
  bool success = false;
  // Highest block known to equal the accountant's copy.
  std::uint64_t match = 0;
  std::uint64_t last = 0;
};

struct Heartbeat {
  Term term;
  NodeId accountant_id;
  std::uint64_t leader_commit = 0;
  std::uint64_t last_num = 0;
  Digest last_digest{};
};

struct HeartbeatReply {
  Term term;
  NodeId follower;
  std::uint64_t last_num = 0;
  Digest last_digest{};
  std::uint64_t commit = 0;
};

struct ClientRequest {
  TransactionRequest request;
};

struct ClientReply {
  std::uint32_t client_id = 0;
  std::uint64_t request_id = 0;
  std::uint64_t block_num = 0;
  NodeId accountant;
};

using Message = std::variant<RiskCompute, RiskComputeReply, RequestVote, RequestVoteReply, Judgment,
                             JudgmentReply, AppendEntries, AppendEntriesReply, Heartbeat,
                             HeartbeatReply, ClientRequest, ClientReply>;

// Accounting buckets for message complexity.
enum class Phase : std::uint8_t {
  kSelection,
  kBlockAddition,
  kJudgmentReply,
  kConfirmation,
  kHeartbeat,
  kClient,
};

inline constexpr std::size_t kPhaseCount = 6;

Phase phase_of(const Message& msg);
std::string_view phase_name(Phase phase);
std::string_view message_name(const Message& msg);
// Term carried by protocol messages; client traffic carries none.
std::optional<Term> message_term(const Message& msg);

// One type byte (the variant index) followed by the fields in declaration
// order. See docs/wire_format.md.
std::vector<std::uint8_t> encode_message(const Message& msg);
Message decode_message(std::span<const std::uint8_t> bytes);

}  // namespace rac

#endif  // RAC_MESSAGES_HPP_
