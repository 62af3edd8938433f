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

#include "rac/messages.hpp"

#include "rac/codec.hpp"

namespace rac {

namespace {

using codec::put_digest;
using codec::put_u32;
using codec::put_u64;
using codec::put_u8;
using codec::Reader;

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

void put_node(std::vector<std::uint8_t>& out, NodeId id) {
  put_u32(out, id.value);
  put_u32(out, id.org);
}

NodeId read_node(Reader& r) {
  NodeId id;
  id.value = static_cast<std::uint32_t>(r.uint(4));
  id.org = static_cast<std::uint32_t>(r.uint(4));
  return id;
}

void put_term(std::vector<std::uint8_t>& out, Term t) { put_u64(out, t.value); }
Term read_term(Reader& r) { return Term{r.uint(8)}; }

std::uint8_t read_enum(Reader& r, std::uint8_t limit) {
  auto v = static_cast<std::uint8_t>(r.uint(1));
  if (v >= limit) throw Error(ErrorCode::kDecodeError, "enum value out of range");
  return v;
}

}  // namespace

Phase phase_of(const Message& msg) {
  return std::visit(
      Overloaded{
          [](const RiskCompute&) { return Phase::kSelection; },
          [](const RiskComputeReply&) { return Phase::kSelection; },
          [](const RequestVote&) { return Phase::kSelection; },
          [](const RequestVoteReply&) { return Phase::kSelection; },
          [](const Judgment&) { return Phase::kBlockAddition; },
          [](const JudgmentReply&) { return Phase::kJudgmentReply; },
          [](const AppendEntries&) { return Phase::kBlockAddition; },
          [](const AppendEntriesReply&) { return Phase::kConfirmation; },
          [](const Heartbeat&) { return Phase::kHeartbeat; },
          [](const HeartbeatReply&) { return Phase::kHeartbeat; },
          [](const ClientRequest&) { return Phase::kClient; },
          [](const ClientReply&) { return Phase::kClient; },
      },
      msg);
}

std::string_view phase_name(Phase phase) {
  switch (phase) {
    case Phase::kSelection: return "selection";
    case Phase::kBlockAddition: return "block_addition";
    case Phase::kJudgmentReply: return "judgment_reply";
    case Phase::kConfirmation: return "confirmation";
    case Phase::kHeartbeat: return "heartbeat";
    case Phase::kClient: return "client";
  }
  return "unknown";
}

std::string_view message_name(const Message& msg) {
  static constexpr std::string_view kNames[] = {
      "RiskCompute",   "RiskComputeReply",   "RequestVote", "RequestVoteReply",
      "Judgment",      "JudgmentReply",      "AppendEntries", "AppendEntriesReply",
      "Heartbeat",     "HeartbeatReply",     "ClientRequest", "ClientReply",
  };
  return kNames[msg.index()];
}

std::optional<Term> message_term(const Message& msg) {
  return std::visit(Overloaded{
                        [](const ClientRequest&) -> std::optional<Term> { return std::nullopt; },
                        [](const ClientReply&) -> std::optional<Term> { return std::nullopt; },
                        [](const auto& m) -> std::optional<Term> { return m.term; },
                    },
                    msg);
}

std::vector<std::uint8_t> encode_message(const Message& msg) {
  std::vector<std::uint8_t> out;
  put_u8(out, static_cast<std::uint8_t>(msg.index()));
  std::visit(Overloaded{
                 [&](const RiskCompute& m) {
                   put_term(out, m.term);
                   put_node(out, m.node_id);
                   put_node(out, m.system_call.node);
                   put_term(out, m.system_call.term);
                   put_u32(out, static_cast<std::uint32_t>(m.system_call.calls.size()));
                   for (auto c : m.system_call.calls) put_u32(out, c);
                 },
                 [&](const RiskComputeReply& m) {
                   put_term(out, m.term);
                   put_node(out, m.evaluator);
                   put_u32(out, static_cast<std::uint32_t>(m.rnl.size()));
                   for (const auto& e : m.rnl) {
                     put_node(out, e.node);
                     put_term(out, e.term);
                     put_u8(out, static_cast<std::uint8_t>(e.kind));
                   }
                 },
                 [&](const RequestVote& m) {
                   put_term(out, m.term);
                   put_node(out, m.candidate_id);
                   put_u64(out, m.last_block_num);
                   put_term(out, m.last_block_term);
                 },
                 [&](const RequestVoteReply& m) {
                   put_term(out, m.term);
                   put_node(out, m.voter);
                   put_u8(out, m.vote_granted ? 1 : 0);
                 },
                 [&](const Judgment& m) {
                   put_term(out, m.term);
                   put_node(out, m.accountant_id);
                   encode(m.block, out);
                 },
                 [&](const JudgmentReply& m) {
                   put_term(out, m.term);
                   put_node(out, m.evaluator);
                   put_u64(out, m.block_num);
                   put_digest(out, m.block_digest);
                   put_u8(out, m.success ? 1 : 0);
                 },
                 [&](const AppendEntries& m) {
                   put_term(out, m.term);
                   put_node(out, m.accountant_id);
                   encode(m.block, out);
                   put_term(out, m.block_term);
                   put_u32(out, static_cast<std::uint32_t>(m.verdict_certificate.size()));
                   for (const auto& c : m.verdict_certificate) {
                     put_node(out, c.evaluator);
                     put_u8(out, static_cast<std::uint8_t>(c.verdict));
                   }
                   put_u64(out, m.leader_commit);
                 },
                 [&](const AppendEntriesReply& m) {
                   put_term(out, m.term);
                   put_node(out, m.follower);
                   put_u8(out, m.success ? 1 : 0);
                   put_u64(out, m.match);
                   put_u64(out, m.last);
                 },
                 [&](const Heartbeat& m) {
                   put_term(out, m.term);
                   put_node(out, m.accountant_id);
                   put_u64(out, m.leader_commit);
                   put_u64(out, m.last_num);
                   put_digest(out, m.last_digest);
                 },
                 [&](const HeartbeatReply& m) {
                   put_term(out, m.term);
                   put_node(out, m.follower);
                   put_u64(out, m.last_num);
                   put_digest(out, m.last_digest);
                   put_u64(out, m.commit);
                 },
                 [&](const ClientRequest& m) { encode(m.request, out); },
                 [&](const ClientReply& m) {
                   put_u32(out, m.client_id);
                   put_u64(out, m.request_id);
                   put_u64(out, m.block_num);
                   put_node(out, m.accountant);
                 },
             },
             msg);
  return out;
}

Message decode_message(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  Message msg;
  switch (r.uint(1)) {
    case 0: {
      RiskCompute m;
      m.term = read_term(r);
      m.node_id = read_node(r);
      m.system_call.node = read_node(r);
      m.system_call.term = read_term(r);
      auto n = r.uint(4);
      m.system_call.calls.reserve(n);
      for (std::uint64_t i = 0; i < n; ++i) {
        m.system_call.calls.push_back(static_cast<risk::Syscall>(r.uint(4)));
      }
      msg = std::move(m);
      break;
    }
    case 1: {
      RiskComputeReply m;
      m.term = read_term(r);
      m.evaluator = read_node(r);
      auto n = r.uint(4);
      for (std::uint64_t i = 0; i < n; ++i) {
        RnlEntry e;
        e.node = read_node(r);
        e.term = read_term(r);
        e.kind = static_cast<RnlKind>(read_enum(r, 2));
        m.rnl.push_back(e);
      }
      msg = std::move(m);
      break;
    }
    case 2: {
      RequestVote m;
      m.term = read_term(r);
      m.candidate_id = read_node(r);
      m.last_block_num = r.uint(8);
      m.last_block_term = read_term(r);
      msg = m;
      break;
    }
    case 3: {
      RequestVoteReply m;
      m.term = read_term(r);
      m.voter = read_node(r);
      m.vote_granted = r.flag();
      msg = m;
      break;
    }
    case 4: {
      Judgment m;
      m.term = read_term(r);
      m.accountant_id = read_node(r);
      m.block = codec::read_block(r);
      msg = std::move(m);
      break;
    }
    case 5: {
      JudgmentReply m;
      m.term = read_term(r);
      m.evaluator = read_node(r);
      m.block_num = r.uint(8);
      m.block_digest = r.digest();
      m.success = r.flag();
      msg = m;
      break;
    }
    case 6: {
      AppendEntries m;
      m.term = read_term(r);
      m.accountant_id = read_node(r);
      m.block = codec::read_block(r);
      m.block_term = read_term(r);
      auto n = r.uint(4);
      for (std::uint64_t i = 0; i < n; ++i) {
        CertificateEntry c;
        c.evaluator = read_node(r);
        c.verdict = static_cast<EvaluatorVerdict>(read_enum(r, 3));
        m.verdict_certificate.push_back(c);
      }
      m.leader_commit = r.uint(8);
      msg = std::move(m);
      break;
    }
    case 7: {
      AppendEntriesReply m;
      m.term = read_term(r);
      m.follower = read_node(r);
      m.success = r.flag();
      m.match = r.uint(8);
      m.last = r.uint(8);
      msg = m;
      break;
    }
    case 8: {
      Heartbeat m;
      m.term = read_term(r);
      m.accountant_id = read_node(r);
      m.leader_commit = r.uint(8);
      m.last_num = r.uint(8);
      m.last_digest = r.digest();
      msg = m;
      break;
    }
    case 9: {
      HeartbeatReply m;
      m.term = read_term(r);
      m.follower = read_node(r);
      m.last_num = r.uint(8);
      m.last_digest = r.digest();
      m.commit = r.uint(8);
      msg = m;
      break;
    }
    case 10:
      msg = ClientRequest{codec::read_tx(r)};
      break;
    case 11: {
      ClientReply m;
      m.client_id = static_cast<std::uint32_t>(r.uint(4));
      m.request_id = r.uint(8);
      m.block_num = r.uint(8);
      m.accountant = read_node(r);
      msg = m;
      break;
    }
    default:
      throw Error(ErrorCode::kDecodeError, "unknown message type");
  }
  if (!r.done()) throw Error(ErrorCode::kDecodeError, "trailing bytes after message");
  return msg;
}

}  // namespace rac
