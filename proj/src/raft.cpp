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

#include "rac/raft.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace rac {

std::string_view role_name(Role role) {
  switch (role) {
    case Role::kFollower: return "follower";
    case Role::kCandidate: return "candidate";
    case Role::kAccountant: return "accountant";
    case Role::kEvaluator: return "evaluator";
  }
  return "unknown";
}

std::string request_list(const std::vector<TransactionRequest>& entries) {
  std::ostringstream os;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i) os << ',';
    os << entries[i].client_id << '.' << entries[i].request_id;
  }
  return os.str();
}

RaftNode::RaftNode(NodeId id, std::vector<NodeId> cluster, TimingConfig timing,
                   std::uint64_t seed, NodeFaults faults)
    : id_(id), cluster_(std::move(cluster)), timing_(timing), faults_(faults), rng_(seed) {
  for (std::size_t i = 0; i < cluster_.size(); ++i) {
    if (cluster_[i].value != i) throw Error(ErrorCode::kInvalidScenario, "node values must be 0..N-1");
  }
  rearm_election(0);
  if (timing_.first_election >= 0) election_deadline_ = timing_.first_election;
}

std::string_view RaftNode::role_label() const {
  return role_ == Role::kAccountant ? "leader" : role_name(role_);
}

void RaftNode::send(Ctx& ctx, std::uint32_t to, Message msg) {
  ctx.out.messages.push_back(Envelope{id_.value, to, std::move(msg)});
}

void RaftNode::broadcast(Ctx& ctx, const Message& msg) {
  for (const auto& n : cluster_) {
    if (n != id_) send(ctx, n.value, msg);
  }
}

void RaftNode::record(Ctx& ctx, std::string event, std::string detail) {
  ctx.out.records.push_back(
      NodeRecord{term_, std::string(role_label()), std::move(event), std::move(detail)});
}

void RaftNode::act(Ctx& ctx, behavior::BehaviorRole role, std::uint64_t term, std::uint64_t index,
                   behavior::ActionSymbol symbol) {
  ctx.out.actions.push_back(ActionEvent{id_, role, term, index, symbol});
}

void RaftNode::rearm_election(SimTime now) {
  election_deadline_ = now + rng_.between(timing_.election_min, timing_.election_max);
}

StepOutput RaftNode::step(SimTime now, const Event& event) {
  Ctx ctx;
  ctx.now = now;
  if (const auto* d = std::get_if<Deliver>(&event)) {
    if (!d->from_client) {
      if (auto t = message_term(d->msg); t && *t > term_) step_down(ctx, *t);
    }
    dispatch(ctx, *d);
  } else {
    on_tick(ctx);
  }
  return std::move(ctx.out);
}

SimTime RaftNode::next_wakeup() const {
  SimTime t = std::min(heartbeat_due_, batch_due_);
  if (role_ != Role::kAccountant) t = std::min(t, election_deadline_);
  return t;
}

void RaftNode::recover(SimTime now) {
  rearm_election(now);
  if (role_ == Role::kAccountant) {
    heartbeat_due_ = now;
    batch_due_ = now;
  }
}

void RaftNode::dispatch(Ctx& ctx, const Deliver& d) {
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ClientRequest>) {
          log_.remember(m.request);
          if (role_ == Role::kAccountant && log_.uncommitted_count() >= timing_.batch_max) {
            propose(ctx);
          }
        } else if constexpr (std::is_same_v<T, RequestVote>) {
          handle_request_vote(ctx, d.from, m);
        } else if constexpr (std::is_same_v<T, RequestVoteReply>) {
          on_vote_reply(ctx, d.from, m);
        } else if constexpr (std::is_same_v<T, AppendEntries>) {
          on_append_entries(ctx, d.from, m);
        } else if constexpr (std::is_same_v<T, AppendEntriesReply>) {
          on_append_reply(ctx, d.from, m);
        } else if constexpr (std::is_same_v<T, Heartbeat>) {
          on_heartbeat(ctx, d.from, m);
        } else if constexpr (std::is_same_v<T, HeartbeatReply>) {
          on_heartbeat_reply(ctx, d.from, m);
        } else {
          record(ctx, "ignored", "msg=" + std::string(message_name(d.msg)));
        }
      },
      d.msg);
}

bool RaftNode::may_stand(Ctx&) { return true; }

void RaftNode::on_tick(Ctx& ctx) {
  if (role_ != Role::kAccountant && ctx.now >= election_deadline_) {
    if (may_stand(ctx)) {
      become_candidate(ctx);
    } else {
      rearm_election(ctx.now);
    }
  }
  if (role_ == Role::kAccountant) {
    if (ctx.now >= heartbeat_due_) {
      send_heartbeats(ctx);
      heartbeat_due_ = ctx.now + timing_.heartbeat_interval;
    }
    if (ctx.now >= batch_due_) {
      batch_due_ = ctx.now + timing_.batch_interval;
      propose(ctx);
    }
  }
}

void RaftNode::step_down(Ctx& ctx, Term term) {
  if (term > term_) {
    term_ = term;
    vacant_term_ = false;
    voted_for_.reset();
    leader_.reset();
    log_.clear_buffer();
  }
  auto rest = resting_role();
  if (role_ != rest) {
    bool was_leader = role_ == Role::kAccountant;
    role_ = rest;
    record(ctx, "step_down");
    heartbeat_due_ = kNever;
    batch_due_ = kNever;
    if (was_leader) rearm_election(ctx.now);
  }
}

void RaftNode::become_candidate(Ctx& ctx) {
  if (!vacant_term_ || voted_for_) term_ = term_.next();
  vacant_term_ = false;
  role_ = Role::kCandidate;
  voted_for_ = id_;
  leader_.reset();
  log_.clear_buffer();
  votes_ = {id_.value};
  rearm_election(ctx.now);
  record(ctx, "candidacy");
  on_candidacy(ctx);
  broadcast(ctx, RequestVote{term_, id_, log_.last_num(), log_.last_term()});
  if (votes_.size() >= strict_majority(cluster_.size())) become_leader(ctx);
}

void RaftNode::become_leader(Ctx& ctx) {
  role_ = Role::kAccountant;
  leader_ = id_;
  match_.clear();
  sent_at_.clear();
  for (const auto& n : cluster_) {
    if (n != id_) match_[n.value] = 0;
  }
  record(ctx, "established", "votes=" + std::to_string(votes_.size()));
  send_heartbeats(ctx);
  heartbeat_due_ = ctx.now + timing_.heartbeat_interval;
  batch_due_ = ctx.now + timing_.batch_interval;
  on_established(ctx);
}

void RaftNode::send_heartbeats(Ctx& ctx) {
  broadcast(ctx, Heartbeat{term_, id_, log_.commit_index(), log_.last_num(),
                           log_.chain().last_digest()});
}

void RaftNode::handle_request_vote(Ctx& ctx, std::uint32_t from, const RequestVote& msg) {
  answer_vote(ctx, from, msg);
}

void RaftNode::answer_vote(Ctx& ctx, std::uint32_t from, const RequestVote& msg) {
  std::string why;
  bool up_to_date = std::pair(msg.last_block_term, msg.last_block_num) >=
                    std::pair(log_.last_term(), log_.last_num());
  if (msg.term < term_) {
    why = "stale_term";
  } else if (msg.candidate_id.value != from) {
    why = "forged_identity";
  } else if (voted_for_ && *voted_for_ != msg.candidate_id && !faults_.double_vote) {
    why = "already_voted";
  } else if (!up_to_date) {
    why = "log_behind";
  } else {
    candidate_barred(msg.candidate_id, &why);
  }
  bool granted = why.empty();
  if (granted) {
    voted_for_ = msg.candidate_id;
    rearm_election(ctx.now);
  }
  record(ctx, "vote", "candidate=" + std::to_string(msg.candidate_id.value) +
                          " granted=" + (granted ? "1" : "0") + (granted ? "" : " reason=" + why));
  send(ctx, from, RequestVoteReply{term_, id_, granted});
}

void RaftNode::on_vote_reply(Ctx& ctx, std::uint32_t from, const RequestVoteReply& msg) {
  if (role_ != Role::kCandidate || msg.term != term_ || !msg.vote_granted) return;
  votes_.insert(from);
  if (votes_.size() >= strict_majority(cluster_.size())) become_leader(ctx);
}

Block RaftNode::package_block(Ctx& ctx, std::vector<TransactionRequest> batch) {
  if (tamper_active()) {
    auto& victim = batch[rng_.index(batch.size())];
    if (!victim.payload.empty()) {
      victim.payload[0] ^= 0x01;
      record(ctx, "tamper",
             "request=" + std::to_string(victim.client_id) + "." + std::to_string(victim.request_id));
    }
  }
  return make_block(log_.last_num() + 1, log_.chain().last_digest(), ctx.now, std::move(batch));
}

void RaftNode::propose(Ctx& ctx) {
  if (role_ != Role::kAccountant) return;
  auto batch = log_.proposable(term_, timing_.batch_max);
  if (batch.empty()) return;
  auto block = package_block(ctx, std::move(batch));
  auto num = block.block_num;
  record(ctx, "propose", "block=" + std::to_string(num) + " size=" +
                             std::to_string(block.entries.size()));
  log_.append_local(std::move(block), term_, {});
  replicate(ctx, num);
  batch_due_ = ctx.now + timing_.batch_interval;
  update_commit(ctx);
}

void RaftNode::replicate(Ctx& ctx, std::uint64_t num) {
  for (const auto& n : cluster_) {
    if (n != id_) send_block(ctx, n.value, num, false);
  }
}

void RaftNode::send_block(Ctx& ctx, std::uint32_t to, std::uint64_t num, bool guarded) {
  if (num == 0 || num > log_.last_num()) return;
  auto& sent = sent_at_[to];
  if (guarded) {
    auto it = sent.find(num);
    if (it != sent.end() && ctx.now - it->second < timing_.resend_guard) return;
  }
  sent[num] = ctx.now;
  while (sent.size() > 256) sent.erase(sent.begin());
  send(ctx, to,
       AppendEntries{term_, id_, log_.chain().at(num), log_.block_term(num), log_.certificate(num),
                     log_.commit_index()});
}

void RaftNode::on_append_entries(Ctx& ctx, std::uint32_t from, const AppendEntries& msg) {
  if (msg.term < term_ || msg.accountant_id.value != from) {
    send(ctx, from, AppendEntriesReply{term_, id_, false, 0, log_.last_num()});
    return;
  }
  if (role_ == Role::kCandidate) step_down(ctx, msg.term);
  leader_ = msg.accountant_id;
  rearm_election(ctx.now);
  if (!admit_append(ctx, msg)) {
    send(ctx, from, AppendEntriesReply{term_, id_, false, 0, log_.last_num()});
    return;
  }
  auto outcome = log_.accept(msg.block, msg.block_term, msg.verdict_certificate);
  if (outcome.success) log_.advance_commit(std::min(msg.leader_commit, outcome.match));
  send(ctx, from, AppendEntriesReply{term_, id_, outcome.success, outcome.match, outcome.last});
  for (auto num : outcome.appended) on_appended(ctx, msg, num);
}

void RaftNode::on_append_reply(Ctx& ctx, std::uint32_t from, const AppendEntriesReply& msg) {
  if (role_ != Role::kAccountant || msg.term != term_) return;
  if (msg.success) {
    auto& m = match_[from];
    m = std::max(m, msg.match);
    update_commit(ctx);
  } else if (msg.last < log_.last_num()) {
    send_block(ctx, from, msg.last + 1, true);
  }
}

void RaftNode::on_heartbeat(Ctx& ctx, std::uint32_t from, const Heartbeat& msg) {
  if (msg.term < term_ || msg.accountant_id.value != from) {
    send(ctx, from, HeartbeatReply{term_, id_, log_.last_num(), log_.chain().last_digest(),
                                   log_.commit_index()});
    return;
  }
  if (role_ == Role::kCandidate) step_down(ctx, msg.term);
  if (role_ == Role::kAccountant) return;
  leader_ = msg.accountant_id;
  rearm_election(ctx.now);
  if (msg.last_num <= log_.last_num() &&
      log_.chain().digest_at(msg.last_num) == msg.last_digest) {
    log_.advance_commit(std::min(msg.leader_commit, msg.last_num));
  }
  send(ctx, from, HeartbeatReply{term_, id_, log_.last_num(), log_.chain().last_digest(),
                                 log_.commit_index()});
}

void RaftNode::on_heartbeat_reply(Ctx& ctx, std::uint32_t from, const HeartbeatReply& msg) {
  if (role_ != Role::kAccountant || msg.term != term_) return;
  auto last = log_.last_num();
  std::uint64_t m = std::min(msg.commit, last);
  if (msg.last_num <= last && log_.chain().digest_at(msg.last_num) == msg.last_digest) {
    m = msg.last_num;
  }
  auto& known = match_[from];
  known = std::max(known, m);
  update_commit(ctx);
  auto until = std::min(last, known + timing_.catchup_window);
  for (auto n = known + 1; n <= until; ++n) send_block(ctx, from, n, true);
}

void RaftNode::update_commit(Ctx& ctx) {
  auto n = quorum_index(match_, log_.last_num(), cluster_.size());
  if (n <= log_.commit_index() || log_.block_term(n) != term_) return;
  for (auto num : log_.advance_commit(n)) {
    const auto& block = log_.chain().at(num);
    record(ctx, "commit", "block=" + std::to_string(num) + " empty=" +
                              (block.empty_flag ? "1" : "0") +
                              " requests=" + request_list(block.entries));
    on_committed(ctx, num);
  }
}

void RaftNode::on_committed(Ctx& ctx, std::uint64_t num) {
  for (const auto& tx : log_.chain().at(num).entries) {
    send(ctx, tx.client_id, ClientReply{tx.client_id, tx.request_id, num, id_});
  }
}

}  // namespace rac
