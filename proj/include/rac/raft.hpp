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

#ifndef RAC_RAFT_HPP_
#define RAC_RAFT_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rac/node.hpp"
#include "rac/random.hpp"
#include "rac/replication.hpp"

namespace rac {

// Classic Raft over blocks: randomized election timeouts, one vote per term,
// heartbeats, block replication and strict-majority commit. The RAC node
// builds on this class through the protected hooks.
class RaftNode : public ConsensusNode {
 public:
  // Node values in `cluster` must be 0..N-1 in order.
  RaftNode(NodeId id, std::vector<NodeId> cluster, TimingConfig timing, std::uint64_t seed,
           NodeFaults faults = {});

  StepOutput step(SimTime now, const Event& event) override;
  SimTime next_wakeup() const override;
  void recover(SimTime now) override;

  NodeId id() const override { return id_; }
  Role role() const override { return role_; }
  Term term() const override { return term_; }
  const Chain& chain() const override { return log_.chain(); }
  std::uint64_t commit_index() const override { return log_.commit_index(); }
  std::string_view role_label() const override;

  std::optional<NodeId> voted_for() const { return voted_for_; }
  std::optional<NodeId> leader() const { return leader_; }
  const LogReplica& log() const { return log_; }
  std::size_t cluster_size() const { return cluster_.size(); }
  SimTime election_deadline() const { return election_deadline_; }

 protected:
  struct Ctx {
    SimTime now = 0;
    StepOutput out;
  };

  const NodeId& node(std::uint32_t value) const { return cluster_.at(value); }
  void send(Ctx& ctx, std::uint32_t to, Message msg);
  // Every node except this one.
  void broadcast(Ctx& ctx, const Message& msg);
  void record(Ctx& ctx, std::string event, std::string detail = {});
  void act(Ctx& ctx, behavior::BehaviorRole role, std::uint64_t term, std::uint64_t index,
           behavior::ActionSymbol symbol);

  virtual void dispatch(Ctx& ctx, const Deliver& d);
  virtual void on_tick(Ctx& ctx);
  virtual bool may_stand(Ctx& ctx);
  virtual void on_candidacy(Ctx&) {}
  virtual void on_established(Ctx&) {}
  virtual void handle_request_vote(Ctx& ctx, std::uint32_t from, const RequestVote& msg);
  virtual bool candidate_barred(NodeId, std::string*) const { return false; }
  virtual void propose(Ctx& ctx);
  virtual bool admit_append(Ctx&, const AppendEntries&) { return true; }
  virtual void on_appended(Ctx&, const AppendEntries&, std::uint64_t) {}
  virtual void on_committed(Ctx& ctx, std::uint64_t num);
  // Role taken when stepping down.
  virtual Role resting_role() const { return Role::kFollower; }

  // Grants or denies per the shared vote rule and replies.
  void answer_vote(Ctx& ctx, std::uint32_t from, const RequestVote& msg);
  Block package_block(Ctx& ctx, std::vector<TransactionRequest> batch);
  void replicate(Ctx& ctx, std::uint64_t num);
  // `guarded` skips a block already sent to `to` within the resend guard.
  void send_block(Ctx& ctx, std::uint32_t to, std::uint64_t num, bool guarded);
  void step_down(Ctx& ctx, Term term);
  void become_candidate(Ctx& ctx);
  void become_leader(Ctx& ctx);
  void send_heartbeats(Ctx& ctx);
  void update_commit(Ctx& ctx);
  void rearm_election(SimTime now);
  bool tamper_active() const { return faults_.tamper && term_ >= faults_.from_term; }

  NodeId id_;
  std::vector<NodeId> cluster_;
  TimingConfig timing_;
  NodeFaults faults_;
  Rng rng_;

  Role role_ = Role::kFollower;
  Term term_;
  std::optional<NodeId> voted_for_;
  std::optional<NodeId> leader_;
  // The term was entered by abandoning a voided accountant, with no election
  // held in it yet; a node that has not voted may stand in it directly.
  bool vacant_term_ = false;
  LogReplica log_;
  std::set<std::uint32_t> votes_;
  SimTime election_deadline_ = 0;
  SimTime heartbeat_due_ = kNever;
  SimTime batch_due_ = kNever;
  std::map<std::uint32_t, std::uint64_t> match_;
  std::map<std::uint32_t, std::map<std::uint64_t, SimTime>> sent_at_;

 private:
  void on_vote_reply(Ctx& ctx, std::uint32_t from, const RequestVoteReply& msg);
  void on_append_entries(Ctx& ctx, std::uint32_t from, const AppendEntries& msg);
  void on_append_reply(Ctx& ctx, std::uint32_t from, const AppendEntriesReply& msg);
  void on_heartbeat(Ctx& ctx, std::uint32_t from, const Heartbeat& msg);
  void on_heartbeat_reply(Ctx& ctx, std::uint32_t from, const HeartbeatReply& msg);
};

std::string request_list(const std::vector<TransactionRequest>& entries);

}  // namespace rac

#endif  // RAC_RAFT_HPP_
