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

#ifndef RAC_PROTOCOL_HPP_
#define RAC_PROTOCOL_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "rac/raft.hpp"
#include "rac/risk.hpp"

namespace rac {

struct NodeAsset {
  NodeId id;
  double asset = 0.0;
};

// Per org, the `per_org` highest-asset nodes outside the RNL (ties go to the
// lower node value). Throws kInsufficientNodes when an org cannot supply
// `per_org` nodes and kSingleOrg when fewer than two orgs are available.
std::set<NodeId> init_evaluator_group(const std::map<std::uint32_t, std::vector<NodeAsset>>& orgs,
                                      std::size_t per_org, const RiskNodeList& rnl = {});

struct RacConfig {
  TimingConfig timing;
  std::size_t evaluators_per_org = 1;
  // Keyed by node value; absent nodes have asset 0.
  std::map<std::uint32_t, double> assets;
  // Verdicts still missing at this point count as fail.
  SimTime judgment_timeout = from_ms(50);
  // How long an evaluator waits for a client copy of an unknown entry.
  SimTime evaluator_grace = from_ms(15);
  // Evaluators collect traces for this long after the first one of a term.
  SimTime risk_window = from_ms(30);
  // Nodes give up waiting for a majority of evaluator replies after this.
  SimTime risk_wait = from_ms(60);
  // Minority verdicts tolerated before an evaluator is listed.
  std::size_t evaluator_offense_limit = 1;
  // seed is the master seed; each term's forest uses a seed derived from it.
  risk::RiskConfig risk;
};

// Returns a node's syscall trace for a term.
using TraceSource = std::function<risk::SyscallTrace(NodeId, Term)>;

class RacNode : public RaftNode {
 public:
  RacNode(NodeId id, std::vector<NodeId> cluster, RacConfig config, TraceSource traces,
          std::uint64_t seed, NodeFaults faults = {});

  SimTime next_wakeup() const override;
  std::string_view role_label() const override { return role_name(role_); }

  const RiskNodeList& rnl() const { return rnl_; }
  const std::set<NodeId>& evaluators() const { return evaluators_; }
  bool is_evaluator() const { return evaluators_.contains(id_); }

 protected:
  void dispatch(Ctx& ctx, const Deliver& d) override;
  void on_tick(Ctx& ctx) override;
  bool may_stand(Ctx& ctx) override;
  void on_candidacy(Ctx& ctx) override;
  void handle_request_vote(Ctx& ctx, std::uint32_t from, const RequestVote& msg) override;
  bool candidate_barred(NodeId candidate, std::string* why) const override;
  void propose(Ctx& ctx) override;
  bool admit_append(Ctx& ctx, const AppendEntries& msg) override;
  void on_appended(Ctx& ctx, const AppendEntries& msg, std::uint64_t num) override;
  Role resting_role() const override;

 private:
  struct Round {
    Term term;
    SimTime deadline = 0;
    std::map<std::uint32_t, std::vector<RnlEntry>> replies;
    bool resolved = false;
    std::vector<std::pair<std::uint32_t, RequestVote>> queued_votes;
  };
  struct Collection {
    Term term;
    SimTime close_at = 0;
    std::map<std::uint32_t, risk::SyscallTrace> traces;
    bool closed = false;
  };
  struct PendingJudgment {
    std::uint32_t from = 0;
    Judgment msg;
    SimTime give_up = 0;
  };
  struct Proposal {
    Block block;
    Digest digest{};
    SimTime deadline = 0;
    std::vector<NodeId> group;
    std::map<std::uint32_t, bool> verdicts;
  };

  bool active(bool fault) const { return fault && term_ >= faults_.from_term; }
  void ensure_round(Ctx& ctx, Term term);
  void resolve_round(Ctx& ctx);
  void on_risk_compute(Ctx& ctx, std::uint32_t from, const RiskCompute& msg);
  void on_risk_reply(Ctx& ctx, std::uint32_t from, const RiskComputeReply& msg);
  void close_collection(Ctx& ctx);
  void on_judgment(Ctx& ctx, std::uint32_t from, const Judgment& msg);
  // nullopt while an entry is still unknown and `final` is false.
  std::optional<bool> judge(const Judgment& msg, bool final) const;
  void reply_judgment(Ctx& ctx, std::uint32_t to, const Judgment& msg, bool verdict);
  void retry_pending(Ctx& ctx, bool expired_only);
  void on_judgment_reply(Ctx& ctx, std::uint32_t from, const JudgmentReply& msg);
  void decide(Ctx& ctx);
  void punish(Ctx& ctx, NodeId node, const std::string& reason);
  void punish_minority(Ctx& ctx, const std::vector<CertificateEntry>& cert, bool empty);
  void rebuild_rnl(Ctx& ctx);
  std::set<NodeId> evaluator_view() const;

  RacConfig config_;
  TraceSource traces_;
  std::map<std::uint32_t, std::vector<NodeAsset>> orgs_;

  RiskNodeList rnl_;
  std::map<NodeId, Term> punished_;
  std::map<NodeId, Term> risk_flags_;
  std::map<NodeId, std::size_t> offenses_;
  std::set<NodeId> evaluators_;

  std::optional<Round> round_;
  std::optional<Collection> collection_;
  std::vector<PendingJudgment> pending_judgments_;
  std::map<std::pair<std::uint64_t, std::uint64_t>, bool> sent_verdicts_;
  std::optional<Proposal> proposal_;

  // Follower behavior episodes by term; the flag records send_systemcall.
  std::map<std::uint64_t, bool> follower_episodes_;
  std::optional<std::uint64_t> reporting_episode_;
};

}  // namespace rac

#endif  // RAC_PROTOCOL_HPP_
