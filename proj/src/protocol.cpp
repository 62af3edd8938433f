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

#include "rac/protocol.hpp"

#include <algorithm>
#include <sstream>

#include "rac/random.hpp"

namespace rac {

namespace {

using behavior::ActionSymbol;
using behavior::BehaviorRole;

std::string id_list(const std::set<NodeId>& nodes) {
  std::ostringstream os;
  bool first = true;
  for (const auto& n : nodes) {
    if (!first) os << ',';
    os << n.value;
    first = false;
  }
  return os.str();
}

template <class V>
std::set<NodeId> keys(const std::map<NodeId, V>& m) {
  std::set<NodeId> out;
  for (const auto& [k, v] : m) out.insert(k);
  return out;
}

// Orders an org's nodes by asset, highest first, then by node value.
void rank(std::vector<NodeAsset>& nodes) {
  std::stable_sort(nodes.begin(), nodes.end(), [](const NodeAsset& a, const NodeAsset& b) {
    if (a.asset != b.asset) return a.asset > b.asset;
    return a.id < b.id;
  });
}

}  // namespace

std::set<NodeId> init_evaluator_group(const std::map<std::uint32_t, std::vector<NodeAsset>>& orgs,
                                      std::size_t per_org, const RiskNodeList& rnl) {
  if (orgs.size() < 2) throw Error(ErrorCode::kSingleOrg, "evaluator group needs two orgs");
  std::set<NodeId> group;
  for (const auto& [org, members] : orgs) {
    std::vector<NodeAsset> eligible;
    for (const auto& m : members) {
      if (!rnl.contains(m.id)) eligible.push_back(m);
    }
    if (eligible.size() < per_org) {
      throw Error(ErrorCode::kInsufficientNodes,
                  "org " + std::to_string(org) + " has " + std::to_string(eligible.size()) +
                      " eligible nodes, needs " + std::to_string(per_org));
    }
    rank(eligible);
    for (std::size_t i = 0; i < per_org; ++i) group.insert(eligible[i].id);
  }
  return group;
}

RacNode::RacNode(NodeId id, std::vector<NodeId> cluster, RacConfig config, TraceSource traces,
                 std::uint64_t seed, NodeFaults faults)
    : RaftNode(id, std::move(cluster), config.timing, seed, faults),
      config_(std::move(config)),
      traces_(std::move(traces)) {
  for (const auto& n : cluster_) {
    auto it = config_.assets.find(n.value);
    orgs_[n.org].push_back(NodeAsset{n, it == config_.assets.end() ? 0.0 : it->second});
  }
  evaluators_ = init_evaluator_group(orgs_, config_.evaluators_per_org);
  if (is_evaluator()) role_ = Role::kEvaluator;
}

Role RacNode::resting_role() const { return is_evaluator() ? Role::kEvaluator : Role::kFollower; }

SimTime RacNode::next_wakeup() const {
  SimTime t = RaftNode::next_wakeup();
  if (collection_ && !collection_->closed) t = std::min(t, collection_->close_at);
  if (round_ && !round_->resolved) t = std::min(t, round_->deadline);
  for (const auto& p : pending_judgments_) t = std::min(t, p.give_up);
  if (proposal_) t = std::min(t, proposal_->deadline);
  return t;
}

void RacNode::dispatch(Ctx& ctx, const Deliver& d) {
  if (const auto* m = std::get_if<RiskCompute>(&d.msg)) {
    on_risk_compute(ctx, d.from, *m);
  } else if (const auto* m = std::get_if<RiskComputeReply>(&d.msg)) {
    on_risk_reply(ctx, d.from, *m);
  } else if (const auto* m = std::get_if<Judgment>(&d.msg)) {
    on_judgment(ctx, d.from, *m);
  } else if (const auto* m = std::get_if<JudgmentReply>(&d.msg)) {
    on_judgment_reply(ctx, d.from, *m);
  } else {
    RaftNode::dispatch(ctx, d);
    if (std::holds_alternative<ClientRequest>(d.msg) && !pending_judgments_.empty()) {
      retry_pending(ctx, false);
    }
  }
}

void RacNode::on_tick(Ctx& ctx) {
  RaftNode::on_tick(ctx);
  if (collection_ && !collection_->closed && ctx.now >= collection_->close_at) {
    close_collection(ctx);
  }
  if (round_ && !round_->resolved && ctx.now >= round_->deadline) resolve_round(ctx);
  if (!pending_judgments_.empty()) retry_pending(ctx, true);
  if (proposal_ && ctx.now >= proposal_->deadline) decide(ctx);
}

bool RacNode::may_stand(Ctx& ctx) {
  if (is_evaluator()) return false;
  if (rnl_.contains(id_) && !active(faults_.sybil)) {
    record(ctx, "candidacy_barred", "reason=rnl");
    return false;
  }
  return true;
}

bool RacNode::candidate_barred(NodeId candidate, std::string* why) const {
  if (rnl_.contains(candidate)) {
    *why = "rnl";
    return true;
  }
  if (evaluators_.contains(candidate)) {
    *why = "evaluator";
    return true;
  }
  return false;
}

void RacNode::on_candidacy(Ctx& ctx) { ensure_round(ctx, term_); }

void RacNode::handle_request_vote(Ctx& ctx, std::uint32_t from, const RequestVote& msg) {
  if (msg.term < term_) {
    answer_vote(ctx, from, msg);
    return;
  }
  ensure_round(ctx, term_);
  if (round_->resolved) {
    answer_vote(ctx, from, msg);
    return;
  }
  round_->queued_votes.emplace_back(from, msg);
  if (role_ != Role::kEvaluator) rearm_election(ctx.now);
  record(ctx, "vote_queued", "candidate=" + std::to_string(msg.candidate_id.value));
}

void RacNode::ensure_round(Ctx& ctx, Term term) {
  if (round_ && round_->term >= term) return;
  if (round_) {
    // Votes queued for an older term can no longer be granted.
    for (const auto& [from, msg] : round_->queued_votes) answer_vote(ctx, from, msg);
  }
  round_ = Round{};
  round_->term = term;
  round_->deadline = ctx.now + config_.risk_wait;

  Term traced{term.value == 0 ? 0 : term.value - 1};
  auto trace = traces_ ? traces_(id_, traced) : risk::SyscallTrace{id_, traced, {}};
  for (const auto& e : evaluators_) send(ctx, e.value, RiskCompute{term, id_, trace});
  if (active(faults_.sybil)) {
    // A forged identity the evaluators cannot authenticate.
    NodeId forged{static_cast<std::uint32_t>(cluster_.size() + id_.value), id_.org};
    auto fake = trace;
    fake.node = forged;
    for (const auto& e : evaluators_) send(ctx, e.value, RiskCompute{term, forged, fake});
  }
  record(ctx, "submit_syscalls",
         "trace_term=" + std::to_string(traced.value) + " calls=" + std::to_string(trace.calls.size()));
  for (auto& [t, sent] : follower_episodes_) {
    if (!sent) {
      sent = true;
      reporting_episode_ = t;
      act(ctx, BehaviorRole::kFollower, t, 0, ActionSymbol::kSendSystemcall);
    }
  }
}

void RacNode::on_risk_compute(Ctx& ctx, std::uint32_t from, const RiskCompute& msg) {
  if (msg.node_id.value != from || msg.system_call.node != msg.node_id) {
    record(ctx, "forged_identity", "claimed=" + std::to_string(msg.node_id.value) +
                                       " sender=" + std::to_string(from));
    return;
  }
  if (!is_evaluator() || msg.term < term_) return;
  if (!collection_ || collection_->term < msg.term) {
    collection_ = Collection{};
    collection_->term = msg.term;
    collection_->close_at = ctx.now + config_.risk_window;
  }
  if (collection_->term != msg.term) return;
  if (collection_->closed) {
    record(ctx, "late_trace", "node=" + std::to_string(from));
    return;
  }
  collection_->traces[from] = msg.system_call;
}

void RacNode::close_collection(Ctx& ctx) {
  auto& c = *collection_;
  c.closed = true;
  std::vector<risk::SyscallTrace> traces;
  for (auto& [node, trace] : c.traces) traces.push_back(trace);
  std::set<NodeId> flagged;
  try {
    auto cfg = config_.risk;
    cfg.seed = derive_seed(config_.risk.seed, c.term.value, 0x72697363ULL);
    auto report = risk::assess(traces, cfg);
    flagged = report.flagged;
    std::ostringstream os;
    os << "traces=" << traces.size() << " threshold=" << report.threshold
       << " flagged=" << id_list(flagged);
    record(ctx, "assessment", os.str());
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegenerateInput) throw;
    flagged = keys(risk_flags_);
    record(ctx, "assessment_skipped", "traces=" + std::to_string(traces.size()));
  }
  std::vector<RnlEntry> rnl;
  for (const auto& n : flagged) rnl.push_back(RnlEntry{n, c.term, RnlKind::kRisk});
  for (const auto& [n, t] : punished_) rnl.push_back(RnlEntry{n, t, RnlKind::kPunishment});
  for (const auto& n : cluster_) send(ctx, n.value, RiskComputeReply{c.term, id_, rnl});
}

void RacNode::on_risk_reply(Ctx& ctx, std::uint32_t from, const RiskComputeReply& msg) {
  if (msg.evaluator.value != from || msg.term != term_) return;
  if (!evaluators_.contains(node(from))) return;
  ensure_round(ctx, term_);
  if (round_->term != msg.term || round_->resolved) return;
  round_->replies[from] = msg.rnl;
  if (round_->replies.size() >= strict_majority(evaluators_.size())) resolve_round(ctx);
}

void RacNode::resolve_round(Ctx& ctx) {
  auto& r = *round_;
  r.resolved = true;
  auto need = strict_majority(evaluators_.size());
  if (r.replies.size() < need) {
    record(ctx, "rnl_unresolved", "replies=" + std::to_string(r.replies.size()));
  } else {
    // An entry is adopted when a strict majority of the group lists it.
    std::map<std::pair<NodeId, RnlKind>, std::pair<std::size_t, Term>> tally;
    for (const auto& [from, entries] : r.replies) {
      std::set<std::pair<NodeId, RnlKind>> seen;
      for (const auto& e : entries) {
        if (!seen.insert({e.node, e.kind}).second) continue;
        auto& slot = tally[{e.node, e.kind}];
        if (slot.first == 0 || e.term < slot.second) slot.second = e.term;
        ++slot.first;
      }
    }
    std::map<NodeId, Term> flags;
    for (const auto& [key, count] : tally) {
      if (count.first < need) continue;
      if (key.second == RnlKind::kRisk) {
        flags[key.first] = count.second;
      } else {
        punished_.emplace(key.first, count.second);
      }
    }
    risk_flags_ = std::move(flags);
    record(ctx, "rnl_adopted",
           "risk=" + id_list(keys(risk_flags_)) + " punished=" + id_list(keys(punished_)));
    rebuild_rnl(ctx);
  }
  if (reporting_episode_) {
    act(ctx, BehaviorRole::kFollower, *reporting_episode_, 0,
        risk_flags_.contains(id_) ? ActionSymbol::kAbnormal : ActionSymbol::kNormal);
    reporting_episode_.reset();
  }
  auto queued = std::move(r.queued_votes);
  r.queued_votes.clear();
  for (const auto& [from, msg] : queued) answer_vote(ctx, from, msg);
}

std::set<NodeId> RacNode::evaluator_view() const {
  std::set<NodeId> group;
  for (const auto& [org, members] : orgs_) {
    std::vector<NodeAsset> eligible;
    for (const auto& m : members) {
      if (rnl_.contains(m.id)) continue;
      if (leader_ && *leader_ == m.id) continue;
      eligible.push_back(m);
    }
    rank(eligible);
    for (std::size_t i = 0; i < eligible.size() && i < config_.evaluators_per_org; ++i) {
      group.insert(eligible[i].id);
    }
  }
  return group;
}

void RacNode::rebuild_rnl(Ctx& ctx) {
  RiskNodeList next;
  for (const auto& [n, t] : punished_) next.add(n, t);
  for (const auto& [n, t] : risk_flags_) next.add(n, t);
  rnl_ = std::move(next);
  auto group = evaluator_view();
  if (group != evaluators_) {
    evaluators_ = std::move(group);
    record(ctx, "evaluator_group", "members=" + id_list(evaluators_));
  }
  if (rnl_.contains(id_) && role_ != Role::kFollower && !active(faults_.sybil)) {
    role_ = Role::kFollower;
    record(ctx, "rnl_step_down");
  }
  if (is_evaluator() && role_ != Role::kEvaluator) {
    role_ = Role::kEvaluator;
    record(ctx, "become_evaluator");
  } else if (!is_evaluator() && role_ == Role::kEvaluator) {
    role_ = Role::kFollower;
    record(ctx, "leave_evaluator");
  }
  if (role_ != Role::kAccountant) {
    heartbeat_due_ = kNever;
    batch_due_ = kNever;
    proposal_.reset();
    if (election_deadline_ == kNever) rearm_election(ctx.now);
  }
}

void RacNode::propose(Ctx& ctx) {
  if (role_ != Role::kAccountant || proposal_) return;
  if (evaluators_.empty()) {
    record(ctx, "no_evaluators");
    return;
  }
  auto batch = log_.proposable(term_, timing_.batch_max);
  if (batch.empty()) return;
  auto block = package_block(ctx, std::move(batch));
  auto num = block.block_num;
  Proposal p;
  p.digest = hash_block(block);
  p.deadline = ctx.now + config_.judgment_timeout;
  p.group.assign(evaluators_.begin(), evaluators_.end());
  record(ctx, "propose", "block=" + std::to_string(num) +
                             " size=" + std::to_string(block.entries.size()));
  act(ctx, BehaviorRole::kAccountant, term_.value, num, ActionSymbol::kReceive);
  act(ctx, BehaviorRole::kAccountant, term_.value, num, ActionSymbol::kGenerateNewBlock);
  for (const auto& e : p.group) send(ctx, e.value, Judgment{term_, id_, block});
  act(ctx, BehaviorRole::kAccountant, term_.value, num, ActionSymbol::kBroadcast);
  p.block = std::move(block);
  proposal_ = std::move(p);
  batch_due_ = ctx.now + timing_.batch_interval;
}

void RacNode::on_judgment(Ctx& ctx, std::uint32_t from, const Judgment& msg) {
  if (msg.accountant_id.value != from || msg.term < term_) return;
  act(ctx, BehaviorRole::kEvaluator, msg.term.value, msg.block.block_num, ActionSymbol::kReceive);
  act(ctx, BehaviorRole::kEvaluator, msg.term.value, msg.block.block_num, ActionSymbol::kVerify);
  if (auto verdict = judge(msg, false)) {
    reply_judgment(ctx, from, msg, *verdict);
  } else {
    pending_judgments_.push_back(PendingJudgment{from, msg, ctx.now + config_.evaluator_grace});
  }
}

std::optional<bool> RacNode::judge(const Judgment& msg, bool final) const {
  const auto& b = msg.block;
  if (b.block_num == 0 || b.empty_flag || b.entries.empty()) return false;
  if (merkle_root(b.entries) != b.merkle_root) return false;
  if (b.block_num - 1 <= log_.commit_index() &&
      log_.chain().digest_at(b.block_num - 1) != b.prehash) {
    return false;
  }
  bool unknown = false;
  for (const auto& tx : b.entries) {
    const auto* copy = log_.copy_of(key_of(tx));
    if (!copy) {
      unknown = true;
    } else if (!(*copy == tx)) {
      return false;
    }
  }
  if (unknown) return final ? std::optional<bool>(false) : std::nullopt;
  return true;
}

void RacNode::reply_judgment(Ctx& ctx, std::uint32_t to, const Judgment& msg, bool verdict) {
  bool sent = active(faults_.collude) ? !verdict : verdict;
  auto num = msg.block.block_num;
  sent_verdicts_[{msg.term.value, num}] = sent;
  record(ctx, "judgment", "block=" + std::to_string(num) + " verdict=" +
                              (sent ? "success" : "fail") + (sent != verdict ? " inverted=1" : ""));
  send(ctx, to, JudgmentReply{term_, id_, num, hash_block(msg.block), sent});
}

void RacNode::retry_pending(Ctx& ctx, bool expired_only) {
  std::vector<PendingJudgment> keep;
  auto pending = std::move(pending_judgments_);
  pending_judgments_.clear();
  for (auto& p : pending) {
    bool final = ctx.now >= p.give_up;
    if (expired_only && !final) {
      keep.push_back(std::move(p));
      continue;
    }
    if (auto verdict = judge(p.msg, final)) {
      reply_judgment(ctx, p.from, p.msg, *verdict);
    } else {
      keep.push_back(std::move(p));
    }
  }
  pending_judgments_ = std::move(keep);
}

void RacNode::on_judgment_reply(Ctx& ctx, std::uint32_t from, const JudgmentReply& msg) {
  if (role_ != Role::kAccountant || !proposal_ || msg.term != term_) return;
  auto& p = *proposal_;
  if (msg.evaluator.value != from || msg.block_num != p.block.block_num ||
      msg.block_digest != p.digest) {
    return;
  }
  if (std::find(p.group.begin(), p.group.end(), node(from)) == p.group.end()) return;
  p.verdicts[from] = msg.success;
  if (p.verdicts.size() == p.group.size()) decide(ctx);
}

void RacNode::decide(Ctx& ctx) {
  auto p = std::move(*proposal_);
  proposal_.reset();
  std::vector<CertificateEntry> cert;
  std::size_t fails = 0;
  for (const auto& e : p.group) {
    auto it = p.verdicts.find(e.value);
    auto v = it == p.verdicts.end() ? EvaluatorVerdict::kMissing
             : it->second           ? EvaluatorVerdict::kSuccess
                                    : EvaluatorVerdict::kFail;
    if (v != EvaluatorVerdict::kSuccess) ++fails;
    cert.push_back(CertificateEntry{e, v});
  }
  bool empty = fails >= strict_majority(p.group.size());
  auto num = p.block.block_num;
  auto block = empty ? emptied(p.block) : std::move(p.block);
  record(ctx, "decide", "block=" + std::to_string(num) + " fails=" + std::to_string(fails) +
                            " group=" + std::to_string(p.group.size()) +
                            " empty=" + (empty ? "1" : "0"));
  act(ctx, BehaviorRole::kAccountant, term_.value, num,
      empty ? ActionSymbol::kEmptyBlock : ActionSymbol::kValidBlock);
  log_.append_local(std::move(block), term_, cert);
  replicate(ctx, num);
  update_commit(ctx);
  punish_minority(ctx, cert, empty);
  if (empty) {
    punish(ctx, id_, "empty_block");
    step_down(ctx, term_.next());
    vacant_term_ = true;
    rearm_election(ctx.now);
  }
}

bool RacNode::admit_append(Ctx& ctx, const AppendEntries& msg) {
  const auto& cert = msg.verdict_certificate;
  std::size_t fails = 0;
  for (const auto& c : cert) {
    if (c.verdict != EvaluatorVerdict::kSuccess) ++fails;
  }
  bool expect_empty = !cert.empty() && fails >= strict_majority(cert.size());
  if (!cert.empty() && expect_empty == msg.block.empty_flag) return true;
  record(ctx, "certificate_mismatch", "block=" + std::to_string(msg.block.block_num) +
                                          " accountant=" + std::to_string(msg.accountant_id.value));
  if (msg.block_term == term_) {
    punish(ctx, msg.accountant_id, "certificate_mismatch");
    step_down(ctx, term_.next());
    vacant_term_ = true;
    rearm_election(ctx.now);
  }
  return false;
}

void RacNode::on_appended(Ctx& ctx, const AppendEntries& msg, std::uint64_t num) {
  const auto& block = log_.chain().at(num);
  auto bterm = log_.block_term(num);
  if (role_ == Role::kFollower && bterm == term_ && !follower_episodes_.contains(term_.value)) {
    follower_episodes_[term_.value] = false;
    act(ctx, BehaviorRole::kFollower, term_.value, 0, ActionSymbol::kReceive);
    act(ctx, BehaviorRole::kFollower, term_.value, 0, ActionSymbol::kAdditionNewBlock);
  }
  if (auto it = sent_verdicts_.find({bterm.value, num}); it != sent_verdicts_.end()) {
    bool agreed = it->second != block.empty_flag;
    act(ctx, BehaviorRole::kEvaluator, bterm.value, num,
        agreed ? ActionSymbol::kSuccess : ActionSymbol::kFail);
    sent_verdicts_.erase(it);
  }
  if (bterm != term_) return;
  punish_minority(ctx, log_.certificate(num), block.empty_flag);
  if (block.empty_flag) {
    record(ctx, "empty_block_observed", "block=" + std::to_string(num) +
                                            " accountant=" + std::to_string(msg.accountant_id.value));
    punish(ctx, msg.accountant_id, "empty_block");
    step_down(ctx, term_.next());
    vacant_term_ = true;
    rearm_election(ctx.now);
  }
}

void RacNode::punish(Ctx& ctx, NodeId node, const std::string& reason) {
  if (!punished_.emplace(node, term_).second) return;
  record(ctx, "punish", "node=" + std::to_string(node.value) + " reason=" + reason);
  rebuild_rnl(ctx);
}

void RacNode::punish_minority(Ctx& ctx, const std::vector<CertificateEntry>& cert, bool empty) {
  auto minority = empty ? EvaluatorVerdict::kSuccess : EvaluatorVerdict::kFail;
  for (const auto& c : cert) {
    if (c.verdict != minority) continue;
    if (++offenses_[c.evaluator] >= config_.evaluator_offense_limit) {
      punish(ctx, c.evaluator, "evaluator_minority");
    }
  }
}

}  // namespace rac
