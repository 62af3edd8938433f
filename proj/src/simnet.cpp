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

#include "rac/simnet.hpp"

#include <algorithm>
#include <cmath>
#include <boost/math/distributions/chi_squared.hpp>
#include <memory>
#include <ostream>
#include <sstream>

#include "rac/random.hpp"
#include "rac/raft.hpp"

namespace rac::simnet {

namespace {

std::string node_actor(std::uint32_t v) { return "n" + std::to_string(v); }
std::string client_actor(std::uint32_t v) { return "c" + std::to_string(v); }

std::string key_text(const RequestKey& k) {
  return std::to_string(k.client) + "." + std::to_string(k.id);
}

// Block number a message is about, if any.
std::optional<std::uint64_t> block_tag(const Message& msg) {
  if (const auto* m = std::get_if<Judgment>(&msg)) return m->block.block_num;
  if (const auto* m = std::get_if<AppendEntries>(&msg)) return m->block.block_num;
  if (const auto* m = std::get_if<JudgmentReply>(&msg)) return m->block_num;
  if (const auto* m = std::get_if<AppendEntriesReply>(&msg)) return m->match;
  if (const auto* m = std::get_if<HeartbeatReply>(&msg)) return m->last_num;
  return std::nullopt;
}

struct QueueItem {
  enum class Kind { kDeliver, kTimer, kArrival, kRetry, kCrash, kRecover };

  SimTime time = 0;
  std::uint64_t seq = 0;
  Kind kind = Kind::kTimer;
  std::uint32_t target = 0;
  std::uint32_t from = 0;
  bool from_client = false;
  bool to_client = false;
  std::optional<Message> msg;
};

struct Later {
  bool operator()(const QueueItem& a, const QueueItem& b) const {
    return a.time != b.time ? a.time > b.time : a.seq > b.seq;
  }
};

struct Client {
  std::uint32_t id = 0;
  std::uint64_t next_id = 0;
  std::map<std::uint64_t, TransactionRequest> outstanding;
  std::map<std::uint64_t, SimTime> last_sent;
  bool retry_scheduled = false;
};

class Simulator {
 public:
  explicit Simulator(const Scenario& s);
  RunResult run();

 private:
  void push(QueueItem item);
  void send(SimTime now, std::uint32_t from, bool from_client, std::uint32_t to, bool to_client,
            Message msg);
  void deliver(const QueueItem& item);
  void step_node(SimTime now, std::uint32_t node, const Event& event);
  void schedule_timer(std::uint32_t node);
  void log(SimTime t, std::string actor, std::uint64_t term, std::string role, std::string event,
           std::string detail = {});
  void on_node_record(SimTime now, std::uint32_t node, const NodeRecord& r);
  void arrival(SimTime now);
  void retry(SimTime now, std::uint32_t client);
  void crash(SimTime now, std::uint32_t node);
  void recover(SimTime now, std::uint32_t node);
  bool link_cut(SimTime now, std::uint32_t a, std::uint32_t b) const;
  SimTime sample_latency();
  std::string eligible_list(std::uint32_t winner) const;
  void finish(RunResult& result);

  const Scenario& s_;
  std::vector<NodeId> ids_;
  std::set<std::uint32_t> byzantine_;
  std::vector<std::unique_ptr<ConsensusNode>> nodes_;
  std::vector<bool> down_;
  std::vector<SimTime> pending_timer_;
  std::vector<Client> clients_;
  std::vector<QueueItem> heap_;
  std::uint64_t seq_ = 0;
  Rng net_rng_;
  Rng client_rng_;
  EventLog log_;
  std::map<std::tuple<std::uint32_t, std::uint64_t, std::uint64_t, std::uint8_t>,
           std::vector<behavior::ActionSymbol>>
      actions_;
  std::map<RequestKey, TransactionRequest> submitted_;
  std::set<NodeId> penalized_;
  std::set<RequestKey> tampered_;
  behavior::StakeLedger stake_;
  std::size_t created_ = 0;
  std::size_t answered_ = 0;
  std::size_t established_ = 0;
  std::optional<std::uint32_t> dos_victim_;
  SimTime end_ = 0;
  bool stop_ = false;
};

Simulator::Simulator(const Scenario& s)
    : s_(s),
      ids_(s.node_ids()),
      byzantine_(s.faults.byzantine()),
      net_rng_(derive_seed(s.seed, 0x6e6574ULL)),
      client_rng_(derive_seed(s.seed, 0x636c69ULL)) {
  auto n = ids_.size();
  down_.assign(n, false);
  pending_timer_.assign(n, kNever);
  end_ = from_ms(s.duration_ms);

  auto trace_seed = derive_seed(s.seed, 0x74726163ULL);
  auto cache = std::make_shared<std::map<std::pair<std::uint32_t, std::uint64_t>, risk::SyscallTrace>>();
  auto byz = byzantine_;
  auto from_term = s.faults.byzantine_from_term;
  auto tcfg = s.traces;
  TraceSource traces = [cache, byz, from_term, tcfg, trace_seed](NodeId node, Term term) {
    auto key = std::make_pair(node.value, term.value);
    if (auto it = cache->find(key); it != cache->end()) return it->second;
    if (cache->size() > 512) cache->clear();
    bool compromised = byz.contains(node.value) && term.value >= from_term;
    auto trace = synthesize_trace(node, term, compromised, tcfg, trace_seed);
    cache->emplace(key, trace);
    return trace;
  };

  RacConfig rc;
  rc.timing = s.timing;
  rc.evaluators_per_org = s.evaluators_per_org;
  rc.judgment_timeout = s.judgment_timeout;
  rc.evaluator_grace = s.evaluator_grace;
  rc.risk_window = s.risk_window;
  rc.risk_wait = s.risk_wait;
  rc.evaluator_offense_limit = s.evaluator_offense_limit;
  rc.risk = s.risk;
  rc.risk.seed = derive_seed(s.seed, 0x7269736bULL, s.risk.seed);
  std::uint32_t v = 0;
  for (const auto& org : s.orgs) {
    for (std::size_t i = 0; i < org.nodes; ++i, ++v) {
      if (i < org.assets.size()) rc.assets[v] = org.assets[i];
    }
  }

  for (const auto& id : ids_) {
    NodeFaults f;
    f.tamper = s.faults.tamper_accountant.contains(id.value);
    f.collude = s.faults.collude_evaluator.contains(id.value);
    f.sybil = s.faults.sybil.contains(id.value);
    f.double_vote = s.faults.double_vote.contains(id.value);
    f.from_term = Term{s.faults.byzantine_from_term};
    auto seed = derive_seed(s.seed, 0x6e6f6465ULL, id.value);
    auto timing = s.timing;
    if (s.bootstrap_candidate == id.value) timing.first_election = timing.election_min / 3;
    if (s.algorithm == Algorithm::kRac) {
      auto cfg = rc;
      cfg.timing = timing;
      nodes_.push_back(std::make_unique<RacNode>(id, ids_, std::move(cfg), traces, seed, f));
    } else {
      nodes_.push_back(std::make_unique<RaftNode>(id, ids_, timing, seed, f));
    }
  }

  stake_.penalty_fraction = s.penalty_fraction;
  for (const auto& org : s.orgs) stake_.balances[org.name] = behavior::Stake::from_double(s.initial_stake);

  clients_.resize(s.workload.clients);
  for (std::uint32_t c = 0; c < clients_.size(); ++c) clients_[c].id = c;
}

void Simulator::push(QueueItem item) {
  item.seq = seq_++;
  heap_.push_back(std::move(item));
  std::push_heap(heap_.begin(), heap_.end(), Later{});
}

void Simulator::log(SimTime t, std::string actor, std::uint64_t term, std::string role,
                    std::string event, std::string detail) {
  log_.push_back(LogRecord{t, std::move(actor), term, std::move(role), std::move(event),
                           std::move(detail)});
}

bool Simulator::link_cut(SimTime now, std::uint32_t a, std::uint32_t b) const {
  for (const auto& p : s_.partitions) {
    if (now < from_ms(p.start_ms) || now >= from_ms(p.end_ms)) continue;
    if (p.group.contains(a) != p.group.contains(b)) return true;
  }
  return false;
}

SimTime Simulator::sample_latency() {
  const auto& m = s_.latency;
  double ms = m.mean_ms;
  switch (m.distribution) {
    case LatencyDistribution::kConstant:
      break;
    case LatencyDistribution::kUniform:
      ms = m.mean_ms - m.jitter_ms + 2.0 * m.jitter_ms * net_rng_.unit();
      break;
    case LatencyDistribution::kNormal:
      for (int i = 0; i < 64; ++i) {
        ms = net_rng_.normal(m.mean_ms, m.jitter_ms);
        if (ms >= m.floor_ms) break;
      }
      break;
  }
  return from_ms(std::max(ms, m.floor_ms));
}

void Simulator::send(SimTime now, std::uint32_t from, bool from_client, std::uint32_t to,
                     bool to_client, Message msg) {
  bool cut = !from_client && !to_client && link_cut(now, from, to);
  bool dropped = cut || (s_.drop_probability > 0.0 && net_rng_.bernoulli(s_.drop_probability));
  if (s_.log_messages) {
    std::string detail = "msg=" + std::string(message_name(msg)) +
                         " phase=" + std::string(phase_name(phase_of(msg))) +
                         " to=" + (to_client ? client_actor(to) : node_actor(to)) +
                         " fate=" + (dropped ? "drop" : "queued");
    if (auto b = block_tag(msg)) detail += " block=" + std::to_string(*b);
    if (from_client) {
      log(now, client_actor(from), 0, "client", "send", std::move(detail));
    } else {
      const auto& n = *nodes_[from];
      log(now, node_actor(from), n.term().value, std::string(n.role_label()), "send", std::move(detail));
    }
  }
  if (dropped) return;
  QueueItem item;
  item.time = now + sample_latency();
  item.kind = QueueItem::Kind::kDeliver;
  item.target = to;
  item.from = from;
  item.from_client = from_client;
  item.to_client = to_client;
  item.msg = std::move(msg);
  push(std::move(item));
}

void Simulator::schedule_timer(std::uint32_t node) {
  if (down_[node]) return;
  auto w = nodes_[node]->next_wakeup();
  if (w >= pending_timer_[node] || w == kNever) return;
  pending_timer_[node] = w;
  QueueItem item;
  item.time = w;
  item.kind = QueueItem::Kind::kTimer;
  item.target = node;
  push(std::move(item));
}

void Simulator::on_node_record(SimTime now, std::uint32_t node, const NodeRecord& r) {
  log(now, node_actor(node), r.term.value, r.role, r.event, r.detail);
  if (r.event == "commit") {
    auto num = detail_uint(r.detail, "block");
    if (!num) return;
    for (const auto& tx : nodes_[node]->chain().at(*num).entries) {
      auto it = submitted_.find(key_of(tx));
      if (it != submitted_.end() && !(it->second == tx) && tampered_.insert(key_of(tx)).second) {
        log(now, "sim", r.term.value, "sim", "committed_tampered",
            "request=" + key_text(key_of(tx)) + " block=" + std::to_string(*num));
      }
    }
  } else if (r.event == "punish") {
    auto offender = detail_uint(r.detail, "node");
    if (!offender || *offender >= ids_.size()) return;
    auto id = ids_[*offender];
    if (!penalized_.insert(id).second) return;
    const auto& org = s_.orgs[id.org].name;
    std::set<std::string> honest;
    for (const auto& o : s_.orgs) {
      if (o.name != org) honest.insert(o.name);
    }
    try {
      stake_ = behavior::apply_penalty(std::move(stake_), id, org, honest, r.term);
      log(now, "sim", r.term.value, "sim", "penalty", "node=" + std::to_string(id.value) + " org=" + org);
    } catch (const Error& e) {
      log(now, "sim", r.term.value, "sim", "penalty_failed", "node=" + std::to_string(id.value));
    }
  } else if (r.event == "established") {
    ++established_;
    log(now, "sim", r.term.value, "sim", "election_outcome",
        "winner=" + std::to_string(node) + " eligible=" + eligible_list(node));
    if (dos_victim_) {
      recover(now, *dos_victim_);
      dos_victim_.reset();
    }
    const auto& dos = s_.faults.targeted_dos;
    if (dos.enabled && dos.attacker != node) {
      QueueItem c;
      c.time = now + from_ms(dos.delay_ms);
      c.kind = QueueItem::Kind::kCrash;
      c.target = node;
      push(c);
      if (dos.downtime_ms >= 0) {
        QueueItem rcv;
        rcv.time = c.time + from_ms(dos.downtime_ms);
        rcv.kind = QueueItem::Kind::kRecover;
        rcv.target = node;
        push(rcv);
      } else {
        dos_victim_ = node;
      }
      log(now, "sim", r.term.value, "sim", "dos_attack", "victim=" + std::to_string(node));
    }
    if (s_.max_terms && established_ >= *s_.max_terms) stop_ = true;
  }
}

std::string Simulator::eligible_list(std::uint32_t winner) const {
  const auto* rac = dynamic_cast<const RacNode*>(nodes_[winner].get());
  std::string out;
  for (std::uint32_t v = 0; v < ids_.size(); ++v) {
    if (v != winner && down_[v]) continue;
    if (rac && v != winner && (rac->rnl().contains(ids_[v]) || rac->evaluators().contains(ids_[v]))) {
      continue;
    }
    if (!out.empty()) out += ',';
    out += std::to_string(v);
  }
  return out;
}

void Simulator::step_node(SimTime now, std::uint32_t node, const Event& event) {
  auto out = nodes_[node]->step(now, event);
  for (const auto& r : out.records) on_node_record(now, node, r);
  for (const auto& a : out.actions) {
    actions_[{a.node.value, a.term, a.index, static_cast<std::uint8_t>(a.role)}].push_back(a.symbol);
  }
  for (auto& env : out.messages) {
    if (auto* reply = std::get_if<ClientReply>(&env.msg)) {
      auto client = reply->client_id;
      send(now, node, false, client, true, std::move(env.msg));
    } else {
      send(now, node, false, env.to, false, std::move(env.msg));
    }
  }
  schedule_timer(node);
}

void Simulator::deliver(const QueueItem& item) {
  const auto& msg = *item.msg;
  auto now = item.time;
  if (item.to_client) {
    if (item.target >= clients_.size()) return;
    auto& c = clients_[item.target];
    const auto& reply = std::get<ClientReply>(msg);
    if (s_.log_messages) {
      log(now, client_actor(c.id), 0, "client", "recv",
          "msg=ClientReply from=" + node_actor(item.from));
    }
    if (c.outstanding.erase(reply.request_id)) {
      ++answered_;
      log(now, client_actor(c.id), 0, "client", "reply",
          "request=" + key_text({c.id, reply.request_id}) + " block=" + std::to_string(reply.block_num));
      if (answered_ == s_.workload.total_requests && s_.settle_ms) {
        end_ = std::min(end_, now + from_ms(*s_.settle_ms));
      }
    }
    return;
  }
  if (item.target >= nodes_.size()) return;
  std::string from = item.from_client ? client_actor(item.from) : node_actor(item.from);
  if (down_[item.target]) {
    if (s_.log_messages) {
      log(now, node_actor(item.target), nodes_[item.target]->term().value, "down", "lost",
          "msg=" + std::string(message_name(msg)) + " from=" + from);
    }
    return;
  }
  if (s_.log_messages) {
    const auto& n = *nodes_[item.target];
    std::string detail = "msg=" + std::string(message_name(msg)) + " from=" + from;
    if (auto b = block_tag(msg)) detail += " block=" + std::to_string(*b);
    if (const auto* r = std::get_if<AppendEntriesReply>(&msg)) detail += r->success ? " ok=1" : " ok=0";
    if (const auto* r = std::get_if<HeartbeatReply>(&msg)) {
      // Whether the reported position matches the receiver's chain.
      const auto& chain = n.chain();
      bool ok = r->last_num <= chain.last_num() && chain.digest_at(r->last_num) == r->last_digest;
      detail += ok ? " ok=1" : " ok=0";
    }
    log(now, node_actor(item.target), n.term().value, std::string(n.role_label()), "recv",
        std::move(detail));
  }
  step_node(now, item.target, Deliver{item.from, item.from_client, msg});
}

void Simulator::arrival(SimTime now) {
  const auto& w = s_.workload;
  auto& c = clients_[created_ % clients_.size()];
  TransactionRequest tx;
  tx.request_id = c.next_id++;
  tx.client_id = c.id;
  tx.submit_time = now;
  tx.payload.resize(w.payload_bytes);
  for (auto& b : tx.payload) b = static_cast<std::uint8_t>(client_rng_.next());
  ++created_;
  submitted_.emplace(key_of(tx), tx);
  c.outstanding.emplace(tx.request_id, tx);
  c.last_sent[tx.request_id] = now;
  log(now, client_actor(c.id), 0, "client", "submit", "request=" + key_text(key_of(tx)));
  for (const auto& id : ids_) send(now, c.id, true, id.value, false, ClientRequest{tx});
  if (!c.retry_scheduled) {
    c.retry_scheduled = true;
    QueueItem r;
    r.time = now + from_ms(w.retry_ms);
    r.kind = QueueItem::Kind::kRetry;
    r.target = c.id;
    push(r);
  }
  if (created_ < w.total_requests) {
    QueueItem next;
    next.time = from_ms(w.start_ms) +
                static_cast<SimTime>(static_cast<double>(created_) * 1000.0 / w.rate_per_ms);
    next.kind = QueueItem::Kind::kArrival;
    push(next);
  }
}

void Simulator::retry(SimTime now, std::uint32_t client) {
  auto& c = clients_[client];
  c.retry_scheduled = false;
  auto horizon = from_ms(s_.workload.retry_ms);
  for (const auto& [id, tx] : c.outstanding) {
    if (now - c.last_sent[id] < horizon) continue;
    c.last_sent[id] = now;
    log(now, client_actor(c.id), 0, "client", "retry", "request=" + key_text(key_of(tx)));
    for (const auto& n : ids_) send(now, c.id, true, n.value, false, ClientRequest{tx});
  }
  if (!c.outstanding.empty()) {
    c.retry_scheduled = true;
    QueueItem r;
    r.time = now + horizon;
    r.kind = QueueItem::Kind::kRetry;
    r.target = client;
    push(r);
  }
}

void Simulator::crash(SimTime now, std::uint32_t node) {
  if (down_[node]) return;
  down_[node] = true;
  log(now, "sim", nodes_[node]->term().value, "sim", "crash", "node=" + std::to_string(node));
}

void Simulator::recover(SimTime now, std::uint32_t node) {
  if (!down_[node]) return;
  down_[node] = false;
  pending_timer_[node] = kNever;
  nodes_[node]->recover(now);
  log(now, "sim", nodes_[node]->term().value, "sim", "recover", "node=" + std::to_string(node));
  schedule_timer(node);
}

RunResult Simulator::run() {
  for (std::uint32_t v = 0; v < nodes_.size(); ++v) schedule_timer(v);
  for (const auto& c : s_.faults.crash) {
    QueueItem item;
    item.time = from_ms(c.at_ms);
    item.kind = QueueItem::Kind::kCrash;
    item.target = c.node;
    push(item);
    if (c.recover_ms >= 0) {
      item.time = from_ms(c.recover_ms);
      item.kind = QueueItem::Kind::kRecover;
      push(item);
    }
  }
  if (s_.workload.total_requests > 0) {
    QueueItem first;
    first.time = from_ms(s_.workload.start_ms);
    first.kind = QueueItem::Kind::kArrival;
    push(first);
  }

  SimTime now = 0;
  while (!heap_.empty() && !stop_) {
    std::pop_heap(heap_.begin(), heap_.end(), Later{});
    auto item = std::move(heap_.back());
    heap_.pop_back();
    if (item.time > end_) break;
    now = item.time;
    switch (item.kind) {
      case QueueItem::Kind::kDeliver:
        deliver(item);
        break;
      case QueueItem::Kind::kTimer:
        if (item.time == pending_timer_[item.target]) pending_timer_[item.target] = kNever;
        if (!down_[item.target] && nodes_[item.target]->next_wakeup() <= now) {
          step_node(now, item.target, Tick{});
        } else {
          schedule_timer(item.target);
        }
        break;
      case QueueItem::Kind::kArrival:
        arrival(now);
        break;
      case QueueItem::Kind::kRetry:
        retry(now, item.target);
        break;
      case QueueItem::Kind::kCrash:
        crash(now, item.target);
        break;
      case QueueItem::Kind::kRecover:
        recover(now, item.target);
        break;
    }
  }

  RunResult result;
  result.end_time = now;
  finish(result);
  return result;
}

void Simulator::finish(RunResult& result) {
  for (const auto& [key, symbols] : actions_) {
    VerdictRecord v;
    v.node = ids_[std::get<0>(key)];
    v.term = std::get<1>(key);
    v.index = std::get<2>(key);
    v.role = static_cast<behavior::BehaviorRole>(std::get<3>(key));
    v.trace = symbols;
    v.result = behavior::classify(behavior::BehaviorRecord{v.node, symbols, v.role});
    result.verdicts.push_back(std::move(v));
  }

  std::map<std::uint64_t, std::set<std::string>> leaders;
  for (const auto& r : log_) {
    if (r.event == "established" && !r.actor.empty() && r.actor[0] == 'n') leaders[r.term].insert(r.actor);
  }
  for (const auto& [term, set] : leaders) {
    if (set.size() > 1) {
      result.violations.push_back("election_safety term=" + std::to_string(term) + " accountants=" +
                                  std::to_string(set.size()));
    }
  }
  for (std::size_t a = 0; a < nodes_.size(); ++a) {
    for (std::size_t b = a + 1; b < nodes_.size(); ++b) {
      if (byzantine_.contains(static_cast<std::uint32_t>(a)) ||
          byzantine_.contains(static_cast<std::uint32_t>(b))) {
        continue;
      }
      auto upto = std::min(nodes_[a]->commit_index(), nodes_[b]->commit_index());
      if (nodes_[a]->chain().digest_at(upto) != nodes_[b]->chain().digest_at(upto)) {
        result.violations.push_back("log_safety nodes=" + std::to_string(a) + "," +
                                    std::to_string(b) + " block=" + std::to_string(upto));
      }
    }
  }

  for (std::uint32_t v = 0; v < nodes_.size(); ++v) {
    const auto& n = *nodes_[v];
    NodeSummary sum;
    sum.id = ids_[v];
    sum.role = std::string(n.role_label());
    sum.term = n.term().value;
    sum.commit_index = n.commit_index();
    sum.byzantine = byzantine_.contains(v);
    sum.down = down_[v];
    if (const auto* rac = dynamic_cast<const RacNode*>(&n)) {
      for (const auto& [id, t] : rac->rnl().entries()) sum.rnl.insert(id);
    }
    result.nodes.push_back(std::move(sum));
    result.chains.push_back(n.chain());
  }
  result.report = metrics::build_report(log_, s_.workload.total_requests);
  result.stake = std::move(stake_);
  result.submitted = std::move(submitted_);
  result.log = std::move(log_);
}

}  // namespace

std::string_view algorithm_name(Algorithm a) { return a == Algorithm::kRac ? "rac" : "raft"; }

std::set<std::uint32_t> FaultPlan::byzantine() const {
  std::set<std::uint32_t> out(tamper_accountant);
  out.insert(collude_evaluator.begin(), collude_evaluator.end());
  out.insert(sybil.begin(), sybil.end());
  return out;
}

std::size_t Scenario::node_count() const {
  std::size_t n = 0;
  for (const auto& o : orgs) n += o.nodes;
  return n;
}

std::vector<NodeId> Scenario::node_ids() const {
  std::vector<NodeId> ids;
  for (std::uint32_t org = 0; org < orgs.size(); ++org) {
    for (std::size_t i = 0; i < orgs[org].nodes; ++i) {
      ids.push_back(NodeId{static_cast<std::uint32_t>(ids.size()), org});
    }
  }
  return ids;
}

RunResult run_scenario(const Scenario& scenario) {
  validate(scenario);
  Simulator sim(scenario);
  return sim.run();
}

Scenario grid_scenario(const Scenario& base, Algorithm algorithm, std::size_t n, double byz_fraction,
                       std::uint64_t seed) {
  Scenario s = base;
  s.algorithm = algorithm;
  s.seed = seed;
  s.orgs.clear();
  std::size_t org_count = std::clamp<std::size_t>(n / 2, 1, 5);
  for (std::size_t o = 0; o < org_count; ++o) {
    OrgSpec org;
    org.name = "org" + std::to_string(o);
    org.nodes = n / org_count + (o < n % org_count ? 1 : 0);
    s.orgs.push_back(std::move(org));
  }
  auto byz = static_cast<std::size_t>(std::lround(byz_fraction * static_cast<double>(n)));
  std::vector<std::vector<std::uint32_t>> members(org_count);
  std::uint32_t v = 0;
  for (std::size_t o = 0; o < org_count; ++o) {
    for (std::size_t i = 0; i < s.orgs[o].nodes; ++i) members[o].push_back(v++);
  }
  s.faults.sybil.clear();
  s.faults.tamper_accountant.clear();
  s.faults.byzantine_from_term = 0;
  for (std::size_t k = 0; k < byz && k < n; ++k) {
    auto o = org_count - 1 - k % org_count;
    auto depth = k / org_count;
    auto& m = members[o];
    if (depth >= m.size()) continue;
    auto node = m[m.size() - 1 - depth];
    s.faults.sybil.insert(node);
    s.faults.tamper_accountant.insert(node);
  }
  return s;
}

UniformityTest accountant_uniformity(const EventLog& log) {
  UniformityTest t;
  for (const auto& r : log) {
    if (r.event != "election_outcome") continue;
    auto winner = detail_uint(r.detail, "winner");
    auto eligible = detail_field(r.detail, "eligible");
    if (!winner || !eligible) continue;
    std::vector<std::uint32_t> nodes;
    std::istringstream is{std::string(*eligible)};
    std::string tok;
    while (std::getline(is, tok, ',')) nodes.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
    if (nodes.empty()) continue;
    ++t.elections;
    ++t.observed[static_cast<std::uint32_t>(*winner)];
    for (auto n : nodes) t.expected[n] += 1.0 / static_cast<double>(nodes.size());
  }
  for (const auto& [node, e] : t.expected) {
    if (e <= 0.0) continue;
    double o = static_cast<double>(t.observed.count(node) ? t.observed.at(node) : 0);
    t.chi_square += (o - e) * (o - e) / e;
    ++t.dof;
  }
  if (t.dof > 1) {
    --t.dof;
    boost::math::chi_squared dist(static_cast<double>(t.dof));
    t.p_value = boost::math::cdf(boost::math::complement(dist, t.chi_square));
  }
  return t;
}

void write_verdicts_csv(std::ostream& os, const std::vector<VerdictRecord>& verdicts) {
  os << "node,role,term,index,trace,verdict,final_state,protocol_violation\n";
  for (const auto& v : verdicts) {
    os << v.node.value << ',' << behavior::role_name(v.role) << ',' << v.term << ',' << v.index << ',';
    for (std::size_t i = 0; i < v.trace.size(); ++i) {
      if (i) os << ' ';
      os << behavior::action_name(v.trace[i]);
    }
    os << ',' << behavior::verdict_name(v.result.verdict) << ',' << v.result.final_state << ','
       << (v.result.protocol_violation ? 1 : 0) << '\n';
  }
}

}  // namespace rac::simnet
