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

#include "rac/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>
#include <set>
#include <tuple>

namespace rac::metrics {

namespace {

// "3.17" -> {3, 17}
std::optional<RequestKey> parse_key(std::string_view s) {
  auto dot = s.find('.');
  if (dot == std::string_view::npos) return std::nullopt;
  RequestKey key;
  auto a = std::from_chars(s.data(), s.data() + dot, key.client);
  auto b = std::from_chars(s.data() + dot + 1, s.data() + s.size(), key.id);
  if (a.ec != std::errc() || b.ec != std::errc()) return std::nullopt;
  return key;
}

void for_each_key(std::string_view list, auto&& fn) {
  std::size_t pos = 0;
  while (pos < list.size()) {
    auto end = list.find(',', pos);
    if (end == std::string_view::npos) end = list.size();
    if (auto key = parse_key(list.substr(pos, end - pos))) fn(*key);
    pos = end + 1;
  }
}

bool is_node(const std::string& actor) { return !actor.empty() && actor[0] == 'n'; }

struct RequestIndex {
  std::map<RequestKey, SimTime> submit;
  std::map<RequestKey, SimTime> commit;
};

RequestIndex index_requests(const EventLog& log) {
  RequestIndex idx;
  for (const auto& r : log) {
    if (r.event == "submit") {
      if (auto v = detail_field(r.detail, "request")) {
        if (auto key = parse_key(*v)) idx.submit.emplace(*key, r.time);
      }
    } else if (r.event == "commit" && is_node(r.actor)) {
      if (auto v = detail_field(r.detail, "requests")) {
        for_each_key(*v, [&](const RequestKey& key) { idx.commit.emplace(key, r.time); });
      }
    }
  }
  return idx;
}

struct CommitRecord {
  std::size_t position = 0;
  std::string actor;
  std::uint64_t term = 0;
  std::uint64_t block = 0;
  bool empty = false;
};

struct RoundIndex {
  std::vector<CommitRecord> commits;
  std::map<std::tuple<std::string, std::uint64_t, std::uint64_t>, std::size_t> block_sends;
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::size_t> judgment_replies;
  std::map<std::tuple<std::string, std::uint64_t, std::uint64_t>, std::size_t> acks;
  // Successful replies per (accountant, term): log position, follower, block.
  std::map<std::pair<std::string, std::uint64_t>, std::vector<std::tuple<std::size_t, std::string, std::uint64_t>>>
      replies;
};

RoundIndex index_rounds(const EventLog& log) {
  RoundIndex idx;
  for (std::size_t i = 0; i < log.size(); ++i) {
    const auto& r = log[i];
    if (r.event == "commit" && is_node(r.actor)) {
      if (auto b = detail_uint(r.detail, "block")) {
        idx.commits.push_back(CommitRecord{i, r.actor, r.term, *b, detail_uint(r.detail, "empty") == 1u});
      }
    } else if (r.event == "send") {
      auto phase = detail_field(r.detail, "phase");
      auto block = detail_uint(r.detail, "block");
      if (!phase || !block) continue;
      if (*phase == "block_addition") {
        ++idx.block_sends[{r.actor, r.term, *block}];
      } else if (*phase == "judgment_reply") {
        ++idx.judgment_replies[{r.term, *block}];
      }
    } else if (r.event == "recv" && detail_uint(r.detail, "ok") == 1u) {
      auto msg = detail_field(r.detail, "msg");
      if (msg != "AppendEntriesReply" && msg != "HeartbeatReply") continue;
      auto block = detail_uint(r.detail, "block");
      auto from = detail_field(r.detail, "from");
      if (block && from) {
        if (msg == "AppendEntriesReply") ++idx.acks[{r.actor, r.term, *block}];
        idx.replies[{r.actor, r.term}].emplace_back(i, std::string(*from), *block);
      }
    }
  }
  return idx;
}

RoundCounts count_round(const RoundIndex& idx, const CommitRecord& c) {
  RoundCounts rc;
  rc.block = c.block;
  std::tuple<std::string, std::uint64_t, std::uint64_t> key{c.actor, c.term, c.block};
  if (auto it = idx.block_sends.find(key); it != idx.block_sends.end()) rc.block_addition = it->second;
  if (auto it = idx.judgment_replies.find({c.term, c.block}); it != idx.judgment_replies.end()) {
    rc.judgment_replies = it->second;
  }
  if (auto it = idx.acks.find(key); it != idx.acks.end()) rc.total_acks = it->second;
  // An acknowledgement of a later block also covers this one.
  if (auto it = idx.replies.find({c.actor, c.term}); it != idx.replies.end()) {
    std::set<std::string> followers;
    for (const auto& [pos, from, block] : it->second)
      if (pos < c.position && block >= c.block) followers.insert(from);
    rc.quorum_acks = followers.size();
  }
  return rc;
}

}  // namespace

std::size_t PhaseCounts::total() const {
  std::size_t t = 0;
  for (auto c : counts) t += c;
  return t;
}

double MetricsReport::latency_p50() const {
  if (latencies_ms.empty()) return 0.0;
  std::vector<double> v;
  v.reserve(latencies_ms.size());
  for (const auto& [k, l] : latencies_ms) v.push_back(l);
  std::sort(v.begin(), v.end());
  auto n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

double MetricsReport::mean_election_cost() const {
  if (elections.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& e : elections) sum += e.cost_ms;
  return sum / static_cast<double>(elections.size());
}

double latency(const EventLog& log, const RequestKey& key) {
  auto idx = index_requests(log);
  auto c = idx.commit.find(key);
  auto s = idx.submit.find(key);
  if (c == idx.commit.end() || s == idx.submit.end()) {
    throw Error(ErrorCode::kNotCommitted,
                "request " + std::to_string(key.client) + "." + std::to_string(key.id));
  }
  return to_ms(c->second - s->second);
}

double throughput(const EventLog& log, std::size_t t) {
  auto idx = index_requests(log);
  if (t == 0 || idx.commit.size() < t || idx.submit.empty()) {
    throw Error(ErrorCode::kInsufficientCommits,
                std::to_string(idx.commit.size()) + " commits, need " + std::to_string(t));
  }
  std::vector<SimTime> times;
  for (const auto& [k, time] : idx.commit) times.push_back(time);
  std::sort(times.begin(), times.end());
  SimTime first = idx.submit.begin()->second;
  for (const auto& [k, time] : idx.submit) first = std::min(first, time);
  double seconds = static_cast<double>(times[t - 1] - first) / 1e6;
  return static_cast<double>(t) / seconds;
}

std::vector<ElectionEvent> elections(const EventLog& log) {
  std::vector<ElectionEvent> out;
  constexpr SimTime kNone = -1;
  SimTime start = kNone;
  std::size_t candidacies = 0;
  for (const auto& r : log) {
    if (!is_node(r.actor)) continue;
    if (r.event == "candidacy") {
      if (start == kNone) start = r.time;
      ++candidacies;
    } else if (r.event == "established") {
      ElectionEvent e;
      e.term = r.term;
      e.accountant = r.actor;
      e.start = start == kNone ? r.time : start;
      e.established = r.time;
      e.cost_ms = to_ms(e.established - e.start);
      e.candidacies = candidacies;
      out.push_back(e);
      start = kNone;
      candidacies = 0;
    }
  }
  return out;
}

double election_cost(const EventLog& log, std::uint64_t term) {
  for (const auto& e : elections(log)) {
    if (e.term == term) return e.cost_ms;
  }
  throw Error(ErrorCode::kNoElection, "no accountant established in term " + std::to_string(term));
}

PhaseCounts phase_counts(const EventLog& log) {
  PhaseCounts pc;
  for (const auto& r : log) {
    if (r.event != "send") continue;
    auto phase = detail_field(r.detail, "phase");
    if (!phase) continue;
    for (std::size_t p = 0; p < kPhaseCount; ++p) {
      if (phase_name(static_cast<Phase>(p)) == *phase) ++pc.counts[p];
    }
  }
  return pc;
}

RoundCounts message_complexity(const EventLog& log, std::uint64_t block) {
  auto idx = index_rounds(log);
  for (const auto& c : idx.commits) {
    if (c.block == block) return count_round(idx, c);
  }
  throw Error(ErrorCode::kNotCommitted, "block " + std::to_string(block) + " never committed");
}

MetricsReport build_report(const EventLog& log, std::size_t t) {
  MetricsReport rep;
  auto req = index_requests(log);
  rep.submitted = req.submit.size();
  rep.committed = req.commit.size();
  for (const auto& [key, time] : req.commit) {
    if (auto s = req.submit.find(key); s != req.submit.end()) {
      rep.latencies_ms[key] = to_ms(time - s->second);
    }
  }
  if (t > 0 && rep.committed >= t) rep.throughput_tps = throughput(log, t);
  rep.elections = elections(log);
  rep.messages = phase_counts(log);
  for (const auto& r : log) {
    if (r.event == "send") {
      auto fate = detail_field(r.detail, "fate");
      if (fate == "drop") {
        ++rep.drops;
      } else if (fate == "queued") {
        ++rep.deliveries;
      }
    } else if (r.event == "committed_tampered") {
      ++rep.committed_tampered;
    }
  }
  auto rounds = index_rounds(log);
  std::set<std::uint64_t> seen;
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& c : rounds.commits) {
    if (!seen.insert(c.block).second) continue;
    if (c.empty) {
      ++rep.empty_blocks;
      continue;
    }
    sum += static_cast<double>(count_round(rounds, c).round_total());
    ++n;
  }
  rep.msgs_per_round = n ? sum / static_cast<double>(n) : 0.0;
  return rep;
}

void write_report_csv(std::ostream& os, const MetricsReport& rep) {
  os << "metric,value\n";
  os << "submitted," << rep.submitted << '\n';
  os << "committed," << rep.committed << '\n';
  os << "latency_p50_ms," << rep.latency_p50() << '\n';
  os << "throughput_tps,";
  if (rep.throughput_tps) os << *rep.throughput_tps;
  os << '\n';
  os << "elections," << rep.elections.size() << '\n';
  os << "mean_election_cost_ms," << rep.mean_election_cost() << '\n';
  os << "msgs_per_round," << rep.msgs_per_round << '\n';
  os << "empty_blocks," << rep.empty_blocks << '\n';
  os << "committed_tampered," << rep.committed_tampered << '\n';
  os << "deliveries," << rep.deliveries << '\n';
  os << "drops," << rep.drops << '\n';
  for (std::size_t p = 0; p < kPhaseCount; ++p) {
    os << "messages_" << phase_name(static_cast<Phase>(p)) << ',' << rep.messages.counts[p] << '\n';
  }
}

void write_latency_csv(std::ostream& os, const MetricsReport& rep) {
  os << "client,request,latency_ms\n";
  for (const auto& [key, l] : rep.latencies_ms) os << key.client << ',' << key.id << ',' << l << '\n';
}

void write_election_csv(std::ostream& os, const MetricsReport& rep) {
  os << "term,accountant,start_ms,established_ms,cost_ms,candidacies\n";
  for (const auto& e : rep.elections) {
    os << e.term << ',' << e.accountant << ',' << to_ms(e.start) << ',' << to_ms(e.established)
       << ',' << e.cost_ms << ',' << e.candidacies << '\n';
  }
}

}  // namespace rac::metrics
