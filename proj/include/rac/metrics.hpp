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

#ifndef RAC_METRICS_HPP_
#define RAC_METRICS_HPP_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rac/eventlog.hpp"
#include "rac/messages.hpp"
#include "rac/replication.hpp"

// Measurements recomputed from event logs.
namespace rac::metrics {

struct ElectionEvent {
  std::uint64_t term = 0;
  std::string accountant;
  // First candidacy since the previous accountant was established.
  SimTime start = 0;
  SimTime established = 0;
  double cost_ms = 0.0;
  std::size_t candidacies = 0;
};

struct PhaseCounts {
  std::array<std::size_t, kPhaseCount> counts{};

  std::size_t operator[](Phase p) const { return counts[static_cast<std::size_t>(p)]; }
  std::size_t total() const;
};

// Messages attributed to one block's consensus round.
struct RoundCounts {
  std::uint64_t block = 0;
  // Judgment and AppendEntries sends carrying the block.
  std::size_t block_addition = 0;
  std::size_t judgment_replies = 0;
  // Followers whose successful acknowledgement of this block or a later one,
  // by append or heartbeat reply, reached the accountant before it committed.
  std::size_t quorum_acks = 0;
  std::size_t total_acks = 0;

  std::size_t round_total() const { return block_addition + quorum_acks; }
};

struct MetricsReport {
  std::size_t submitted = 0;
  std::size_t committed = 0;
  std::map<RequestKey, double> latencies_ms;
  // Unset when fewer than T requests committed.
  std::optional<double> throughput_tps;
  std::vector<ElectionEvent> elections;
  PhaseCounts messages;
  std::size_t deliveries = 0;
  std::size_t drops = 0;
  // Mean round_total over committed non-empty blocks.
  double msgs_per_round = 0.0;
  std::size_t empty_blocks = 0;
  // Committed entries whose payload differs from the client's submission.
  std::size_t committed_tampered = 0;

  double latency_p50() const;
  double mean_election_cost() const;
};

// Commit instant of the containing block minus submit time.
double latency(const EventLog& log, const RequestKey& key);
// T over the span from the first submission to the T-th commit.
double throughput(const EventLog& log, std::size_t t);
double election_cost(const EventLog& log, std::uint64_t term);
std::vector<ElectionEvent> elections(const EventLog& log);
PhaseCounts phase_counts(const EventLog& log);
RoundCounts message_complexity(const EventLog& log, std::uint64_t block);

MetricsReport build_report(const EventLog& log, std::size_t t);

// Long-format CSV: metric,key,value.
void write_report_csv(std::ostream& os, const MetricsReport& report);
void write_latency_csv(std::ostream& os, const MetricsReport& report);
void write_election_csv(std::ostream& os, const MetricsReport& report);

}  // namespace rac::metrics

#endif  // RAC_METRICS_HPP_
