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

#ifndef RAC_NODE_HPP_
#define RAC_NODE_HPP_

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rac/behavior.hpp"
#include "rac/core.hpp"
#include "rac/messages.hpp"

namespace rac {

enum class Role : std::uint8_t { kFollower, kCandidate, kAccountant, kEvaluator };

std::string_view role_name(Role role);

inline constexpr SimTime kNever = std::numeric_limits<SimTime>::max();

// Strict majority of a population of n.
constexpr std::size_t strict_majority(std::size_t n) { return n / 2 + 1; }

struct Deliver {
  // Authenticated sender: a node value, or a client id when from_client.
  std::uint32_t from = 0;
  bool from_client = false;
  Message msg;
};

struct Tick {};

using Event = std::variant<Deliver, Tick>;

struct Envelope {
  std::uint32_t from = 0;
  // Node value; ignored for ClientReply, which routes by client_id.
  std::uint32_t to = 0;
  Message msg;
};

// Behavior episodes are keyed by (term, index); index is a block number for
// accountant and evaluator episodes and 0 for follower episodes.
struct ActionEvent {
  NodeId node;
  behavior::BehaviorRole role = behavior::BehaviorRole::kFollower;
  std::uint64_t term = 0;
  std::uint64_t index = 0;
  behavior::ActionSymbol symbol = behavior::ActionSymbol::kReceive;
};

struct NodeRecord {
  Term term;
  std::string role;
  std::string event;
  std::string detail;
};

struct StepOutput {
  std::vector<Envelope> messages;
  std::vector<ActionEvent> actions;
  std::vector<NodeRecord> records;
};

struct TimingConfig {
  SimTime election_min = from_ms(150);
  SimTime election_max = from_ms(300);
  SimTime heartbeat_interval = from_ms(50);
  SimTime batch_interval = from_ms(10);
  std::size_t batch_max = 256;
  // Blocks resent per heartbeat reply to a lagging follower.
  std::size_t catchup_window = 32;
  SimTime resend_guard = from_ms(30);
  // When set, the node's first election deadline instead of a random draw.
  SimTime first_election = -1;
};

// Byzantine behavior switched on for a node.
struct NodeFaults {
  bool tamper = false;
  bool collude = false;
  bool sybil = false;
  // Broken voter that ignores the one-vote-per-term rule. Exists to exercise
  // the run-time safety checks.
  bool double_vote = false;
  Term from_term;

  bool any() const { return tamper || collude || sybil; }
};

class ConsensusNode {
 public:
  virtual ~ConsensusNode() = default;

  virtual StepOutput step(SimTime now, const Event& event) = 0;
  // Earliest instant at which a Tick has work to do.
  virtual SimTime next_wakeup() const = 0;
  // Called when the node comes back after being down.
  virtual void recover(SimTime now) = 0;

  virtual NodeId id() const = 0;
  virtual Role role() const = 0;
  virtual Term term() const = 0;
  virtual const Chain& chain() const = 0;
  virtual std::uint64_t commit_index() const = 0;
  // Role label used in logs.
  virtual std::string_view role_label() const { return role_name(role()); }
};

}  // namespace rac

#endif  // RAC_NODE_HPP_
