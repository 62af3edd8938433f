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

#ifndef RAC_BEHAVIOR_HPP_
#define RAC_BEHAVIOR_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "rac/core.hpp"

// Role automata that classify traces of protocol actions, and the stake
// ledger that moves penalties from offending organizations to honest ones.
namespace rac::behavior {

enum class ActionSymbol : std::uint8_t {
  kReceive,
  kGenerateNewBlock,
  kBroadcast,
  kValidBlock,
  kEmptyBlock,
  kVerify,
  kSuccess,
  kFail,
  kAdditionNewBlock,
  kSendSystemcall,
  kAbnormal,
  kNormal,
};

inline constexpr std::size_t kActionCount = 12;

std::string_view action_name(ActionSymbol a);
// Throws kUnknownSymbol.
ActionSymbol parse_action(std::string_view name);

enum class BehaviorRole : std::uint8_t { kAccountant, kEvaluator, kFollower };

std::string_view role_name(BehaviorRole r);

struct BehaviorRecord {
  NodeId node;
  std::vector<ActionSymbol> trace;
  BehaviorRole role_at_time = BehaviorRole::kFollower;
};

struct RoleDfa {
  using State = std::uint8_t;

  std::set<State> states;
  std::set<ActionSymbol> alphabet;
  std::map<std::pair<State, ActionSymbol>, State> delta;
  State start = 0;
  std::set<State> accepting;
  std::set<State> byzantine_states;

  std::optional<State> next(State s, ActionSymbol a) const;
};

const RoleDfa& role_dfa(BehaviorRole role);

enum class Verdict : std::uint8_t { kHonest, kByzantine, kIncomplete };

std::string_view verdict_name(Verdict v);

struct Classification {
  Verdict verdict = Verdict::kIncomplete;
  RoleDfa::State final_state = 0;
  // An action arrived with no transition defined from the current state.
  bool protocol_violation = false;
};

// Throws kUnknownSymbol when the trace uses an action outside the role's alphabet.
Classification classify(const BehaviorRecord& record);

// Stake is tracked in integer milli-units so redistribution conserves it exactly.
struct Stake {
  std::int64_t units = 0;

  static constexpr std::int64_t kUnitsPerStake = 1000;
  static Stake from_double(double stake) {
    return Stake{static_cast<std::int64_t>(stake * kUnitsPerStake + (stake >= 0 ? 0.5 : -0.5))};
  }
  double as_double() const { return static_cast<double>(units) / kUnitsPerStake; }
  friend auto operator<=>(const Stake&, const Stake&) = default;
};

struct LedgerEvent {
  enum class Kind : std::uint8_t { kPenalty, kCompensation } kind = Kind::kPenalty;
  Term term;
  NodeId offender;
  std::string offender_org;
  Stake amount;
  std::map<std::string, Stake> credited;
};

struct StakeLedger {
  std::map<std::string, Stake> balances;
  double penalty_fraction = 0.05;
  std::vector<LedgerEvent> history;
  // Removal price per node; defaults to the node's last penalty amount.
  std::map<NodeId, Stake> removal_price;

  Stake total() const;
};

// Moves penalty_fraction of the offender org's balance to the honest orgs,
// split equally with the remainder going to the lexicographically first org.
// Throws kInsufficientStake when the offender org holds nothing.
StakeLedger apply_penalty(StakeLedger ledger, NodeId offender, const std::string& offender_org,
                          const std::set<std::string>& honest_orgs, Term term = {});

struct Settlement {
  StakeLedger ledger;
  RiskNodeList rnl;
};

// Throws kNotListed, kUnderpayment or kInsufficientStake; inputs are untouched on error.
Settlement settle_compensation(const StakeLedger& ledger, const RiskNodeList& rnl, NodeId node,
                               const std::string& node_org, Stake payment,
                               const std::set<std::string>& honest_orgs, Term term = {});

std::string history_csv(const StakeLedger& ledger);

}  // namespace rac::behavior

#endif  // RAC_BEHAVIOR_HPP_
