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

#include "rac/behavior.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace rac::behavior {

namespace {

constexpr std::array<std::string_view, kActionCount> kActionNames = {
    "receive",      "generate_new_block", "broadcast",          "valid_block",
    "empty_block",  "verify",             "success",            "fail",
    "addition_new_block", "send_systemcall", "abnormal",        "normal",
};

using A = ActionSymbol;

RoleDfa make_dfa(std::vector<std::tuple<RoleDfa::State, ActionSymbol, RoleDfa::State>> edges,
                 std::set<RoleDfa::State> accepting, std::set<RoleDfa::State> byzantine) {
  RoleDfa dfa;
  dfa.start = 0;
  dfa.states.insert(0);
  for (auto [from, a, to] : edges) {
    dfa.delta[{from, a}] = to;
    dfa.alphabet.insert(a);
    dfa.states.insert(from);
    dfa.states.insert(to);
  }
  dfa.accepting = std::move(accepting);
  dfa.byzantine_states = std::move(byzantine);
  return dfa;
}

}  // namespace

std::string_view action_name(ActionSymbol a) { return kActionNames[static_cast<std::size_t>(a)]; }

ActionSymbol parse_action(std::string_view name) {
  for (std::size_t i = 0; i < kActionNames.size(); ++i)
    if (kActionNames[i] == name) return static_cast<ActionSymbol>(i);
  throw Error(ErrorCode::kUnknownSymbol, "unknown action '" + std::string(name) + "'");
}

std::string_view role_name(BehaviorRole r) {
  switch (r) {
    case BehaviorRole::kAccountant: return "accountant";
    case BehaviorRole::kEvaluator: return "evaluator";
    case BehaviorRole::kFollower: return "follower";
  }
  return "?";
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kHonest: return "honest";
    case Verdict::kByzantine: return "byzantine";
    case Verdict::kIncomplete: return "incomplete";
  }
  return "?";
}

std::optional<RoleDfa::State> RoleDfa::next(State s, ActionSymbol a) const {
  auto it = delta.find({s, a});
  if (it == delta.end()) return std::nullopt;
  return it->second;
}

const RoleDfa& role_dfa(BehaviorRole role) {
  static const RoleDfa accountant = make_dfa(
      {{0, A::kReceive, 1}, {1, A::kGenerateNewBlock, 2}, {2, A::kBroadcast, 3},
       {3, A::kValidBlock, 4}, {3, A::kEmptyBlock, 5}},
      {4, 5}, {5});
  static const RoleDfa evaluator = make_dfa(
      {{0, A::kReceive, 1}, {1, A::kVerify, 2}, {2, A::kSuccess, 3}, {2, A::kFail, 4}},
      {3, 4}, {4});
  static const RoleDfa follower = make_dfa(
      {{0, A::kReceive, 1}, {1, A::kAdditionNewBlock, 2}, {2, A::kSendSystemcall, 3},
       {3, A::kAbnormal, 4}, {3, A::kNormal, 5}},
      {4, 5}, {4});
  switch (role) {
    case BehaviorRole::kAccountant: return accountant;
    case BehaviorRole::kEvaluator: return evaluator;
    case BehaviorRole::kFollower: return follower;
  }
  return follower;
}

Classification classify(const BehaviorRecord& record) {
  const RoleDfa& dfa = role_dfa(record.role_at_time);
  for (ActionSymbol a : record.trace) {
    if (!dfa.alphabet.contains(a)) {
      throw Error(ErrorCode::kUnknownSymbol, std::string(action_name(a)) + " is not an action of role " +
                                                 std::string(role_name(record.role_at_time)));
    }
  }
  Classification c;
  c.final_state = dfa.start;
  for (ActionSymbol a : record.trace) {
    auto next = dfa.next(c.final_state, a);
    if (!next) {
      c.protocol_violation = true;
      c.verdict = Verdict::kIncomplete;
      return c;
    }
    c.final_state = *next;
  }
  if (dfa.byzantine_states.contains(c.final_state)) {
    c.verdict = Verdict::kByzantine;
  } else if (dfa.accepting.contains(c.final_state)) {
    c.verdict = Verdict::kHonest;
  } else {
    c.verdict = Verdict::kIncomplete;
  }
  return c;
}

Stake StakeLedger::total() const {
  Stake t;
  for (const auto& [org, s] : balances) t.units += s.units;
  return t;
}

namespace {

std::map<std::string, Stake> distribute(StakeLedger& ledger, const std::string& from_org, Stake amount,
                                        const std::set<std::string>& honest_orgs) {
  std::set<std::string> receivers;
  for (const auto& org : honest_orgs)
    if (org != from_org) receivers.insert(org);
  if (receivers.empty()) throw Error(ErrorCode::kDegenerateInput, "no honest organization to credit");
  const auto k = static_cast<std::int64_t>(receivers.size());
  const std::int64_t share = amount.units / k;
  const std::int64_t remainder = amount.units % k;
  std::map<std::string, Stake> credited;
  ledger.balances[from_org].units -= amount.units;
  bool first = true;
  for (const auto& org : receivers) {
    std::int64_t credit = share + (first ? remainder : 0);
    first = false;
    ledger.balances[org].units += credit;
    credited[org] = Stake{credit};
  }
  return credited;
}

}  // namespace

StakeLedger apply_penalty(StakeLedger ledger, NodeId offender, const std::string& offender_org,
                          const std::set<std::string>& honest_orgs, Term term) {
  const Stake balance = ledger.balances[offender_org];
  if (balance.units <= 0) {
    throw Error(ErrorCode::kInsufficientStake, "organization '" + offender_org + "' holds no stake");
  }
  Stake amount{static_cast<std::int64_t>(
      std::floor(static_cast<double>(balance.units) * ledger.penalty_fraction))};
  LedgerEvent ev;
  ev.kind = LedgerEvent::Kind::kPenalty;
  ev.term = term;
  ev.offender = offender;
  ev.offender_org = offender_org;
  ev.amount = amount;
  ev.credited = distribute(ledger, offender_org, amount, honest_orgs);
  ledger.removal_price[offender] = amount;
  ledger.history.push_back(std::move(ev));
  return ledger;
}

Settlement settle_compensation(const StakeLedger& ledger, const RiskNodeList& rnl, NodeId node,
                               const std::string& node_org, Stake payment,
                               const std::set<std::string>& honest_orgs, Term term) {
  if (!rnl.contains(node)) {
    throw Error(ErrorCode::kNotListed, "node " + std::to_string(node.value) + " is not in the RNL");
  }
  auto price_it = ledger.removal_price.find(node);
  const Stake price = price_it == ledger.removal_price.end() ? Stake{} : price_it->second;
  if (payment < price) {
    throw Error(ErrorCode::kUnderpayment, "payment " + std::to_string(payment.units) +
                                              " below removal price " + std::to_string(price.units));
  }
  auto bal = ledger.balances.find(node_org);
  if (bal == ledger.balances.end() || bal->second < payment) {
    throw Error(ErrorCode::kInsufficientStake, "organization '" + node_org + "' cannot cover the payment");
  }
  Settlement out{ledger, rnl};
  LedgerEvent ev;
  ev.kind = LedgerEvent::Kind::kCompensation;
  ev.term = term;
  ev.offender = node;
  ev.offender_org = node_org;
  ev.amount = payment;
  ev.credited = distribute(out.ledger, node_org, payment, honest_orgs);
  out.ledger.removal_price.erase(node);
  out.ledger.history.push_back(std::move(ev));
  out.rnl.remove(node);
  return out;
}

std::string history_csv(const StakeLedger& ledger) {
  std::ostringstream os;
  os << "event,term,offender,offender_org,amount,credited\n";
  for (const auto& ev : ledger.history) {
    os << (ev.kind == LedgerEvent::Kind::kPenalty ? "penalty" : "compensation") << ','
       << ev.term.value << ',' << ev.offender.value << ',' << ev.offender_org << ','
       << ev.amount.as_double() << ',';
    bool first = true;
    for (const auto& [org, s] : ev.credited) {
      if (!first) os << ';';
      first = false;
      os << org << '=' << s.as_double();
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace rac::behavior
