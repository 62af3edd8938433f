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

#ifndef RAC_CORE_HPP_
#define RAC_CORE_HPP_

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rac {

enum class ErrorCode {
  kHashMismatch,
  kNumGap,
  kDegenerateInput,
  kUnknownSymbol,
  kInsufficientStake,
  kNotListed,
  kUnderpayment,
  kSingleOrg,
  kInsufficientNodes,
  kNotAccountant,
  kCertificateMismatch,
  kNotCommitted,
  kInsufficientCommits,
  kNoElection,
  kUnknownLevel,
  kDegenerateIdeals,
  kInvalidScenario,
  kParseError,
  kDecodeError,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Simulation time in integer microseconds.
using SimTime = std::int64_t;
constexpr SimTime from_ms(double ms) { return static_cast<SimTime>(ms * 1000.0); }
constexpr double to_ms(SimTime t) { return static_cast<double>(t) / 1000.0; }

struct NodeId {
  std::uint32_t value = 0;
  std::uint32_t org = 0;

  friend bool operator==(const NodeId& a, const NodeId& b) { return a.value == b.value; }
  friend std::strong_ordering operator<=>(const NodeId& a, const NodeId& b) {
    return a.value <=> b.value;
  }
};

struct Term {
  std::uint64_t value = 0;

  Term next() const { return Term{value + 1}; }
  friend auto operator<=>(const Term&, const Term&) = default;
};

using Digest = std::array<std::uint8_t, 32>;

std::string to_hex(const Digest& d);
Digest sha256(std::span<const std::uint8_t> bytes);

struct TransactionRequest {
  std::uint64_t request_id = 0;
  std::uint32_t client_id = 0;
  std::vector<std::uint8_t> payload;
  SimTime submit_time = 0;

  friend bool operator==(const TransactionRequest&, const TransactionRequest&) = default;
};

struct Block {
  std::uint64_t block_num = 0;
  Digest prehash{};
  SimTime time_stamp = 0;
  Digest merkle_root{};
  std::vector<TransactionRequest> entries;
  bool empty_flag = false;

  friend bool operator==(const Block&, const Block&) = default;
};

// Canonical encoding: big-endian fixed-width integers, u32 length prefixes.
// See docs/wire_format.md.
void encode(const TransactionRequest& tx, std::vector<std::uint8_t>& out);
void encode(const Block& block, std::vector<std::uint8_t>& out);
std::vector<std::uint8_t> encode_block(const Block& block);
Block decode_block(std::span<const std::uint8_t> bytes);

Digest hash_block(const Block& block);
Digest leaf_hash(const TransactionRequest& tx);
// SHA-256 of the empty string.
const Digest& empty_merkle_root();
Digest merkle_root(std::span<const TransactionRequest> entries);

// Builds a block over `entries` with a freshly computed merkle root.
Block make_block(std::uint64_t block_num, const Digest& prehash, SimTime time_stamp,
                 std::vector<TransactionRequest> entries);
// Same number and parent, entries voided.
Block emptied(const Block& block);

const Block& genesis_block();
const Digest& genesis_digest();

class Chain {
 public:
  Chain();

  const std::vector<Block>& blocks() const { return blocks_; }
  const Block& last() const { return blocks_.back(); }
  const Block& at(std::uint64_t block_num) const { return blocks_.at(block_num); }
  const Digest& digest_at(std::uint64_t block_num) const { return digests_.at(block_num); }
  const Digest& last_digest() const { return digests_.back(); }
  std::uint64_t last_num() const { return blocks_.size() - 1; }
  std::size_t size() const { return blocks_.size(); }

  // Throws kHashMismatch / kNumGap and leaves the chain unchanged.
  void append(Block block);
  // Drops every block with number > block_num. Replication uses this to
  // discard an uncommitted suffix that conflicts with the accountant's chain.
  void truncate_after(std::uint64_t block_num);
  // Full O(length) check of links and merkle roots.
  bool verify() const;

  friend bool operator==(const Chain& a, const Chain& b) { return a.digests_ == b.digests_; }

 private:
  std::vector<Block> blocks_;
  std::vector<Digest> digests_;
};

Chain append_block(const Chain& chain, Block block);

class RiskNodeList {
 public:
  // Keeps the earliest term if the node is already listed.
  bool add(NodeId node, Term term);
  bool remove(NodeId node);
  bool contains(NodeId node) const { return entries_.contains(node); }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::map<NodeId, Term>& entries() const { return entries_; }
  std::vector<NodeId> nodes() const;

  friend bool operator==(const RiskNodeList&, const RiskNodeList&) = default;

 private:
  std::map<NodeId, Term> entries_;
};

}  // namespace rac

#endif  // RAC_CORE_HPP_
