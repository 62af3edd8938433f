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

#include "rac/core.hpp"

#include "rac/codec.hpp"

#include <openssl/sha.h>

#include <cstdio>
#include <utility>

namespace rac {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kHashMismatch: return "HashMismatch";
    case ErrorCode::kNumGap: return "NumGap";
    case ErrorCode::kDegenerateInput: return "DegenerateInput";
    case ErrorCode::kUnknownSymbol: return "UnknownSymbol";
    case ErrorCode::kInsufficientStake: return "InsufficientStake";
    case ErrorCode::kNotListed: return "NotListed";
    case ErrorCode::kUnderpayment: return "Underpayment";
    case ErrorCode::kSingleOrg: return "SingleOrg";
    case ErrorCode::kInsufficientNodes: return "InsufficientNodes";
    case ErrorCode::kNotAccountant: return "NotAccountant";
    case ErrorCode::kCertificateMismatch: return "CertificateMismatch";
    case ErrorCode::kNotCommitted: return "NotCommitted";
    case ErrorCode::kInsufficientCommits: return "InsufficientCommits";
    case ErrorCode::kNoElection: return "NoElection";
    case ErrorCode::kUnknownLevel: return "UnknownLevel";
    case ErrorCode::kDegenerateIdeals: return "DegenerateIdeals";
    case ErrorCode::kInvalidScenario: return "InvalidScenario";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kDecodeError: return "DecodeError";
  }
  return "Unknown";
}

std::string to_hex(const Digest& d) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(d.size() * 2);
  for (auto b : d) {
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 0xF]);
  }
  return out;
}

Digest sha256(std::span<const std::uint8_t> bytes) {
  Digest d;
  SHA256(bytes.data(), bytes.size(), d.data());
  return d;
}

namespace {

using codec::put_digest;

Digest node_hash(const Digest& left, const Digest& right) {
  std::vector<std::uint8_t> buf;
  buf.reserve(65);
  buf.push_back(0x01);
  put_digest(buf, left);
  put_digest(buf, right);
  return sha256(buf);
}

}  // namespace

void encode(const TransactionRequest& tx, std::vector<std::uint8_t>& out) {
  using namespace codec;
  put_u64(out, tx.request_id);
  put_u32(out, tx.client_id);
  put_u64(out, static_cast<std::uint64_t>(tx.submit_time));
  put_u32(out, static_cast<std::uint32_t>(tx.payload.size()));
  out.insert(out.end(), tx.payload.begin(), tx.payload.end());
}

void encode(const Block& block, std::vector<std::uint8_t>& out) {
  using namespace codec;
  put_u64(out, block.block_num);
  put_digest(out, block.prehash);
  put_u64(out, static_cast<std::uint64_t>(block.time_stamp));
  put_digest(out, block.merkle_root);
  put_u8(out, block.empty_flag ? 1 : 0);
  put_u32(out, static_cast<std::uint32_t>(block.entries.size()));
  for (const auto& tx : block.entries) encode(tx, out);
}

std::vector<std::uint8_t> encode_block(const Block& block) {
  std::vector<std::uint8_t> out;
  encode(block, out);
  return out;
}

Block decode_block(std::span<const std::uint8_t> bytes) {
  codec::Reader r(bytes);
  Block b = codec::read_block(r);
  if (!r.done()) throw Error(ErrorCode::kDecodeError, "trailing bytes after block");
  return b;
}

Digest hash_block(const Block& block) { return sha256(encode_block(block)); }

Digest leaf_hash(const TransactionRequest& tx) {
  std::vector<std::uint8_t> buf{0x00};
  encode(tx, buf);
  return sha256(buf);
}

const Digest& empty_merkle_root() {
  static const Digest root = sha256({});
  return root;
}

Digest merkle_root(std::span<const TransactionRequest> entries) {
  if (entries.empty()) return empty_merkle_root();
  std::vector<Digest> level;
  level.reserve(entries.size());
  for (const auto& tx : entries) level.push_back(leaf_hash(tx));
  while (level.size() > 1) {
    if (level.size() % 2 == 1) level.push_back(level.back());
    std::vector<Digest> up;
    up.reserve(level.size() / 2);
    for (std::size_t i = 0; i < level.size(); i += 2) up.push_back(node_hash(level[i], level[i + 1]));
    level = std::move(up);
  }
  return level.front();
}

Block make_block(std::uint64_t block_num, const Digest& prehash, SimTime time_stamp,
                 std::vector<TransactionRequest> entries) {
  Block b;
  b.block_num = block_num;
  b.prehash = prehash;
  b.time_stamp = time_stamp;
  b.merkle_root = merkle_root(entries);
  b.empty_flag = entries.empty();
  b.entries = std::move(entries);
  return b;
}

Block emptied(const Block& block) {
  return make_block(block.block_num, block.prehash, block.time_stamp, {});
}

const Block& genesis_block() {
  static const Block genesis = make_block(0, Digest{}, 0, {});
  return genesis;
}

const Digest& genesis_digest() {
  static const Digest d = hash_block(genesis_block());
  return d;
}

Chain::Chain() {
  blocks_.push_back(genesis_block());
  digests_.push_back(genesis_digest());
}

void Chain::append(Block block) {
  if (block.block_num != last().block_num + 1) {
    throw Error(ErrorCode::kNumGap, "expected block " + std::to_string(last().block_num + 1) +
                                        ", got " + std::to_string(block.block_num));
  }
  if (block.prehash != last_digest()) {
    throw Error(ErrorCode::kHashMismatch,
                "prehash of block " + std::to_string(block.block_num) + " does not match parent");
  }
  Digest d = hash_block(block);
  blocks_.push_back(std::move(block));
  digests_.push_back(d);
}

void Chain::truncate_after(std::uint64_t block_num) {
  if (block_num + 1 < blocks_.size()) {
    blocks_.resize(block_num + 1);
    digests_.resize(block_num + 1);
  }
}

bool Chain::verify() const {
  if (blocks_.empty() || blocks_.front() != genesis_block()) return false;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const Block& b = blocks_[i];
    if (b.block_num != i) return false;
    if (b.empty_flag != b.entries.empty()) return false;
    if (b.merkle_root != merkle_root(b.entries)) return false;
    if (hash_block(b) != digests_[i]) return false;
    if (i > 0 && b.prehash != digests_[i - 1]) return false;
  }
  return true;
}

Chain append_block(const Chain& chain, Block block) {
  Chain next = chain;
  next.append(std::move(block));
  return next;
}

bool RiskNodeList::add(NodeId node, Term term) {
  return entries_.emplace(node, term).second;
}

bool RiskNodeList::remove(NodeId node) { return entries_.erase(node) > 0; }

std::vector<NodeId> RiskNodeList::nodes() const {
  std::vector<NodeId> out;
  out.reserve(entries_.size());
  for (const auto& [id, term] : entries_) out.push_back(id);
  return out;
}

}  // namespace rac
