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

#include <doctest.h>

#include "rac/replication.hpp"

using namespace rac;

namespace {

TransactionRequest tx(std::uint64_t id, std::uint8_t byte = 1) { return {id, 0, {byte}, 0}; }

// A leader-side chain of blocks 1..n built in one term.
std::vector<Block> build(std::size_t n, std::uint8_t salt = 1) {
  Chain c;
  std::vector<Block> out;
  for (std::uint64_t i = 1; i <= n; ++i) {
    auto b = make_block(i, c.last_digest(), static_cast<SimTime>(i), {tx(i, salt)});
    c.append(b);
    out.push_back(b);
  }
  return out;
}

}  // namespace

TEST_CASE("in-order blocks append and acknowledge") {
  LogReplica r;
  auto blocks = build(3);
  for (const auto& b : blocks) {
    auto o = r.accept(b, Term{1}, {});
    CHECK(o.success);
    CHECK(o.match == b.block_num);
    CHECK(o.appended == std::vector<std::uint64_t>{b.block_num});
  }
  CHECK(r.last_num() == 3);
  CHECK(r.last_term() == Term{1});
  auto dup = r.accept(blocks[1], Term{1}, {});
  CHECK(dup.success);
  CHECK(dup.appended.empty());
}

TEST_CASE("blocks ahead of a gap are buffered then drained") {
  LogReplica r;
  auto blocks = build(4);
  auto o = r.accept(blocks[2], Term{1}, {});
  CHECK_FALSE(o.success);
  CHECK(o.last == 0);
  r.accept(blocks[1], Term{1}, {});
  auto all = r.accept(blocks[0], Term{1}, {});
  CHECK(all.success);
  CHECK(all.appended == std::vector<std::uint64_t>{1, 2, 3});
  CHECK(r.last_num() == 3);
}

TEST_CASE("an uncommitted conflicting suffix is replaced") {
  LogReplica r;
  auto old = build(3, 1);
  for (const auto& b : old) r.accept(b, Term{1}, {});
  r.advance_commit(1);
  auto fresh = build(3, 2);
  // Block 2 of the new history differs: truncate and retry from the leader's block 2.
  auto o = r.accept(fresh[2], Term{2}, {});
  CHECK_FALSE(o.success);
  CHECK(r.last_num() == 1);
  fresh[1].prehash = r.chain().last_digest();
  fresh[1].merkle_root = merkle_root(fresh[1].entries);
  auto o2 = r.accept(fresh[1], Term{2}, {});
  CHECK(o2.success);
  CHECK(r.block_term(2) == Term{2});
}

TEST_CASE("committed blocks are never truncated") {
  LogReplica r;
  auto old = build(2, 1);
  for (const auto& b : old) r.accept(b, Term{1}, {});
  r.advance_commit(2);
  auto other = build(2, 9);
  auto o = r.accept(other[1], Term{2}, {});
  CHECK_FALSE(o.success);
  CHECK(o.match == 2);
  CHECK(r.last_num() == 2);
  CHECK(r.chain().digest_at(2) == hash_block(old[1]));
}

TEST_CASE("commit index only rises") {
  LogReplica r;
  for (const auto& b : build(3)) r.accept(b, Term{1}, {});
  CHECK(r.advance_commit(2) == std::vector<std::uint64_t>{1, 2});
  CHECK(r.advance_commit(1).empty());
  CHECK(r.commit_index() == 2);
  CHECK(r.advance_commit(9) == std::vector<std::uint64_t>{3});
  CHECK(r.commit_index() == 3);
}

TEST_CASE("request pool tracks commitment") {
  LogReplica r;
  CHECK(r.remember(tx(1)));
  CHECK_FALSE(r.remember(tx(1)));
  r.remember(tx(2));
  CHECK(r.uncommitted_count() == 2);
  CHECK(r.proposable(Term{1}, 10).size() == 2);
  auto b = make_block(1, r.chain().last_digest(), 0, {tx(1)});
  r.append_local(b, Term{1}, {});
  auto left = r.proposable(Term{1}, 10);
  REQUIRE(left.size() == 1);
  CHECK(left[0].request_id == 2);
  // A later term may re-propose entries stranded in an older uncommitted block.
  CHECK(r.proposable(Term{2}, 10).size() == 2);
  r.advance_commit(1);
  CHECK(r.is_committed(RequestKey{0, 1}));
  CHECK(r.uncommitted_count() == 1);
  CHECK(r.copy_of(RequestKey{0, 2}) != nullptr);
}

TEST_CASE("quorum index") {
  std::map<std::uint32_t, std::uint64_t> match{{1, 5}, {2, 3}, {3, 0}, {4, 0}};
  CHECK(quorum_index(match, 6, 5) == 3);
  match[3] = 4;
  CHECK(quorum_index(match, 6, 5) == 4);
  CHECK(quorum_index({}, 6, 1) == 6);
  CHECK(quorum_index({{1, 2}}, 6, 4) == 0);
}
