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

#include "rac/replication.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "rac/node.hpp"

namespace rac {

namespace {

constexpr std::size_t kBufferLimit = 1024;

}  // namespace

LogReplica::LogReplica() : terms_{Term{0}}, certs_(1) {}

bool LogReplica::remember(const TransactionRequest& tx) {
  auto key = key_of(tx);
  if (!pool_.emplace(key, tx).second) return false;
  if (!committed_.contains(key)) uncommitted_.insert(key);
  return true;
}

const TransactionRequest* LogReplica::copy_of(const RequestKey& key) const {
  auto it = pool_.find(key);
  return it == pool_.end() ? nullptr : &it->second;
}

bool LogReplica::is_committed(const RequestKey& key) const { return committed_.contains(key); }

std::vector<TransactionRequest> LogReplica::proposable(Term term, std::size_t max) const {
  std::set<RequestKey> in_term;
  for (auto n = commit_ + 1; n <= last_num(); ++n) {
    if (terms_[n] != term) continue;
    for (const auto& tx : chain_.at(n).entries) in_term.insert(key_of(tx));
  }
  std::vector<TransactionRequest> out;
  for (const auto& key : uncommitted_) {
    if (out.size() >= max) break;
    if (in_term.contains(key)) continue;
    out.push_back(pool_.at(key));
  }
  return out;
}

void LogReplica::append_local(Block block, Term term, std::vector<CertificateEntry> cert) {
  chain_.append(std::move(block));
  terms_.push_back(term);
  certs_.push_back(std::move(cert));
}

bool LogReplica::try_append(Block block, Term term, std::vector<CertificateEntry> cert) {
  if (block.block_num != last_num() + 1 || block.prehash != chain_.last_digest()) return false;
  append_local(std::move(block), term, std::move(cert));
  return true;
}

void LogReplica::truncate_after(std::uint64_t num) {
  chain_.truncate_after(num);
  terms_.resize(num + 1);
  certs_.resize(num + 1);
}

void LogReplica::drain(Outcome& outcome) {
  while (!buffer_.empty()) {
    auto it = buffer_.begin();
    if (it->first <= last_num()) {
      buffer_.erase(it);
      continue;
    }
    if (it->first != last_num() + 1) break;
    auto pending = std::move(it->second);
    buffer_.erase(it);
    auto num = pending.block.block_num;
    if (!try_append(std::move(pending.block), pending.term, std::move(pending.cert))) break;
    outcome.appended.push_back(num);
  }
}

LogReplica::Outcome LogReplica::accept(const Block& block, Term term,
                                       std::vector<CertificateEntry> cert) {
  Outcome outcome;
  auto n = block.block_num;
  if (n == 0) {
    outcome.success = true;
    outcome.last = last_num();
    return outcome;
  }
  if (n <= last_num()) {
    if (hash_block(block) == chain_.digest_at(n)) {
      outcome.success = true;
      outcome.match = n;
      outcome.last = last_num();
      return outcome;
    }
    if (n <= commit_) {
      outcome.match = commit_;
      outcome.last = last_num();
      return outcome;
    }
    truncate_after(n - 1);
  }
  if (n == last_num() + 1) {
    if (try_append(block, term, std::move(cert))) {
      outcome.appended.push_back(n);
      drain(outcome);
      outcome.success = true;
      outcome.match = n;
    } else if (n - 1 > commit_) {
      // Our copy of the parent conflicts with the sender's.
      truncate_after(n - 2);
    }
    outcome.last = last_num();
    return outcome;
  }
  if (buffer_.size() < kBufferLimit) buffer_[n] = Pending{block, term, std::move(cert)};
  outcome.last = last_num();
  return outcome;
}

std::vector<std::uint64_t> LogReplica::advance_commit(std::uint64_t to) {
  to = std::min(to, last_num());
  std::vector<std::uint64_t> out;
  for (auto n = commit_ + 1; n <= to; ++n) {
    for (const auto& tx : chain_.at(n).entries) {
      auto key = key_of(tx);
      pool_.emplace(key, tx);
      committed_.emplace(key, n);
      uncommitted_.erase(key);
    }
    out.push_back(n);
  }
  commit_ = std::max(commit_, to);
  return out;
}

std::uint64_t quorum_index(const std::map<std::uint32_t, std::uint64_t>& match,
                           std::uint64_t self_last, std::size_t cluster_size) {
  std::vector<std::uint64_t> values{self_last};
  for (const auto& [node, m] : match) values.push_back(m);
  auto need = strict_majority(cluster_size);
  if (values.size() < need) return 0;
  std::sort(values.begin(), values.end(), std::greater<>());
  return values[need - 1];
}

}  // namespace rac
