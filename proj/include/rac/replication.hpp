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

#ifndef RAC_REPLICATION_HPP_
#define RAC_REPLICATION_HPP_

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "rac/core.hpp"
#include "rac/messages.hpp"

namespace rac {

struct RequestKey {
  std::uint32_t client = 0;
  std::uint64_t id = 0;

  friend auto operator<=>(const RequestKey&, const RequestKey&) = default;
};

inline RequestKey key_of(const TransactionRequest& tx) { return {tx.client_id, tx.request_id}; }

// A node's copy of the chain plus what replication needs around it: the
// term each block was proposed in, its verdict certificate, the commit
// index, blocks that arrived ahead of a gap, and client request copies.
class LogReplica {
 public:
  LogReplica();

  const Chain& chain() const { return chain_; }
  std::uint64_t last_num() const { return chain_.last_num(); }
  Term block_term(std::uint64_t num) const { return terms_.at(num); }
  Term last_term() const { return terms_.back(); }
  const std::vector<CertificateEntry>& certificate(std::uint64_t num) const { return certs_.at(num); }
  std::uint64_t commit_index() const { return commit_; }

  // Client copies. Returns false for a request already known.
  bool remember(const TransactionRequest& tx);
  const TransactionRequest* copy_of(const RequestKey& key) const;
  bool is_committed(const RequestKey& key) const;
  std::size_t uncommitted_count() const { return uncommitted_.size(); }
  // Known, uncommitted requests not already in a block of `term`.
  std::vector<TransactionRequest> proposable(Term term, std::size_t max) const;

  // Appends a block built locally. Throws on a broken link.
  void append_local(Block block, Term term, std::vector<CertificateEntry> cert);

  struct Outcome {
    bool success = false;
    // Highest block known to equal the sender's copy.
    std::uint64_t match = 0;
    std::uint64_t last = 0;
    // Block numbers appended by this call, in order.
    std::vector<std::uint64_t> appended;
  };
  // Follower side of block replication.
  Outcome accept(const Block& block, Term term, std::vector<CertificateEntry> cert);
  void clear_buffer() { buffer_.clear(); }

  // Raises the commit index (never lowers it); returns the newly committed
  // block numbers.
  std::vector<std::uint64_t> advance_commit(std::uint64_t to);

 private:
  struct Pending {
    Block block;
    Term term;
    std::vector<CertificateEntry> cert;
  };

  bool try_append(Block block, Term term, std::vector<CertificateEntry> cert);
  void truncate_after(std::uint64_t num);
  void drain(Outcome& outcome);

  Chain chain_;
  std::vector<Term> terms_;
  std::vector<std::vector<CertificateEntry>> certs_;
  std::uint64_t commit_ = 0;
  std::map<std::uint64_t, Pending> buffer_;
  std::map<RequestKey, TransactionRequest> pool_;
  std::map<RequestKey, std::uint64_t> committed_;
  std::set<RequestKey> uncommitted_;
};

// Highest block number replicated on a strict majority of `cluster_size`
// nodes, counting `self_last` for the caller.
std::uint64_t quorum_index(const std::map<std::uint32_t, std::uint64_t>& match,
                           std::uint64_t self_last, std::size_t cluster_size);

}  // namespace rac

#endif  // RAC_REPLICATION_HPP_
