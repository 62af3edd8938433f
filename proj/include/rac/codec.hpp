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

#ifndef RAC_CODEC_HPP_
#define RAC_CODEC_HPP_

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rac/core.hpp"

// Big-endian primitives shared by the block and message encoders.
namespace rac::codec {

inline void put_u8(std::vector<std::uint8_t>& out, std::uint8_t v) { out.push_back(v); }

inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

inline void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

inline void put_digest(std::vector<std::uint8_t>& out, const Digest& d) {
  out.insert(out.end(), d.begin(), d.end());
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint64_t uint(int width) {
    need(width);
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v = (v << 8) | bytes_[pos_++];
    return v;
  }
  Digest digest() {
    need(32);
    Digest d;
    std::copy_n(bytes_.begin() + pos_, 32, d.begin());
    pos_ += 32;
    return d;
  }
  std::vector<std::uint8_t> bytes(std::size_t n) {
    need(n);
    std::vector<std::uint8_t> v(bytes_.begin() + pos_, bytes_.begin() + pos_ + n);
    pos_ += n;
    return v;
  }
  bool flag() {
    auto v = uint(1);
    if (v > 1) throw Error(ErrorCode::kDecodeError, "flag byte must be 0 or 1 at offset " + std::to_string(pos_ - 1));
    return v == 1;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) {
      throw Error(ErrorCode::kDecodeError, "truncated input at offset " + std::to_string(pos_));
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

inline TransactionRequest read_tx(Reader& r) {
  TransactionRequest tx;
  tx.request_id = r.uint(8);
  tx.client_id = static_cast<std::uint32_t>(r.uint(4));
  tx.submit_time = static_cast<SimTime>(r.uint(8));
  tx.payload = r.bytes(r.uint(4));
  return tx;
}

inline Block read_block(Reader& r) {
  Block b;
  b.block_num = r.uint(8);
  b.prehash = r.digest();
  b.time_stamp = static_cast<SimTime>(r.uint(8));
  b.merkle_root = r.digest();
  b.empty_flag = r.flag();
  auto count = r.uint(4);
  for (std::uint64_t i = 0; i < count; ++i) b.entries.push_back(read_tx(r));
  return b;
}

}  // namespace rac::codec

#endif  // RAC_CODEC_HPP_
