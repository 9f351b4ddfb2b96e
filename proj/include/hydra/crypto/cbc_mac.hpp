/*
 *
 * Copyright 2026 The HYDRA-sim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */

#ifndef HYDRA_CRYPTO_CBC_MAC_HPP_
#define HYDRA_CRYPTO_CBC_MAC_HPP_

#include <openssl/crypto.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>

#include "hydra/common.hpp"

namespace hydra::crypto {

// CBC-MAC over an arbitrary block cipher, made safe for variable-length input
// by prepending one block that encodes the total message length in bytes
// (big-endian), then zero-padding the final partial block. The message length
// is therefore fixed at construction, and Final() refuses a stream whose
// length differs from the declared one.
//
// The native tag is 16 bytes: the last chaining block, followed by further
// encryptions of it until 16 bytes are produced (one extra block for 64-bit
// ciphers, none for 128-bit ones).
template <typename Cipher>
class CbcMac {
 public:
  static constexpr std::size_t kBlockSize = Cipher::kBlockSize;
  static constexpr std::size_t kTagSize = 16;

  CbcMac(ByteView key, std::uint64_t message_length)
      : cipher_(key), declared_length_(message_length) {
    std::array<std::uint8_t, kBlockSize> length_block{};
    for (std::size_t i = 0; i < 8; ++i) {
      length_block[kBlockSize - 1 - i] =
          static_cast<std::uint8_t>(message_length >> (8 * i));
    }
    Absorb(length_block.data());
  }

  ~CbcMac() {
    OPENSSL_cleanse(chain_.data(), chain_.size());
    OPENSSL_cleanse(buffer_.data(), buffer_.size());
  }

  CbcMac(const CbcMac&) = delete;
  CbcMac& operator=(const CbcMac&) = delete;

  void Update(ByteView data) {
    if (finalized_) throw Error(ErrorCode::kInvalidInput, "MAC already finalized");
    consumed_ += data.size();
    if (consumed_ > declared_length_) {
      throw Error(ErrorCode::kInvalidInput, "MAC input exceeds declared length");
    }
    const std::uint8_t* p = data.data();
    std::size_t n = data.size();
    if (buffered_ > 0) {
      std::size_t take = std::min(n, kBlockSize - buffered_);
      std::memcpy(buffer_.data() + buffered_, p, take);
      buffered_ += take;
      p += take;
      n -= take;
      if (buffered_ < kBlockSize) return;
      Absorb(buffer_.data());
      buffered_ = 0;
    }
    while (n >= kBlockSize) {
      Absorb(p);
      p += kBlockSize;
      n -= kBlockSize;
    }
    std::memcpy(buffer_.data(), p, n);
    buffered_ = n;
  }

  std::array<std::uint8_t, kTagSize> Final() {
    if (finalized_) throw Error(ErrorCode::kInvalidInput, "MAC already finalized");
    if (consumed_ != declared_length_) {
      throw Error(ErrorCode::kInvalidInput,
                  "MAC input length " + std::to_string(consumed_) +
                      " differs from declared " +
                      std::to_string(declared_length_));
    }
    finalized_ = true;
    if (buffered_ > 0) {
      std::fill(buffer_.begin() + buffered_, buffer_.end(), 0);
      Absorb(buffer_.data());
      buffered_ = 0;
    }
    std::array<std::uint8_t, kTagSize> tag{};
    std::size_t filled = 0;
    while (true) {
      std::size_t take = std::min(kBlockSize, kTagSize - filled);
      std::memcpy(tag.data() + filled, chain_.data(), take);
      filled += take;
      if (filled == kTagSize) break;
      cipher_.EncryptBlock(chain_.data(), chain_.data());
    }
    return tag;
  }

 private:
  void Absorb(const std::uint8_t* block) {
    for (std::size_t i = 0; i < kBlockSize; ++i) chain_[i] ^= block[i];
    cipher_.EncryptBlock(chain_.data(), chain_.data());
  }

  Cipher cipher_;
  std::array<std::uint8_t, kBlockSize> chain_{};
  std::array<std::uint8_t, kBlockSize> buffer_{};
  std::size_t buffered_ = 0;
  std::uint64_t declared_length_;
  std::uint64_t consumed_ = 0;
  bool finalized_ = false;
};

}  // namespace hydra::crypto

#endif  // HYDRA_CRYPTO_CBC_MAC_HPP_
