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

#ifndef HYDRA_CRYPTO_SIGNATURE_HPP_
#define HYDRA_CRYPTO_SIGNATURE_HPP_

#include <array>
#include <cstdint>

#include "hydra/common.hpp"

namespace hydra::crypto {

using Digest = std::array<std::uint8_t, 32>;

// SHA-256.
Digest Hash(ByteView message);

// Ed25519 key material (OpenSSL-backed).
inline constexpr std::size_t kPublicKeySize = 32;
inline constexpr std::size_t kSigningSeedSize = 32;
inline constexpr std::size_t kSignatureSize = 64;

class PublicKey {
 public:
  // Throws kInvalidInput unless `bytes` is a 32-byte Ed25519 point encoding.
  static PublicKey FromBytes(ByteView bytes);

  ByteView bytes() const { return bytes_; }

  friend bool operator==(const PublicKey&, const PublicKey&) = default;

 private:
  friend class SigningKey;
  explicit PublicKey(ByteView bytes) : bytes_(bytes.begin(), bytes.end()) {}
  Bytes bytes_;
};

class SigningKey {
 public:
  static SigningKey FromSeed(ByteView seed);
  static SigningKey Generate();
  ~SigningKey();
  SigningKey(const SigningKey&) = default;
  SigningKey& operator=(const SigningKey&) = default;

  ByteView seed() const { return seed_; }
  PublicKey public_key() const;

 private:
  explicit SigningKey(ByteView seed) : seed_(seed.begin(), seed.end()) {}
  Bytes seed_;
};

Bytes Sign(const SigningKey& key, ByteView message);

// Total: returns false for malformed keys or signatures instead of throwing.
bool Verify(ByteView public_key, ByteView message, ByteView signature) noexcept;
inline bool Verify(const PublicKey& key, ByteView message,
                   ByteView signature) noexcept {
  return Verify(key.bytes(), message, signature);
}

}  // namespace hydra::crypto

#endif  // HYDRA_CRYPTO_SIGNATURE_HPP_
