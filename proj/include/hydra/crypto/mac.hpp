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

#ifndef HYDRA_CRYPTO_MAC_HPP_
#define HYDRA_CRYPTO_MAC_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>

#include "hydra/common.hpp"

namespace hydra::crypto {

enum class MacAlgorithm : std::uint8_t {
  kSpeck64_128Cbc,
  kSimon64_128Cbc,
  kAes128Cbc,
  kHmacSha256,
  kBlake2sKeyed,
};

inline constexpr MacAlgorithm kAllMacAlgorithms[] = {
    MacAlgorithm::kSpeck64_128Cbc, MacAlgorithm::kSimon64_128Cbc,
    MacAlgorithm::kAes128Cbc, MacAlgorithm::kHmacSha256,
    MacAlgorithm::kBlake2sKeyed};

// Canonical names: SPECK_64_128_CBC, SIMON_64_128_CBC, AES_128_CBC,
// HMAC_SHA_256, BLAKE2S_KEYED.
std::string_view MacAlgorithmName(MacAlgorithm algorithm);
std::optional<MacAlgorithm> ParseMacAlgorithm(std::string_view name);

bool IsCipherBased(MacAlgorithm algorithm);
// 16 for the cipher MACs, 32 for HMAC-SHA-256 and keyed BLAKE2s.
std::size_t MacKeySize(MacAlgorithm algorithm);
std::size_t NativeTagSize(MacAlgorithm algorithm);

// Algorithm plus the number of tag bytes put on the wire.
struct MacSpec {
  MacAlgorithm algorithm = MacAlgorithm::kSpeck64_128Cbc;
  std::size_t tag_length = 16;

  // Native tag length for the algorithm.
  static MacSpec Default(MacAlgorithm algorithm);
  // Throws kInvalidInput unless tag_length is 8, 16 or 32 and fits the
  // algorithm's native output.
  void Validate() const;

  friend bool operator==(const MacSpec&, const MacSpec&) = default;
};

// Secret key bound to one algorithm. Wiped on destruction.
class MacKey {
 public:
  MacKey(MacAlgorithm algorithm, ByteView bytes);
  ~MacKey();
  MacKey(const MacKey& other);
  MacKey& operator=(const MacKey& other);
  MacKey(MacKey&& other) noexcept;
  MacKey& operator=(MacKey&& other) noexcept;

  MacAlgorithm algorithm() const { return algorithm_; }
  ByteView bytes() const { return bytes_; }

 private:
  MacAlgorithm algorithm_;
  Bytes bytes_;
};

// Incremental MAC computation (init / update / final). The total message
// length is declared up front because the cipher-based construction prefixes
// it; every algorithm enforces the declared length so callers behave the same
// regardless of which MAC is configured.
class MacState {
 public:
  MacState(const MacSpec& spec, const MacKey& key, std::uint64_t message_length);
  ~MacState();
  MacState(MacState&&) noexcept;
  MacState& operator=(MacState&&) noexcept;

  void Update(ByteView data);
  // Returns spec.tag_length bytes. The state is unusable afterwards.
  Bytes Final();

  class Engine;

 private:
  MacSpec spec_;
  std::unique_ptr<Engine> engine_;
};

Bytes ComputeMac(const MacSpec& spec, const MacKey& key, ByteView message);

// K_Auth = native MAC of "HYDRA-KAUTH-v1" under the master key, truncated to
// the algorithm's key size.
inline constexpr std::string_view kAuthKeyContext = "HYDRA-KAUTH-v1";
MacKey DeriveAuthKey(const MacKey& master);

// Raw primitives with unconstrained key lengths, for test vectors and tools.
Bytes HmacSha256(ByteView key, ByteView message);
// Key must be 1..32 bytes.
Bytes Blake2sKeyed(ByteView key, ByteView message);

// Timing-independent comparison; false on length mismatch.
bool ConstantTimeEquals(ByteView a, ByteView b);

}  // namespace hydra::crypto

#endif  // HYDRA_CRYPTO_MAC_HPP_
