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

#ifndef HYDRA_PROTO_VERIFIER_HPP_
#define HYDRA_PROTO_VERIFIER_HPP_

#include <chrono>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "hydra/attest/clock.hpp"
#include "hydra/crypto/mac.hpp"
#include "hydra/proto/transport.hpp"
#include "hydra/proto/wire.hpp"

namespace hydra::proto {

inline constexpr std::chrono::milliseconds kDefaultVerifierTimeout{5000};

// What a verifier shares with one device: the attestation key K and the
// request key derived from it.
class VerifierKeys {
 public:
  VerifierKeys(const crypto::MacSpec& spec, const crypto::MacKey& attestation_key);

  // JSON: {"mac": NAME, "tag_length": N, "key": HEX}
  static VerifierKeys Load(const std::string& path);
  static VerifierKeys Parse(std::string_view json_text);
  std::string Serialize() const;

  const crypto::MacSpec& spec() const { return spec_; }
  const crypto::MacKey& attestation_key() const { return key_; }
  const crypto::MacKey& auth_key() const { return auth_key_; }

 private:
  crypto::MacSpec spec_;
  crypto::MacKey key_;
  crypto::MacKey auth_key_;
};

// Hands out strictly increasing request timestamps.
class RequestClock {
 public:
  explicit RequestClock(std::shared_ptr<const attest::MonotonicCounter> counter)
      : counter_(std::move(counter)) {}
  std::uint64_t Next();

 private:
  std::shared_ptr<const attest::MonotonicCounter> counter_;
  std::mutex mutex_;
  std::optional<std::uint64_t> last_;
};

enum class Verdict { kTrusted, kModified, kNoResponse, kError };

std::string_view VerdictName(Verdict verdict);

struct VerifyResult {
  Verdict verdict = Verdict::kNoResponse;
  std::optional<FailureCode> error;
  std::optional<AttestationReport> report;
  std::string detail;
};

AttestationRequest BuildRequest(const VerifierKeys& keys, const RequestHeader& header);

// The tag an unmodified device returns for header over expected memory.
Bytes ExpectedTag(const VerifierKeys& keys, const RequestHeader& header, ByteView memory);

// expected_image is the whole image of process; only [first, last] is used.
VerifyResult VerifierAttest(Transport& transport, const VerifierKeys& keys,
                            std::uint32_t process, std::uint64_t first, std::uint64_t last,
                            ByteView expected_image, std::uint64_t timestamp_ms,
                            std::chrono::milliseconds timeout = kDefaultVerifierTimeout);

}  // namespace hydra::proto

#endif  // HYDRA_PROTO_VERIFIER_HPP_
