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

#ifndef HYDRA_PROTO_WIRE_HPP_
#define HYDRA_PROTO_WIRE_HPP_

#include <array>
#include <cstdint>
#include <string_view>
#include <variant>

#include "hydra/common.hpp"

namespace hydra::proto {

// Frame layout (all integers big-endian):
//   u32 length | "HYDR" | u8 version | u8 kind | body
// where length counts everything after itself.
inline constexpr std::array<std::uint8_t, 4> kMagic = {'H', 'Y', 'D', 'R'};
inline constexpr std::uint8_t kVersion = 0x01;
inline constexpr std::size_t kHeaderSize = 28;  // T_R(8) p(4) a(8) b(8)
inline constexpr std::size_t kMaxFrameSize = 64 * 1024;

enum class MessageKind : std::uint8_t { kRequest = 0x01, kReport = 0x02, kError = 0x03 };

enum class FailureCode : std::uint8_t {
  kUnknownProcess = 0x01,
  kRangeOutOfBounds = 0x02,
};

std::string_view FailureCodeName(FailureCode code);

// The authenticated part of a request, echoed in every response.
struct RequestHeader {
  std::uint64_t timestamp_ms = 0;
  std::uint32_t process = 0;
  std::uint64_t first = 0;  // inclusive, image-relative
  std::uint64_t last = 0;   // inclusive, image-relative

  friend bool operator==(const RequestHeader&, const RequestHeader&) = default;
};

struct AttestationRequest {
  RequestHeader header;
  Bytes mac;  // C_R

  friend bool operator==(const AttestationRequest&, const AttestationRequest&) = default;
};

struct AttestationReport {
  RequestHeader header;
  Bytes tag;

  friend bool operator==(const AttestationReport&, const AttestationReport&) = default;
};

struct ErrorResponse {
  FailureCode code = FailureCode::kUnknownProcess;
  RequestHeader header;

  friend bool operator==(const ErrorResponse&, const ErrorResponse&) = default;
};

using Message = std::variant<AttestationRequest, AttestationReport, ErrorResponse>;

// T_R || p || a || b, exactly as on the wire. This is the request MAC input
// and the first bytes of the report MAC input.
std::array<std::uint8_t, kHeaderSize> EncodeHeader(const RequestHeader& header);
RequestHeader DecodeHeader(ByteView bytes);

// Full frame including the length prefix.
Bytes Encode(const Message& message);
// Total: throws Error(kProtocolError) for anything that is not exactly one
// well-formed frame.
Message Decode(ByteView frame);

}  // namespace hydra::proto

#endif  // HYDRA_PROTO_WIRE_HPP_
