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

#include "hydra/proto/wire.hpp"

#include <algorithm>

namespace hydra::proto {
namespace {

[[noreturn]] void Reject(const std::string& why) {
  throw Error(ErrorCode::kProtocolError, why);
}

bool ValidTagLength(std::size_t n) { return n == 8 || n == 16 || n == 32; }

void AppendHeader(Bytes& out, const RequestHeader& header) {
  auto h = EncodeHeader(header);
  out.insert(out.end(), h.begin(), h.end());
}

}  // namespace

std::string_view FailureCodeName(FailureCode code) {
  switch (code) {
    case FailureCode::kUnknownProcess: return "UnknownProcess";
    case FailureCode::kRangeOutOfBounds: return "RangeOutOfBounds";
  }
  return "?";
}

std::array<std::uint8_t, kHeaderSize> EncodeHeader(const RequestHeader& header) {
  Bytes b;
  b.reserve(kHeaderSize);
  AppendU64(b, header.timestamp_ms);
  AppendU32(b, header.process);
  AppendU64(b, header.first);
  AppendU64(b, header.last);
  std::array<std::uint8_t, kHeaderSize> out{};
  std::copy(b.begin(), b.end(), out.begin());
  return out;
}

RequestHeader DecodeHeader(ByteView bytes) {
  if (bytes.size() < kHeaderSize) Reject("short request header");
  RequestHeader h;
  h.timestamp_ms = LoadU64(bytes.subspan(0, 8));
  h.process = LoadU32(bytes.subspan(8, 4));
  h.first = LoadU64(bytes.subspan(12, 8));
  h.last = LoadU64(bytes.subspan(20, 8));
  return h;
}

Bytes Encode(const Message& message) {
  Bytes body;
  MessageKind kind{};
  if (const auto* req = std::get_if<AttestationRequest>(&message)) {
    kind = MessageKind::kRequest;
    AppendHeader(body, req->header);
    body.insert(body.end(), req->mac.begin(), req->mac.end());
  } else if (const auto* rep = std::get_if<AttestationReport>(&message)) {
    kind = MessageKind::kReport;
    AppendHeader(body, rep->header);
    body.insert(body.end(), rep->tag.begin(), rep->tag.end());
  } else {
    const auto& err = std::get<ErrorResponse>(message);
    kind = MessageKind::kError;
    body.push_back(static_cast<std::uint8_t>(err.code));
    AppendHeader(body, err.header);
  }
  Bytes frame;
  frame.reserve(4 + kMagic.size() + 2 + body.size());
  AppendU32(frame, static_cast<std::uint32_t>(kMagic.size() + 2 + body.size()));
  frame.insert(frame.end(), kMagic.begin(), kMagic.end());
  frame.push_back(kVersion);
  frame.push_back(static_cast<std::uint8_t>(kind));
  frame.insert(frame.end(), body.begin(), body.end());
  return frame;
}

Message Decode(ByteView frame) {
  if (frame.size() < 4 + kMagic.size() + 2) Reject("truncated frame");
  if (frame.size() > kMaxFrameSize) Reject("oversized frame");
  std::uint32_t length = LoadU32(frame.subspan(0, 4));
  if (length != frame.size() - 4) Reject("length prefix does not match frame");
  if (!std::equal(kMagic.begin(), kMagic.end(), frame.begin() + 4)) Reject("bad magic");
  if (frame[8] != kVersion) Reject("unsupported version");
  ByteView body = frame.subspan(10);
  switch (static_cast<MessageKind>(frame[9])) {
    case MessageKind::kRequest: {
      if (body.size() < kHeaderSize || !ValidTagLength(body.size() - kHeaderSize)) {
        Reject("request body has bad length");
      }
      return AttestationRequest{DecodeHeader(body),
                                Bytes(body.begin() + kHeaderSize, body.end())};
    }
    case MessageKind::kReport: {
      if (body.size() < kHeaderSize || !ValidTagLength(body.size() - kHeaderSize)) {
        Reject("report body has bad length");
      }
      return AttestationReport{DecodeHeader(body),
                               Bytes(body.begin() + kHeaderSize, body.end())};
    }
    case MessageKind::kError: {
      if (body.size() != 1 + kHeaderSize) Reject("error body has bad length");
      auto code = static_cast<FailureCode>(body[0]);
      if (code != FailureCode::kUnknownProcess && code != FailureCode::kRangeOutOfBounds) {
        Reject("unknown error code");
      }
      return ErrorResponse{code, DecodeHeader(body.subspan(1))};
    }
  }
  Reject("unknown message kind");
}

}  // namespace hydra::proto
