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

#ifndef HYDRA_PROTO_TRANSPORT_HPP_
#define HYDRA_PROTO_TRANSPORT_HPP_

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "hydra/common.hpp"

namespace hydra::proto {

// Sends one frame and waits for at most one frame back. nullopt means no
// answer arrived before the deadline or the peer hung up.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual std::optional<Bytes> RoundTrip(ByteView frame, std::chrono::milliseconds timeout) = 0;
};

struct Endpoint {
  std::string host;
  std::uint16_t port = 0;

  // "HOST:PORT"
  static Endpoint Parse(std::string_view text);
  std::string ToString() const;
};

class TcpTransport final : public Transport {
 public:
  explicit TcpTransport(Endpoint endpoint) : endpoint_(std::move(endpoint)) {}
  std::optional<Bytes> RoundTrip(ByteView frame, std::chrono::milliseconds timeout) override;

 private:
  Endpoint endpoint_;
};

// Calls a handler in-process. Used by tests and the adversary harness.
class LoopbackTransport final : public Transport {
 public:
  using Handler = std::function<std::optional<Bytes>(ByteView)>;
  explicit LoopbackTransport(Handler handler) : handler_(std::move(handler)) {}
  std::optional<Bytes> RoundTrip(ByteView frame, std::chrono::milliseconds) override {
    return handler_(frame);
  }

 private:
  Handler handler_;
};

// Blocking socket helpers shared by client and server. A frame is the 4-byte
// length prefix followed by that many bytes.
std::optional<Bytes> ReadFrame(int fd, std::chrono::steady_clock::time_point deadline);
bool WriteAll(int fd, ByteView data);

}  // namespace hydra::proto

#endif  // HYDRA_PROTO_TRANSPORT_HPP_
