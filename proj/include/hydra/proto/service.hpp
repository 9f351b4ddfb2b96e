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

#ifndef HYDRA_PROTO_SERVICE_HPP_
#define HYDRA_PROTO_SERVICE_HPP_

#include <atomic>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>

#include "hydra/attest/device.hpp"
#include "hydra/proto/transport.hpp"
#include "hydra/proto/wire.hpp"

namespace hydra::proto {

struct ServiceStats {
  std::uint64_t reports = 0;
  std::uint64_t errors = 0;
  std::uint64_t dropped_stale = 0;
  std::uint64_t dropped_bad_mac = 0;
  std::uint64_t malformed = 0;
};

// Turns request frames into response frames. Anything that is not an
// authentic, fresh request yields no response at all.
class ProverService {
 public:
  explicit ProverService(attest::Device& device) : device_(device) {}

  std::optional<Bytes> HandleFrame(ByteView frame);
  ServiceStats stats() const;

 private:
  attest::Device& device_;
  mutable std::mutex stats_mutex_;
  ServiceStats stats_;
};

class TcpServer {
 public:
  TcpServer(ProverService& service, Endpoint listen);
  ~TcpServer();
  TcpServer(const TcpServer&) = delete;
  TcpServer& operator=(const TcpServer&) = delete;

  // Binds and starts accepting on a background thread. Port 0 picks a free
  // port; see port().
  void Start();
  void Stop();
  std::uint16_t port() const { return port_; }

 private:
  void AcceptLoop();
  void Serve(int fd);

  ProverService& service_;
  Endpoint listen_;
  std::uint16_t port_ = 0;
  int listen_fd_ = -1;
  int wake_[2] = {-1, -1};
  std::atomic<bool> running_{false};
  std::thread acceptor_;
  struct Worker {
    std::thread thread;
    std::shared_ptr<std::atomic<bool>> done;
  };
  void ReapFinished();

  std::mutex workers_mutex_;
  std::list<Worker> workers_;
};

}  // namespace hydra::proto

#endif  // HYDRA_PROTO_SERVICE_HPP_
