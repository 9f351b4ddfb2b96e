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

#include "hydra/proto/service.hpp"

#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace hydra::proto {
namespace {

constexpr auto kIdleTimeout = std::chrono::seconds(30);

}  // namespace

std::optional<Bytes> ProverService::HandleFrame(ByteView frame) {
  Message message;
  try {
    message = Decode(frame);
  } catch (const Error&) {
    std::lock_guard lock(stats_mutex_);
    ++stats_.malformed;
    return std::nullopt;
  }
  const auto* request = std::get_if<AttestationRequest>(&message);
  if (!request) {
    std::lock_guard lock(stats_mutex_);
    ++stats_.malformed;
    return std::nullopt;
  }
  attest::AttestOutcome outcome = device_.HandleRequest(*request);
  std::lock_guard lock(stats_mutex_);
  if (auto* report = std::get_if<AttestationReport>(&outcome)) {
    ++stats_.reports;
    return Encode(*report);
  }
  if (auto* failed = std::get_if<attest::Failed>(&outcome)) {
    ++stats_.errors;
    return Encode(ErrorResponse{failed->code, request->header});
  }
  if (std::get<attest::Dropped>(outcome).reason == attest::DropReason::kStale) {
    ++stats_.dropped_stale;
  } else {
    ++stats_.dropped_bad_mac;
  }
  return std::nullopt;
}

ServiceStats ProverService::stats() const {
  std::lock_guard lock(stats_mutex_);
  return stats_;
}

TcpServer::TcpServer(ProverService& service, Endpoint listen)
    : service_(service), listen_(std::move(listen)) {}

TcpServer::~TcpServer() { Stop(); }

void TcpServer::Start() {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  std::string port = std::to_string(listen_.port);
  const char* host = listen_.host.empty() ? nullptr : listen_.host.c_str();
  if (int rc = ::getaddrinfo(host, port.c_str(), &hints, &res); rc != 0) {
    throw Error(ErrorCode::kIo, std::string("resolve: ") + ::gai_strerror(rc));
  }
  for (addrinfo* ai = res; ai; ai = ai->ai_next) {
    int fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol);
    if (fd < 0) continue;
    int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    if (::bind(fd, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(fd, 64) == 0) {
      listen_fd_ = fd;
      break;
    }
    ::close(fd);
  }
  ::freeaddrinfo(res);
  if (listen_fd_ < 0) {
    throw Error(ErrorCode::kIo, "cannot listen on " + listen_.ToString() + ": " +
                                    std::strerror(errno));
  }
  sockaddr_storage addr{};
  socklen_t len = sizeof(addr);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  char serv[NI_MAXSERV];
  ::getnameinfo(reinterpret_cast<sockaddr*>(&addr), len, nullptr, 0, serv, sizeof(serv),
                NI_NUMERICSERV);
  port_ = static_cast<std::uint16_t>(std::stoi(serv));
  if (::pipe2(wake_, O_CLOEXEC) != 0) throw Error(ErrorCode::kIo, "pipe failed");
  running_ = true;
  acceptor_ = std::thread([this] { AcceptLoop(); });
}

void TcpServer::Stop() {
  if (!running_.exchange(false)) return;
  char b = 0;
  [[maybe_unused]] auto n = ::write(wake_[1], &b, 1);
  if (acceptor_.joinable()) acceptor_.join();
  std::list<Worker> workers;
  {
    std::lock_guard lock(workers_mutex_);
    workers.swap(workers_);
  }
  for (auto& w : workers) w.thread.join();
  ::close(listen_fd_);
  ::close(wake_[0]);
  ::close(wake_[1]);
  listen_fd_ = wake_[0] = wake_[1] = -1;
}

void TcpServer::AcceptLoop() {
  while (running_) {
    pollfd fds[2] = {{listen_fd_, POLLIN, 0}, {wake_[0], POLLIN, 0}};
    int ready = ::poll(fds, 2, -1);
    if (ready < 0 && errno == EINTR) continue;
    if (ready < 0 || (fds[1].revents & POLLIN)) break;
    int fd = ::accept4(listen_fd_, nullptr, nullptr, SOCK_CLOEXEC);
    if (fd < 0) continue;
    ReapFinished();
    auto done = std::make_shared<std::atomic<bool>>(false);
    std::lock_guard lock(workers_mutex_);
    workers_.push_back(Worker{std::thread([this, fd, done] {
                                Serve(fd);
                                *done = true;
                              }),
                              done});
  }
}

void TcpServer::ReapFinished() {
  std::lock_guard lock(workers_mutex_);
  for (auto it = workers_.begin(); it != workers_.end();) {
    if (*it->done) {
      it->thread.join();
      it = workers_.erase(it);
    } else {
      ++it;
    }
  }
}

void TcpServer::Serve(int fd) {
  while (running_) {
    pollfd fds[2] = {{fd, POLLIN, 0}, {wake_[0], POLLIN, 0}};
    int ready = ::poll(fds, 2, static_cast<int>(std::chrono::milliseconds(kIdleTimeout).count()));
    if (ready < 0 && errno == EINTR) continue;
    if (ready <= 0 || (fds[1].revents & POLLIN)) break;
    auto frame = ReadFrame(fd, std::chrono::steady_clock::now() + std::chrono::seconds(5));
    if (!frame) break;
    std::optional<Bytes> response;
    try {
      response = service_.HandleFrame(*frame);
    } catch (const std::exception&) {
      response.reset();
    }
    if (response && !WriteAll(fd, *response)) break;
  }
  ::close(fd);
}

}  // namespace hydra::proto
