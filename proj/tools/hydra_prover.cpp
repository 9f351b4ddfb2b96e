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

// Boots a device from its manifest and serves attestation requests over TCP.

#include <csignal>
#include <iostream>

#include "CLI11.hpp"
#include "hydra/attest/device.hpp"
#include "hydra/platform/manifest.hpp"
#include "hydra/proto/service.hpp"

int main(int argc, char** argv) {
  CLI::App app{"HYDRA prover"};
  std::string manifest_path, listen = "127.0.0.1:7300";
  bool trace = false;
  app.add_option("--manifest", manifest_path, "Device manifest")->required()->check(CLI::ExistingFile);
  app.add_option("--listen", listen, "HOST:PORT to listen on (port 0 picks one)");
  app.add_flag("--trace", trace, "Keep the kernel call trace");
  CLI11_PARSE(app, argc, argv);

  // Block the stop signals before any thread starts so sigwait sees them.
  sigset_t stop;
  sigemptyset(&stop);
  sigaddset(&stop, SIGINT);
  sigaddset(&stop, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &stop, nullptr);

  try {
    auto manifest = hydra::platform::LoadManifest(manifest_path);
    auto endpoint = hydra::proto::Endpoint::Parse(listen);
    auto device = hydra::attest::Device::FromManifest(manifest);
    device->kernel().set_trace_enabled(trace);
    hydra::proto::ProverService service(*device);
    hydra::proto::TcpServer server(service, endpoint);
    server.Start();
    endpoint.port = server.port();
    std::cout << "listening on " << endpoint.ToString() << std::endl;

    int sig = 0;
    sigwait(&stop, &sig);
    server.Stop();
    auto stats = service.stats();
    std::cout << "reports " << stats.reports << " errors " << stats.errors << " dropped_stale "
              << stats.dropped_stale << " dropped_bad_mac " << stats.dropped_bad_mac
              << " malformed " << stats.malformed << std::endl;
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "hydra-prover: " << e.what() << "\n";
    return 1;
  }
}
