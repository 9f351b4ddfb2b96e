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

// Attests one process range on a remote prover. Exit status 0 means TRUSTED.

#include <iostream>

#include "CLI11.hpp"
#include "hydra/proto/transport.hpp"
#include "hydra/proto/verifier.hpp"

namespace {

enum ExitCode { kTrusted = 0, kModified = 1, kNoResponse = 2, kProverError = 3, kUsage = 4 };

std::pair<std::uint64_t, std::uint64_t> ParseRange(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("range must be A:B");
  std::uint64_t first = std::stoull(text.substr(0, colon), nullptr, 0);
  std::uint64_t last = std::stoull(text.substr(colon + 1), nullptr, 0);
  if (first > last) throw std::invalid_argument("range start is past its end");
  return {first, last};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HYDRA verifier"};
  std::string target, range, expected, key_file;
  std::uint32_t process = 0;
  std::int64_t timeout_ms = hydra::proto::kDefaultVerifierTimeout.count();
  app.add_option("--target", target, "Prover HOST:PORT")->required();
  app.add_option("--proc", process, "Process id to attest")->required();
  app.add_option("--range", range, "Inclusive byte range A:B within the image")->required();
  app.add_option("--expected", expected, "Expected process image")->required()->check(CLI::ExistingFile);
  app.add_option("--key-file", key_file, "Verifier key file")->required()->check(CLI::ExistingFile);
  app.add_option("--timeout", timeout_ms, "Reply timeout in milliseconds")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  try {
    auto [first, last] = ParseRange(range);
    auto keys = hydra::proto::VerifierKeys::Load(key_file);
    hydra::Bytes image = hydra::ReadFile(expected);
    hydra::proto::TcpTransport transport(hydra::proto::Endpoint::Parse(target));
    hydra::proto::RequestClock clock(std::make_shared<hydra::attest::WallClockCounter>());

    auto result = hydra::proto::VerifierAttest(transport, keys, process, first, last, image,
                                               clock.Next(),
                                               std::chrono::milliseconds(timeout_ms));
    std::cout << hydra::proto::VerdictName(result.verdict);
    if (!result.detail.empty()) std::cout << " (" << result.detail << ")";
    std::cout << "\n";
    switch (result.verdict) {
      case hydra::proto::Verdict::kTrusted: return kTrusted;
      case hydra::proto::Verdict::kModified: return kModified;
      case hydra::proto::Verdict::kNoResponse: return kNoResponse;
      case hydra::proto::Verdict::kError: return kProverError;
    }
    return kProverError;
  } catch (const std::exception& e) {
    std::cerr << "hydra-verify: " << e.what() << "\n";
    return kUsage;
  }
}
