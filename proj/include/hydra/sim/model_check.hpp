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

#ifndef HYDRA_SIM_MODEL_CHECK_HPP_
#define HYDRA_SIM_MODEL_CHECK_HPP_

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "hydra/platform/kernel.hpp"

namespace hydra::sim {

struct ModelCheckOptions {
  int max_depth = 6;
  // Stop after this many distinct states (0 = unbounded).
  std::size_t state_limit = 0;
};

struct ModelCheckResult {
  std::size_t states = 0;
  std::size_t transitions = 0;
  std::size_t probes = 0;
  int depth_reached = 0;
  bool exhaustive = true;
  std::vector<std::string> violations;
  std::chrono::milliseconds elapsed{0};

  bool ok() const { return violations.empty(); }
};

// Breadth-first search over every API call the actor processes can issue,
// up to max_depth calls. States are compared by the authority they confer.
// At every state, the configuration audit must be clean and every direct
// access by an actor to the attestation process's frames, TCB, CSpace or
// VSpace must be refused.
ModelCheckResult CheckAuthorityConfinement(const platform::Kernel& initial,
                                           const std::vector<platform::ProcessId>& actors,
                                           const ModelCheckOptions& options = {});

struct ConfinementSystem {
  platform::Kernel kernel;
  std::vector<platform::ProcessId> actors;
};

// Attestation process plus two user processes on 8 user frames. The user
// processes share a grant-capable endpoint, hold their own TCBs, and one of
// them holds a spare frame.
enum class ConfinementFixture {
  kHonest,
  // Hands one actor a read capability to the attestation key frame.
  kLeakKeyFrame,
  // Hands one actor the attestation TCB.
  kLeakTcb,
};

ConfinementSystem BuildConfinementSystem(ConfinementFixture fixture = ConfinementFixture::kHonest,
                                         const Protections& protections = {});

}  // namespace hydra::sim

#endif  // HYDRA_SIM_MODEL_CHECK_HPP_
