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

#ifndef HYDRA_ADVSIM_SCENARIOS_HPP_
#define HYDRA_ADVSIM_SCENARIOS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hydra/protections.hpp"

namespace hydra::advsim {

enum class Scenario {
  kForgeRequest,
  kReplayRequest,
  kMalwareInfection,
  kKeySteal,
  kPriorityAttack,
  kEvilBoot,
  kTcbTamper,
};

inline constexpr Scenario kAllScenarios[] = {
    Scenario::kForgeRequest, Scenario::kReplayRequest, Scenario::kMalwareInfection,
    Scenario::kKeySteal,     Scenario::kPriorityAttack, Scenario::kEvilBoot,
    Scenario::kTcbTamper,
};

std::string_view ScenarioName(Scenario scenario);
std::optional<Scenario> ParseScenario(std::string_view name);

// The single protection each scenario exercises, switched off.
Protections WeakenedFor(Scenario scenario);

struct ScenarioOptions {
  std::uint64_t seed = 1;
  Protections protections;
  // key_steal fixture: hand the compromised process a capability to the
  // attestation key frame at spawn time.
  bool misgrant_key_frame = false;
  // forge_request attempts.
  int forge_attempts = 1000;
};

struct ScenarioResult {
  Scenario scenario;
  // True when the security property held.
  bool passed = false;
  std::vector<std::string> transcript;
};

ScenarioResult RunScenario(Scenario scenario, const ScenarioOptions& options = {});

}  // namespace hydra::advsim

#endif  // HYDRA_ADVSIM_SCENARIOS_HPP_
