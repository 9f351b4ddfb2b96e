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

#ifndef HYDRA_PLATFORM_AUDIT_HPP_
#define HYDRA_PLATFORM_AUDIT_HPP_

#include <string>
#include <vector>

#include "hydra/platform/kernel.hpp"

namespace hydra::platform {

// The three exclusivity rules the attestation process depends on.
enum class ConfigRule {
  kExclusiveBinary,  // C1: attestation code, key and capability space
  kExclusiveTcb,     // C2: attestation thread control block
  kExclusiveVSpace,  // C3: attestation address space and its frames
};

std::string_view ConfigRuleName(ConfigRule rule);

struct AuditFinding {
  ConfigRule rule;
  ProcessId process;
  ObjectId object;
  std::string detail;
};

struct AuditReport {
  std::vector<AuditFinding> findings;

  bool clean() const { return findings.empty(); }
  bool Violates(ConfigRule rule) const;
  std::string Summary() const;
};

// Walks every capability and every mapping of every process other than the
// initial one and flags any that reaches attestation-only objects.
AuditReport AuditConfiguration(const Kernel& kernel);

// Frames the initial process treats as its own: its image plus anything else
// it maps outside foreign windows.
std::vector<ObjectId> AttestationPrivateFrames(const Kernel& kernel);

// Frames some non-initial process can read or write, through a capability or
// a mapping.
std::vector<ObjectId> FramesReachableByOthers(const Kernel& kernel);

}  // namespace hydra::platform

#endif  // HYDRA_PLATFORM_AUDIT_HPP_
