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

#include "hydra/platform/audit.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace hydra::platform {

std::string_view ConfigRuleName(ConfigRule rule) {
  switch (rule) {
    case ConfigRule::kExclusiveBinary: return "C1";
    case ConfigRule::kExclusiveTcb: return "C2";
    case ConfigRule::kExclusiveVSpace: return "C3";
  }
  return "?";
}

bool AuditReport::Violates(ConfigRule rule) const {
  return std::any_of(findings.begin(), findings.end(),
                     [rule](const AuditFinding& f) { return f.rule == rule; });
}

std::string AuditReport::Summary() const {
  if (clean()) return "clean";
  std::ostringstream out;
  for (const AuditFinding& f : findings) {
    out << ConfigRuleName(f.rule) << ": process " << f.process.value << " "
        << f.detail << " (object " << f.object.value << ")\n";
  }
  return out.str();
}

std::vector<ObjectId> AttestationPrivateFrames(const Kernel& kernel) {
  const ProcessRecord& attest = kernel.Process(kernel.initial_process());
  std::set<ObjectId> frames(attest.image_frames.begin(), attest.image_frames.end());
  for (const auto& [vpn, mapping] : kernel.VSpaceOf(attest.id)) {
    if (!mapping.foreign) frames.insert(mapping.frame);
  }
  return {frames.begin(), frames.end()};
}

std::vector<ObjectId> FramesReachableByOthers(const Kernel& kernel) {
  std::set<ObjectId> frames;
  for (ProcessId pid : kernel.ProcessIds()) {
    if (pid == kernel.initial_process()) continue;
    for (const auto& slot : kernel.CSpaceOf(pid)) {
      if (slot && slot->kind() == ObjectKind::kFrame && !slot->rights().empty()) {
        frames.insert(slot->object());
      }
    }
    for (const auto& [vpn, mapping] : kernel.VSpaceOf(pid)) frames.insert(mapping.frame);
  }
  return {frames.begin(), frames.end()};
}

AuditReport AuditConfiguration(const Kernel& kernel) {
  AuditReport report;
  const ProcessRecord& attest = kernel.Process(kernel.initial_process());
  std::set<ObjectId> binary(attest.image_frames.begin(), attest.image_frames.end());
  std::set<ObjectId> vspace_frames;
  for (ObjectId f : AttestationPrivateFrames(kernel)) {
    if (!binary.contains(f)) vspace_frames.insert(f);
  }

  auto check = [&](ProcessId pid, ObjectId object, const std::string& how) {
    if (binary.contains(object)) {
      report.findings.push_back({ConfigRule::kExclusiveBinary, pid, object,
                                 how + " attestation image frame"});
    } else if (object == attest.cspace) {
      report.findings.push_back({ConfigRule::kExclusiveBinary, pid, object,
                                 how + " attestation CSpace root"});
    } else if (object == attest.tcb) {
      report.findings.push_back({ConfigRule::kExclusiveTcb, pid, object,
                                 how + " attestation TCB"});
    } else if (object == attest.vspace) {
      report.findings.push_back({ConfigRule::kExclusiveVSpace, pid, object,
                                 how + " attestation VSpace root"});
    } else if (vspace_frames.contains(object)) {
      report.findings.push_back({ConfigRule::kExclusiveVSpace, pid, object,
                                 how + " frame mapped by attestation"});
    }
  };

  for (ProcessId pid : kernel.ProcessIds()) {
    if (pid == attest.id) continue;
    for (const auto& slot : kernel.CSpaceOf(pid)) {
      if (slot) check(pid, slot->object(), "holds capability to");
    }
    for (const auto& [vpn, mapping] : kernel.VSpaceOf(pid)) {
      check(pid, mapping.frame, "maps");
    }
  }
  return report;
}

}  // namespace hydra::platform
