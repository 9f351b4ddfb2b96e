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

#include "hydra/sim/model_check.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <unordered_set>

#include "hydra/boot/boot.hpp"
#include "hydra/platform/audit.hpp"
#include "hydra/sim/testbed.hpp"

namespace hydra::sim {
namespace {

using platform::Capability;
using platform::Kernel;
using platform::ObjectId;
using platform::ObjectKind;
using platform::ProcessId;
using platform::Right;
using platform::Rights;
using platform::SlotIndex;

constexpr std::uint64_t kMapBase = 0x50000000;

enum class Op { kCopy, kDelete, kTransfer, kMap, kUnmap, kSetPriority, kWriteRegisters, kSuspend };

struct Action {
  Op op;
  ProcessId actor;
  SlotIndex slot = 0;
  SlotIndex other_slot = 0;
  ProcessId receiver;
  Rights rights;
  std::uint64_t value = 0;
};

// Two states are equivalent when each actor holds the same rights to the same
// objects and has the same mappings and priority; how many slots those rights
// are spread across does not matter.
std::string StateKey(const Kernel& k, const std::vector<ProcessId>& actors) {
  std::ostringstream key;
  for (ProcessId p : actors) {
    std::map<std::uint64_t, std::uint8_t> authority;
    for (const auto& slot : k.CSpaceOf(p)) {
      if (slot) authority[slot->object().value] |= slot->rights().bits();
    }
    key << 'P' << p.value << ':' << int(k.PriorityOf(p)) << '[';
    for (const auto& [o, r] : authority) key << o << '/' << int(r) << ',';
    key << "]{";
    for (const auto& [vpn, m] : k.VSpaceOf(p)) {
      key << vpn << '>' << m.frame.value << '/' << int(m.rights.bits()) << ',';
    }
    key << '}';
  }
  return key.str();
}

std::vector<Action> Enumerate(const Kernel& k, const std::vector<ProcessId>& actors) {
  std::vector<Action> out;
  const Rights masks[] = {Rights::ReadOnly(), Rights::ReadWrite(), Rights::All()};
  std::vector<ProcessId> receivers = actors;
  receivers.push_back(k.initial_process());
  for (ProcessId actor : actors) {
    auto slots = k.CSpaceOf(actor);
    for (SlotIndex s = 0; s < slots.size(); ++s) {
      if (!slots[s]) continue;
      const Capability& cap = *slots[s];
      for (Rights m : masks) out.push_back({Op::kCopy, actor, s, 0, {}, m, 0});
      out.push_back({Op::kDelete, actor, s, 0, {}, {}, 0});
      if (cap.kind() == ObjectKind::kEndpoint) {
        for (SlotIndex c = 0; c < slots.size(); ++c) {
          if (!slots[c]) continue;
          for (ProcessId r : receivers) {
            if (r != actor) out.push_back({Op::kTransfer, actor, s, c, r, {}, 0});
          }
        }
      }
      if (cap.kind() == ObjectKind::kFrame) {
        for (Rights m : {Rights::ReadOnly(), Rights::ReadWrite()}) {
          out.push_back({Op::kMap, actor, s, 0, {}, m, 0});
        }
      }
      if (cap.kind() == ObjectKind::kTcb) {
        for (std::uint64_t p : {0ULL, 200ULL, 255ULL}) {
          out.push_back({Op::kSetPriority, actor, s, 0, {}, {}, p});
        }
        out.push_back({Op::kWriteRegisters, actor, s, 0, {}, {}, 0});
        out.push_back({Op::kSuspend, actor, s, 0, {}, {}, 0});
      }
    }
    for (const auto& [vpn, m] : k.VSpaceOf(actor)) {
      if (vpn * platform::kPageSize >= kMapBase) {
        out.push_back({Op::kUnmap, actor, 0, 0, {}, {}, vpn * platform::kPageSize});
      }
    }
  }
  return out;
}

void Apply(Kernel& k, const Action& a) {
  auto cap = [&](SlotIndex s) { return *k.CapabilityAt(a.actor, s); };
  switch (a.op) {
    case Op::kCopy: k.CopyCapability(a.actor, a.slot, a.rights); break;
    case Op::kDelete: k.DeleteCapability(a.actor, a.slot); break;
    case Op::kTransfer: k.TransferCapability(a.actor, a.slot, a.other_slot, a.receiver); break;
    case Op::kMap: {
      ObjectId f = cap(a.slot).object();
      k.MapFrame(a.actor, f, kMapBase + f.value * platform::kPageSize, a.rights);
      break;
    }
    case Op::kUnmap: k.UnmapPage(a.actor, a.value); break;
    case Op::kSetPriority:
      k.SetPriority(a.actor, cap(a.slot).object(), static_cast<std::uint8_t>(a.value));
      break;
    case Op::kWriteRegisters: k.WriteRegisters(a.actor, cap(a.slot).object(), {1, 2, 3, 4}); break;
    case Op::kSuspend: k.Suspend(a.actor, cap(a.slot).object()); break;
  }
}

// Every direct access to attestation state must be refused.
std::size_t Probe(Kernel& k, const std::vector<ProcessId>& actors,
                  std::vector<std::string>& violations, int depth) {
  ProcessId root = k.initial_process();
  const auto& att = k.Process(root);
  std::vector<ObjectId> frames = platform::AttestationPrivateFrames(k);
  std::size_t probes = 0;
  for (ProcessId actor : actors) {
    auto expect_refused = [&](const char* what, auto&& call) {
      ++probes;
      try {
        call();
      } catch (const Error&) {
        return;
      }
      std::ostringstream msg;
      msg << "depth " << depth << ": process " << actor.value << " " << what << " succeeded";
      violations.push_back(msg.str());
    };
    for (ObjectId f : frames) {
      expect_refused("ReadMemory on attestation frame", [&] { k.ReadMemory(actor, f, 0, 1); });
      expect_refused("WriteMemory on attestation frame",
                     [&] { k.WriteMemory(actor, f, 0, k.InspectFrame(f).first(1)); });
    }
    expect_refused("MapForeignFrames of attestation image",
                   [&] { k.MapForeignFrames(actor, root, 0, 0); });
    expect_refused("ReadRegisters on attestation TCB", [&] { k.ReadRegisters(actor, att.tcb); });
    expect_refused("WriteRegisters on attestation TCB",
                   [&] { k.WriteRegisters(actor, att.tcb, k.ReadRegisters(root, att.tcb)); });
    expect_refused("SetPriority on attestation TCB",
                   [&] { k.SetPriority(actor, att.tcb, k.PriorityOf(root)); });
  }
  k.ClearDenials();
  return probes;
}

void CheckState(Kernel& k, const std::vector<ProcessId>& actors, int depth,
                ModelCheckResult& result, const std::vector<Bytes>& snapshot) {
  platform::AuditReport audit = platform::AuditConfiguration(k);
  for (const auto& f : audit.findings) {
    std::ostringstream msg;
    msg << "depth " << depth << ": " << platform::ConfigRuleName(f.rule) << " process "
        << f.process.value << " " << f.detail;
    result.violations.push_back(msg.str());
  }
  result.probes += Probe(k, actors, result.violations, depth);
  const auto& frames = k.Process(k.initial_process()).image_frames;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    ByteView now = k.InspectFrame(frames[i]);
    if (!std::equal(now.begin(), now.end(), snapshot[i].begin(), snapshot[i].end())) {
      result.violations.push_back("depth " + std::to_string(depth) +
                                  ": attestation frame contents changed");
    }
  }
}

}  // namespace

ModelCheckResult CheckAuthorityConfinement(const Kernel& initial,
                                           const std::vector<ProcessId>& actors,
                                           const ModelCheckOptions& options) {
  auto start = std::chrono::steady_clock::now();
  ModelCheckResult result;
  std::vector<Bytes> snapshot;
  for (ObjectId f : initial.Process(initial.initial_process()).image_frames) {
    ByteView v = initial.InspectFrame(f);
    snapshot.emplace_back(v.begin(), v.end());
  }

  std::unordered_set<std::string> seen;
  std::deque<std::pair<Kernel, int>> frontier;
  frontier.emplace_back(initial, 0);
  seen.insert(StateKey(initial, actors));
  result.states = 1;
  CheckState(frontier.front().first, actors, 0, result, snapshot);

  while (!frontier.empty()) {
    auto [k, depth] = std::move(frontier.front());
    frontier.pop_front();
    result.depth_reached = std::max(result.depth_reached, depth);
    if (depth >= options.max_depth) continue;
    for (const Action& a : Enumerate(k, actors)) {
      Kernel next = k;
      try {
        Apply(next, a);
      } catch (const Error&) {
        continue;
      }
      ++result.transitions;
      if (!seen.insert(StateKey(next, actors)).second) continue;
      ++result.states;
      next.ClearDenials();
      CheckState(next, actors, depth + 1, result, snapshot);
      if (options.state_limit != 0 && result.states >= options.state_limit) {
        result.exhaustive = false;
        frontier.clear();
        break;
      }
      frontier.emplace_back(std::move(next), depth + 1);
    }
  }
  result.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  return result;
}

ConfinementSystem BuildConfinementSystem(ConfinementFixture fixture,
                                         const Protections& protections) {
  crypto::SigningKey vendor = VendorKeyFor(11);
  Bytes kernel_blob = KernelBlobFor(11);
  Bytes code = SeededBytes(12, 512);
  boot::BootImage image = boot::BootImage::Build(kernel_blob, code, vendor);
  boot::Provisioning prov{SeededBytes(13, 16), 8, protections};
  Kernel k = boot::FullBoot(boot::FusedRom::Burn(vendor.public_key()), image.Pack(), prov);

  ProcessId root = k.initial_process();
  auto slot_of = [&](ObjectId object) {
    auto slots = k.CSpaceOf(root);
    for (SlotIndex i = 0; i < slots.size(); ++i) {
      if (slots[i] && slots[i]->object() == object) return i;
    }
    throw Error(ErrorCode::kInvalidInput, "object not held by the attestation process");
  };

  SlotIndex ep = k.CreateEndpoint(root);
  std::vector<Capability> shared{*k.CapabilityAt(root, ep)};
  ProcessId a = k.Spawn(root, "a", SeededBytes(14, 1000), 100, shared);
  ProcessId b = k.Spawn(root, "b", SeededBytes(15, 1000), 90, shared);
  k.TransferCapability(root, ep, slot_of(k.Process(a).tcb), a);
  k.TransferCapability(root, ep, slot_of(k.Process(b).tcb), b);

  // The spare frame: any user frame no process has mapped yet.
  std::vector<ObjectId> used;
  for (ProcessId p : k.ProcessIds()) {
    for (const auto& [vpn, m] : k.VSpaceOf(p)) used.push_back(m.frame);
  }
  for (ObjectId f : k.Frames()) {
    if (k.IsKernelFrame(f) || std::find(used.begin(), used.end(), f) != used.end()) continue;
    k.TransferCapability(root, ep, slot_of(f), a);
    break;
  }

  const auto& att = k.Process(root);
  if (fixture == ConfinementFixture::kLeakKeyFrame) {
    ObjectId key = att.image_frames[k.initial_layout().key_offset / platform::kPageSize];
    SlotIndex ro = k.CopyCapability(root, slot_of(key), Rights::ReadOnly());
    k.TransferCapability(root, ep, ro, b);
  } else if (fixture == ConfinementFixture::kLeakTcb) {
    k.TransferCapability(root, ep, slot_of(att.tcb), b);
  }
  k.ClearDenials();
  k.ClearTrace();
  return ConfinementSystem{std::move(k), {a, b}};
}

}  // namespace hydra::sim
