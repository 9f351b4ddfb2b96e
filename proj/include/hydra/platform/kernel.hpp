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

#ifndef HYDRA_PLATFORM_KERNEL_HPP_
#define HYDRA_PLATFORM_KERNEL_HPP_

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hydra/common.hpp"
#include "hydra/protections.hpp"

namespace hydra::boot {
class BootChain;
}  // namespace hydra::boot

namespace hydra::platform {

inline constexpr std::size_t kPageSize = 4096;
inline constexpr std::uint8_t kMaxPriority = 255;
inline constexpr std::size_t kChildCNodeSlots = 32;
inline constexpr std::uint64_t kImageBase = 0x0040'0000;
inline constexpr std::uint64_t kForeignWindowBase = 0x8000'0000;

enum class Right : std::uint8_t { kRead = 1, kWrite = 2, kGrant = 4 };

class Rights {
 public:
  constexpr Rights() = default;
  constexpr Rights(Right r) : bits_(static_cast<std::uint8_t>(r)) {}

  static constexpr Rights None() { return Rights(); }
  static constexpr Rights ReadOnly() { return Right::kRead; }
  static constexpr Rights ReadWrite() { return Rights(Right::kRead) | Right::kWrite; }
  static constexpr Rights All() { return ReadWrite() | Right::kGrant; }

  constexpr bool Has(Right r) const { return bits_ & static_cast<std::uint8_t>(r); }
  constexpr bool Covers(Rights other) const { return (bits_ & other.bits_) == other.bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint8_t bits() const { return bits_; }

  friend constexpr Rights operator|(Rights a, Rights b) {
    Rights r;
    r.bits_ = a.bits_ | b.bits_;
    return r;
  }
  friend constexpr Rights operator&(Rights a, Rights b) {
    Rights r;
    r.bits_ = a.bits_ & b.bits_;
    return r;
  }
  friend constexpr bool operator==(Rights, Rights) = default;

 private:
  std::uint8_t bits_ = 0;
};

std::string RightsString(Rights rights);

struct ObjectId {
  std::uint32_t value = 0;
  friend constexpr auto operator<=>(ObjectId, ObjectId) = default;
};

struct ProcessId {
  std::uint32_t value = 0;
  friend constexpr auto operator<=>(ProcessId, ProcessId) = default;
};

using SlotIndex = std::uint32_t;

enum class ObjectKind : std::uint8_t { kFrame, kTcb, kCNode, kVSpace, kEndpoint, kUntyped };

std::string_view ObjectKindName(ObjectKind kind);

// Unforgeable access token. Only the kernel mints capabilities; user code can
// inspect the ones it is shown but never construct one.
class Capability {
 public:
  ObjectId object() const { return object_; }
  ObjectKind kind() const { return kind_; }
  Rights rights() const { return rights_; }
  std::uint64_t badge() const { return badge_; }

  friend bool operator==(const Capability&, const Capability&) = default;

 private:
  friend class Kernel;
  Capability(ObjectId object, ObjectKind kind, Rights rights, std::uint64_t badge)
      : object_(object), kind_(kind), rights_(rights), badge_(badge) {}

  ObjectId object_;
  ObjectKind kind_;
  Rights rights_;
  std::uint64_t badge_;
};

using Registers = std::array<std::uint64_t, 4>;

struct Mapping {
  ObjectId frame;
  Rights rights;
  // Temporary read-only alias created by MapForeignFrames.
  bool foreign = false;
};

struct ProcessRecord {
  ProcessId id;
  std::string name;
  ObjectId tcb;
  ObjectId cspace;
  ObjectId vspace;
  ObjectId fault_endpoint;
  std::uint64_t image_base = kImageBase;
  std::uint64_t image_length = 0;
  std::vector<ObjectId> image_frames;
  bool runnable = true;
};

// Where the initial (attestation) process keeps its pieces, as offsets from
// its image base. Each region starts on a page boundary so that the key and
// the working memory occupy frames of their own.
struct InitialProcessLayout {
  std::uint64_t code_offset = 0;
  std::uint64_t code_length = 0;
  std::uint64_t key_offset = 0;
  std::uint64_t key_length = 0;
  std::uint64_t scratch_offset = 0;
  std::uint64_t scratch_length = 0;
};

struct Denial {
  ProcessId caller;
  std::string operation;
  ErrorCode code;
};

// Only boot::BootChain can mint this, so a kernel only comes to life through
// the verified boot path.
class BootToken {
 private:
  friend class hydra::boot::BootChain;
  BootToken() = default;
};

struct KernelBootConfig {
  Bytes kernel_blob;
  Bytes attest_code;
  Bytes key_material;
  // Frames available to user space (not counting kernel frames).
  std::uint32_t user_frames = 64;
  std::string initial_name = "attest";
  Protections protections;
};

class Kernel;

// A step of simulated user-level execution.
using Behavior = std::function<void(Kernel&, ProcessId)>;

// Read-only window onto another process's memory, mapped into the caller's
// VSpace. Unmaps on destruction.
class ForeignView {
 public:
  ForeignView(ForeignView&& other) noexcept;
  ForeignView& operator=(ForeignView&&) = delete;
  ForeignView(const ForeignView&) = delete;
  ~ForeignView();

  std::uint64_t size() const { return size_; }
  std::size_t chunk_count() const { return chunks_.size(); }
  // Bytes of chunk i read through the caller's mapping at call time. Valid
  // until the next kernel mutation.
  ByteView Chunk(std::size_t i) const;
  Bytes Copy() const;
  std::uint64_t window_base() const { return window_base_; }

 private:
  friend class Kernel;
  struct ChunkRef {
    std::uint64_t vpn;
    std::uint32_t offset;
    std::uint32_t length;
  };
  ForeignView(Kernel* kernel, ProcessId caller, std::uint64_t window_base,
              std::vector<ChunkRef> chunks, std::uint64_t size);

  Kernel* kernel_;
  ProcessId caller_;
  std::uint64_t window_base_;
  std::vector<ChunkRef> chunks_;
  std::uint64_t size_;
};

// In-process model of a capability microkernel. Every operation runs to
// completion; callers that share a Kernel across threads must serialize.
// Failed checks are recorded in denials() and thrown as hydra::Error.
class Kernel {
 public:
  static Kernel Boot(BootToken token, const KernelBootConfig& config);

  Kernel(const Kernel&) = default;
  Kernel& operator=(const Kernel&) = default;
  Kernel(Kernel&&) noexcept = default;
  Kernel& operator=(Kernel&&) noexcept = default;

  // Processes.
  ProcessId Spawn(ProcessId parent, const std::string& name, ByteView image,
                  std::uint8_t priority, std::span<const Capability> granted);

  // Memory access by frame object; authority is any capability or mapping
  // of the frame carrying the needed right.
  Bytes ReadMemory(ProcessId caller, ObjectId frame, std::size_t offset,
                   std::size_t length);
  void WriteMemory(ProcessId caller, ObjectId frame, std::size_t offset,
                   ByteView data);
  // Memory access through the caller's own VSpace.
  Bytes ReadVirtual(ProcessId caller, std::uint64_t vaddr, std::size_t length);
  void WriteVirtual(ProcessId caller, std::uint64_t vaddr, ByteView data);

  // Capability management. Transfer copies; the sender keeps its capability.
  SlotIndex TransferCapability(ProcessId sender, SlotIndex endpoint_slot,
                               SlotIndex cap_slot, ProcessId receiver);
  SlotIndex CopyCapability(ProcessId caller, SlotIndex source, Rights mask);
  void DeleteCapability(ProcessId caller, SlotIndex slot);
  SlotIndex CreateEndpoint(ProcessId caller);

  // VSpace management.
  void MapFrame(ProcessId caller, ObjectId frame, std::uint64_t vaddr, Rights rights);
  void UnmapPage(ProcessId caller, std::uint64_t vaddr);
  // Maps bytes [first, last] (inclusive, image-relative) of `target` read-only
  // into the caller's VSpace. Needs a Read frame capability for every page.
  ForeignView MapForeignFrames(ProcessId caller, ProcessId target,
                               std::uint64_t first, std::uint64_t last);

  // TCB invocations.
  void SetPriority(ProcessId caller, ObjectId tcb, std::uint8_t priority);
  Registers ReadRegisters(ProcessId caller, ObjectId tcb);
  void WriteRegisters(ProcessId caller, ObjectId tcb, const Registers& registers);
  void Suspend(ProcessId caller, ObjectId tcb);

  // Scheduling: strict priority, round-robin among equals.
  void SetRunnable(ProcessId process, bool runnable);
  void SetBehavior(ProcessId process, Behavior behavior);
  std::optional<ProcessId> ScheduleNext();
  // Schedules and runs one step, recording it in the trace.
  std::optional<ProcessId> Step();
  // Steps until `process` is the one scheduled; returns the number of steps
  // other processes took first.
  std::size_t RunUntilScheduled(ProcessId process);
  const std::vector<ProcessId>& trace() const { return trace_; }
  void ClearTrace() { trace_.clear(); }
  // Long-running provers turn this off; the trace is otherwise unbounded.
  void set_trace_enabled(bool enabled) { trace_enabled_ = enabled; }

  // Observation (harness and audit only; not a capability-checked path).
  ProcessId initial_process() const { return ProcessId{0}; }
  const InitialProcessLayout& initial_layout() const { return initial_layout_; }
  const ProcessRecord& Process(ProcessId id) const;
  bool HasProcess(ProcessId id) const { return processes_.contains(id.value); }
  std::vector<ProcessId> ProcessIds() const;
  std::vector<std::optional<Capability>> CSpaceOf(ProcessId id) const;
  std::optional<Capability> CapabilityAt(ProcessId id, SlotIndex slot) const;
  std::vector<std::pair<std::uint64_t, Mapping>> VSpaceOf(ProcessId id) const;
  std::uint8_t PriorityOf(ProcessId id) const;
  ObjectKind KindOf(ObjectId object) const;
  std::vector<ObjectId> Frames() const;
  bool IsKernelFrame(ObjectId frame) const;
  ByteView InspectFrame(ObjectId frame) const;
  const std::vector<Denial>& denials() const { return denials_; }
  void ClearDenials() { denials_.clear(); }
  const Protections& protections() const { return protections_; }

 private:
  struct Page {
    std::array<std::uint8_t, kPageSize> bytes{};
  };
  struct FrameObject {
    std::shared_ptr<Page> page;
    bool kernel_owned = false;
    bool allocated = false;
  };
  struct TcbObject {
    ProcessId owner;
    std::uint8_t priority = 0;
    Registers registers{};
    bool suspended = false;
  };
  struct CNodeObject {
    std::vector<std::optional<Capability>> slots;
  };
  struct VSpaceObject {
    std::map<std::uint64_t, Mapping> pages;  // virtual page number -> mapping
  };
  struct EndpointObject {};
  struct UntypedObject {};
  using Object = std::variant<FrameObject, TcbObject, CNodeObject, VSpaceObject,
                              EndpointObject, UntypedObject>;

  Kernel() = default;

  ObjectId NewObject(Object object);
  Capability Mint(ObjectId object, Rights rights, std::uint64_t badge = 0) const;
  template <typename T>
  T& Get(ObjectId id);
  template <typename T>
  const T& Get(ObjectId id) const;
  ProcessRecord& MutableProcess(ProcessId id);
  CNodeObject& CNodeOf(ProcessId id);
  const CNodeObject& CNodeOf(ProcessId id) const;
  VSpaceObject& VSpaceObjectOf(ProcessId id);
  const VSpaceObject& VSpaceObjectOf(ProcessId id) const;
  SlotIndex Install(CNodeObject& cnode, const Capability& cap);
  const Capability& CapInSlot(ProcessId caller, SlotIndex slot, const char* op);
  Rights CapabilityRights(ProcessId caller, ObjectId object) const;
  Rights FrameAuthority(ProcessId caller, ObjectId frame) const;
  bool HoldsKind(ProcessId caller, ObjectKind kind) const;
  bool IsMappedAnywhere(ObjectId frame) const;
  std::uint8_t* MutablePageBytes(ObjectId frame);
  const std::uint8_t* PageBytes(ObjectId frame) const;
  void MapImage(VSpaceObject& vspace, const std::vector<ObjectId>& frames,
                std::uint64_t base);
  std::vector<ObjectId> AllocateFrames(ProcessId owner, std::size_t count);
  [[noreturn]] void Deny(ProcessId caller, const std::string& operation,
                         ErrorCode code, const std::string& detail);
  TcbObject& TcbFor(ProcessId caller, ObjectId tcb, Right right, const char* op);
  std::pair<ObjectId, std::size_t> Translate(ProcessId caller, std::uint64_t vaddr,
                                             Right right, const char* op);
  void ReleaseForeignWindow(ProcessId caller, std::uint64_t window_base,
                            std::size_t pages);

  friend class ForeignView;

  Protections protections_;
  std::uint32_t next_object_ = 1;
  std::map<std::uint32_t, Object> objects_;
  std::map<std::uint32_t, ProcessRecord> processes_;
  std::map<std::uint32_t, Behavior> behaviors_;
  std::map<std::uint8_t, std::uint32_t> last_scheduled_;
  std::vector<ProcessId> trace_;
  bool trace_enabled_ = true;
  std::vector<Denial> denials_;
  InitialProcessLayout initial_layout_;
  ObjectId untyped_;
};

}  // namespace hydra::platform

#endif  // HYDRA_PLATFORM_KERNEL_HPP_
