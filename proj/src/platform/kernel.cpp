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

#include "hydra/platform/kernel.hpp"

#include <algorithm>
#include <cstring>

namespace hydra::platform {
namespace {

std::size_t PagesFor(std::uint64_t length) {
  return static_cast<std::size_t>((length + kPageSize - 1) / kPageSize);
}

std::uint64_t RoundUpToPage(std::uint64_t length) {
  return PagesFor(length) * kPageSize;
}

constexpr std::uint64_t kMaxSchedulerSteps = 1'000'000;

}  // namespace

std::string RightsString(Rights rights) {
  std::string s;
  s += rights.Has(Right::kRead) ? 'R' : '-';
  s += rights.Has(Right::kWrite) ? 'W' : '-';
  s += rights.Has(Right::kGrant) ? 'G' : '-';
  return s;
}

std::string_view ObjectKindName(ObjectKind kind) {
  switch (kind) {
    case ObjectKind::kFrame: return "Frame";
    case ObjectKind::kTcb: return "TCB";
    case ObjectKind::kCNode: return "CNode";
    case ObjectKind::kVSpace: return "VSpace";
    case ObjectKind::kEndpoint: return "Endpoint";
    case ObjectKind::kUntyped: return "Untyped";
  }
  return "?";
}

// ---------------------------------------------------------------- ForeignView

ForeignView::ForeignView(Kernel* kernel, ProcessId caller,
                         std::uint64_t window_base, std::vector<ChunkRef> chunks,
                         std::uint64_t size)
    : kernel_(kernel),
      caller_(caller),
      window_base_(window_base),
      chunks_(std::move(chunks)),
      size_(size) {}

ForeignView::ForeignView(ForeignView&& other) noexcept
    : kernel_(std::exchange(other.kernel_, nullptr)),
      caller_(other.caller_),
      window_base_(other.window_base_),
      chunks_(std::move(other.chunks_)),
      size_(other.size_) {}

ForeignView::~ForeignView() {
  if (kernel_ != nullptr) {
    kernel_->ReleaseForeignWindow(caller_, window_base_, chunks_.size());
  }
}

ByteView ForeignView::Chunk(std::size_t i) const {
  const ChunkRef& ref = chunks_.at(i);
  const auto& pages = kernel_->VSpaceObjectOf(caller_).pages;
  auto it = pages.find(ref.vpn);
  if (it == pages.end()) {
    throw Error(ErrorCode::kAccessDenied, "foreign window no longer mapped");
  }
  return ByteView(kernel_->PageBytes(it->second.frame) + ref.offset, ref.length);
}

Bytes ForeignView::Copy() const {
  Bytes out;
  out.reserve(size_);
  for (std::size_t i = 0; i < chunks_.size(); ++i) {
    ByteView c = Chunk(i);
    out.insert(out.end(), c.begin(), c.end());
  }
  return out;
}

// ---------------------------------------------------------------- internals

template <typename T>
T& Kernel::Get(ObjectId id) {
  auto it = objects_.find(id.value);
  if (it == objects_.end() || !std::holds_alternative<T>(it->second)) {
    throw Error(ErrorCode::kInvalidInput,
                "no such object " + std::to_string(id.value));
  }
  return std::get<T>(it->second);
}

template <typename T>
const T& Kernel::Get(ObjectId id) const {
  return const_cast<Kernel*>(this)->Get<T>(id);
}

ObjectId Kernel::NewObject(Object object) {
  ObjectId id{next_object_++};
  objects_.emplace(id.value, std::move(object));
  return id;
}

Capability Kernel::Mint(ObjectId object, Rights rights, std::uint64_t badge) const {
  ObjectKind kind = KindOf(object);
  if (kind != ObjectKind::kEndpoint) {
    rights = rights & Rights::ReadWrite();
  }
  return Capability(object, kind, rights, badge);
}

ProcessRecord& Kernel::MutableProcess(ProcessId id) {
  auto it = processes_.find(id.value);
  if (it == processes_.end()) {
    throw Error(ErrorCode::kUnknownProcess, "no process " + std::to_string(id.value));
  }
  return it->second;
}

const ProcessRecord& Kernel::Process(ProcessId id) const {
  return const_cast<Kernel*>(this)->MutableProcess(id);
}

Kernel::CNodeObject& Kernel::CNodeOf(ProcessId id) {
  return Get<CNodeObject>(MutableProcess(id).cspace);
}

const Kernel::CNodeObject& Kernel::CNodeOf(ProcessId id) const {
  return Get<CNodeObject>(Process(id).cspace);
}

Kernel::VSpaceObject& Kernel::VSpaceObjectOf(ProcessId id) {
  return Get<VSpaceObject>(MutableProcess(id).vspace);
}

const Kernel::VSpaceObject& Kernel::VSpaceObjectOf(ProcessId id) const {
  return Get<VSpaceObject>(Process(id).vspace);
}

SlotIndex Kernel::Install(CNodeObject& cnode, const Capability& cap) {
  for (SlotIndex i = 0; i < cnode.slots.size(); ++i) {
    if (!cnode.slots[i]) {
      cnode.slots[i] = cap;
      return i;
    }
  }
  throw Error(ErrorCode::kResourceExhausted, "CNode full");
}

void Kernel::Deny(ProcessId caller, const std::string& operation, ErrorCode code,
                  const std::string& detail) {
  denials_.push_back(Denial{caller, operation, code});
  throw Error(code, operation + ": " + detail);
}

const Capability& Kernel::CapInSlot(ProcessId caller, SlotIndex slot, const char* op) {
  CNodeObject& cnode = CNodeOf(caller);
  if (slot >= cnode.slots.size() || !cnode.slots[slot]) {
    Deny(caller, op, ErrorCode::kAccessDenied,
         "empty slot " + std::to_string(slot));
  }
  return *cnode.slots[slot];
}

Rights Kernel::CapabilityRights(ProcessId caller, ObjectId object) const {
  Rights rights;
  for (const auto& slot : CNodeOf(caller).slots) {
    if (slot && slot->object() == object) rights = rights | slot->rights();
  }
  return rights;
}

Rights Kernel::FrameAuthority(ProcessId caller, ObjectId frame) const {
  Rights rights = CapabilityRights(caller, frame);
  for (const auto& [vpn, mapping] : VSpaceObjectOf(caller).pages) {
    if (mapping.frame == frame) rights = rights | mapping.rights;
  }
  return rights;
}

bool Kernel::HoldsKind(ProcessId caller, ObjectKind kind) const {
  for (const auto& slot : CNodeOf(caller).slots) {
    if (slot && slot->kind() == kind) return true;
  }
  return false;
}

bool Kernel::IsMappedAnywhere(ObjectId frame) const {
  for (const auto& [pid, record] : processes_) {
    for (const auto& [vpn, mapping] : Get<VSpaceObject>(record.vspace).pages) {
      if (mapping.frame == frame) return true;
    }
  }
  return false;
}

std::uint8_t* Kernel::MutablePageBytes(ObjectId frame) {
  FrameObject& f = Get<FrameObject>(frame);
  if (f.page.use_count() > 1) f.page = std::make_shared<Page>(*f.page);
  return f.page->bytes.data();
}

const std::uint8_t* Kernel::PageBytes(ObjectId frame) const {
  return Get<FrameObject>(frame).page->bytes.data();
}

void Kernel::MapImage(VSpaceObject& vspace, const std::vector<ObjectId>& frames,
                      std::uint64_t base) {
  std::uint64_t vpn = base / kPageSize;
  for (ObjectId f : frames) {
    vspace.pages[vpn++] = Mapping{f, Rights::ReadWrite(), false};
  }
}

std::vector<ObjectId> Kernel::AllocateFrames(ProcessId owner, std::size_t count) {
  std::vector<ObjectId> chosen;
  for (auto& [id, object] : objects_) {
    if (chosen.size() == count) break;
    auto* frame = std::get_if<FrameObject>(&object);
    if (frame == nullptr || frame->kernel_owned || frame->allocated) continue;
    ObjectId oid{id};
    if (!CapabilityRights(owner, oid).Covers(Rights::ReadWrite())) continue;
    if (IsMappedAnywhere(oid)) continue;
    chosen.push_back(oid);
  }
  if (chosen.size() < count) {
    throw Error(ErrorCode::kResourceExhausted,
                "need " + std::to_string(count) + " free frames, have " +
                    std::to_string(chosen.size()));
  }
  for (ObjectId f : chosen) {
    FrameObject& frame = Get<FrameObject>(f);
    frame.allocated = true;
    frame.page = std::make_shared<Page>();
  }
  return chosen;
}

// ---------------------------------------------------------------- boot

Kernel Kernel::Boot(BootToken, const KernelBootConfig& config) {
  Kernel k;
  k.protections_ = config.protections;

  for (std::size_t i = 0; i < std::max<std::size_t>(1, PagesFor(config.kernel_blob.size())); ++i) {
    auto page = std::make_shared<Page>();
    std::size_t begin = i * kPageSize;
    if (begin < config.kernel_blob.size()) {
      std::size_t n = std::min(kPageSize, config.kernel_blob.size() - begin);
      std::memcpy(page->bytes.data(), config.kernel_blob.data() + begin, n);
    }
    k.NewObject(FrameObject{std::move(page), true, true});
  }
  std::vector<ObjectId> user_frames;
  for (std::uint32_t i = 0; i < config.user_frames; ++i) {
    user_frames.push_back(k.NewObject(FrameObject{std::make_shared<Page>(), false, false}));
  }

  InitialProcessLayout layout;
  layout.code_offset = 0;
  layout.code_length = config.attest_code.size();
  layout.key_offset = RoundUpToPage(std::max<std::uint64_t>(1, layout.code_length));
  layout.key_length = config.key_material.size();
  layout.scratch_offset =
      layout.key_offset + RoundUpToPage(std::max<std::uint64_t>(1, layout.key_length));
  layout.scratch_length = kPageSize;
  std::uint64_t image_length = layout.scratch_offset + layout.scratch_length;
  std::size_t image_pages = PagesFor(image_length);
  if (image_pages > user_frames.size()) {
    throw Error(ErrorCode::kResourceExhausted,
                "initial process needs " + std::to_string(image_pages) +
                    " frames, only " + std::to_string(user_frames.size()) +
                    " available");
  }

  ProcessRecord record;
  record.id = ProcessId{0};
  record.name = config.initial_name;
  record.tcb = k.NewObject(TcbObject{record.id, kMaxPriority, {}, false});
  record.cspace = k.NewObject(CNodeObject{std::vector<std::optional<Capability>>(
      config.user_frames + 256)});
  record.vspace = k.NewObject(VSpaceObject{});
  record.fault_endpoint = k.NewObject(EndpointObject{});
  k.untyped_ = k.NewObject(UntypedObject{});
  record.image_length = image_length;
  record.image_frames.assign(user_frames.begin(), user_frames.begin() + image_pages);
  k.processes_.emplace(0, record);

  CNodeObject& cnode = k.Get<CNodeObject>(record.cspace);
  k.Install(cnode, k.Mint(record.cspace, Rights::ReadWrite()));
  k.Install(cnode, k.Mint(record.fault_endpoint, Rights::All()));
  k.Install(cnode, k.Mint(record.tcb, Rights::ReadWrite()));
  k.Install(cnode, k.Mint(record.vspace, Rights::ReadWrite()));
  k.Install(cnode, k.Mint(k.untyped_, Rights::ReadWrite()));
  for (ObjectId f : user_frames) k.Install(cnode, k.Mint(f, Rights::ReadWrite()));

  for (ObjectId f : record.image_frames) k.Get<FrameObject>(f).allocated = true;
  auto place = [&](std::uint64_t offset, ByteView data) {
    for (std::size_t i = 0; i < data.size();) {
      std::uint64_t at = offset + i;
      std::size_t page = at / kPageSize;
      std::size_t within = at % kPageSize;
      std::size_t n = std::min(kPageSize - within, data.size() - i);
      std::memcpy(k.MutablePageBytes(record.image_frames[page]) + within,
                  data.data() + i, n);
      i += n;
    }
  };
  place(layout.code_offset, config.attest_code);
  place(layout.key_offset, config.key_material);
  k.MapImage(k.Get<VSpaceObject>(record.vspace), record.image_frames, record.image_base);
  k.initial_layout_ = layout;
  return k;
}

// ---------------------------------------------------------------- processes

ProcessId Kernel::Spawn(ProcessId parent, const std::string& name, ByteView image,
                        std::uint8_t priority, std::span<const Capability> granted) {
  const ProcessRecord& parent_record = Process(parent);
  if (!HoldsKind(parent, ObjectKind::kUntyped)) {
    Deny(parent, "Spawn", ErrorCode::kAccessDenied, "caller holds no untyped memory");
  }
  std::uint8_t parent_priority = Get<TcbObject>(parent_record.tcb).priority;
  if (priority > parent_priority) {
    Deny(parent, "Spawn", ErrorCode::kPriorityEscalation,
         "child priority " + std::to_string(priority) + " above parent " +
             std::to_string(parent_priority));
  }
  const CNodeObject& parent_cnode = CNodeOf(parent);
  for (const Capability& cap : granted) {
    bool held = std::any_of(parent_cnode.slots.begin(), parent_cnode.slots.end(),
                            [&](const std::optional<Capability>& slot) {
                              return slot && slot->object() == cap.object() &&
                                     slot->badge() == cap.badge() &&
                                     slot->rights().Covers(cap.rights());
                            });
    if (!held) {
      Deny(parent, "Spawn", ErrorCode::kGrantWithoutCapability,
           "parent does not hold granted capability to object " +
               std::to_string(cap.object().value));
    }
  }
  std::size_t free_slots = std::count(parent_cnode.slots.begin(), parent_cnode.slots.end(),
                                      std::nullopt);
  if (free_slots < 4 || granted.size() + 2 > kChildCNodeSlots) {
    throw Error(ErrorCode::kResourceExhausted, "no room for spawn capabilities");
  }

  std::vector<ObjectId> frames =
      AllocateFrames(parent, std::max<std::size_t>(1, PagesFor(image.size())));
  ProcessRecord record;
  record.id = ProcessId{processes_.rbegin()->first + 1};
  record.name = name;
  record.tcb = NewObject(TcbObject{record.id, priority, {}, false});
  record.cspace = NewObject(CNodeObject{std::vector<std::optional<Capability>>(kChildCNodeSlots)});
  record.vspace = NewObject(VSpaceObject{});
  record.fault_endpoint = NewObject(EndpointObject{});
  record.image_length = image.size();
  record.image_frames = frames;

  for (std::size_t i = 0; i < frames.size(); ++i) {
    std::size_t begin = i * kPageSize;
    std::size_t n = begin < image.size() ? std::min(kPageSize, image.size() - begin) : 0;
    if (n > 0) std::memcpy(MutablePageBytes(frames[i]), image.data() + begin, n);
  }
  MapImage(Get<VSpaceObject>(record.vspace), frames, record.image_base);

  CNodeObject& child_cnode = Get<CNodeObject>(record.cspace);
  Install(child_cnode, Mint(record.cspace, Rights::ReadWrite()));
  Install(child_cnode, Mint(record.fault_endpoint, Right::kWrite));
  for (const Capability& cap : granted) Install(child_cnode, cap);

  CNodeObject& parent_cnode_mut = CNodeOf(parent);
  Install(parent_cnode_mut, Mint(record.tcb, Rights::ReadWrite()));
  Install(parent_cnode_mut, Mint(record.cspace, Rights::ReadWrite()));
  Install(parent_cnode_mut, Mint(record.vspace, Rights::ReadWrite()));
  Install(parent_cnode_mut, Mint(record.fault_endpoint, Right::kRead));

  ProcessId id = record.id;
  processes_.emplace(id.value, std::move(record));
  return id;
}

// ---------------------------------------------------------------- memory

Bytes Kernel::ReadMemory(ProcessId caller, ObjectId frame, std::size_t offset,
                         std::size_t length) {
  Process(caller);
  if (KindOf(frame) != ObjectKind::kFrame) {
    Deny(caller, "ReadMemory", ErrorCode::kAccessDenied, "not a frame");
  }
  if (protections_.capability_checks &&
      !FrameAuthority(caller, frame).Has(Right::kRead)) {
    Deny(caller, "ReadMemory", ErrorCode::kAccessDenied,
         "no read authority over frame " + std::to_string(frame.value));
  }
  if (offset > kPageSize || length > kPageSize - offset) {
    throw Error(ErrorCode::kRangeOutOfBounds, "access beyond frame");
  }
  const std::uint8_t* p = PageBytes(frame) + offset;
  return Bytes(p, p + length);
}

void Kernel::WriteMemory(ProcessId caller, ObjectId frame, std::size_t offset,
                         ByteView data) {
  Process(caller);
  if (KindOf(frame) != ObjectKind::kFrame) {
    Deny(caller, "WriteMemory", ErrorCode::kAccessDenied, "not a frame");
  }
  if (protections_.capability_checks &&
      !FrameAuthority(caller, frame).Has(Right::kWrite)) {
    Deny(caller, "WriteMemory", ErrorCode::kAccessDenied,
         "no write authority over frame " + std::to_string(frame.value));
  }
  if (offset > kPageSize || data.size() > kPageSize - offset) {
    throw Error(ErrorCode::kRangeOutOfBounds, "access beyond frame");
  }
  if (!data.empty()) std::memcpy(MutablePageBytes(frame) + offset, data.data(), data.size());
}

std::pair<ObjectId, std::size_t> Kernel::Translate(ProcessId caller, std::uint64_t vaddr,
                                                   Right right, const char* op) {
  const auto& pages = VSpaceObjectOf(caller).pages;
  auto it = pages.find(vaddr / kPageSize);
  if (it == pages.end() || !it->second.rights.Has(right)) {
    Deny(caller, op, ErrorCode::kAccessDenied, "address not mapped with needed right");
  }
  return {it->second.frame, static_cast<std::size_t>(vaddr % kPageSize)};
}

Bytes Kernel::ReadVirtual(ProcessId caller, std::uint64_t vaddr, std::size_t length) {
  Bytes out;
  out.reserve(length);
  while (out.size() < length) {
    auto [frame, within] = Translate(caller, vaddr + out.size(), Right::kRead, "ReadVirtual");
    std::size_t n = std::min(kPageSize - within, length - out.size());
    const std::uint8_t* p = PageBytes(frame) + within;
    out.insert(out.end(), p, p + n);
  }
  return out;
}

void Kernel::WriteVirtual(ProcessId caller, std::uint64_t vaddr, ByteView data) {
  // Check the whole range before touching anything.
  for (std::size_t done = 0; done < data.size();) {
    auto [frame, within] = Translate(caller, vaddr + done, Right::kWrite, "WriteVirtual");
    done += std::min(kPageSize - within, data.size() - done);
  }
  for (std::size_t done = 0; done < data.size();) {
    auto [frame, within] = Translate(caller, vaddr + done, Right::kWrite, "WriteVirtual");
    std::size_t n = std::min(kPageSize - within, data.size() - done);
    std::memcpy(MutablePageBytes(frame) + within, data.data() + done, n);
    done += n;
  }
}

// ---------------------------------------------------------------- capabilities

SlotIndex Kernel::TransferCapability(ProcessId sender, SlotIndex endpoint_slot,
                                     SlotIndex cap_slot, ProcessId receiver) {
  Capability endpoint = CapInSlot(sender, endpoint_slot, "TransferCapability");
  if (endpoint.kind() != ObjectKind::kEndpoint) {
    Deny(sender, "TransferCapability", ErrorCode::kAccessDenied, "slot is not an endpoint");
  }
  if (!endpoint.rights().Has(Right::kGrant)) {
    Deny(sender, "TransferCapability", ErrorCode::kNoGrantRight,
         "endpoint capability lacks grant");
  }
  Capability cap = CapInSlot(sender, cap_slot, "TransferCapability");
  if (!HasProcess(receiver) ||
      !CapabilityRights(receiver, endpoint.object()).Has(Right::kRead)) {
    Deny(sender, "TransferCapability", ErrorCode::kAccessDenied,
         "receiver is not listening on the endpoint");
  }
  return Install(CNodeOf(receiver), cap);
}

SlotIndex Kernel::CopyCapability(ProcessId caller, SlotIndex source, Rights mask) {
  Capability cap = CapInSlot(caller, source, "CopyCapability");
  Capability derived(cap.object(), cap.kind(), cap.rights() & mask, cap.badge());
  return Install(CNodeOf(caller), derived);
}

void Kernel::DeleteCapability(ProcessId caller, SlotIndex slot) {
  CapInSlot(caller, slot, "DeleteCapability");
  CNodeOf(caller).slots[slot].reset();
}

SlotIndex Kernel::CreateEndpoint(ProcessId caller) {
  if (!HoldsKind(caller, ObjectKind::kUntyped)) {
    Deny(caller, "CreateEndpoint", ErrorCode::kAccessDenied, "caller holds no untyped memory");
  }
  CNodeObject& cnode = CNodeOf(caller);
  if (std::none_of(cnode.slots.begin(), cnode.slots.end(),
                   [](const auto& s) { return !s.has_value(); })) {
    throw Error(ErrorCode::kResourceExhausted, "CNode full");
  }
  ObjectId ep = NewObject(EndpointObject{});
  return Install(cnode, Mint(ep, Rights::All()));
}

// ---------------------------------------------------------------- vspace

void Kernel::MapFrame(ProcessId caller, ObjectId frame, std::uint64_t vaddr, Rights rights) {
  Process(caller);
  if (vaddr % kPageSize != 0) {
    throw Error(ErrorCode::kInvalidInput, "unaligned mapping address");
  }
  rights = rights & Rights::ReadWrite();
  if (KindOf(frame) != ObjectKind::kFrame ||
      !CapabilityRights(caller, frame).Covers(rights) || rights.empty()) {
    Deny(caller, "MapFrame", ErrorCode::kAccessDenied,
         "no frame capability with " + RightsString(rights));
  }
  auto& pages = VSpaceObjectOf(caller).pages;
  if (pages.contains(vaddr / kPageSize)) {
    throw Error(ErrorCode::kInvalidInput, "address already mapped");
  }
  pages[vaddr / kPageSize] = Mapping{frame, rights, false};
}

void Kernel::UnmapPage(ProcessId caller, std::uint64_t vaddr) {
  auto& pages = VSpaceObjectOf(caller).pages;
  auto it = pages.find(vaddr / kPageSize);
  if (it == pages.end() || it->second.foreign) {
    throw Error(ErrorCode::kInvalidInput, "no unmappable page at address");
  }
  pages.erase(it);
}

ForeignView Kernel::MapForeignFrames(ProcessId caller, ProcessId target,
                                     std::uint64_t first, std::uint64_t last) {
  Process(caller);
  if (!HasProcess(target)) {
    throw Error(ErrorCode::kUnknownProcess, "no process " + std::to_string(target.value));
  }
  const ProcessRecord& t = Process(target);
  if (last < first || last >= t.image_length) {
    throw Error(ErrorCode::kRangeOutOfBounds,
                "range [" + std::to_string(first) + "," + std::to_string(last) +
                    "] outside image of " + std::to_string(t.image_length) + " bytes");
  }
  std::size_t first_page = first / kPageSize;
  std::size_t last_page = last / kPageSize;
  for (std::size_t p = first_page; p <= last_page; ++p) {
    if (!CapabilityRights(caller, t.image_frames[p]).Has(Right::kRead)) {
      Deny(caller, "MapForeignFrames", ErrorCode::kAccessDenied,
           "no read capability for frame " + std::to_string(t.image_frames[p].value));
    }
  }
  std::size_t count = last_page - first_page + 1;
  auto& pages = VSpaceObjectOf(caller).pages;
  std::uint64_t base_vpn = kForeignWindowBase / kPageSize;
  for (auto it = pages.lower_bound(base_vpn); it != pages.end() && it->first < base_vpn + count;
       it = pages.lower_bound(base_vpn)) {
    base_vpn = it->first + 1;
  }
  std::vector<ForeignView::ChunkRef> chunks;
  chunks.reserve(count);
  for (std::size_t p = first_page; p <= last_page; ++p) {
    std::uint64_t vpn = base_vpn + (p - first_page);
    pages[vpn] = Mapping{t.image_frames[p], Rights::ReadOnly(), true};
    std::uint64_t lo = std::max<std::uint64_t>(first, p * kPageSize);
    std::uint64_t hi = std::min<std::uint64_t>(last, (p + 1) * kPageSize - 1);
    chunks.push_back({vpn, static_cast<std::uint32_t>(lo % kPageSize),
                      static_cast<std::uint32_t>(hi - lo + 1)});
  }
  return ForeignView(this, caller, base_vpn * kPageSize, std::move(chunks),
                     last - first + 1);
}

void Kernel::ReleaseForeignWindow(ProcessId caller, std::uint64_t window_base,
                                  std::size_t pages) {
  if (!HasProcess(caller)) return;
  auto& map = VSpaceObjectOf(caller).pages;
  for (std::size_t i = 0; i < pages; ++i) {
    auto it = map.find(window_base / kPageSize + i);
    if (it != map.end() && it->second.foreign) map.erase(it);
  }
}

// ---------------------------------------------------------------- TCBs

Kernel::TcbObject& Kernel::TcbFor(ProcessId caller, ObjectId tcb, Right right,
                                  const char* op) {
  Process(caller);
  auto it = objects_.find(tcb.value);
  if (it == objects_.end() || !std::holds_alternative<TcbObject>(it->second) ||
      !CapabilityRights(caller, tcb).Has(right)) {
    Deny(caller, op, ErrorCode::kAccessDenied,
         "no TCB capability with " + RightsString(right));
  }
  return std::get<TcbObject>(it->second);
}

void Kernel::SetPriority(ProcessId caller, ObjectId tcb, std::uint8_t priority) {
  TcbObject& t = TcbFor(caller, tcb, Right::kWrite, "SetPriority");
  if (protections_.priority_monotonic && priority > t.priority) {
    Deny(caller, "SetPriority", ErrorCode::kPriorityEscalation,
         "priority may only decrease (" + std::to_string(t.priority) + " -> " +
             std::to_string(priority) + ")");
  }
  t.priority = priority;
}

Registers Kernel::ReadRegisters(ProcessId caller, ObjectId tcb) {
  return TcbFor(caller, tcb, Right::kRead, "ReadRegisters").registers;
}

void Kernel::WriteRegisters(ProcessId caller, ObjectId tcb, const Registers& registers) {
  TcbFor(caller, tcb, Right::kWrite, "WriteRegisters").registers = registers;
}

void Kernel::Suspend(ProcessId caller, ObjectId tcb) {
  TcbFor(caller, tcb, Right::kWrite, "Suspend").suspended = true;
}

// ---------------------------------------------------------------- scheduling

void Kernel::SetRunnable(ProcessId process, bool runnable) {
  MutableProcess(process).runnable = runnable;
}

void Kernel::SetBehavior(ProcessId process, Behavior behavior) {
  Process(process);
  behaviors_[process.value] = std::move(behavior);
}

std::optional<ProcessId> Kernel::ScheduleNext() {
  std::optional<std::uint8_t> best;
  for (const auto& [id, record] : processes_) {
    const TcbObject& tcb = Get<TcbObject>(record.tcb);
    if (!record.runnable || tcb.suspended) continue;
    if (!best || tcb.priority > *best) best = tcb.priority;
  }
  if (!best) return std::nullopt;
  auto last = last_scheduled_.find(*best);
  std::optional<std::uint32_t> first_candidate, next_candidate;
  for (const auto& [id, record] : processes_) {
    const TcbObject& tcb = Get<TcbObject>(record.tcb);
    if (!record.runnable || tcb.suspended || tcb.priority != *best) continue;
    if (!first_candidate) first_candidate = id;
    if (!next_candidate && (last == last_scheduled_.end() || id > last->second)) {
      next_candidate = id;
    }
  }
  std::uint32_t chosen = next_candidate ? *next_candidate : *first_candidate;
  last_scheduled_[*best] = chosen;
  return ProcessId{chosen};
}

std::optional<ProcessId> Kernel::Step() {
  std::optional<ProcessId> next = ScheduleNext();
  if (!next) return std::nullopt;
  if (trace_enabled_) trace_.push_back(*next);
  auto it = behaviors_.find(next->value);
  if (it != behaviors_.end() && it->second) {
    Behavior behavior = it->second;
    behavior(*this, *next);
  }
  return next;
}

std::size_t Kernel::RunUntilScheduled(ProcessId process) {
  if (Get<TcbObject>(Process(process).tcb).suspended) {
    throw Error(ErrorCode::kInvalidInput, "process is suspended");
  }
  std::size_t foreign = 0;
  for (std::uint64_t i = 0; i < kMaxSchedulerSteps; ++i) {
    std::optional<ProcessId> next = ScheduleNext();
    if (!next) {
      throw Error(ErrorCode::kInvalidInput, "process is not runnable");
    }
    if (trace_enabled_) trace_.push_back(*next);
    if (*next == process) return foreign;
    ++foreign;
    auto it = behaviors_.find(next->value);
    if (it != behaviors_.end() && it->second) {
      Behavior behavior = it->second;
      behavior(*this, *next);
    }
  }
  throw Error(ErrorCode::kResourceExhausted, "process starved by scheduler");
}

// ---------------------------------------------------------------- observation

std::vector<ProcessId> Kernel::ProcessIds() const {
  std::vector<ProcessId> ids;
  for (const auto& [id, record] : processes_) ids.push_back(ProcessId{id});
  return ids;
}

std::vector<std::optional<Capability>> Kernel::CSpaceOf(ProcessId id) const {
  return CNodeOf(id).slots;
}

std::optional<Capability> Kernel::CapabilityAt(ProcessId id, SlotIndex slot) const {
  const auto& slots = CNodeOf(id).slots;
  if (slot >= slots.size()) return std::nullopt;
  return slots[slot];
}

std::vector<std::pair<std::uint64_t, Mapping>> Kernel::VSpaceOf(ProcessId id) const {
  const auto& pages = VSpaceObjectOf(id).pages;
  return {pages.begin(), pages.end()};
}

std::uint8_t Kernel::PriorityOf(ProcessId id) const {
  return Get<TcbObject>(Process(id).tcb).priority;
}

ObjectKind Kernel::KindOf(ObjectId object) const {
  auto it = objects_.find(object.value);
  if (it == objects_.end()) {
    throw Error(ErrorCode::kInvalidInput, "no such object " + std::to_string(object.value));
  }
  return static_cast<ObjectKind>(it->second.index());
}

std::vector<ObjectId> Kernel::Frames() const {
  std::vector<ObjectId> frames;
  for (const auto& [id, object] : objects_) {
    if (std::holds_alternative<FrameObject>(object)) frames.push_back(ObjectId{id});
  }
  return frames;
}

bool Kernel::IsKernelFrame(ObjectId frame) const {
  return Get<FrameObject>(frame).kernel_owned;
}

ByteView Kernel::InspectFrame(ObjectId frame) const {
  return ByteView(PageBytes(frame), kPageSize);
}

}  // namespace hydra::platform
