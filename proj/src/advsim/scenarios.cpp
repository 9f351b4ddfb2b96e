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

#include "hydra/advsim/scenarios.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "hydra/platform/audit.hpp"
#include "hydra/proto/service.hpp"
#include "hydra/sim/testbed.hpp"

namespace hydra::advsim {
namespace {

using platform::Kernel;
using platform::ProcessId;

constexpr std::uint8_t kAppPriority = 50;

class Transcript {
 public:
  explicit Transcript(ScenarioResult& result) : result_(result) {}

  template <typename... Args>
  void operator()(const Args&... parts) {
    std::ostringstream line;
    (line << ... << parts);
    result_.transcript.push_back(line.str());
  }

 private:
  ScenarioResult& result_;
};

std::vector<platform::ProcessSpec> Workload(std::uint64_t seed) {
  return {
      {"sensor", sim::SeededBytes(seed + 1, 8 * 1024), 40},
      {"app", sim::SeededBytes(seed + 2, 16 * 1024), kAppPriority},
      {"logger", sim::SeededBytes(seed + 3, 4 * 1024), 30},
  };
}

sim::Testbed Honest(const ScenarioOptions& options) {
  sim::TestbedOptions o;
  o.processes = Workload(options.seed);
  o.protections = options.protections;
  o.seed = options.seed;
  o.clock_start_ms = 10'000;
  o.window_ms = 2'000;
  return sim::MakeTestbed(o);
}

std::string Describe(const Error& e) { return std::string(ErrorCodeName(e.code())); }

// Stamps and sends requests like an honest verifier would.
struct Verifier {
  sim::Testbed& tb;
  proto::ProverService service{*tb.device};

  Bytes Frame(std::uint32_t pid, std::uint64_t first, std::uint64_t last) {
    tb.counter->Advance(1);
    proto::RequestHeader h{tb.counter->NowMs(), pid, first, last};
    return proto::Encode(proto::BuildRequest(tb.keys, h));
  }

  proto::VerifyResult Attest(std::size_t user, const Bytes& expected) {
    tb.counter->Advance(1);
    proto::LoopbackTransport wire([this](ByteView f) { return service.HandleFrame(f); });
    return proto::VerifierAttest(wire, tb.keys, tb.user(user).value, 0, expected.size() - 1,
                                 expected, tb.counter->NowMs());
  }
};

// ------------------------------------------------------------------ scenarios

void ForgeRequest(const ScenarioOptions& options, ScenarioResult& r) {
  Transcript log(r);
  sim::Testbed tb = Honest(options);
  Verifier verifier{tb};
  std::mt19937_64 rng(options.seed);
  int responses = 0;
  std::size_t tag_length = tb.keys.spec().tag_length;
  for (int i = 0; i < options.forge_attempts; ++i) {
    proto::RequestHeader h{tb.counter->NowMs() + 1 + rng() % 1000,
                           static_cast<std::uint32_t>(rng() % 4), 0, rng() % 4096};
    Bytes guess = sim::SeededBytes(rng(), tag_length);
    if (verifier.service.HandleFrame(proto::Encode(proto::AttestationRequest{h, guess}))) {
      ++responses;
    }
  }
  log("forged ", options.forge_attempts, " requests with guessed C_R: ", responses,
      " responses");
  auto honest = verifier.Attest(0, Workload(options.seed)[0].image);
  log("honest request afterwards: ", proto::VerdictName(honest.verdict));
  r.passed = responses == 0 && honest.verdict == proto::Verdict::kTrusted;
}

void ReplayRequest(const ScenarioOptions& options, ScenarioResult& r) {
  Transcript log(r);
  sim::Testbed tb = Honest(options);
  Verifier verifier{tb};
  std::mt19937_64 rng(options.seed);
  auto& svc = verifier.service;
  std::uint64_t last = 1000 + rng() % 3000;

  Bytes first = verifier.Frame(1, 0, last);
  bool served = svc.HandleFrame(first).has_value();
  log("captured request served once: ", served ? "yes" : "no");
  tb.counter->Advance(5);
  bool replayed = svc.HandleFrame(first).has_value();
  log("immediate replay: ", replayed ? "answered" : "dropped");

  Bytes second = verifier.Frame(1, 0, last);
  Bytes third = verifier.Frame(1, 0, last);
  bool third_ok = svc.HandleFrame(third).has_value();
  bool reordered = svc.HandleFrame(second).has_value();
  log("newer request served: ", third_ok ? "yes" : "no",
      "; older one delivered late: ", reordered ? "answered" : "dropped");

  Bytes delayed = verifier.Frame(1, 0, last);
  tb.counter->Advance(tb.manifest.window_ms + 1 + rng() % 1000);
  bool late = svc.HandleFrame(delayed).has_value();
  log("request delayed past the window: ", late ? "answered" : "dropped");
  r.passed = served && third_ok && !replayed && !reordered && !late;
}

void MalwareInfection(const ScenarioOptions& options, ScenarioResult& r) {
  Transcript log(r);
  sim::Testbed tb = Honest(options);
  Kernel& k = tb.device->kernel();
  ProcessId app = tb.user(1);
  const Bytes clean = Workload(options.seed)[1].image;
  std::mt19937_64 rng(options.seed);
  std::uint64_t offset = rng() % clean.size();
  std::uint8_t value = static_cast<std::uint8_t>(clean[offset] ^ (1 + rng() % 255));
  k.SetBehavior(app, [offset, value](Kernel& kernel, ProcessId self) {
    kernel.WriteVirtual(self, platform::kImageBase + offset, Bytes{value});
  });
  for (int i = 0; i < 6; ++i) k.Step();
  log("malware rewrote byte ", offset, " of app");
  Verifier verifier{tb};
  auto result = verifier.Attest(1, clean);
  log("verifier verdict: ", proto::VerdictName(result.verdict));
  if (result.report) log("report tag: ", ToHex(result.report->tag));
  r.passed = result.verdict == proto::Verdict::kModified;
}

void KeySteal(const ScenarioOptions& options, ScenarioResult& r) {
  Transcript log(r);
  sim::TestbedOptions o;
  o.processes = Workload(options.seed);
  o.protections = options.protections;
  o.seed = options.seed;
  std::optional<platform::ProcessSpec> misgranted;
  if (options.misgrant_key_frame) {
    misgranted = o.processes[1];
    o.processes.erase(o.processes.begin() + 1);
  }
  sim::Testbed tb = sim::MakeTestbed(o);
  Kernel& k = tb.device->kernel();
  ProcessId root = k.initial_process();
  const auto& layout = k.initial_layout();
  platform::ObjectId key_frame =
      k.Process(root).image_frames[layout.key_offset / platform::kPageSize];
  ProcessId app = tb.user(1);
  if (misgranted) {
    auto slots = k.CSpaceOf(root);
    std::vector<platform::Capability> leak;
    for (const auto& s : slots) {
      if (s && s->object() == key_frame) leak.push_back(*s);
    }
    app = k.Spawn(root, misgranted->name, misgranted->image, misgranted->priority, leak);
    log("fixture: app spawned holding a capability to the key frame");
  }
  Bytes key(tb.manifest.attestation_key);
  std::vector<platform::ObjectId> targets = platform::AttestationPrivateFrames(k);
  const auto& att = k.Process(root);
  std::vector<platform::ObjectId> kernel_objects{att.tcb, att.cspace, att.vspace,
                                                 att.fault_endpoint};

  int attempts = 0, denied = 0, leaked = 0;
  auto attempt = [&](auto&& call) {
    ++attempts;
    try {
      call();
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kAccessDenied) ++denied;
    }
  };
  auto saw = [&](const Bytes& got) {
    if (std::search(got.begin(), got.end(), key.begin(), key.end()) != got.end()) ++leaked;
  };
  for (platform::ObjectId f : targets) {
    attempt([&] { saw(k.ReadMemory(app, f, 0, platform::kPageSize)); });
    attempt([&] { k.WriteMemory(app, f, 0, Bytes{0}); });
    attempt([&] { k.MapFrame(app, f, 0x40000000, platform::Rights::ReadOnly()); });
    attempt([&] {
      k.MapFrame(app, f, 0x40001000, platform::Rights::ReadWrite());
    });
  }
  attempt([&] {
    auto view = k.MapForeignFrames(app, root, 0, att.image_length - 1);
    saw(view.Copy());
  });
  for (platform::ObjectId obj : kernel_objects) {
    attempt([&] { k.ReadRegisters(app, obj); });
    attempt([&] { k.WriteRegisters(app, obj, {}); });
    attempt([&] { k.ReadMemory(app, obj, 0, 1); });
  }
  attempt([&] { k.CreateEndpoint(app); });
  attempt([&] { k.Spawn(app, "helper", Bytes{1}, 1, {}); });
  // Whatever slipped through a mapping would now be readable.
  for (std::uint64_t va : {0x40000000ULL, 0x40001000ULL}) {
    try {
      saw(k.ReadVirtual(app, va, platform::kPageSize));
    } catch (const Error&) {
    }
  }
  auto audit = platform::AuditConfiguration(k);
  log(attempts, " calls toward attestation objects: ", denied, " denied");
  log("key bytes observed: ", leaked);
  std::string summary = audit.Summary();
  std::replace(summary.begin(), summary.end(), '\n', ' ');
  while (!summary.empty() && summary.back() == ' ') summary.pop_back();
  log("configuration audit: ", audit.clean() ? "clean" : summary);
  r.passed = denied == attempts && leaked == 0 && audit.clean();
}

void PriorityAttack(const ScenarioOptions& options, ScenarioResult& r) {
  Transcript log(r);
  sim::TestbedOptions o;
  o.processes = Workload(options.seed);
  const platform::ProcessSpec app_spec = o.processes[1];
  o.processes.erase(o.processes.begin() + 1);
  o.protections = options.protections;
  o.seed = options.seed;
  o.clock_start_ms = 10'000;
  sim::Testbed tb = sim::MakeTestbed(o);
  Kernel& k = tb.device->kernel();
  ProcessId root = k.initial_process();

  // The app is trusted with its own TCB: the strongest position to start from.
  platform::SlotIndex ep = k.CreateEndpoint(root);
  std::vector<platform::Capability> grant{*k.CapabilityAt(root, ep)};
  ProcessId app = k.Spawn(root, app_spec.name, app_spec.image, app_spec.priority, grant);
  platform::ObjectId app_tcb = k.Process(app).tcb;
  platform::SlotIndex tcb_slot = 0;
  auto slots = k.CSpaceOf(root);
  for (platform::SlotIndex i = 0; i < slots.size(); ++i) {
    if (slots[i] && slots[i]->object() == app_tcb) tcb_slot = i;
  }
  k.TransferCapability(root, ep, tcb_slot, app);

  std::mt19937_64 rng(options.seed);
  bool escalation_refused = false;
  for (std::uint8_t target : {static_cast<std::uint8_t>(51 + rng() % 200), std::uint8_t{254},
                              std::uint8_t{255}}) {
    try {
      k.SetPriority(app, app_tcb, target);
      log("set_priority(", int(target), "): accepted");
    } catch (const Error& e) {
      log("set_priority(", int(target), "): ", Describe(e));
      escalation_refused = escalation_refused || e.code() == ErrorCode::kPriorityEscalation;
    }
  }
  try {
    k.Spawn(app, "clone", Bytes{0}, 255, {});
    log("spawn at 255: accepted");
  } catch (const Error& e) {
    log("spawn at 255: ", Describe(e));
  }
  k.SetBehavior(app, [](Kernel&, ProcessId) {});
  k.ClearTrace();
  Verifier verifier{tb};
  bool served = verifier.service.HandleFrame(verifier.Frame(1, 0, 100)).has_value();
  bool uninterrupted = true;
  for (ProcessId p : k.trace()) uninterrupted = uninterrupted && p == root;
  log("app priority now ", int(k.PriorityOf(app)), "; attestation ",
      served ? "completed" : "failed", uninterrupted ? " uninterrupted" : " with interleaving");
  r.passed = escalation_refused && k.PriorityOf(app) < k.PriorityOf(root) && served &&
             uninterrupted;
}

void EvilBoot(const ScenarioOptions& options, ScenarioResult& r) {
  Transcript log(r);
  crypto::SigningKey vendor = sim::VendorKeyFor(options.seed);
  boot::FusedRom rom = boot::FusedRom::Burn(vendor.public_key());
  Bytes kernel = sim::KernelBlobFor(options.seed);
  Bytes attest = sim::AttestCodeFor(options.seed);
  boot::BootImage honest = boot::BootImage::Build(kernel, attest, vendor);
  boot::Provisioning prov{sim::SeededBytes(options.seed, 16), 32, options.protections};
  std::mt19937_64 rng(options.seed);

  struct Variant {
    std::string name;
    Bytes packed;
  };
  std::vector<Variant> variants;
  {
    boot::BootImage evil = honest;
    evil.kernel_blob[rng() % evil.kernel_blob.size()] ^= 0x5a;
    variants.push_back({"patched kernel", evil.Pack()});
  }
  {
    boot::BootImage evil = honest;
    evil.attest_blob[rng() % evil.attest_blob.size()] ^= 0x01;
    variants.push_back({"patched attestation process", evil.Pack()});
  }
  {
    Bytes bad_kernel = kernel;
    bad_kernel[0] ^= 0xff;
    variants.push_back({"attacker-signed image",
                        boot::BootImage::Build(bad_kernel, attest,
                                               sim::VendorKeyFor(options.seed + 1000))
                            .Pack()});
  }
  bool all_refused = true;
  for (const Variant& v : variants) {
    try {
      boot::FullBoot(rom, v.packed, prov);
      log(v.name, ": booted");
      all_refused = false;
    } catch (const boot::BootRefused& e) {
      log(v.name, ": refused (", boot::BootFailureName(e.reason()), ")");
    }
  }
  bool honest_boots = true;
  try {
    boot::FullBoot(rom, honest.Pack(), prov);
  } catch (const Error&) {
    honest_boots = false;
  }
  log("vendor image: ", honest_boots ? "booted" : "refused");
  r.passed = all_refused && honest_boots;
}

void TcbTamper(const ScenarioOptions& options, ScenarioResult& r) {
  Transcript log(r);
  sim::Testbed tb = Honest(options);
  Kernel& k = tb.device->kernel();
  ProcessId root = k.initial_process();
  ProcessId app = tb.user(1);
  platform::ObjectId att_tcb = k.Process(root).tcb;

  // Try the TCB by id and through any TCB capability the app happens to hold.
  std::vector<platform::ObjectId> handles{att_tcb};
  for (const auto& s : k.CSpaceOf(app)) {
    if (s && s->kind() == platform::ObjectKind::kTcb) handles.push_back(s->object());
  }
  int attempts = 0, denied = 0;
  auto attempt = [&](const char* what, auto&& call) {
    ++attempts;
    try {
      call();
      log(what, ": succeeded");
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kAccessDenied) ++denied;
      log(what, ": ", Describe(e));
    }
  };
  for (platform::ObjectId tcb : handles) {
    attempt("read attestation registers", [&] { k.ReadRegisters(app, tcb); });
    attempt("redirect attestation entry point",
            [&] { k.WriteRegisters(app, tcb, {0xdead, 0, 0, 0}); });
    attempt("lower attestation priority", [&] { k.SetPriority(app, tcb, 0); });
    attempt("suspend attestation", [&] { k.Suspend(app, tcb); });
  }
  bool served = false;
  try {
    Verifier verifier{tb};
    served = verifier.Attest(0, Workload(options.seed)[0].image).verdict ==
             proto::Verdict::kTrusted;
  } catch (const Error& e) {
    log("attestation aborted: ", Describe(e));
  }
  log("attestation afterwards: ", served ? "TRUSTED" : "not served");
  r.passed = denied == attempts && served;
}

}  // namespace

std::string_view ScenarioName(Scenario scenario) {
  switch (scenario) {
    case Scenario::kForgeRequest: return "forge_request";
    case Scenario::kReplayRequest: return "replay_request";
    case Scenario::kMalwareInfection: return "malware_infection";
    case Scenario::kKeySteal: return "key_steal";
    case Scenario::kPriorityAttack: return "priority_attack";
    case Scenario::kEvilBoot: return "evil_boot";
    case Scenario::kTcbTamper: return "tcb_tamper";
  }
  return "?";
}

std::optional<Scenario> ParseScenario(std::string_view name) {
  for (Scenario s : kAllScenarios) {
    if (ScenarioName(s) == name) return s;
  }
  return std::nullopt;
}

Protections WeakenedFor(Scenario scenario) {
  Protections p;
  switch (scenario) {
    case Scenario::kForgeRequest: p.request_authentication = false; break;
    case Scenario::kReplayRequest: p.timestamp_monotonic = false; break;
    case Scenario::kMalwareInfection: p.live_measurement = false; break;
    case Scenario::kKeySteal: p.capability_checks = false; break;
    case Scenario::kPriorityAttack: p.priority_monotonic = false; break;
    case Scenario::kEvilBoot: p.boot_verification = false; break;
    case Scenario::kTcbTamper: p.tcb_isolation = false; break;
  }
  return p;
}

ScenarioResult RunScenario(Scenario scenario, const ScenarioOptions& options) {
  ScenarioResult result{scenario, false, {}};
  switch (scenario) {
    case Scenario::kForgeRequest: ForgeRequest(options, result); break;
    case Scenario::kReplayRequest: ReplayRequest(options, result); break;
    case Scenario::kMalwareInfection: MalwareInfection(options, result); break;
    case Scenario::kKeySteal: KeySteal(options, result); break;
    case Scenario::kPriorityAttack: PriorityAttack(options, result); break;
    case Scenario::kEvilBoot: EvilBoot(options, result); break;
    case Scenario::kTcbTamper: TcbTamper(options, result); break;
  }
  return result;
}

}  // namespace hydra::advsim
