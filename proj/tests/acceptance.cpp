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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. Pass criterion numbers to run a subset.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "hydra/advsim/scenarios.hpp"
#include "hydra/bench/bench.hpp"
#include "hydra/boot/boot.hpp"
#include "hydra/crypto/block_cipher.hpp"
#include "hydra/crypto/mac.hpp"
#include "hydra/proto/service.hpp"
#include "hydra/sim/model_check.hpp"
#include "hydra/sim/testbed.hpp"

namespace hydra {
namespace {

using Clock = std::chrono::steady_clock;
using crypto::MacAlgorithm;
using proto::Verdict;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void Require(bool condition, const std::string& what) {
    if (!condition) {
      if (!pass) detail << "; ";
      pass = false;
      detail << "FAILED " << what;
    }
  }
};

Bytes Repeat(std::uint8_t value, std::size_t n) { return Bytes(n, value); }

Bytes Iota(std::size_t n) {
  Bytes b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = static_cast<std::uint8_t>(i);
  return b;
}

Bytes Text(std::string_view s) { return Bytes(s.begin(), s.end()); }

// ----------------------------------------------------------------------- 1

void CryptoVectors(Outcome& out) {
  Bytes key = FromHex("0001020308090a0b1011121318191a1b");
  auto speck = crypto::Speck64_128Encrypt(key, FromHex("2d4375747465723b"));
  out.Require(ToHex(speck) == "8b024e4548a56f8c", "Speck64/128 vector");

  crypto::Simon64_128 simon(key);
  std::uint32_t x = 0x656b696c, y = 0x20646e75;
  simon.EncryptWords(x, y);
  out.Require(x == 0x44c8fc20u && y == 0xb9dfa07au, "Simon64/128 vector");

  struct Hmac {
    Bytes key, message;
    const char* tag;
  };
  const Hmac hmac[] = {
      {Repeat(0x0b, 20), Text("Hi There"),
       "b0344c61d8db38535ca8afceaf0bf12b881dc200c9833da726e9376c2e32cff7"},
      {Text("Jefe"), Text("what do ya want for nothing?"),
       "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843"},
      {Repeat(0xaa, 20), Repeat(0xdd, 50),
       "773ea91e36800e46854db8ebd09181a72959098b3ef8c122d9635514ced565fe"},
      {FromHex("0102030405060708090a0b0c0d0e0f10111213141516171819"), Repeat(0xcd, 50),
       "82558a389a443c0ea4cc819899f2083a85f0faa3e578f8077a2e3ff46729665b"},
      {Repeat(0xaa, 131), Text("Test Using Larger Than Block-Size Key - Hash Key First"),
       "60e431591ee0b67f0d8a26aacbf5b77f8e0bc6213728c5140546040f0ee37f54"},
  };
  int n = 0;
  for (const auto& c : hmac) {
    ++n;
    out.Require(ToHex(crypto::HmacSha256(c.key, c.message)) == c.tag,
                "HMAC-SHA-256 RFC 4231 case " + std::to_string(n));
  }

  // Keyed BLAKE2s known answers: key 00..1f, input 00..(n-1).
  out.Require(ToHex(crypto::Blake2sKeyed(Iota(32), {})) ==
                  "48a8997da407876b3d79c0d92325ad3b89cbb754d86ab71aee047ad345fd2c49",
              "BLAKE2s keyed, empty input");
  out.Require(ToHex(crypto::Blake2sKeyed(Iota(32), Iota(1))) ==
                  "40d15fee7c328830166ac3f918650f807e7e01e177258cdc0a39b11f598066f1",
              "BLAKE2s keyed, 1-byte input");
  out.Require(ToHex(crypto::Blake2sKeyed(Iota(32), Iota(255))) ==
                  "3fb735061abc519dfe979e54c1ee5bfad0a9d858b3315bad34bde999efd724dd",
              "BLAKE2s keyed, 255-byte input");

  std::mt19937_64 rng(1);
  int chunkings = 0;
  for (MacAlgorithm alg : {MacAlgorithm::kSpeck64_128Cbc, MacAlgorithm::kSimon64_128Cbc}) {
    crypto::MacSpec spec = crypto::MacSpec::Default(alg);
    for (int trial = 0; trial < 100; ++trial) {
      Bytes message(rng() % 3000);
      for (auto& b : message) b = static_cast<std::uint8_t>(rng());
      Bytes raw_key(16);
      for (auto& b : raw_key) b = static_cast<std::uint8_t>(rng());
      crypto::MacKey mac_key(alg, raw_key);
      crypto::MacState state(spec, mac_key, message.size());
      std::size_t at = 0;
      while (at < message.size()) {
        std::size_t take = std::min<std::size_t>(message.size() - at, rng() % 40);
        state.Update(ByteView(message).subspan(at, take));
        at += take;
      }
      if (state.Final() != crypto::ComputeMac(spec, mac_key, message)) {
        out.Require(false, std::string(crypto::MacAlgorithmName(alg)) + " chunking " +
                               std::to_string(trial));
      }
      ++chunkings;
    }
  }
  out.detail << "12 reference vectors, " << chunkings << " random chunkings";
}

// ----------------------------------------------------------------------- 2

// Each request gets a timestamp 1 ms past the previous one on a device clock
// that advances in step.
struct Driver {
  sim::Testbed& tb;
  std::unique_ptr<proto::Transport> transport = tb.Connect();

  proto::VerifyResult Attest(std::uint32_t process, std::uint64_t first, std::uint64_t last,
                             ByteView image) {
    tb.counter->Advance(1);
    return proto::VerifierAttest(*transport, tb.keys, process, first, last, image,
                                 tb.counter->NowMs());
  }
};

void EndToEnd(Outcome& out) {
  std::mt19937_64 rng(2);
  sim::TestbedOptions options;
  options.processes = {{"target", sim::SeededBytes(11, 4096), 60},
                       {"mid", sim::SeededBytes(12, 4096 * (2 + rng() % 6)), 50},
                       {"big", sim::SeededBytes(13, 64 * 1024), 40}};
  options.clock_start_ms = 5000;
  options.t_save = 1000;
  sim::Testbed tb = sim::MakeTestbed(options);
  Driver driver{tb};

  int trusted = 0;
  for (int run = 0; run < 100; ++run) {
    std::size_t which = rng() % 3;
    const Bytes& image = options.processes[which].image;
    std::uint64_t a = rng() % image.size();
    std::uint64_t b = a + rng() % (image.size() - a);
    auto r = driver.Attest(tb.user(which).value, a, b, image);
    trusted += r.verdict == Verdict::kTrusted;
  }
  out.Require(trusted == 100, "randomized runs: " + std::to_string(trusted) + "/100 trusted");

  const Bytes& target = options.processes[0].image;
  platform::Kernel& kernel = tb.device->kernel();
  int modified = 0;
  for (std::uint64_t i = 0; i < target.size(); ++i) {
    auto flip = static_cast<std::uint8_t>(target[i] ^ (1 + rng() % 255));
    kernel.WriteVirtual(tb.user(0), platform::kImageBase + i, Bytes{flip});
    modified += driver.Attest(tb.user(0).value, 0, target.size() - 1, target).verdict ==
                Verdict::kModified;
    kernel.WriteVirtual(tb.user(0), platform::kImageBase + i, Bytes{target[i]});
  }
  out.Require(modified == 4096, "mutations: " + std::to_string(modified) + "/4096 modified");
  out.Require(driver.Attest(tb.user(0).value, 0, target.size() - 1, target).verdict ==
                  Verdict::kTrusted,
              "restored image trusted");
  out.detail << trusted << "/100 trusted, " << modified << "/4096 modified";
}

// ----------------------------------------------------------------------- 3

void ReplayForgery(Outcome& out) {
  sim::TestbedOptions options;
  options.processes = {{"app", sim::SeededBytes(21, 8192), 50}};
  options.clock_start_ms = 20000;
  options.t_save = 1000;
  options.window_ms = 2000;
  sim::Testbed tb = sim::MakeTestbed(options);
  proto::ProverService service(*tb.device);
  std::mt19937_64 rng(3);

  int responses = 0;
  for (int i = 0; i < 1000; ++i) {
    tb.counter->Advance(1);
    proto::AttestationRequest forged;
    forged.header = {tb.counter->NowMs(), static_cast<std::uint32_t>(rng() % 4), rng() % 8192,
                     8191};
    if (forged.header.first > forged.header.last) forged.header.first = 0;
    forged.mac.resize(tb.keys.spec().tag_length);
    for (auto& b : forged.mac) b = static_cast<std::uint8_t>(rng());
    responses += service.HandleFrame(proto::Encode(forged)).has_value();
  }
  out.Require(responses == 0, std::to_string(responses) + " responses to forged requests");
  out.Require(service.stats().dropped_bad_mac == 1000, "every forgery counted as bad MAC");

  auto request = [&](std::uint64_t t) {
    return proto::Encode(proto::BuildRequest(tb.keys, proto::RequestHeader{t, tb.user(0).value, 0, 8191}));
  };
  tb.counter->Advance(10);
  std::uint64_t now = tb.counter->NowMs();
  Bytes valid = request(now);
  out.Require(service.HandleFrame(valid).has_value(), "valid request answered");
  out.Require(!service.HandleFrame(valid).has_value(), "replayed request rejected");
  Bytes newer = request(now + 2);
  Bytes older = request(now + 1);
  out.Require(service.HandleFrame(newer).has_value(), "newer request answered");
  out.Require(!service.HandleFrame(older).has_value(), "reordered request rejected");
  Bytes delayed = request(now + 3);
  tb.counter->Advance(options.window_ms + 10);
  out.Require(!service.HandleFrame(delayed).has_value(), "delayed request rejected");
  out.detail << responses << "/1000 forged answered; replay, reorder and delay rejected";
}

// ----------------------------------------------------------------------- 4

void ModelCheck(Outcome& out) {
  sim::ConfinementSystem sys = sim::BuildConfinementSystem();
  sim::ModelCheckOptions options;
  options.max_depth = 6;
  auto r = sim::CheckAuthorityConfinement(sys.kernel, sys.actors, options);
  out.Require(r.exhaustive && r.depth_reached == 6, "search exhaustive to depth 6");
  out.Require(r.ok(), r.ok() ? "" : r.violations.front());
  out.detail << r.states << " states, " << r.transitions << " transitions, " << r.probes
             << " probes, " << r.violations.size() << " violations";
}

// ----------------------------------------------------------------------- 5

void BootChain(Outcome& out) {
  sim::TestbedOptions options;
  options.processes = {{"app", sim::SeededBytes(31, 4096), 50}};
  sim::Testbed tb = sim::MakeTestbed(options);
  auto provisioning = boot::Provisioning::FromManifest(tb.manifest);
  bool honest = true;
  try {
    boot::FullBoot(tb.rom, tb.packed_image, provisioning);
  } catch (const std::exception&) {
    honest = false;
  }
  out.Require(honest, "honest image boots");

  std::mt19937_64 rng(5);
  int refused = 0;
  for (int i = 0; i < 1000; ++i) {
    Bytes evil = tb.packed_image;
    evil[rng() % evil.size()] ^= static_cast<std::uint8_t>(1 + rng() % 255);
    try {
      boot::FullBoot(tb.rom, evil, provisioning);
    } catch (const boot::BootRefused&) {
      ++refused;
    }
  }
  out.Require(refused == 1000, std::to_string(refused) + "/1000 refused");
  out.detail << "honest boots, " << refused << "/1000 corruptions refused";
}

// ----------------------------------------------------------------------- 6

void Scaling(Outcome& out) {
  bench::BenchOptions options;
  options.repetitions = 9;
  options.warmup = 1;
  std::vector<std::uint64_t> sizes;
  for (std::uint64_t m = 1; m <= 10; ++m) sizes.push_back(m * bench::kMiB);
  for (MacAlgorithm alg : crypto::kAllMacAlgorithms) {
    auto sweep = bench::MacVsMemSize(alg, sizes, options);
    char r2[32];
    std::snprintf(r2, sizeof r2, "%.4f", sweep.fit.r2);
    out.detail << crypto::MacAlgorithmName(alg) << " r2=" << r2 << ", ";
    out.Require(sweep.fit.r2 >= 0.99, std::string(crypto::MacAlgorithmName(alg)) + " r2 " + r2);
  }
  auto b = bench::PhaseBreakdown(MacAlgorithm::kSpeck64_128Cbc, bench::kMiB, options);
  char shares[128];
  std::snprintf(shares, sizeof shares, "1 MiB split %.2f%% / %.2f%% / %.4f%%",
                100 * b.share(b.mac_mem_ns), 100 * b.share(b.retrieve_mem_ns),
                100 * b.share(b.verify_request_ns));
  out.detail << shares;
  out.Require(b.mac_mem_ns > b.retrieve_mem_ns, "MacMem > RetrieveMem");
  out.Require(b.retrieve_mem_ns > b.verify_request_ns, "RetrieveMem > VerifyRequest");
}

// ----------------------------------------------------------------------- 7

void Headline(Outcome& out) {
  constexpr std::uint64_t kTenMegabytes = 10'000'000;
  bench::BenchOptions options;
  options.repetitions = 5;
  options.warmup = 1;
  auto raw = bench::MacAlgorithms({kTenMegabytes}, {MacAlgorithm::kSpeck64_128Cbc}, options);
  auto attest = bench::MacVsMemSize(MacAlgorithm::kSpeck64_128Cbc, {kTenMegabytes}, options);
  double raw_ms = raw.at(0).value_ns / 1e6;
  double attest_ms = attest.samples.at(0).value_ns / 1e6;
  char line[96];
  std::snprintf(line, sizeof line, "raw MAC %.1f ms, attestation MacMem %.1f ms", raw_ms,
                attest_ms);
  out.detail << line;
  out.Require(raw_ms < 500, "raw MAC under 500 ms");
  out.Require(attest_ms < 500, "attestation under 500 ms");
}

// ----------------------------------------------------------------------- 8

void Adversary(Outcome& out) {
  int held = 0, caught = 0;
  for (advsim::Scenario s : advsim::kAllScenarios) {
    std::string name(advsim::ScenarioName(s));
    bool honest = advsim::RunScenario(s).passed;
    advsim::ScenarioOptions weak;
    weak.protections = advsim::WeakenedFor(s);
    bool mutant = advsim::RunScenario(s, weak).passed;
    out.Require(honest, name + " holds");
    out.Require(!mutant, name + " fails under its mutation");
    held += honest;
    caught += !mutant;
  }
  out.detail << held << "/7 hold, " << caught << "/7 mutations detected";
}

struct Criterion {
  int number;
  const char* title;
  std::chrono::milliseconds budget;  // zero: no runtime bound
  std::function<void(Outcome&)> run;
};

}  // namespace
}  // namespace hydra

int main(int argc, char** argv) {
  using namespace hydra;
  using std::chrono::milliseconds;
  const Criterion criteria[] = {
      {1, "crypto reference vectors and streaming", milliseconds(1000), CryptoVectors},
      {2, "end-to-end attestation soundness", milliseconds(60'000), EndToEnd},
      {3, "replay and forgery", milliseconds(0), ReplayForgery},
      {4, "access-control model check", milliseconds(300'000), ModelCheck},
      {5, "boot chain", milliseconds(10'000), BootChain},
      {6, "scaling", milliseconds(0), Scaling},
      {7, "10 MB under 500 ms", milliseconds(0), Headline},
      {8, "adversary suite", milliseconds(0), Adversary},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.number)) continue;
    Outcome outcome;
    auto start = Clock::now();
    try {
      c.run(outcome);
    } catch (const std::exception& e) {
      outcome.Require(false, std::string("exception: ") + e.what());
    }
    auto elapsed = std::chrono::duration_cast<milliseconds>(Clock::now() - start);
    if (c.budget.count() > 0) {
      outcome.Require(elapsed < c.budget, "runtime budget " + std::to_string(c.budget.count()) +
                                              " ms");
    }
    failures += !outcome.pass;
    std::printf("criterion %d: %s - %s (%s) [%lld ms]\n", c.number, outcome.pass ? "PASS" : "FAIL",
                c.title, outcome.detail.str().c_str(), static_cast<long long>(elapsed.count()));
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
