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

#include <random>

#include <gtest/gtest.h>

#include "hydra/proto/service.hpp"
#include "hydra/proto/transport.hpp"
#include "hydra/proto/verifier.hpp"
#include "hydra/proto/wire.hpp"
#include "hydra/sim/testbed.hpp"
#include "test_util.hpp"

namespace hydra::proto {
namespace {

using testing::Iota;
using testing::OraclePattern;

const RequestHeader kHeader{1500, 1, 0, 4095};

TEST(WireTest, RequestEncoding) {
  AttestationRequest req{kHeader, FromHex("0a174c2b8cfce2fadaece2362b53e183")};
  EXPECT_EQ(ToHex(Encode(req)),
            "00000032" "48594452" "01" "01"
            "00000000000005dc" "00000001" "0000000000000000" "0000000000000fff"
            "0a174c2b8cfce2fadaece2362b53e183");
  EXPECT_EQ(std::get<AttestationRequest>(Decode(Encode(req))), req);
}

TEST(WireTest, ErrorEncoding) {
  ErrorResponse err{FailureCode::kRangeOutOfBounds, kHeader};
  EXPECT_EQ(ToHex(Encode(err)),
            "00000023" "48594452" "01" "03" "02"
            "00000000000005dc" "00000001" "0000000000000000" "0000000000000fff");
  EXPECT_EQ(std::get<ErrorResponse>(Decode(Encode(err))), err);
}

TEST(WireTest, ReportRoundTripForEveryTagLength) {
  for (std::size_t n : {8u, 16u, 32u}) {
    AttestationReport rep{kHeader, Iota(n)};
    EXPECT_EQ(std::get<AttestationReport>(Decode(Encode(rep))), rep);
  }
}

TEST(WireTest, RejectsMalformedFrames) {
  Bytes good = Encode(AttestationRequest{kHeader, Iota(16)});
  auto reject = [](Bytes frame) { EXPECT_HYDRA_ERROR(Decode(frame), ErrorCode::kProtocolError); };
  reject({});
  reject(Bytes(good.begin(), good.end() - 1));
  Bytes magic = good;
  magic[4] = 'X';
  reject(magic);
  Bytes version = good;
  version[8] = 2;
  reject(version);
  Bytes kind = good;
  kind[9] = 9;
  reject(kind);
  // A 12-byte tag is not a legal length even with a consistent prefix.
  Bytes odd = Encode(AttestationRequest{kHeader, Iota(12)});
  reject(odd);
  Bytes code = Encode(ErrorResponse{FailureCode::kUnknownProcess, kHeader});
  code[10] = 7;
  reject(code);
}

TEST(WirePropertyTest, RandomBytesNeverCrashDecoder) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 5000; ++i) {
    Bytes frame = Encode(AttestationRequest{kHeader, Iota(16)});
    frame[rng() % frame.size()] = static_cast<std::uint8_t>(rng());
    if (rng() % 3 == 0) frame.resize(rng() % frame.size());
    try {
      Decode(frame);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kProtocolError);
    }
  }
}

TEST(EndpointTest, Parse) {
  EXPECT_EQ(Endpoint::Parse("127.0.0.1:7000").port, 7000);
  EXPECT_EQ(Endpoint::Parse("[::1]:80").host, "::1");
  EXPECT_EQ(Endpoint::Parse("[::1]:80").ToString(), "[::1]:80");
  EXPECT_HYDRA_ERROR(Endpoint::Parse("nohost"), ErrorCode::kInvalidInput);
  EXPECT_HYDRA_ERROR(Endpoint::Parse("h:99999"), ErrorCode::kInvalidInput);
  EXPECT_HYDRA_ERROR(Endpoint::Parse("h:1x"), ErrorCode::kInvalidInput);
}

TEST(VerifierKeysTest, SerializeRoundTrip) {
  VerifierKeys keys({crypto::MacAlgorithm::kBlake2sKeyed, 16},
                    crypto::MacKey(crypto::MacAlgorithm::kBlake2sKeyed, Iota(32)));
  VerifierKeys back = VerifierKeys::Parse(keys.Serialize());
  EXPECT_EQ(back.spec(), keys.spec());
  EXPECT_EQ(Bytes(back.auth_key().bytes().begin(), back.auth_key().bytes().end()),
            Bytes(keys.auth_key().bytes().begin(), keys.auth_key().bytes().end()));
  EXPECT_HYDRA_ERROR(VerifierKeys::Parse(R"({"mac":"SPECK_64_128_CBC","key":"00"})"),
                     ErrorCode::kInvalidInput);
  EXPECT_HYDRA_ERROR(VerifierKeys::Parse("{}"), ErrorCode::kInvalidInput);
}

TEST(RequestClockTest, StrictlyIncreasing) {
  auto counter = std::make_shared<attest::ManualCounter>(100);
  RequestClock clock(counter);
  EXPECT_EQ(clock.Next(), 100u);
  EXPECT_EQ(clock.Next(), 101u);
  counter->Set(50);
  EXPECT_EQ(clock.Next(), 102u);
  counter->Set(500);
  EXPECT_EQ(clock.Next(), 500u);
}

sim::TestbedOptions DeviceSetup() {
  sim::TestbedOptions o;
  o.processes = {{"target", OraclePattern(4096), 100}, {"b", Iota(9000), 90}};
  o.attestation_key = Iota(16);
  return o;
}

TEST(ServiceTest, SilentOnAnythingUnauthentic) {
  sim::Testbed tb = sim::MakeTestbed(DeviceSetup());
  ProverService service(*tb.device);
  EXPECT_FALSE(service.HandleFrame(Bytes{1, 2, 3}));
  EXPECT_FALSE(service.HandleFrame(Encode(AttestationReport{kHeader, Iota(16)})));
  EXPECT_FALSE(service.HandleFrame(Encode(AttestationRequest{kHeader, Iota(16)})));
  auto reply = service.HandleFrame(Encode(BuildRequest(tb.keys, kHeader)));
  ASSERT_TRUE(reply);
  EXPECT_EQ(ToHex(std::get<AttestationReport>(Decode(*reply)).tag),
            "8a70d9da5c74b44a436160f724cc1ae4");
  EXPECT_FALSE(service.HandleFrame(Encode(BuildRequest(tb.keys, kHeader))));
  ServiceStats s = service.stats();
  EXPECT_EQ(s.malformed, 2u);
  EXPECT_EQ(s.dropped_bad_mac, 1u);
  EXPECT_EQ(s.dropped_stale, 1u);
  EXPECT_EQ(s.reports, 1u);
}

TEST(VerifierTest, LoopbackVerdicts) {
  sim::Testbed tb = sim::MakeTestbed(DeviceSetup());
  auto transport = tb.Connect();
  Bytes image = OraclePattern(4096);
  auto r = VerifierAttest(*transport, tb.keys, 1, 0, 4095, image, 10);
  EXPECT_EQ(r.verdict, Verdict::kTrusted) << r.detail;
  ASSERT_TRUE(r.report);

  tb.device->kernel().WriteVirtual(tb.user(0), platform::kImageBase + 7, Bytes{0});
  r = VerifierAttest(*transport, tb.keys, 1, 0, 4095, image, 11);
  EXPECT_EQ(r.verdict, Verdict::kModified);
  // A range that skips the modified byte is still fine.
  r = VerifierAttest(*transport, tb.keys, 1, 8, 4095, image, 12);
  EXPECT_EQ(r.verdict, Verdict::kTrusted);

  r = VerifierAttest(*transport, tb.keys, 42, 0, 10, image, 13);
  EXPECT_EQ(r.verdict, Verdict::kError);
  EXPECT_EQ(r.error, FailureCode::kUnknownProcess);

  // Replayed timestamp: the device stays silent.
  r = VerifierAttest(*transport, tb.keys, 1, 8, 4095, image, 13);
  EXPECT_EQ(r.verdict, Verdict::kNoResponse);

  VerifierKeys wrong(tb.keys.spec(), crypto::MacKey(tb.keys.spec().algorithm, Iota(16, 1)));
  r = VerifierAttest(*transport, wrong, 1, 0, 4095, image, 20);
  EXPECT_EQ(r.verdict, Verdict::kNoResponse);

  EXPECT_HYDRA_ERROR(VerifierAttest(*transport, tb.keys, 1, 0, 4096, image, 21),
                     ErrorCode::kRangeOutOfBounds);
}

TEST(VerifierTest, MismatchedReplyIsNotTrusted) {
  sim::Testbed tb = sim::MakeTestbed(DeviceSetup());
  Bytes image = OraclePattern(4096);
  LoopbackTransport liar([&](ByteView) -> std::optional<Bytes> {
    RequestHeader other{1, 1, 0, 4095};
    return Encode(AttestationReport{other, ExpectedTag(tb.keys, other, image)});
  });
  auto r = VerifierAttest(liar, tb.keys, 1, 0, 4095, image, 2);
  EXPECT_NE(r.verdict, Verdict::kTrusted);
  LoopbackTransport garbage([](ByteView) -> std::optional<Bytes> { return Bytes{0, 0, 0, 1, 9}; });
  EXPECT_EQ(VerifierAttest(garbage, tb.keys, 1, 0, 4095, image, 3).verdict, Verdict::kNoResponse);
}

TEST(TcpTest, EndToEnd) {
  sim::Testbed tb = sim::MakeTestbed(DeviceSetup());
  ProverService service(*tb.device);
  TcpServer server(service, Endpoint{"127.0.0.1", 0});
  server.Start();
  ASSERT_NE(server.port(), 0);
  TcpTransport transport(Endpoint{"127.0.0.1", server.port()});
  Bytes image = OraclePattern(4096);
  auto r = VerifierAttest(transport, tb.keys, 1, 0, 4095, image, 100);
  EXPECT_EQ(r.verdict, Verdict::kTrusted) << r.detail;
  ASSERT_TRUE(r.report);
  EXPECT_EQ(r.report->tag, ExpectedTag(tb.keys, {100, 1, 0, 4095}, image));

  auto start = std::chrono::steady_clock::now();
  r = VerifierAttest(transport, tb.keys, 1, 0, 4095, image, 100, std::chrono::milliseconds(200));
  EXPECT_EQ(r.verdict, Verdict::kNoResponse);
  EXPECT_GE(std::chrono::steady_clock::now() - start, std::chrono::milliseconds(150));

  r = VerifierAttest(transport, tb.keys, 1, 0, 9999, OraclePattern(10000), 101);
  EXPECT_EQ(r.verdict, Verdict::kError);
  EXPECT_EQ(r.error, FailureCode::kRangeOutOfBounds);
  server.Stop();
}

TEST(TcpTest, DeadAddressIsNoResponse) {
  // Bind-and-close to find a port nobody listens on.
  sim::Testbed tb = sim::MakeTestbed(DeviceSetup());
  ProverService service(*tb.device);
  std::uint16_t port;
  {
    TcpServer server(service, Endpoint{"127.0.0.1", 0});
    server.Start();
    port = server.port();
  }
  TcpTransport transport(Endpoint{"127.0.0.1", port});
  auto r = VerifierAttest(transport, tb.keys, 1, 0, 10, OraclePattern(4096), 1,
                          std::chrono::milliseconds(300));
  EXPECT_EQ(r.verdict, Verdict::kNoResponse);
}

TEST(TcpTest, ConcurrentVerifiers) {
  sim::Testbed tb = sim::MakeTestbed(DeviceSetup());
  ProverService service(*tb.device);
  TcpServer server(service, Endpoint{"127.0.0.1", 0});
  server.Start();
  Bytes image = OraclePattern(4096);
  tb.counter->Set(1000);
  RequestClock clock(tb.counter);
  std::atomic<int> trusted{0};
  std::vector<std::thread> threads;
  std::mutex order;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&] {
      TcpTransport transport(Endpoint{"127.0.0.1", server.port()});
      for (int i = 0; i < 10; ++i) {
        // Timestamps must reach the device in order; serialise stamping and sending.
        std::lock_guard lock(order);
        auto r = VerifierAttest(transport, tb.keys, 1, 0, 4095, image, clock.Next());
        if (r.verdict == Verdict::kTrusted) ++trusted;
      }
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(trusted.load(), 40);
  EXPECT_EQ(service.stats().reports, 40u);
}

}  // namespace
}  // namespace hydra::proto
