// Copyright 2026 The distea Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <thread>

#include "distea/connection.hpp"
#include "distea/errors.hpp"
#include "distea/memory_pipe.hpp"
#include "distea/tcp.hpp"

namespace distea {
namespace {

using namespace std::chrono_literals;

struct TcpPair {
  std::unique_ptr<TcpStream> client;
  std::unique_ptr<TcpStream> server;
};

TcpPair tcp_pair() {
  TcpListener listener(HostPort{"127.0.0.1", 0});
  TcpPair p;
  p.client = TcpStream::connect(HostPort{"127.0.0.1", listener.port()});
  p.server = listener.accept(5000ms);
  return p;
}

Bytes drain(ByteStream& s, std::size_t want) {
  Bytes out;
  std::byte buf[64];
  while (out.size() < want) {
    auto r = s.read_some(buf);
    if (r.status != IoStatus::Ok) break;
    out.insert(out.end(), buf, buf + r.bytes);
  }
  return out;
}

std::string recv_all(PiggybackConnection& c) {
  std::string out;
  std::byte buf[7];
  for (;;) {
    auto r = c.recv(buf);
    if (r.status != IoStatus::Ok) return out;
    out += to_string(std::span<const std::byte>(buf, r.bytes));
  }
}

TEST(HostPortTest, ParsesAndPrints) {
  auto hp = HostPort::parse("localhost:2345");
  EXPECT_EQ(hp.host, "localhost");
  EXPECT_EQ(hp.port, 2345);
  EXPECT_EQ(hp.to_string(), "localhost:2345");
  EXPECT_THROW(HostPort::parse("nocolon"), Error);
  EXPECT_THROW(HostPort::parse("h:99999"), Error);
}

TEST(MemoryPipeTest, BytesFlowBothWays) {
  auto [a, b] = make_memory_pipe();
  a->write_some(to_bytes("ping"));
  b->write_some(to_bytes("pong"));
  EXPECT_EQ(to_string(drain(*b, 4)), "ping");
  EXPECT_EQ(to_string(drain(*a, 4)), "pong");
}

TEST(MemoryPipeTest, NonBlockingEmptyReadWouldBlock) {
  auto [a, b] = make_memory_pipe();
  b->set_blocking(false);
  std::byte buf[4];
  EXPECT_EQ(b->read_some(buf).status, IoStatus::WouldBlock);
  a->close_write();
  EXPECT_EQ(b->read_some(buf).status, IoStatus::Eof);
}

TEST(MemoryPipeTest, DestroyedPeerGivesEofAndWriteError) {
  auto [a, b] = make_memory_pipe();
  a.reset();
  std::byte buf[4];
  EXPECT_EQ(b->read_some(buf).status, IoStatus::Eof);
  EXPECT_THROW(b->write_some(to_bytes("x")), IoError);
}

TEST(MemoryPipeTest, BoundedCapacityTakesPartialWrites) {
  MemoryPipeOptions opts;
  opts.capacity = 5;
  auto [a, b] = make_memory_pipe(opts);
  a->set_blocking(false);
  auto r = a->write_some(to_bytes("0123456789"));
  EXPECT_EQ(r.status, IoStatus::Ok);
  EXPECT_EQ(r.bytes, 5u);
  EXPECT_EQ(a->write_some(to_bytes("x")).status, IoStatus::WouldBlock);
}

TEST(MemoryPipeTest, SegmentedReadsAreBounded) {
  MemoryPipeOptions opts;
  opts.segment_seed = 9;
  opts.max_segment = 3;
  auto [a, b] = make_memory_pipe(opts);
  a->write_some(to_bytes("abcdefghijkl"));
  std::byte buf[64];
  auto r = b->read_some(buf);
  EXPECT_GE(r.bytes, 1u);
  EXPECT_LE(r.bytes, 3u);
}

TEST(ConnectionTest, HelloAtClockFiveIsTwentyOneBytes) {
  auto [a, b] = make_memory_pipe();
  ClockCell sender(ProcessId("A"));
  for (int i = 0; i < 5; ++i) sender.stamp_event();
  PiggybackConnection conn(std::move(a), sender);
  conn.send(to_bytes("hello"));
  conn.close_write();
  auto wire = drain(*b, 100);
  ASSERT_EQ(wire.size(), 21u);
  EXPECT_EQ(std::to_integer<int>(wire[7]), 21);
  EXPECT_EQ(std::to_integer<int>(wire[15]), 5);
  EXPECT_EQ(to_string(std::span(wire).subspan(16)), "hello");
  EXPECT_EQ(sender.current().value, 5u);
}

TEST(ConnectionTest, EmptyMessageIsSixteenBytesAndStillMerges) {
  auto [a, b] = make_memory_pipe();
  ClockCell ca(ProcessId("A")), cb(ProcessId("B"));
  for (int i = 0; i < 9; ++i) ca.stamp_event();
  PiggybackConnection x(std::move(a), ca), y(std::move(b), cb);
  x.send({});
  x.close_write();
  EXPECT_EQ(x.stream().native_handle(), -1);
  EXPECT_EQ(recv_all(y), "");
  EXPECT_EQ(cb.current().value, 9u);
}

TEST(ConnectionTest, OneByteReadsDrainFrame) {
  auto [a, b] = make_memory_pipe();
  ClockCell ca(ProcessId("A")), cb(ProcessId("B"));
  PiggybackConnection x(std::move(a), ca), y(std::move(b), cb);
  x.send(to_bytes("abc"));
  std::string got;
  for (int i = 0; i < 3; ++i) {
    std::byte one[1];
    auto r = y.recv(one);
    ASSERT_EQ(r.status, IoStatus::Ok);
    ASSERT_EQ(r.bytes, 1u);
    got += static_cast<char>(one[0]);
  }
  EXPECT_EQ(got, "abc");
}

TEST(ConnectionTest, ClockAppliedBeforePayloadReturned) {
  auto [a, b] = make_memory_pipe();
  ClockCell ca(ProcessId("C")), cs(ProcessId("S"));
  for (int i = 0; i < 10; ++i) ca.stamp_event();
  for (int i = 0; i < 6; ++i) cs.stamp_event();
  PiggybackConnection c(std::move(a), ca), s(std::move(b), cs);
  c.send(to_bytes("distributed"));
  std::byte buf[1];
  ASSERT_EQ(s.recv(buf).status, IoStatus::Ok);
  EXPECT_EQ(cs.current().value, 10u);
}

TEST(ConnectionTest, NonBlockingRecvWouldBlock) {
  auto [a, b] = make_memory_pipe();
  ClockCell cb(ProcessId("B"));
  PiggybackConnection y(std::move(b), cb);
  y.set_blocking(false);
  std::byte buf[4];
  EXPECT_EQ(y.recv(buf).status, IoStatus::WouldBlock);
}

TEST(ConnectionTest, EofInsideFramePoisons) {
  auto [a, b] = make_memory_pipe();
  ClockCell cb(ProcessId("B"));
  auto frame = encode_frame(LamportClock{3}, to_bytes("abcd"));
  a->write_some(std::span(frame).subspan(0, 10));
  a->close_write();
  PiggybackConnection y(std::move(b), cb);
  std::byte buf[8];
  EXPECT_THROW(y.recv(buf), ProtocolError);
  EXPECT_TRUE(y.poisoned());
  EXPECT_THROW(y.recv(buf), ProtocolError);
}

TEST(ConnectionTest, WriteFailurePoisons) {
  auto [a, b] = make_memory_pipe();
  ClockCell ca(ProcessId("A"));
  PiggybackConnection x(std::move(a), ca);
  b.reset();
  EXPECT_THROW(x.send(to_bytes("lost")), IoError);
  EXPECT_TRUE(x.poisoned());
  EXPECT_THROW(x.send(to_bytes("again")), Error);
}

TEST(ConnectionTest, NonBlockingSendQueuesUntilFlushed) {
  MemoryPipeOptions opts;
  opts.capacity = 8;
  auto [a, b] = make_memory_pipe(opts);
  ClockCell ca(ProcessId("A")), cb(ProcessId("B"));
  PiggybackConnection x(std::move(a), ca), y(std::move(b), cb);
  x.set_blocking(false);
  x.send(to_bytes("0123456789"));
  EXPECT_TRUE(x.has_pending_output());
  y.set_blocking(false);
  std::string got;
  for (int i = 0; i < 100 && got.size() < 10; ++i) {
    x.flush();
    std::byte buf[16];
    auto r = y.recv(buf);
    if (r.status == IoStatus::Ok) got += to_string(std::span<const std::byte>(buf, r.bytes));
  }
  EXPECT_EQ(got, "0123456789");
  EXPECT_FALSE(x.has_pending_output());
}

TEST(ReadinessTest, FullFrameIsReadable) {
  auto [a, b] = make_memory_pipe();
  ClockCell ca(ProcessId("A")), cb(ProcessId("B"));
  PiggybackConnection x(std::move(a), ca), y(std::move(b), cb);
  x.send(to_bytes("go"));
  PiggybackConnection* set[] = {&y};
  auto ready = readiness_wait(set, Interest::Read, 100ms);
  ASSERT_EQ(ready.size(), 1u);
  EXPECT_TRUE(ready[0].readable);
}

TEST(ReadinessTest, PartialHeaderReportsReadableBytesThenWouldBlock) {
  auto [a, b] = make_memory_pipe();
  ClockCell cb(ProcessId("B"));
  auto frame = encode_frame(LamportClock{1}, to_bytes("z"));
  a->write_some(std::span(frame).subspan(0, 5));
  PiggybackConnection y(std::move(b), cb);
  y.set_blocking(false);
  std::byte buf[4];
  EXPECT_EQ(y.recv(buf).status, IoStatus::WouldBlock);
  EXPECT_EQ(y.decoder().partial_header_size(), 5u);
  PiggybackConnection* set[] = {&y};
  EXPECT_TRUE(readiness_wait(set, Interest::Read, 20ms).empty());
  a->write_some(std::span(frame).subspan(5));
  auto ready = readiness_wait(set, Interest::Read, 100ms);
  ASSERT_EQ(ready.size(), 1u);
  auto r = y.recv(buf);
  EXPECT_EQ(r.status, IoStatus::Ok);
  EXPECT_EQ(r.bytes, 1u);
}

TEST(ReadinessTest, EmptySetReturnsImmediately) {
  std::vector<PiggybackConnection*> none;
  EXPECT_TRUE(readiness_wait(none, Interest::ReadWrite, 10ms).empty());
}

TEST(TcpTest, LoopbackCarriesFramesAndClocks) {
  auto p = tcp_pair();
  ClockCell cc(ProcessId("C")), cs(ProcessId("S"));
  for (int i = 0; i < 10; ++i) cc.stamp_event();
  PiggybackConnection c(std::move(p.client), cc), s(std::move(p.server), cs);
  c.send(to_bytes("hello"));
  c.send({});
  c.close_write();
  EXPECT_EQ(recv_all(s), "hello");
  EXPECT_EQ(cs.current().value, 10u);
  EXPECT_EQ(s.decoder().frames_seen(), 2u);
}

TEST(TcpTest, WireBytesMatchFrameLayout) {
  auto p = tcp_pair();
  ClockCell cc(ProcessId("C"));
  for (int i = 0; i < 5; ++i) cc.stamp_event();
  PiggybackConnection c(std::move(p.client), cc);
  c.send(to_bytes("hello"));
  c.close_write();
  auto wire = drain(*p.server, 100);
  EXPECT_EQ(wire.size(), 21u);
}

TEST(TcpTest, ReadinessUsesDescriptor) {
  auto p = tcp_pair();
  ClockCell cc(ProcessId("C")), cs(ProcessId("S"));
  PiggybackConnection c(std::move(p.client), cc), s(std::move(p.server), cs);
  PiggybackConnection* set[] = {&s};
  EXPECT_TRUE(readiness_wait(set, Interest::Read, 20ms).empty());
  c.send(to_bytes("x"));
  EXPECT_EQ(readiness_wait(set, Interest::Read, 2000ms).size(), 1u);
  auto w = readiness_wait(set, Interest::Write, 2000ms);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_TRUE(w[0].writable);
}

TEST(TcpTest, BlockingReadTimesOut) {
  auto p = tcp_pair();
  p.server->set_read_timeout(50ms);
  std::byte buf[4];
  EXPECT_THROW(p.server->read_some(buf), TimeoutError);
}

TEST(TcpTest, AcceptTimesOut) {
  TcpListener listener(HostPort{"127.0.0.1", 0});
  EXPECT_NE(listener.port(), 0);
  EXPECT_THROW(listener.accept(30ms), TimeoutError);
}

TEST(TcpTest, ConcurrentSendersInterleaveWholeFrames) {
  auto p = tcp_pair();
  ClockCell cc(ProcessId("C")), cs(ProcessId("S"));
  PiggybackConnection c(std::move(p.client), cc), s(std::move(p.server), cs);
  std::thread writer([&] {
    for (int i = 0; i < 200; ++i) c.send(to_bytes("0123456789"));
    c.close_write();
  });
  auto got = recv_all(s);
  writer.join();
  EXPECT_EQ(got.size(), 2000u);
  EXPECT_EQ(s.decoder().frames_seen(), 200u);
}

}  // namespace
}  // namespace distea
