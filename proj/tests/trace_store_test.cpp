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

#include "distea/trace_store.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "distea/errors.hpp"
#include "fixtures.hpp"

namespace distea {
namespace {

namespace fs = std::filesystem;
using namespace distea::testing;

ProcessTrace server_trace(bool with_events) {
  auto events = table_events(kTable1Server, "S");
  auto t = ProcessTrace::from_events(ProcessId("S"), events);
  if (with_events) return t;
  std::vector<MethodRecord> recs;
  for (const auto& [m, r] : t.records()) recs.push_back(r);
  return ProcessTrace(ProcessId("S"), recs);
}

ProcessTrace random_trace(std::mt19937_64& rng) {
  std::vector<InternalEvent> events;
  std::vector<MethodId> stack;
  ProcessId p("proc-" + std::to_string(rng() % 100));
  std::uint64_t ts = rng() % 5;
  std::size_t steps = 2 + rng() % 40;
  for (std::size_t i = 0; i < steps || !stack.empty(); ++i) {
    bool enter = i < steps && (stack.empty() || rng() % 2 == 0) && stack.size() < 5;
    if (enter) {
      MethodId m("ns::m" + std::to_string(rng() % 12));
      events.push_back({m, InternalEventKind::Entry, LamportClock{ts}, p});
      stack.push_back(m);
    } else {
      events.push_back({stack.back(), InternalEventKind::Return, LamportClock{ts}, p});
      stack.pop_back();
      if (!stack.empty() && rng() % 2 == 0) {
        ts += 1 + rng() % 3;
        events.push_back({stack.back(), InternalEventKind::ReturnedInto, LamportClock{ts}, p});
      }
    }
    ts += 1 + rng() % 4;
  }
  auto full = ProcessTrace::from_events(p, events);
  if (rng() % 2) return full;
  std::vector<MethodRecord> recs;
  for (const auto& [m, r] : full.records()) recs.push_back(r);
  return ProcessTrace(p, recs);
}

TEST(TraceStoreTest, SerializesRecordsInEntryOrder) {
  auto text = serialize_trace(server_trace(false));
  EXPECT_EQ(text,
            "distea-trace v1\n"
            "process S\n"
            "S::main\t0\t16\n"
            "S::init\t1\t3\n"
            "S::serve\t5\t14\n"
            "S::getMax\t10\t12\n");
}

TEST(TraceStoreTest, FullSequenceSectionRoundTrips) {
  auto t = server_trace(true);
  auto text = serialize_trace(t);
  EXPECT_NE(text.find("#events\nS::main\tE\t0\n"), std::string::npos);
  EXPECT_EQ(parse_trace(text), t);
}

TEST(TraceStoreTest, RandomRoundTrip) {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 500; ++i) {
    auto t = random_trace(rng);
    ASSERT_EQ(parse_trace(serialize_trace(t)), t) << serialize_trace(t);
  }
}

TEST(TraceStoreTest, RejectsMalformedInput) {
  auto expect_parse_error = [](const std::string& text, std::size_t line) {
    try {
      parse_trace(text);
      ADD_FAILURE() << "accepted: " << text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), line) << text;
    }
  };
  expect_parse_error("", 1);
  expect_parse_error("distea-trace v2\nprocess S\n", 1);
  expect_parse_error("distea-trace v1\nproc S\n", 2);
  expect_parse_error("distea-trace v1\nprocess S\na\t1\n", 3);
  expect_parse_error("distea-trace v1\nprocess S\na\tx\t3\n", 3);
  expect_parse_error("distea-trace v1\nprocess S\na\t1\t3\na\t4\t5\n", 4);
  expect_parse_error("distea-trace v1\nprocess S\na\t3\t3\n", 3);
  expect_parse_error("distea-trace v1\nprocess S\na\t1\t3\n#events\na\tQ\t1\n", 5);
  expect_parse_error("distea-trace v1\nprocess S\na\t1\t3\n#events\n#events\n", 5);
}

TEST(TraceStoreTest, EventsMustMatchRecords) {
  EXPECT_THROW(parse_trace("distea-trace v1\nprocess S\na\t1\t3\n#events\na\tE\t1\na\tX\t2\n"), Error);
}

TEST(TraceStoreTest, FilesAndMerge) {
  auto dir = fs::temp_directory_path() / "distea-trace-store-test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto s = server_trace(false);
  auto c = ProcessTrace::from_events(ProcessId("C"), table_events(kTable1Client, "C"));
  write_trace_file(dir / trace_file_name(s.process()), s);
  write_trace_file(dir / trace_file_name(c.process()), c);
  auto files = gather_trace_files(dir);
  ASSERT_EQ(files.size(), 2u);
  std::vector<ProcessTrace> traces;
  for (const auto& f : files) traces.push_back(read_trace_file(f));
  auto corpus = merge(traces, "r1");
  EXPECT_EQ(corpus.process_count(), 2u);
  EXPECT_EQ(corpus.record_count(), 8u);
  EXPECT_EQ(*corpus.find(ProcessId("C")), c);
  EXPECT_EQ(corpus.find(ProcessId("X")), nullptr);
  EXPECT_THROW(merge({s, s}), InvariantError);
  EXPECT_THROW(merge({}), InvariantError);
  EXPECT_THROW(read_trace_file(dir / "missing.trace"), IoError);
  fs::remove_all(dir);
}

TEST(TraceStoreTest, FileNameIsSanitized) {
  auto name = trace_file_name(ProcessId("host:1/a b"));
  EXPECT_EQ(name.find('/'), std::string::npos);
  EXPECT_EQ(name.find(' '), std::string::npos);
  EXPECT_TRUE(name.ends_with(".trace"));
}

}  // namespace
}  // namespace distea
