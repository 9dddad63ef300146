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

#include "distea/oracle.hpp"

#include <gtest/gtest.h>

#include "distea/errors.hpp"
#include "distea/generator.hpp"
#include "distea/impact.hpp"
#include "fixtures.hpp"

namespace distea {
namespace {

using namespace distea::testing;
using Type = CausalEvent::Type;

CausalEvent internal(const char* m, InternalEventKind k) { return {Type::Internal, MethodId(m), k, ""}; }
CausalEvent send(const char* ch) { return {Type::Send, std::nullopt, InternalEventKind::Entry, ch}; }
CausalEvent recv(const char* ch) { return {Type::Receive, std::nullopt, InternalEventKind::Entry, ch}; }

TEST(OracleTest, ProgramOrderAndMessages) {
  std::vector<ProcessLog> logs{
      {ProcessId("A"), {internal("a", InternalEventKind::Entry), send("ab"), internal("a", InternalEventKind::Return)}},
      {ProcessId("B"), {internal("b", InternalEventKind::Entry), recv("ab"), internal("b", InternalEventKind::Return)}},
  };
  HappensBeforeOracle hb(logs);
  EXPECT_EQ(hb.event_count(), 6u);
  EXPECT_TRUE(hb.is_strict_partial_order());
  EXPECT_TRUE(hb.happens_before({0, 0}, {0, 2}));
  EXPECT_TRUE(hb.happens_before({0, 0}, {1, 2}));
  EXPECT_FALSE(hb.happens_before({1, 0}, {0, 2}));
  EXPECT_FALSE(hb.happens_before({0, 2}, {1, 2}));
  EXPECT_FALSE(hb.happens_before({0, 0}, {0, 0}));

  auto impact = hb.impact_set(MethodId("a"));
  EXPECT_EQ(impact.all, methods({"a", "b"}));
  EXPECT_EQ(impact.per_process.at(ProcessId("B")), methods({"b"}));
  EXPECT_EQ(hb.impact_set(MethodId("b")).all, methods({"b"}));
  EXPECT_THROW(hb.impact_set(MethodId("zzz")), NoSuchQueryError);
}

TEST(OracleTest, UnmatchedReceiveRejected) {
  std::vector<ProcessLog> logs{{ProcessId("A"), {recv("nowhere")}}};
  EXPECT_THROW(HappensBeforeOracle hb(logs), InvariantError);
}

TEST(OracleTest, CrossedReceivesFormCycle) {
  std::vector<ProcessLog> logs{
      {ProcessId("A"), {recv("ba"), send("ab")}},
      {ProcessId("B"), {recv("ab"), send("ba")}},
  };
  HappensBeforeOracle hb(logs);
  EXPECT_FALSE(hb.is_strict_partial_order());
}

TEST(OracleTest, ExampleAgreesWithClockRule) {
  auto run = run_scripts(example_e_programs());
  HappensBeforeOracle hb(run.logs);
  EXPECT_TRUE(hb.audit_clock_condition(run.corpus).empty());
  for (const auto& q : executed_methods(run.corpus)) {
    auto exact = hb.impact_set(q).all;
    auto clock = impact_set(run.corpus, q).all;
    EXPECT_TRUE(is_subset(exact, clock)) << q.str();
  }
  EXPECT_EQ(hb.impact_set(MethodId("S::getMax")).all,
            methods({"S::main", "S::serve", "S::getMax", "C::main", "C::compute"}));
}

TEST(OracleTest, AuditFlagsTamperedStamps) {
  auto run = run_scripts(example_e_programs());
  HappensBeforeOracle hb(run.logs);
  auto events = *run.corpus.find(ProcessId("S"))->full_sequence();
  // Drop the receive-side jump: getMax entry now precedes the client's send.
  std::uint64_t ts = 0;
  for (auto& e : events) e.timestamp = LamportClock{ts++};
  std::map<ProcessId, ProcessTrace> traces = run.corpus.traces();
  traces.erase(ProcessId("S"));
  traces.emplace(ProcessId("S"), ProcessTrace::from_events(ProcessId("S"), events));
  TraceCorpus tampered("t", traces);
  EXPECT_FALSE(hb.audit_clock_condition(tampered).empty());
}

TEST(OracleTest, FullSequenceEvaluationMatchesRecords) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto run = run_scripts(generate_scripts(seed));
    ASSERT_TRUE(compression_consistent(run.corpus));
    for (const auto& q : executed_methods(run.corpus)) {
      ASSERT_EQ(full_sequence_impact_set(run.corpus, q), impact_set(run.corpus, q));
    }
  }
}

TEST(OracleTest, CompressionConsistencyNeedsSequences) {
  auto corpus = merge({ProcessTrace(ProcessId("A"), {MethodRecord(MethodId("a"), LamportClock{0}, LamportClock{1})})});
  EXPECT_FALSE(compression_consistent(corpus));
}

}  // namespace
}  // namespace distea
