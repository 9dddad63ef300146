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

#include "distea/model.hpp"

#include <gtest/gtest.h>

#include "fixtures.hpp"

namespace distea {
namespace {

using testing::kTable1Server;
using testing::table_events;

TEST(ModelTest, IdsRejectEmptyAndControlCharacters) {
  EXPECT_THROW(ProcessId(""), InvariantError);
  EXPECT_THROW(ProcessId("a\tb"), InvariantError);
  EXPECT_THROW(MethodId(""), InvariantError);
  EXPECT_THROW(MethodId("x\ny"), InvariantError);
  EXPECT_THROW(MethodId("#events"), InvariantError);
  EXPECT_NO_THROW(MethodId("S::getMax"));
  EXPECT_NO_THROW(ProcessId("server 1"));
}

TEST(ModelTest, MethodRecordRequiresReturnAfterEntry) {
  EXPECT_THROW(MethodRecord(MethodId("m"), LamportClock{5}, LamportClock{5}), InvariantError);
  EXPECT_THROW(MethodRecord(MethodId("m"), LamportClock{5}, LamportClock{4}), InvariantError);
  MethodRecord r(MethodId("m"), LamportClock{5}, LamportClock{6});
  EXPECT_EQ(r.first_entry().value, 5u);
  EXPECT_EQ(r.last_return().value, 6u);
}

TEST(ModelTest, KindCodes) {
  for (auto k : {InternalEventKind::Entry, InternalEventKind::Return, InternalEventKind::ReturnedInto}) {
    EXPECT_EQ(kind_from_code(kind_code(k)), k);
  }
  EXPECT_FALSE(kind_from_code('Q'));
}

TEST(ModelTest, CompressKeepsFirstEntryAndLastExit) {
  auto records = compress_events(table_events(kTable1Server, "S"));
  ASSERT_EQ(records.size(), 4u);
  EXPECT_EQ(records.at(MethodId("S::main")), MethodRecord(MethodId("S::main"), LamportClock{0}, LamportClock{16}));
  EXPECT_EQ(records.at(MethodId("S::init")), MethodRecord(MethodId("S::init"), LamportClock{1}, LamportClock{3}));
  EXPECT_EQ(records.at(MethodId("S::serve")), MethodRecord(MethodId("S::serve"), LamportClock{5}, LamportClock{14}));
  EXPECT_EQ(records.at(MethodId("S::getMax")),
            MethodRecord(MethodId("S::getMax"), LamportClock{10}, LamportClock{12}));
}

TEST(ModelTest, CompressRejectsExitWithoutEntryAndUnreturnedMethods) {
  ProcessId p("P");
  std::vector<InternalEvent> orphan{{MethodId("m"), InternalEventKind::Return, LamportClock{0}, p}};
  EXPECT_THROW(compress_events(orphan), TraceIntegrityError);
  std::vector<InternalEvent> open{{MethodId("m"), InternalEventKind::Entry, LamportClock{0}, p}};
  EXPECT_THROW(compress_events(open), TraceIntegrityError);
}

TEST(ModelTest, ProcessTraceRejectsDuplicateRecords) {
  std::vector<MethodRecord> records{MethodRecord(MethodId("m"), LamportClock{0}, LamportClock{1}),
                                    MethodRecord(MethodId("m"), LamportClock{2}, LamportClock{3})};
  EXPECT_THROW(ProcessTrace(ProcessId("P"), records), InvariantError);
}

TEST(ModelTest, ProcessTraceChecksSequenceAgainstRecords) {
  auto events = table_events(kTable1Server, "S");
  auto good = ProcessTrace::from_events(ProcessId("S"), events);
  EXPECT_EQ(good.records().size(), 4u);

  std::vector<MethodRecord> wrong;
  for (const auto& [_, r] : good.records()) wrong.push_back(r);
  wrong[0] = MethodRecord(wrong[0].method(), wrong[0].first_entry(),
                          LamportClock{wrong[0].last_return().value + 100});
  EXPECT_THROW(ProcessTrace(ProcessId("S"), wrong, events), InvariantError);

  auto unordered = events;
  std::swap(unordered[3], unordered[4]);
  EXPECT_THROW(ProcessTrace::from_events(ProcessId("S"), unordered), InvariantError);

  EXPECT_THROW(ProcessTrace::from_events(ProcessId("other"), events), InvariantError);
}

TEST(ModelTest, RecordsByEntryOrder) {
  auto t = ProcessTrace::from_events(ProcessId("S"), table_events(kTable1Server, "S"));
  std::vector<std::string> names;
  for (const auto* r : t.records_by_entry()) names.push_back(r->method().str());
  EXPECT_EQ(names, (std::vector<std::string>{"S::main", "S::init", "S::serve", "S::getMax"}));
}

TEST(ModelTest, ImpactSetFromPartsDerivesAllAndCommon) {
  auto s = ImpactSet::from_parts(MethodId("q"), ProcessId("P"), testing::methods({"a", "b", "q"}),
                                 testing::methods({"b", "c"}));
  EXPECT_EQ(s.all, testing::methods({"a", "b", "c", "q"}));
  EXPECT_EQ(s.common, testing::methods({"b"}));
}

}  // namespace
}  // namespace distea
