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

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "distea/model.hpp"
#include "distea/simulator.hpp"
#include "distea/trace_store.hpp"

namespace distea {

/// Exact happens-before relation of one recorded run, built from the causal
/// logs alone: program order within each process plus send -> receive of
/// each frame, closed transitively. Uses no Lamport values, so it can check
/// the clock-based impact engine.
class HappensBeforeOracle {
 public:
  // Throws InvariantError if a receive has no matching send.
  explicit HappensBeforeOracle(std::span<const ProcessLog> logs);

  // Nodes point into logs_.
  HappensBeforeOracle(const HappensBeforeOracle&) = delete;
  HappensBeforeOracle& operator=(const HappensBeforeOracle&) = delete;

  struct EventRef {
    std::size_t process;  // index into the logs
    std::size_t position;  // index into that log's events
  };

  std::size_t event_count() const noexcept { return nodes_.size(); }

  // Strict: false for a == b.
  bool happens_before(EventRef a, EventRef b) const;

  // Closure is irreflexive, i.e. the event graph is acyclic.
  bool is_strict_partial_order() const noexcept { return acyclic_; }

  struct Impact {
    // Methods with a return/returned-into event after some first entry of
    // the query, plus the query itself.
    MethodSet all;
    // The reachable return/returned-into events split by process.
    std::map<ProcessId, MethodSet> per_process;
  };

  // Throws NoSuchQueryError when the query has no entry event.
  Impact impact_set(const MethodId& query) const;

  struct ClockViolation {
    EventRef before;
    EventRef after;
    LamportClock before_clock;
    LamportClock after_clock;
  };

  // Checks C(a) < C(b) for every ordered pair of internal events, with stamps
  // taken from the corpus's full event sequences. Throws InvariantError if
  // those sequences do not line up with the causal logs.
  std::vector<ClockViolation> audit_clock_condition(const TraceCorpus& corpus) const;

 private:
  struct Node {
    std::size_t process;
    std::size_t position;
    const CausalEvent* event;
  };

  bool reaches(std::size_t from, std::size_t to) const;

  std::vector<ProcessLog> logs_;
  std::vector<ProcessId> processes_;
  std::vector<std::size_t> offsets_;
  std::vector<Node> nodes_;
  std::size_t words_ = 0;
  // reach_[i * words_ ..] is the set of nodes strictly after node i.
  std::vector<std::uint64_t> reach_;
  bool acyclic_ = true;
};

// Clock-rule evaluation over timestamped full sequences instead of compressed
// records: members are methods with any return/returned-into event stamped
// after the query's earliest entry. Needs every trace in full-sequence mode.
ImpactSet full_sequence_impact_set(const TraceCorpus& corpus, const MethodId& query);

// True when every trace carries a full sequence whose compression equals its
// records.
bool compression_consistent(const TraceCorpus& corpus);

}  // namespace distea
