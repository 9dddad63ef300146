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

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "distea/clock.hpp"
#include "distea/model.hpp"
#include "distea/script.hpp"
#include "distea/trace_store.hpp"

namespace distea {

enum class TransportMode : std::uint8_t { Memory, Tcp };

struct RunOptions {
  TransportMode transport = TransportMode::Memory;
  std::uint64_t seed = 0;
  std::string run_id = "run";
  ReceiveRule receive_rule = ReceiveRule::MaxOnly;
  // Upper bound of the pseudo-random read sizes used by recv, and of the
  // segment sizes the in-memory pipes hand out.
  std::size_t max_read = 64;
  // TCP mode: a blocked accept or recv fails after this long.
  std::chrono::milliseconds io_timeout{10000};
};

/// One entry of a process's causal log, in process order. Internal entries
/// line up one-to-one with the trace's full event sequence. Send/Receive
/// entries name a channel (one direction of one connection); the k-th
/// Receive on a channel consumed the frame of the k-th Send on it.
struct CausalEvent {
  enum class Type : std::uint8_t { Internal, Send, Receive };

  Type type;
  std::optional<MethodId> method;
  InternalEventKind kind = InternalEventKind::Entry;
  std::string channel;

  friend bool operator==(const CausalEvent&, const CausalEvent&) = default;
};

struct ProcessLog {
  ProcessId process;
  std::vector<CausalEvent> events;

  friend bool operator==(const ProcessLog&, const ProcessLog&) = default;
};

struct RunResult {
  TraceCorpus corpus;
  std::vector<ProcessLog> logs;
};

/// Executes the programs with probes and piggyback connections, full-event
/// recording on. Traces pass through the distea-trace format before they
/// land in the corpus.
///
/// Memory mode runs every thread on the calling thread under a scheduler
/// driven by `seed`: the same programs and seed give the same run. Blocking
/// steps yield until they can proceed; if no thread can, DeadlockError.
/// Tcp mode runs each scripted thread on its own OS thread over loopback
/// sockets. Script addresses are logical names bound to ephemeral ports.
RunResult run_scripts(std::span<const ScriptedProgram> programs, const RunOptions& options = {});

}  // namespace distea
