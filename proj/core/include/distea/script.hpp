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

// distea-script v1: one scripted process per file.
//
//   distea-script v1
//   process <ProcessId>
//   thread <name>                first thread is the process's initial thread
//   enter <MethodId>
//   return <MethodId>
//   returned-into <MethodId>
//   accept <conn> <address>      wait for a peer that connects to <address>
//   connect <conn> <address>
//   send <conn> [payload]        payload is the rest of the line
//   recv <conn>                  read one line sent by the peer
//   spawn <thread>
//
// Blank lines and lines starting with '#' are ignored. Messages are
// newline-delimited on the application level: send appends '\n' and recv
// reads through the next '\n'.

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "distea/model.hpp"

namespace distea {

inline constexpr std::string_view kScriptMagic = "distea-script v1";

enum class ActionKind : std::uint8_t { Enter, Return, ReturnedInto, Send, Recv, Accept, Connect, Spawn };

struct Action {
  ActionKind kind;
  // Method, connection, or thread name depending on kind.
  std::string target;
  // Payload for Send, address for Accept/Connect, empty otherwise.
  std::string text;

  friend bool operator==(const Action&, const Action&) = default;
};

struct ThreadScript {
  std::string name;
  std::vector<Action> steps;

  friend bool operator==(const ThreadScript&, const ThreadScript&) = default;
};

struct ScriptedProgram {
  ProcessId process;
  // threads.front() starts with the process; the others start when spawned.
  std::vector<ThreadScript> threads;

  friend bool operator==(const ScriptedProgram&, const ScriptedProgram&) = default;
};

// Structural checks on one program; throws ScriptError:
//  - calls nest per thread (return/returned-into name the innermost open
//    method, every thread ends with an empty call stack);
//  - send/recv use a connection opened earlier by the same thread;
//  - every non-initial thread is spawned exactly once from a reachable thread.
void validate(const ScriptedProgram& program);

// Cross-program checks: unique process ids, each address accepted exactly as
// many times as it is connected to.
void validate_topology(std::span<const ScriptedProgram> programs);

std::string serialize_script(const ScriptedProgram& program);
// Throws ParseError (syntax) or ScriptError (validation).
ScriptedProgram parse_script(std::string_view text);
ScriptedProgram read_script_file(const std::filesystem::path& path);
void write_script_file(const std::filesystem::path& path, const ScriptedProgram& program);

}  // namespace distea
