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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace distea {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value violates a domain-type invariant.
class InvariantError : public Error {
 public:
  using Error::Error;
};

// Lamport counter would wrap. Not expected to be recoverable.
class ClockOverflowError : public Error {
 public:
  using Error::Error;
};

// Malformed frame on the wire. The connection that produced it is unusable.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class TimeoutError : public IoError {
 public:
  using IoError::IoError;
};

// A probe sequence that cannot come from a correctly instrumented program,
// e.g. a return event for a method that was never entered.
class TraceIntegrityError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Impact query on a method that never executed in the corpus.
class NoSuchQueryError : public Error {
 public:
  using Error::Error;
};

class ScriptError : public Error {
 public:
  using Error::Error;
};

// Every remaining scripted thread is blocked.
class DeadlockError : public ScriptError {
 public:
  using ScriptError::ScriptError;
};

}  // namespace distea
