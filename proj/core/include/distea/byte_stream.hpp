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
#include <cstddef>
#include <cstdint>
#include <span>

namespace distea {

enum class IoStatus : std::uint8_t { Ok, WouldBlock, Eof };

struct IoResult {
  IoStatus status = IoStatus::Ok;
  std::size_t bytes = 0;

  static IoResult ok(std::size_t n) { return {IoStatus::Ok, n}; }
  static IoResult would_block() { return {IoStatus::WouldBlock, 0}; }
  static IoResult eof() { return {IoStatus::Eof, 0}; }
};

/// A bidirectional byte-stream endpoint. TCP sockets and in-memory pipes
/// implement the same contract.
///
/// Blocking mode: read_some waits for at least one byte or end-of-stream;
/// write_some writes at least one byte. Non-blocking mode may return
/// WouldBlock from either. I/O failures throw IoError.
class ByteStream {
 public:
  virtual ~ByteStream() = default;

  virtual IoResult read_some(std::span<std::byte> buf) = 0;
  virtual IoResult write_some(std::span<const std::byte> buf) = 0;

  virtual void set_blocking(bool blocking) = 0;
  virtual bool blocking() const = 0;

  // Half-close: the peer sees end-of-stream once it drains buffered bytes.
  virtual void close_write() = 0;

  // A pollable descriptor, or -1 when readiness is tracked in-process.
  virtual int native_handle() const { return -1; }

  // Instantaneous readiness for streams without a descriptor.
  virtual bool poll_readable() const { return false; }
  virtual bool poll_writable() const { return false; }
};

}  // namespace distea
