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
#include <memory>
#include <span>
#include <vector>

#include "distea/byte_stream.hpp"
#include "distea/bytes.hpp"
#include "distea/clock.hpp"
#include "distea/frame.hpp"

namespace distea {

/// Wraps a byte stream so that every application write travels as one
/// piggyback frame and every application read sees payload bytes only.
///
/// One thread at a time per direction. The clock port is usually the
/// process's shared ClockCell.
class PiggybackConnection {
 public:
  PiggybackConnection(std::unique_ptr<ByteStream> stream, ClockPort& clock);

  PiggybackConnection(const PiggybackConnection&) = delete;
  PiggybackConnection& operator=(const PiggybackConnection&) = delete;

  // Frames `msg` with the current send clock. Blocking streams write the
  // whole frame before returning. Non-blocking streams queue whatever the
  // stream does not take; call flush() when writable.
  // A failed write poisons the connection and rethrows.
  void send(std::span<const std::byte> msg);

  // Returns 1..out.size() payload bytes, WouldBlock (non-blocking, nothing
  // deliverable) or Eof (peer closed at a frame boundary). Clocks of headers
  // completed by the underlying reads are applied before payload is
  // returned. End-of-stream inside a frame throws ProtocolError.
  IoResult recv(std::span<std::byte> out);

  // Writes queued output; returns true once nothing is pending.
  bool flush();

  bool has_pending_output() const noexcept { return out_pos_ < out_.size(); }
  bool has_buffered_payload() const noexcept { return in_pos_ < in_.size(); }

  void set_blocking(bool blocking) { stream_->set_blocking(blocking); }
  bool blocking() const { return stream_->blocking(); }
  void close_write();

  bool poisoned() const noexcept { return poisoned_; }
  std::uint64_t frames_sent() const noexcept { return frames_sent_; }
  const FrameDecoder& decoder() const noexcept { return decoder_; }

  ByteStream& stream() noexcept { return *stream_; }
  const ByteStream& stream() const noexcept { return *stream_; }

 private:
  void check_usable() const;
  bool write_pending();

  std::unique_ptr<ByteStream> stream_;
  ClockPort& clock_;
  FrameDecoder decoder_;
  Bytes in_;
  std::size_t in_pos_ = 0;
  Bytes out_;
  std::size_t out_pos_ = 0;
  std::uint64_t frames_sent_ = 0;
  bool poisoned_ = false;
};

enum class Interest : std::uint8_t { Read = 1, Write = 2, ReadWrite = 3 };

struct Readiness {
  PiggybackConnection* conn = nullptr;
  bool readable = false;
  bool writable = false;
};

/// Waits up to `timeout` for any connection to become ready and returns the
/// ready subset. A connection holding undelivered payload is always readable.
std::vector<Readiness> readiness_wait(std::span<PiggybackConnection* const> conns, Interest interest,
                                      std::chrono::milliseconds timeout);

}  // namespace distea
