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

#include "distea/connection.hpp"

#include <poll.h>

#include <algorithm>
#include <array>
#include <cerrno>
#include <cstring>
#include <thread>

#include "distea/errors.hpp"

namespace distea {
namespace {

constexpr std::size_t kReadChunk = 4096;

bool wants(Interest interest, Interest bit) {
  return (static_cast<std::uint8_t>(interest) & static_cast<std::uint8_t>(bit)) != 0;
}

}  // namespace

PiggybackConnection::PiggybackConnection(std::unique_ptr<ByteStream> stream, ClockPort& clock)
    : stream_(std::move(stream)), clock_(clock) {}

void PiggybackConnection::check_usable() const {
  if (poisoned_) throw ProtocolError("connection is poisoned");
}

void PiggybackConnection::send(std::span<const std::byte> msg) {
  check_usable();
  auto frame = encode_frame(clock_, msg);
  if (out_pos_ == out_.size()) {
    out_.clear();
    out_pos_ = 0;
  }
  append(out_, frame);
  ++frames_sent_;
  try {
    if (stream_->blocking()) {
      while (!write_pending()) {
      }
    } else {
      write_pending();
    }
  } catch (...) {
    poisoned_ = true;
    throw;
  }
}

bool PiggybackConnection::write_pending() {
  while (out_pos_ < out_.size()) {
    auto res = stream_->write_some(std::span(out_).subspan(out_pos_));
    if (res.status != IoStatus::Ok) return false;
    out_pos_ += res.bytes;
  }
  out_.clear();
  out_pos_ = 0;
  return true;
}

bool PiggybackConnection::flush() {
  check_usable();
  try {
    return write_pending();
  } catch (...) {
    poisoned_ = true;
    throw;
  }
}

IoResult PiggybackConnection::recv(std::span<std::byte> out) {
  check_usable();
  if (out.empty()) return IoResult::ok(0);

  std::array<std::byte, kReadChunk> scratch{};
  while (!has_buffered_payload()) {
    in_.clear();
    in_pos_ = 0;
    IoResult res;
    try {
      res = stream_->read_some(scratch);
    } catch (const TimeoutError&) {
      throw;
    } catch (...) {
      poisoned_ = true;
      throw;
    }
    if (res.status == IoStatus::WouldBlock) return res;
    if (res.status == IoStatus::Eof) {
      if (decoder_.at_frame_boundary()) return res;
      poisoned_ = true;
      throw ProtocolError("end of stream inside a frame (" + std::to_string(decoder_.remaining()) +
                          " payload bytes missing, " + std::to_string(decoder_.partial_header_size()) +
                          " header bytes buffered)");
    }
    try {
      decoder_.feed(std::span(scratch).first(res.bytes), clock_, in_);
    } catch (const ProtocolError&) {
      poisoned_ = true;
      throw;
    }
  }

  std::size_t n = std::min(out.size(), in_.size() - in_pos_);
  std::copy_n(in_.begin() + static_cast<std::ptrdiff_t>(in_pos_), n, out.begin());
  in_pos_ += n;
  return IoResult::ok(n);
}

void PiggybackConnection::close_write() {
  if (!poisoned_ && has_pending_output() && stream_->blocking()) flush();
  stream_->close_write();
}

std::vector<Readiness> readiness_wait(std::span<PiggybackConnection* const> conns, Interest interest,
                                      std::chrono::milliseconds timeout) {
  std::vector<Readiness> ready;
  if (conns.empty()) return ready;

  const bool want_read = wants(interest, Interest::Read);
  const bool want_write = wants(interest, Interest::Write);
  const auto deadline = std::chrono::steady_clock::now() + timeout;

  std::vector<pollfd> fds;
  std::vector<std::size_t> fd_owner;
  bool has_memory_streams = false;
  for (std::size_t i = 0; i < conns.size(); ++i) {
    int fd = conns[i]->stream().native_handle();
    if (fd < 0) {
      has_memory_streams = true;
      continue;
    }
    short events = 0;
    if (want_read) events |= POLLIN;
    if (want_write) events |= POLLOUT;
    fds.push_back(pollfd{fd, events, 0});
    fd_owner.push_back(i);
  }

  for (;;) {
    std::vector<Readiness> flags(conns.size());
    bool buffered = false;
    for (std::size_t i = 0; i < conns.size(); ++i) {
      auto* c = conns[i];
      flags[i].conn = c;
      if (want_read && c->has_buffered_payload()) {
        flags[i].readable = true;
        buffered = true;
      }
      if (c->stream().native_handle() < 0) {
        if (want_read && c->stream().poll_readable()) flags[i].readable = true;
        if (want_write && c->stream().poll_writable()) flags[i].writable = true;
      }
    }

    auto now = std::chrono::steady_clock::now();
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now);
    if (left.count() < 0) left = std::chrono::milliseconds(0);
    bool any_memory_ready = std::any_of(flags.begin(), flags.end(),
                                        [](const Readiness& r) { return r.readable || r.writable; });
    // Memory streams have no descriptor to sleep on; poll them on a short tick.
    auto wait = (buffered || any_memory_ready) ? std::chrono::milliseconds(0)
                : has_memory_streams          ? std::min(left, std::chrono::milliseconds(1))
                                              : left;

    if (!fds.empty()) {
      for (auto& p : fds) p.revents = 0;
      int rc = ::poll(fds.data(), fds.size(), static_cast<int>(wait.count()));
      if (rc < 0 && errno != EINTR) throw IoError(std::string("poll: ") + std::strerror(errno));
      for (std::size_t k = 0; rc > 0 && k < fds.size(); ++k) {
        auto& r = flags[fd_owner[k]];
        if (want_read && (fds[k].revents & (POLLIN | POLLHUP | POLLERR))) r.readable = true;
        if (want_write && (fds[k].revents & (POLLOUT | POLLERR))) r.writable = true;
      }
    } else if (wait.count() > 0) {
      std::this_thread::sleep_for(wait);
    }

    for (auto& r : flags) {
      if (r.readable || r.writable) ready.push_back(r);
    }
    if (!ready.empty() || std::chrono::steady_clock::now() >= deadline) return ready;
  }
}

}  // namespace distea
