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

#include "distea/memory_pipe.hpp"

#include <algorithm>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <random>

#include "distea/errors.hpp"

namespace distea {
namespace {

struct Direction {
  std::deque<std::byte> buf;
  bool writer_closed = false;
  bool reader_gone = false;
};

struct PipeState {
  std::mutex mu;
  std::condition_variable cv;
  Direction dir[2];
  std::size_t capacity = 0;
};

class MemoryEndpoint final : public ByteStream {
 public:
  MemoryEndpoint(std::shared_ptr<PipeState> state, int side, const MemoryPipeOptions& opts)
      : state_(std::move(state)), in_(side), out_(1 - side), max_segment_(std::max<std::size_t>(1, opts.max_segment)) {
    if (opts.segment_seed) rng_.emplace(*opts.segment_seed * 2 + static_cast<std::uint64_t>(side));
  }

  ~MemoryEndpoint() override {
    std::lock_guard lk(state_->mu);
    state_->dir[out_].writer_closed = true;
    state_->dir[in_].reader_gone = true;
    state_->dir[in_].buf.clear();
    state_->cv.notify_all();
  }

  IoResult read_some(std::span<std::byte> buf) override {
    if (buf.empty()) return IoResult::ok(0);
    std::unique_lock lk(state_->mu);
    auto& d = state_->dir[in_];
    if (blocking_) state_->cv.wait(lk, [&] { return !d.buf.empty() || d.writer_closed; });
    if (d.buf.empty()) return d.writer_closed ? IoResult::eof() : IoResult::would_block();

    std::size_t n = std::min(buf.size(), d.buf.size());
    if (rng_) n = std::min(n, std::uniform_int_distribution<std::size_t>(1, max_segment_)(*rng_));
    std::copy_n(d.buf.begin(), n, buf.begin());
    d.buf.erase(d.buf.begin(), d.buf.begin() + static_cast<std::ptrdiff_t>(n));
    state_->cv.notify_all();
    return IoResult::ok(n);
  }

  IoResult write_some(std::span<const std::byte> buf) override {
    if (buf.empty()) return IoResult::ok(0);
    std::unique_lock lk(state_->mu);
    auto& d = state_->dir[out_];
    if (d.writer_closed) throw IoError("write on a closed pipe endpoint");
    auto room = [&] {
      return state_->capacity == 0 ? buf.size()
                                   : state_->capacity - std::min(state_->capacity, d.buf.size());
    };
    if (blocking_) state_->cv.wait(lk, [&] { return d.reader_gone || room() > 0; });
    if (d.reader_gone) throw IoError("peer endpoint is gone");
    std::size_t n = std::min(buf.size(), room());
    if (n == 0) return IoResult::would_block();
    d.buf.insert(d.buf.end(), buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(n));
    state_->cv.notify_all();
    return IoResult::ok(n);
  }

  void set_blocking(bool blocking) override { blocking_ = blocking; }
  bool blocking() const override { return blocking_; }

  void close_write() override {
    std::lock_guard lk(state_->mu);
    state_->dir[out_].writer_closed = true;
    state_->cv.notify_all();
  }

  bool poll_readable() const override {
    std::lock_guard lk(state_->mu);
    const auto& d = state_->dir[in_];
    return !d.buf.empty() || d.writer_closed;
  }

  bool poll_writable() const override {
    std::lock_guard lk(state_->mu);
    const auto& d = state_->dir[out_];
    return d.reader_gone || state_->capacity == 0 || d.buf.size() < state_->capacity;
  }

 private:
  std::shared_ptr<PipeState> state_;
  int in_;
  int out_;
  bool blocking_ = true;
  std::size_t max_segment_;
  std::optional<std::mt19937_64> rng_;
};

}  // namespace

std::pair<std::unique_ptr<ByteStream>, std::unique_ptr<ByteStream>> make_memory_pipe(
    const MemoryPipeOptions& options) {
  auto state = std::make_shared<PipeState>();
  state->capacity = options.capacity;
  return {std::make_unique<MemoryEndpoint>(state, 0, options),
          std::make_unique<MemoryEndpoint>(state, 1, options)};
}

}  // namespace distea
