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

#include "distea/simulator.hpp"

#include <deque>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <set>
#include <thread>

#include "distea/connection.hpp"
#include "distea/memory_pipe.hpp"
#include "distea/monitor.hpp"
#include "distea/tcp.hpp"

namespace distea {
namespace {

struct ProcessRuntime {
  ProcessRuntime(const ProcessId& id, ReceiveRule rule)
      : monitor(id, MonitorOptions{true, rule}), log{id, {}} {}

  // Probe and causal-log append form one unit, so the log order matches the
  // stamp order even with several threads.
  void probe(const Action& a) {
    MethodId m(a.target);
    std::lock_guard lk(mu);
    InternalEventKind kind = InternalEventKind::Entry;
    switch (a.kind) {
      case ActionKind::Enter:
        monitor.on_entry(m);
        break;
      case ActionKind::Return:
        kind = InternalEventKind::Return;
        monitor.on_return(m);
        break;
      default:
        kind = InternalEventKind::ReturnedInto;
        monitor.on_returned_into(m);
        break;
    }
    log.events.push_back({CausalEvent::Type::Internal, std::move(m), kind, {}});
  }

  Monitor monitor;
  std::mutex mu;
  ProcessLog log;
};

// Clock port of one connection end: delegates to the process clock and logs
// the communication event under the process lock.
class RecordingClock final : public ClockPort {
 public:
  RecordingClock(ProcessRuntime& proc, std::string send_channel, std::string recv_channel)
      : proc_(proc), send_channel_(std::move(send_channel)), recv_channel_(std::move(recv_channel)) {}

  LamportClock clock_for_send() override {
    std::lock_guard lk(proc_.mu);
    auto c = proc_.monitor.clock().clock_for_send();
    proc_.log.events.push_back({CausalEvent::Type::Send, std::nullopt, {}, send_channel_});
    return c;
  }

  void clock_received(LamportClock ts) override {
    std::lock_guard lk(proc_.mu);
    proc_.monitor.clock().clock_received(ts);
    proc_.log.events.push_back({CausalEvent::Type::Receive, std::nullopt, {}, recv_channel_});
  }

 private:
  ProcessRuntime& proc_;
  std::string send_channel_;
  std::string recv_channel_;
};

struct Conn {
  std::unique_ptr<RecordingClock> clock;
  std::unique_ptr<PiggybackConnection> pb;
  std::string line;
};

Conn make_conn(ProcessRuntime& proc, std::unique_ptr<ByteStream> stream, const std::string& uid, bool connector) {
  auto c2a = uid + "/c2a";
  auto a2c = uid + "/a2c";
  Conn c;
  c.clock = std::make_unique<RecordingClock>(proc, connector ? c2a : a2c, connector ? a2c : c2a);
  c.pb = std::make_unique<PiggybackConnection>(std::move(stream), *c.clock);
  return c;
}

bool take_line(Conn& c) {
  auto nl = c.line.find('\n');
  if (nl == std::string::npos) return false;
  c.line.erase(0, nl + 1);
  return true;
}

void send_line(Conn& c, const std::string& payload) {
  auto bytes = to_bytes(payload);
  bytes.push_back(std::byte{'\n'});
  c.pb->send(bytes);
}

const ThreadScript& thread_named(const ScriptedProgram& p, const std::string& name) {
  for (const auto& t : p.threads) {
    if (t.name == name) return t;
  }
  throw ScriptError(p.process.str() + ": no thread " + name);
}

std::string step_label(const ScriptedProgram& p, const ThreadScript& t, std::size_t pc) {
  return p.process.str() + "/" + t.name + " step " + std::to_string(pc + 1);
}

Conn& conn_of(std::map<std::string, Conn>& conns, const std::string& name) {
  auto it = conns.find(name);
  if (it == conns.end()) throw ScriptError("connection " + name + " is not open");
  return it->second;
}

RunResult collect(std::vector<std::unique_ptr<ProcessRuntime>>& procs, const RunOptions& options) {
  std::vector<ProcessTrace> traces;
  std::vector<ProcessLog> logs;
  for (auto& p : procs) {
    traces.push_back(parse_trace(serialize_trace(p->monitor.snapshot())));
    logs.push_back(std::move(p->log));
  }
  return RunResult{merge(std::move(traces), options.run_id), std::move(logs)};
}

// ---------------------------------------------------------------------------
// In-memory, single-threaded, seeded interleaving.

class MemoryRun {
 public:
  MemoryRun(std::span<const ScriptedProgram> programs, const RunOptions& options)
      : programs_(programs), options_(options), rng_(options.seed) {
    for (std::size_t i = 0; i < programs.size(); ++i) {
      procs_.push_back(std::make_unique<ProcessRuntime>(programs[i].process, options.receive_rule));
      add_thread(i, programs[i].threads.front());
    }
  }

  RunResult run() {
    std::vector<std::size_t> runnable;
    for (;;) {
      runnable.clear();
      bool all_done = true;
      for (std::size_t i = 0; i < threads_.size(); ++i) {
        if (threads_[i]->done) continue;
        all_done = false;
        if (!threads_[i]->blocked) runnable.push_back(i);
      }
      if (all_done) break;
      if (runnable.empty()) throw DeadlockError("no scripted thread can proceed: " + blocked_summary());

      auto pick = std::uniform_int_distribution<std::size_t>(0, runnable.size() - 1)(rng_);
      step(*threads_[runnable[pick]]);
    }
    return collect(procs_, options_);
  }

 private:
  struct SimThread {
    std::size_t proc = 0;
    const ThreadScript* script = nullptr;
    std::size_t pc = 0;
    bool blocked = false;
    bool done = false;
    std::map<std::string, Conn> conns;
  };

  struct PendingConnect {
    std::unique_ptr<ByteStream> stream;
    std::string uid;
  };

  enum class Outcome { Advanced, AdvancedWake, Blocked };

  void add_thread(std::size_t proc, const ThreadScript& script) {
    auto t = std::make_unique<SimThread>();
    t->proc = proc;
    t->script = &script;
    threads_.push_back(std::move(t));
  }

  void wake_all() {
    for (auto& t : threads_) t->blocked = false;
  }

  std::string blocked_summary() const {
    std::string out;
    for (const auto& t : threads_) {
      if (t->done) continue;
      if (!out.empty()) out += ", ";
      out += step_label(programs_[t->proc], *t->script, t->pc);
    }
    return out;
  }

  void step(SimThread& t) {
    const auto& program = programs_[t.proc];
    if (t.pc == t.script->steps.size()) {
      for (auto& [_, c] : t.conns) c.pb->close_write();
      t.done = true;
      wake_all();
      return;
    }
    Outcome outcome;
    try {
      outcome = execute(t, t.script->steps[t.pc]);
    } catch (const ScriptError&) {
      throw;
    } catch (const Error& e) {
      throw ScriptError(step_label(program, *t.script, t.pc) + ": " + e.what());
    }
    if (outcome == Outcome::Blocked) {
      t.blocked = true;
      return;
    }
    ++t.pc;
    if (outcome == Outcome::AdvancedWake) wake_all();
  }

  Outcome execute(SimThread& t, const Action& a) {
    auto& proc = *procs_[t.proc];
    switch (a.kind) {
      case ActionKind::Enter:
      case ActionKind::Return:
      case ActionKind::ReturnedInto:
        proc.probe(a);
        return Outcome::Advanced;

      case ActionKind::Connect: {
        MemoryPipeOptions opts;
        opts.segment_seed = rng_();
        opts.max_segment = options_.max_read;
        auto [near, far] = make_memory_pipe(opts);
        near->set_blocking(false);
        far->set_blocking(false);
        auto uid = "pipe" + std::to_string(next_pipe_++);
        pending_[a.text].push_back({std::move(far), uid});
        t.conns.emplace(a.target, make_conn(proc, std::move(near), uid, true));
        return Outcome::AdvancedWake;
      }

      case ActionKind::Accept: {
        auto& q = pending_[a.text];
        if (q.empty()) return Outcome::Blocked;
        auto pc = std::move(q.front());
        q.pop_front();
        t.conns.emplace(a.target, make_conn(proc, std::move(pc.stream), pc.uid, false));
        return Outcome::Advanced;
      }

      case ActionKind::Send:
        send_line(conn_of(t.conns, a.target), a.text);
        return Outcome::AdvancedWake;

      case ActionKind::Recv: {
        auto& c = conn_of(t.conns, a.target);
        Bytes buf;
        for (;;) {
          if (take_line(c)) return Outcome::Advanced;
          buf.resize(std::uniform_int_distribution<std::size_t>(1, std::max<std::size_t>(1, options_.max_read))(rng_));
          auto r = c.pb->recv(buf);
          if (r.status == IoStatus::WouldBlock) return Outcome::Blocked;
          if (r.status == IoStatus::Eof) {
            throw ScriptError(step_label(programs_[t.proc], *t.script, t.pc) + ": recv on " + a.target +
                              " has no matching send (peer closed)");
          }
          c.line += to_string(std::span(buf).first(r.bytes));
        }
      }

      case ActionKind::Spawn:
        add_thread(t.proc, thread_named(programs_[t.proc], a.target));
        return Outcome::Advanced;
    }
    return Outcome::Advanced;
  }

  std::span<const ScriptedProgram> programs_;
  RunOptions options_;
  std::mt19937_64 rng_;
  std::vector<std::unique_ptr<ProcessRuntime>> procs_;
  std::vector<std::unique_ptr<SimThread>> threads_;
  std::map<std::string, std::deque<PendingConnect>> pending_;
  std::uint64_t next_pipe_ = 0;
};

// ---------------------------------------------------------------------------
// Real loopback sockets, one OS thread per scripted thread.

class TcpRun {
 public:
  TcpRun(std::span<const ScriptedProgram> programs, const RunOptions& options)
      : programs_(programs), options_(options) {
    for (const auto& p : programs) {
      procs_.push_back(std::make_unique<ProcessRuntime>(p.process, options.receive_rule));
      for (const auto& t : p.threads) {
        for (const auto& a : t.steps) {
          if (a.kind == ActionKind::Accept && !listeners_.count(a.text)) {
            listeners_.emplace(a.text, std::make_unique<TcpListener>(HostPort{"127.0.0.1", 0}));
          }
        }
      }
    }
  }

  RunResult run() {
    {
      std::lock_guard lk(mu_);
      for (std::size_t i = 0; i < programs_.size(); ++i) start(i, programs_[i].threads.front());
    }
    for (std::size_t i = 0;; ++i) {
      std::thread* t = nullptr;
      {
        std::lock_guard lk(mu_);
        if (i >= os_threads_.size()) break;
        t = &os_threads_[i];
      }
      t->join();
    }
    keepalive_.clear();
    if (error_) std::rethrow_exception(error_);
    return collect(procs_, options_);
  }

 private:
  // Caller holds mu_.
  void start(std::size_t proc, const ThreadScript& script) {
    os_threads_.emplace_back([this, proc, &script] {
      try {
        run_thread(proc, script);
      } catch (...) {
        std::lock_guard lk(mu_);
        if (!error_) error_ = std::current_exception();
      }
    });
  }

  void run_thread(std::size_t proc_index, const ThreadScript& script) {
    const auto& program = programs_[proc_index];
    auto& proc = *procs_[proc_index];
    std::map<std::string, Conn> conns;
    std::array<std::byte, 4096> buf{};

    for (std::size_t pc = 0; pc < script.steps.size(); ++pc) {
      const auto& a = script.steps[pc];
      try {
        switch (a.kind) {
          case ActionKind::Enter:
          case ActionKind::Return:
          case ActionKind::ReturnedInto:
            proc.probe(a);
            break;
          case ActionKind::Connect: {
            auto stream = TcpStream::connect(HostPort{"127.0.0.1", listener(a.text).port()});
            stream->set_read_timeout(options_.io_timeout);
            auto uid = "tcp:" + std::to_string(stream->local_port());
            conns.emplace(a.target, make_conn(proc, std::move(stream), uid, true));
            break;
          }
          case ActionKind::Accept: {
            auto stream = listener(a.text).accept(options_.io_timeout);
            stream->set_read_timeout(options_.io_timeout);
            auto uid = "tcp:" + std::to_string(stream->peer_port());
            conns.emplace(a.target, make_conn(proc, std::move(stream), uid, false));
            break;
          }
          case ActionKind::Send:
            send_line(conn_of(conns, a.target), a.text);
            break;
          case ActionKind::Recv: {
            auto& c = conn_of(conns, a.target);
            while (!take_line(c)) {
              auto r = c.pb->recv(buf);
              if (r.status == IoStatus::Eof) throw ScriptError("recv on " + a.target + " has no matching send (peer closed)");
              c.line += to_string(std::span(buf).first(r.bytes));
            }
            break;
          }
          case ActionKind::Spawn: {
            std::lock_guard lk(mu_);
            start(proc_index, thread_named(program, a.target));
            break;
          }
        }
      } catch (const TimeoutError& e) {
        throw DeadlockError(step_label(program, script, pc) + ": " + e.what());
      } catch (const ScriptError& e) {
        throw ScriptError(step_label(program, script, pc) + ": " + e.what());
      } catch (const Error& e) {
        throw ScriptError(step_label(program, script, pc) + ": " + e.what());
      }
    }

    for (auto& [_, c] : conns) c.pb->close_write();
    std::lock_guard lk(mu_);
    for (auto& [_, c] : conns) keepalive_.push_back(std::move(c));
  }

  TcpListener& listener(const std::string& address) {
    auto it = listeners_.find(address);
    if (it == listeners_.end()) throw ScriptError("nobody accepts on " + address);
    return *it->second;
  }

  std::span<const ScriptedProgram> programs_;
  RunOptions options_;
  std::vector<std::unique_ptr<ProcessRuntime>> procs_;
  std::map<std::string, std::unique_ptr<TcpListener>> listeners_;

  std::mutex mu_;
  std::deque<std::thread> os_threads_;
  std::vector<Conn> keepalive_;
  std::exception_ptr error_;
};

}  // namespace

RunResult run_scripts(std::span<const ScriptedProgram> programs, const RunOptions& options) {
  if (programs.empty()) throw ScriptError("nothing to run");
  for (const auto& p : programs) validate(p);
  validate_topology(programs);

  if (options.transport == TransportMode::Memory) return MemoryRun(programs, options).run();
  return TcpRun(programs, options).run();
}

}  // namespace distea
