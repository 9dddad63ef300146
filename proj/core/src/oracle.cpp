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

#include "distea/oracle.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <optional>

namespace distea {

HappensBeforeOracle::HappensBeforeOracle(std::span<const ProcessLog> logs) : logs_(logs.begin(), logs.end()) {
  for (std::size_t p = 0; p < logs_.size(); ++p) {
    processes_.push_back(logs_[p].process);
    offsets_.push_back(nodes_.size());
    for (std::size_t i = 0; i < logs_[p].events.size(); ++i) nodes_.push_back({p, i, &logs_[p].events[i]});
  }
  const std::size_t n = nodes_.size();

  std::vector<std::vector<std::size_t>> succ(n);
  std::vector<std::size_t> indegree(n, 0);
  auto add_edge = [&](std::size_t a, std::size_t b) {
    succ[a].push_back(b);
    ++indegree[b];
  };

  std::map<std::string, std::vector<std::size_t>> sends, receives;
  for (std::size_t i = 0; i < n; ++i) {
    if (i + 1 < n && nodes_[i + 1].process == nodes_[i].process) add_edge(i, i + 1);
    const auto& ev = *nodes_[i].event;
    if (ev.type == CausalEvent::Type::Send) sends[ev.channel].push_back(i);
    if (ev.type == CausalEvent::Type::Receive) receives[ev.channel].push_back(i);
  }
  for (const auto& [channel, recvs] : receives) {
    const auto& snd = sends[channel];
    if (recvs.size() > snd.size()) throw InvariantError("channel " + channel + " has more receives than sends");
    for (std::size_t k = 0; k < recvs.size(); ++k) add_edge(snd[k], recvs[k]);
  }

  // Kahn order; leftovers mean a cycle.
  std::vector<std::size_t> order;
  order.reserve(n);
  std::deque<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push_back(i);
  }
  while (!ready.empty()) {
    auto i = ready.front();
    ready.pop_front();
    order.push_back(i);
    for (auto j : succ[i]) {
      if (--indegree[j] == 0) ready.push_back(j);
    }
  }
  acyclic_ = order.size() == n;

  words_ = (n + 63) / 64;
  reach_.assign(n * words_, 0);
  if (!acyclic_) return;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    auto* row = &reach_[*it * words_];
    for (auto j : succ[*it]) {
      row[j / 64] |= std::uint64_t{1} << (j % 64);
      const auto* other = &reach_[j * words_];
      for (std::size_t w = 0; w < words_; ++w) row[w] |= other[w];
    }
  }
}

bool HappensBeforeOracle::reaches(std::size_t from, std::size_t to) const {
  return (reach_[from * words_ + to / 64] >> (to % 64)) & 1;
}

bool HappensBeforeOracle::happens_before(EventRef a, EventRef b) const {
  return reaches(offsets_.at(a.process) + a.position, offsets_.at(b.process) + b.position);
}

HappensBeforeOracle::Impact HappensBeforeOracle::impact_set(const MethodId& query) const {
  std::vector<std::uint64_t> after(words_, 0);
  bool executed = false;
  for (std::size_t p = 0; p < processes_.size(); ++p) {
    auto end = p + 1 < offsets_.size() ? offsets_[p + 1] : nodes_.size();
    for (auto i = offsets_[p]; i < end; ++i) {
      const auto& ev = *nodes_[i].event;
      if (ev.type == CausalEvent::Type::Internal && ev.kind == InternalEventKind::Entry && ev.method == query) {
        executed = true;
        for (std::size_t w = 0; w < words_; ++w) after[w] |= reach_[i * words_ + w];
        break;  // later entries reach a subset of what the first one reaches
      }
    }
  }
  if (!executed) throw NoSuchQueryError("query " + query.str() + " has no entry event");

  Impact out;
  out.all.insert(query);
  for (std::size_t w = 0; w < words_; ++w) {
    for (auto bits = after[w]; bits != 0; bits &= bits - 1) {
      auto i = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
      const auto& ev = *nodes_[i].event;
      if (ev.type != CausalEvent::Type::Internal || ev.kind == InternalEventKind::Entry) continue;
      out.all.insert(*ev.method);
      out.per_process[processes_[nodes_[i].process]].insert(*ev.method);
    }
  }
  return out;
}

std::vector<HappensBeforeOracle::ClockViolation> HappensBeforeOracle::audit_clock_condition(
    const TraceCorpus& corpus) const {
  // Stamp of every internal node, matched by position against the trace.
  std::vector<std::optional<LamportClock>> stamp(nodes_.size());
  for (std::size_t p = 0; p < processes_.size(); ++p) {
    const auto* trace = corpus.find(processes_[p]);
    if (!trace || !trace->full_sequence()) {
      throw InvariantError("no full event sequence for process " + processes_[p].str());
    }
    const auto& seq = *trace->full_sequence();
    std::size_t k = 0;
    auto end = p + 1 < offsets_.size() ? offsets_[p + 1] : nodes_.size();
    for (auto i = offsets_[p]; i < end; ++i) {
      const auto& ev = *nodes_[i].event;
      if (ev.type != CausalEvent::Type::Internal) continue;
      if (k >= seq.size() || seq[k].method != *ev.method || seq[k].kind != ev.kind) {
        throw InvariantError("causal log of " + processes_[p].str() + " diverges from its trace at event " +
                             std::to_string(k));
      }
      stamp[i] = seq[k++].timestamp;
    }
    if (k != seq.size()) throw InvariantError("trace of " + processes_[p].str() + " has unlogged events");
  }

  std::vector<ClockViolation> out;
  for (std::size_t a = 0; a < nodes_.size(); ++a) {
    if (!stamp[a]) continue;
    for (std::size_t w = 0; w < words_; ++w) {
      for (auto bits = reach_[a * words_ + w]; bits != 0; bits &= bits - 1) {
        auto b = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
        if (stamp[b] && !(*stamp[a] < *stamp[b])) {
          out.push_back({{nodes_[a].process, nodes_[a].position},
                         {nodes_[b].process, nodes_[b].position},
                         *stamp[a],
                         *stamp[b]});
        }
      }
    }
  }
  return out;
}

ImpactSet full_sequence_impact_set(const TraceCorpus& corpus, const MethodId& query) {
  std::optional<std::pair<LamportClock, ProcessId>> origin;
  for (const auto& [process, trace] : corpus.traces()) {
    if (!trace.full_sequence()) throw InvariantError("trace of " + process.str() + " has no full sequence");
    for (const auto& ev : *trace.full_sequence()) {
      if (ev.method == query && ev.kind == InternalEventKind::Entry) {
        std::pair<LamportClock, ProcessId> cand{ev.timestamp, process};
        if (!origin || cand < *origin) origin = cand;
        break;
      }
    }
  }
  if (!origin) throw NoSuchQueryError("query " + query.str() + " never executed");

  MethodSet local, remote;
  for (const auto& [process, trace] : corpus.traces()) {
    auto& bucket = process == origin->second ? local : remote;
    for (const auto& ev : *trace.full_sequence()) {
      if (ev.kind != InternalEventKind::Entry && ev.timestamp > origin->first) bucket.insert(ev.method);
    }
  }
  return ImpactSet::from_parts(query, origin->second, std::move(local), std::move(remote));
}

bool compression_consistent(const TraceCorpus& corpus) {
  for (const auto& [_, trace] : corpus.traces()) {
    if (!trace.full_sequence()) return false;
    if (compress_events(*trace.full_sequence()) != trace.records()) return false;
  }
  return true;
}

}  // namespace distea
