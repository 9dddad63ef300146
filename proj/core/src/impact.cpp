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

#include "distea/impact.hpp"

#include <algorithm>
#include <optional>
#include <set>

namespace distea {
namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

QuerySet::QuerySet(std::vector<MethodId> methods) {
  std::set<MethodId> seen;
  for (auto& m : methods) {
    if (seen.insert(m).second) methods_.push_back(std::move(m));
  }
  if (methods_.empty()) throw InvariantError("query set must not be empty");
}

QueryOrigin query_origin(const TraceCorpus& corpus, const MethodId& query) {
  std::optional<QueryOrigin> best;
  // traces() is ordered by process id, so strict < keeps the smallest id on ties.
  for (const auto& [process, trace] : corpus.traces()) {
    const auto* r = trace.find(query);
    if (r && (!best || r->first_entry() < best->first_entry)) best = QueryOrigin{process, r->first_entry()};
  }
  if (!best) throw NoSuchQueryError("query " + query.str() + " never executed");
  return *best;
}

ImpactSet impact_set(const TraceCorpus& corpus, const MethodId& query) {
  auto origin = query_origin(corpus, query);
  MethodSet local, remote;
  for (const auto& [process, trace] : corpus.traces()) {
    auto& bucket = process == origin.process ? local : remote;
    for (const auto& [method, r] : trace.records()) {
      if (r.last_return() > origin.first_entry) bucket.insert(method);
    }
  }
  return ImpactSet::from_parts(query, std::move(origin.process), std::move(local), std::move(remote));
}

ImpactSet mcov_set(const TraceCorpus& corpus, const MethodId& query) {
  auto origin = query_origin(corpus, query);
  MethodSet local, remote;
  for (const auto& [process, trace] : corpus.traces()) {
    auto& bucket = process == origin.process ? local : remote;
    for (const auto& [method, _] : trace.records()) bucket.insert(method);
  }
  return ImpactSet::from_parts(query, std::move(origin.process), std::move(local), std::move(remote));
}

ImpactSet union_by_input_type(std::span<const ImpactSet> sets) {
  if (sets.empty()) throw InvariantError("union needs at least one impact set");
  MethodSet local, remote;
  for (const auto& s : sets) {
    if (s.query != sets.front().query) {
      throw InvariantError("cannot union impact sets of " + sets.front().query.str() + " and " + s.query.str());
    }
    local.insert(s.local.begin(), s.local.end());
    remote.insert(s.remote.begin(), s.remote.end());
  }
  return ImpactSet::from_parts(sets.front().query, sets.front().local_process, std::move(local),
                               std::move(remote));
}

std::vector<MethodId> executed_methods(const TraceCorpus& corpus) {
  MethodSet all;
  for (const auto& [_, trace] : corpus.traces()) {
    for (const auto& [method, _r] : trace.records()) all.insert(method);
  }
  return {all.begin(), all.end()};
}

const char* subset_name(ImpactSubset subset) noexcept {
  switch (subset) {
    case ImpactSubset::All:
      return "all";
    case ImpactSubset::Local:
      return "local";
    case ImpactSubset::Remote:
      return "remote";
    case ImpactSubset::Common:
      return "common";
  }
  return "?";
}

std::vector<RankedMethod> ranked_members(const TraceCorpus& corpus, const ImpactSet& set,
                                         ImpactSubset subset) {
  const MethodSet* members = nullptr;
  switch (subset) {
    case ImpactSubset::All:
      members = &set.all;
      break;
    case ImpactSubset::Local:
      members = &set.local;
      break;
    case ImpactSubset::Remote:
      members = &set.remote;
      break;
    case ImpactSubset::Common:
      members = &set.common;
      break;
  }

  std::vector<RankedMethod> out;
  for (const auto& m : *members) {
    LamportClock latest{0};
    for (const auto& [process, trace] : corpus.traces()) {
      bool is_local = process == set.local_process;
      if ((subset == ImpactSubset::Local && !is_local) || (subset == ImpactSubset::Remote && is_local)) continue;
      if (const auto* r = trace.find(m)) latest = std::max(latest, r->last_return());
    }
    out.push_back({m, latest});
  }
  std::sort(out.begin(), out.end(), [](const RankedMethod& a, const RankedMethod& b) {
    return std::tie(a.last_event, a.method) < std::tie(b.last_event, b.method);
  });
  return out;
}

EffectivenessReport effectiveness(const TraceCorpus& corpus, const QuerySet& queries) {
  EffectivenessReport report;
  for (const auto& q : queries) {
    auto is = impact_set(corpus, q);
    auto base = mcov_set(corpus, q);

    QueryEffectiveness row{q};
    row.impact_all = is.all.size();
    row.impact_local = is.local.size();
    row.impact_remote = is.remote.size();
    row.impact_common = is.common.size();
    row.mcov_all = base.all.size();
    row.mcov_local = base.local.size();
    row.mcov_remote = base.remote.size();
    row.ratio_all = ratio(row.impact_all, row.mcov_all);
    row.ratio_local = ratio(row.impact_local, row.mcov_local);
    row.ratio_remote = ratio(row.impact_remote, row.mcov_remote);
    row.local_only_share = ratio(row.impact_local - row.impact_common, row.impact_all);
    row.remote_only_share = ratio(row.impact_remote - row.impact_common, row.impact_all);
    row.common_share = ratio(row.impact_common, row.impact_all);
    report.rows.push_back(std::move(row));
  }

  const auto n = static_cast<double>(report.rows.size());
  for (const auto& r : report.rows) {
    report.mean_ratio_all += r.ratio_all / n;
    report.mean_ratio_local += r.ratio_local / n;
    report.mean_ratio_remote += r.ratio_remote / n;
    report.mean_local_only_share += r.local_only_share / n;
    report.mean_remote_only_share += r.remote_only_share / n;
    report.mean_common_share += r.common_share / n;
  }
  return report;
}

}  // namespace distea
