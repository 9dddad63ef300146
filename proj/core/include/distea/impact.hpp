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

#include <span>
#include <vector>

#include "distea/model.hpp"
#include "distea/trace_store.hpp"

namespace distea {

/// Non-empty ordered list of distinct query methods.
class QuerySet {
 public:
  explicit QuerySet(std::vector<MethodId> methods);

  const std::vector<MethodId>& methods() const noexcept { return methods_; }
  auto begin() const { return methods_.begin(); }
  auto end() const { return methods_.end(); }

 private:
  std::vector<MethodId> methods_;
};

struct QueryOrigin {
  ProcessId process;
  LamportClock first_entry;
};

// Earliest first entry of `query` over all processes; ties go to the
// lexicographically smallest process. Throws NoSuchQueryError if the query
// never executed.
QueryOrigin query_origin(const TraceCorpus& corpus, const MethodId& query);

// Methods m with last_return(m) > q in some process, q being the query's
// earliest first entry. Split into the origin process (local) and every
// other process (remote).
ImpactSet impact_set(const TraceCorpus& corpus, const MethodId& query);

// Coverage baseline: every executed method, split the same way.
ImpactSet mcov_set(const TraceCorpus& corpus, const MethodId& query);

// Union of per-input impact sets of the same query. Keeps the first set's
// local process. Throws InvariantError on an empty span or mixed queries.
ImpactSet union_by_input_type(std::span<const ImpactSet> sets);

// Every method with a record anywhere in the corpus, sorted by name.
std::vector<MethodId> executed_methods(const TraceCorpus& corpus);

enum class ImpactSubset : std::uint8_t { All, Local, Remote, Common };

const char* subset_name(ImpactSubset subset) noexcept;

struct RankedMethod {
  MethodId method;
  LamportClock last_event;
};

// Members of one subset ordered by (latest return stamp, name), the order in
// which their final executions happened. For Local the stamp comes from the
// local process, for Remote from the other processes, otherwise from all.
std::vector<RankedMethod> ranked_members(const TraceCorpus& corpus, const ImpactSet& set,
                                         ImpactSubset subset);

struct QueryEffectiveness {
  MethodId query;
  std::size_t impact_all = 0, impact_local = 0, impact_remote = 0, impact_common = 0;
  std::size_t mcov_all = 0, mcov_local = 0, mcov_remote = 0;
  // |impact| / |mcov| per subset; 0 when the baseline subset is empty.
  double ratio_all = 0, ratio_local = 0, ratio_remote = 0;
  // Shares of the impact set: local only, remote only, common.
  double local_only_share = 0, remote_only_share = 0, common_share = 0;
};

struct EffectivenessReport {
  std::vector<QueryEffectiveness> rows;
  double mean_ratio_all = 0, mean_ratio_local = 0, mean_ratio_remote = 0;
  double mean_local_only_share = 0, mean_remote_only_share = 0, mean_common_share = 0;
};

EffectivenessReport effectiveness(const TraceCorpus& corpus, const QuerySet& queries);

}  // namespace distea
