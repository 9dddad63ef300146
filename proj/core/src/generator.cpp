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

#include "distea/generator.hpp"

#include <algorithm>
#include <random>

namespace distea {
namespace {

using Rng = std::mt19937_64;

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

struct Link {
  std::size_t acceptor;
  std::size_t connector;
  std::string name;
  std::string address;
  // Messages sent but not yet received, per receiving end.
  std::size_t pending_to_acceptor = 0;
  std::size_t pending_to_connector = 0;

  std::size_t& pending_to(std::size_t proc) { return proc == acceptor ? pending_to_acceptor : pending_to_connector; }
};

struct ProcState {
  std::vector<std::string> pool;
  std::vector<std::string> stack;
  std::vector<std::size_t> links;
  std::size_t budget = 0;
  std::size_t spawns = 0;
  ScriptedProgram program;
};

std::string random_payload(Rng& rng) {
  std::string s(uniform(rng, 0, 10), 'a');
  for (auto& c : s) c = static_cast<char>('a' + uniform(rng, 0, 25));
  return s;
}

void emit(ProcState& p, ActionKind kind, std::string target, std::string text = {}) {
  p.program.threads.front().steps.push_back({kind, std::move(target), std::move(text)});
}

void local_call(Rng& rng, const std::vector<std::string>& pool, ThreadScript& t, std::size_t depth) {
  const auto& m = pool[uniform(rng, 0, pool.size() - 1)];
  t.steps.push_back({ActionKind::Enter, m, {}});
  auto children = depth < 3 ? uniform(rng, 0, 2) : 0;
  for (std::size_t k = 0; k < children; ++k) {
    local_call(rng, pool, t, depth + 1);
    t.steps.push_back({ActionKind::ReturnedInto, m, {}});
  }
  t.steps.push_back({ActionKind::Return, m, {}});
}

}  // namespace

std::vector<ScriptedProgram> generate_scripts(std::uint64_t seed, const GeneratorParams& params) {
  if (params.min_processes < 1 || params.min_processes > params.max_processes || params.min_methods < 1 ||
      params.min_methods > params.max_methods || params.max_depth < 1) {
    throw InvariantError("bad generator parameters");
  }
  Rng rng(seed);

  const auto n = uniform(rng, params.min_processes, params.max_processes);
  std::vector<ProcState> procs;
  procs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto prefix = "P" + std::to_string(i);
    ProcState p{{}, {}, {}, 0, 0, ScriptedProgram{ProcessId(prefix), {ThreadScript{"main", {}}}}};
    auto methods = uniform(rng, params.min_methods, params.max_methods);
    for (std::size_t j = 1; j < methods; ++j) p.pool.push_back(prefix + "::f" + std::to_string(j));
    for (std::size_t k = 0; k < params.shared_methods; ++k) p.pool.push_back("lib::g" + std::to_string(k));
    if (p.pool.empty()) p.pool.push_back(prefix + "::f1");
    p.budget = uniform(rng, 2 * methods, 4 * methods);
    procs.push_back(std::move(p));
  }

  // Spanning tree plus a few extra edges.
  std::vector<Link> links;
  auto add_link = [&](std::size_t a, std::size_t b) {
    if (chance(rng, 0.5)) std::swap(a, b);
    auto id = std::to_string(links.size());
    links.push_back({a, b, "k" + id, "addr" + id});
    procs[a].links.push_back(links.size() - 1);
    procs[b].links.push_back(links.size() - 1);
  };
  for (std::size_t i = 1; i < n; ++i) add_link(uniform(rng, 0, i - 1), i);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      bool linked = std::any_of(links.begin(), links.end(), [&](const Link& l) {
        return (l.acceptor == a && l.connector == b) || (l.acceptor == b && l.connector == a);
      });
      if (!linked && chance(rng, 0.25)) add_link(a, b);
    }
  }

  // Connects never block, so doing every connect before any accept keeps
  // setup deadlock-free.
  for (std::size_t i = 0; i < n; ++i) {
    auto& p = procs[i];
    auto main_method = p.program.process.str() + "::main";
    emit(p, ActionKind::Enter, main_method);
    p.stack.push_back(main_method);
    for (auto li : p.links) {
      if (links[li].connector == i) emit(p, ActionKind::Connect, links[li].name, links[li].address);
    }
    for (auto li : p.links) {
      if (links[li].acceptor == i) emit(p, ActionKind::Accept, links[li].name, links[li].address);
    }
  }

  // Build one global interleaving; each process's script is its projection.
  enum Choice { Enter, Return, Into, Send, Recv, Spawn };
  std::vector<std::size_t> active;
  for (;;) {
    active.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (procs[i].budget > 0) active.push_back(i);
    }
    if (active.empty()) break;
    auto pi = active[uniform(rng, 0, active.size() - 1)];
    auto& p = procs[pi];
    --p.budget;

    std::vector<std::size_t> inbox;
    for (auto li : p.links) {
      if (links[li].pending_to(pi) > 0) inbox.push_back(li);
    }
    std::vector<std::pair<Choice, double>> options;
    if (p.stack.size() < params.max_depth) options.push_back({Enter, 4});
    if (p.stack.size() > 1) options.push_back({Return, 3});
    options.push_back({Into, 0.5});
    if (!p.links.empty()) options.push_back({Send, 2});
    if (!inbox.empty()) options.push_back({Recv, 3});
    if (p.spawns < params.max_spawns) options.push_back({Spawn, 0.3});

    std::vector<double> weights;
    for (const auto& o : options) weights.push_back(o.second);
    auto choice = options[std::discrete_distribution<std::size_t>(weights.begin(), weights.end())(rng)].first;

    switch (choice) {
      case Enter: {
        auto m = p.pool[uniform(rng, 0, p.pool.size() - 1)];
        emit(p, ActionKind::Enter, m);
        p.stack.push_back(m);
        break;
      }
      case Return:
        emit(p, ActionKind::Return, p.stack.back());
        p.stack.pop_back();
        emit(p, ActionKind::ReturnedInto, p.stack.back());
        break;
      case Into:
        emit(p, ActionKind::ReturnedInto, p.stack.back());
        break;
      case Send: {
        auto& l = links[p.links[uniform(rng, 0, p.links.size() - 1)]];
        emit(p, ActionKind::Send, l.name, random_payload(rng));
        ++l.pending_to(l.acceptor == pi ? l.connector : l.acceptor);
        break;
      }
      case Recv: {
        auto& l = links[inbox[uniform(rng, 0, inbox.size() - 1)]];
        emit(p, ActionKind::Recv, l.name);
        --l.pending_to(pi);
        break;
      }
      case Spawn: {
        ThreadScript t{"t" + std::to_string(++p.spawns), {}};
        auto calls = uniform(rng, 1, 3);
        for (std::size_t k = 0; k < calls; ++k) local_call(rng, p.pool, t, 1);
        emit(p, ActionKind::Spawn, t.name);
        p.program.threads.push_back(std::move(t));
        break;
      }
    }
  }

  // Drain every inbox, then unwind to main and return from it.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  for (auto pi : order) {
    auto& p = procs[pi];
    for (auto li : p.links) {
      for (auto& pending = links[li].pending_to(pi); pending > 0; --pending) emit(p, ActionKind::Recv, links[li].name);
    }
    while (p.stack.size() > 1) {
      emit(p, ActionKind::Return, p.stack.back());
      p.stack.pop_back();
      emit(p, ActionKind::ReturnedInto, p.stack.back());
    }
    emit(p, ActionKind::Return, p.stack.back());
    p.stack.clear();
  }

  std::vector<ScriptedProgram> out;
  out.reserve(n);
  for (auto& p : procs) out.push_back(std::move(p.program));
  return out;
}

}  // namespace distea
