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

#include "distea/script.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace distea {
namespace {

struct KindName {
  ActionKind kind;
  std::string_view word;
};

constexpr KindName kKindNames[] = {
    {ActionKind::Enter, "enter"},   {ActionKind::Return, "return"}, {ActionKind::ReturnedInto, "returned-into"},
    {ActionKind::Send, "send"},     {ActionKind::Recv, "recv"},     {ActionKind::Accept, "accept"},
    {ActionKind::Connect, "connect"}, {ActionKind::Spawn, "spawn"},
};

std::string_view word_of(ActionKind kind) {
  for (const auto& k : kKindNames) {
    if (k.kind == kind) return k.word;
  }
  return "?";
}

bool is_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (static_cast<unsigned char>(c) <= 0x20 || c == 0x7f) return false;
  }
  return true;
}

bool has_newline(std::string_view s) { return s.find_first_of("\r\n") != std::string_view::npos; }

std::string thread_label(const ScriptedProgram& p, const ThreadScript& t) {
  return p.process.str() + "/" + t.name;
}

}  // namespace

void validate(const ScriptedProgram& program) {
  if (program.threads.empty()) throw ScriptError(program.process.str() + ": no threads");

  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < program.threads.size(); ++i) {
    const auto& t = program.threads[i];
    if (!is_name(t.name)) throw ScriptError(program.process.str() + ": bad thread name '" + t.name + "'");
    if (!index.emplace(t.name, i).second) {
      throw ScriptError(program.process.str() + ": duplicate thread " + t.name);
    }
  }

  std::vector<int> spawned(program.threads.size(), 0);
  std::set<std::string> conns;
  for (const auto& t : program.threads) {
    const auto label = thread_label(program, t);
    std::vector<std::string> stack;
    std::set<std::string> own_conns;
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
      const auto& a = t.steps[i];
      auto where = label + " step " + std::to_string(i + 1) + " (" + std::string(word_of(a.kind)) + "): ";
      switch (a.kind) {
        case ActionKind::Enter:
        case ActionKind::Return:
        case ActionKind::ReturnedInto:
          if (!is_name(a.target) || a.target.front() == '#') throw ScriptError(where + "bad method name");
          if (a.kind == ActionKind::Enter) {
            stack.push_back(a.target);
            break;
          }
          if (stack.empty() || stack.back() != a.target) {
            throw ScriptError(where + a.target + " is not the innermost open method");
          }
          if (a.kind == ActionKind::Return) stack.pop_back();
          break;
        case ActionKind::Accept:
        case ActionKind::Connect:
          if (!is_name(a.target) || !is_name(a.text)) throw ScriptError(where + "bad connection or address");
          if (!conns.insert(a.target).second) throw ScriptError(where + "connection " + a.target + " reopened");
          own_conns.insert(a.target);
          break;
        case ActionKind::Send:
        case ActionKind::Recv:
          if (!own_conns.count(a.target)) throw ScriptError(where + "unknown connection " + a.target);
          if (a.kind == ActionKind::Send && has_newline(a.text)) throw ScriptError(where + "payload has a newline");
          break;
        case ActionKind::Spawn: {
          auto it = index.find(a.target);
          if (it == index.end()) throw ScriptError(where + "unknown thread " + a.target);
          if (it->second == 0) throw ScriptError(where + "cannot spawn the initial thread");
          ++spawned[it->second];
          break;
        }
      }
    }
    if (!stack.empty()) throw ScriptError(label + ": method " + stack.back() + " never returns");
  }

  for (std::size_t i = 1; i < program.threads.size(); ++i) {
    if (spawned[i] != 1) {
      throw ScriptError(thread_label(program, program.threads[i]) + " is spawned " + std::to_string(spawned[i]) +
                        " times, expected once");
    }
  }

  // With single spawns, a thread is reachable iff its spawn chain reaches 0.
  std::vector<bool> reached(program.threads.size(), false);
  std::vector<std::size_t> work{0};
  reached[0] = true;
  while (!work.empty()) {
    auto i = work.back();
    work.pop_back();
    for (const auto& a : program.threads[i].steps) {
      if (a.kind != ActionKind::Spawn) continue;
      auto j = index.at(a.target);
      if (!reached[j]) {
        reached[j] = true;
        work.push_back(j);
      }
    }
  }
  for (std::size_t i = 0; i < reached.size(); ++i) {
    if (!reached[i]) throw ScriptError(thread_label(program, program.threads[i]) + " is never started");
  }
}

void validate_topology(std::span<const ScriptedProgram> programs) {
  std::set<ProcessId> ids;
  std::map<std::string, long> balance;
  for (const auto& p : programs) {
    if (!ids.insert(p.process).second) throw ScriptError("duplicate process " + p.process.str());
    for (const auto& t : p.threads) {
      for (const auto& a : t.steps) {
        if (a.kind == ActionKind::Accept) ++balance[a.text];
        if (a.kind == ActionKind::Connect) --balance[a.text];
      }
    }
  }
  for (const auto& [addr, b] : balance) {
    if (b != 0) {
      throw ScriptError("address " + addr + ": " + std::to_string(std::abs(b)) +
                        (b > 0 ? " accept(s) without a connecting peer" : " connect(s) without an accepting peer"));
    }
  }
}

std::string serialize_script(const ScriptedProgram& program) {
  std::ostringstream os;
  os << kScriptMagic << '\n' << "process " << program.process.str() << '\n';
  for (const auto& t : program.threads) {
    os << "thread " << t.name << '\n';
    for (const auto& a : t.steps) {
      os << word_of(a.kind) << ' ' << a.target;
      switch (a.kind) {
        case ActionKind::Accept:
        case ActionKind::Connect:
          os << ' ' << a.text;
          break;
        case ActionKind::Send:
          if (!a.text.empty()) os << ' ' << a.text;
          break;
        default:
          break;
      }
      os << '\n';
    }
  }
  return std::move(os).str();
}

ScriptedProgram parse_script(std::string_view text) {
  std::vector<std::string_view> lines;
  for (std::size_t start = 0; start < text.size();) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }

  std::size_t i = 0;
  auto next_significant = [&]() -> std::optional<std::string_view> {
    while (i < lines.size()) {
      auto l = lines[i++];
      auto first = l.find_first_not_of(" \t\r");
      if (first == std::string_view::npos || l[first] == '#') continue;
      return l;
    }
    return std::nullopt;
  };

  auto magic = next_significant();
  if (!magic || *magic != kScriptMagic) {
    if (magic && magic->starts_with("distea-script ")) throw ParseError(i, "unsupported script version");
    throw ParseError(i == 0 ? 1 : i, "not a distea script");
  }
  auto proc_line = next_significant();
  if (!proc_line || !proc_line->starts_with("process ")) throw ParseError(i, "expected 'process <id>'");
  std::optional<ProcessId> process;
  try {
    process.emplace(std::string(proc_line->substr(8)));
  } catch (const InvariantError& e) {
    throw ParseError(i, e.what());
  }

  ScriptedProgram program{*process, {}};
  while (auto line = next_significant()) {
    const std::size_t line_no = i;
    auto sp = line->find(' ');
    auto word = line->substr(0, sp);
    auto rest = sp == std::string_view::npos ? std::string_view{} : line->substr(sp + 1);

    if (word == "thread") {
      if (rest.empty()) throw ParseError(line_no, "thread needs a name");
      program.threads.push_back({std::string(rest), {}});
      continue;
    }
    if (program.threads.empty()) throw ParseError(line_no, "action before the first 'thread' line");

    const KindName* kind = nullptr;
    for (const auto& k : kKindNames) {
      if (k.word == word) kind = &k;
    }
    if (!kind) throw ParseError(line_no, "unknown action '" + std::string(word) + "'");

    Action action{kind->kind, {}, {}};
    auto sp2 = rest.find(' ');
    action.target = std::string(rest.substr(0, sp2));
    auto tail = sp2 == std::string_view::npos ? std::string_view{} : rest.substr(sp2 + 1);
    if (action.target.empty()) throw ParseError(line_no, std::string(word) + " needs an argument");

    switch (action.kind) {
      case ActionKind::Send:
        action.text = std::string(tail);
        break;
      case ActionKind::Accept:
      case ActionKind::Connect:
        if (tail.empty() || tail.find(' ') != std::string_view::npos) {
          throw ParseError(line_no, std::string(word) + " expects <conn> <address>");
        }
        action.text = std::string(tail);
        break;
      default:
        if (sp2 != std::string_view::npos) throw ParseError(line_no, "unexpected text after " + action.target);
        break;
    }
    program.threads.back().steps.push_back(std::move(action));
  }

  validate(program);
  return program;
}

ScriptedProgram read_script_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open script " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_script(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path.string() + ": " + e.what());
  } catch (const ScriptError& e) {
    throw ScriptError(path.string() + ": " + e.what());
  }
}

void write_script_file(const std::filesystem::path& path, const ScriptedProgram& program) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create script " + path.string());
  out << serialize_script(program);
  if (!out.flush()) throw IoError("failed writing script " + path.string());
}

}  // namespace distea
