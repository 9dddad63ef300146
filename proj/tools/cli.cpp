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

#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "distea/impact.hpp"
#include "distea/script.hpp"
#include "distea/simulator.hpp"
#include "distea/trace_store.hpp"

namespace distea::cli {
namespace {

namespace fs = std::filesystem;

enum class Format { Table, Machine };

struct UsageError : Error {
  using Error::Error;
};

std::string percent(double r) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << r * 100.0 << '%';
  return os.str();
}

std::string fraction(double r) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << r;
  return os.str();
}

// Trace arguments may name files or directories of *.trace files.
TraceCorpus load_corpus(const std::vector<std::string>& inputs) {
  std::vector<ProcessTrace> traces;
  for (const auto& in : inputs) {
    fs::path p(in);
    if (fs::is_directory(p)) {
      auto files = gather_trace_files(p);
      if (files.empty()) throw UsageError("no .trace files in " + in);
      for (const auto& f : files) traces.push_back(read_trace_file(f));
    } else if (fs::exists(p)) {
      traces.push_back(read_trace_file(p));
    } else {
      throw UsageError("no such trace file: " + in);
    }
  }
  try {
    return merge(std::move(traces));
  } catch (const InvariantError& e) {
    throw UsageError(e.what());
  }
}

std::vector<MethodId> load_queries(const std::vector<std::string>& queries, const std::string& query_file) {
  std::vector<MethodId> out;
  try {
    for (const auto& q : queries) out.emplace_back(q);
    if (!query_file.empty()) {
      std::ifstream in(query_file);
      if (!in) throw UsageError("cannot open query file " + query_file);
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        out.emplace_back(line);
      }
    }
  } catch (const InvariantError& e) {
    throw UsageError(std::string("bad query: ") + e.what());
  }
  if (out.empty()) throw UsageError("no queries given (use --query or --query-file)");
  return out;
}

int cmd_run(const std::vector<std::string>& scripts, const std::string& transport, std::uint64_t seed,
            const std::string& out_dir, const std::string& run_id, bool records_only, std::ostream& out) {
  std::vector<ScriptedProgram> programs;
  for (const auto& s : scripts) {
    if (!fs::is_regular_file(s)) throw UsageError("no such script file: " + s);
    programs.push_back(read_script_file(s));
  }

  RunOptions opts;
  opts.transport = transport == "tcp" ? TransportMode::Tcp : TransportMode::Memory;
  opts.seed = seed;
  opts.run_id = run_id;
  auto result = run_scripts(programs, opts);

  fs::create_directories(out_dir);
  for (const auto& [process, trace] : result.corpus.traces()) {
    auto path = fs::path(out_dir) / trace_file_name(process);
    if (records_only) {
      std::vector<MethodRecord> records;
      for (const auto& [_, r] : trace.records()) records.push_back(r);
      write_trace_file(path, ProcessTrace(process, std::move(records)));
    } else {
      write_trace_file(path, trace);
    }
    out << path.string() << '\n';
  }
  return kOk;
}

void print_members(std::ostream& out, const TraceCorpus& corpus, const ImpactSet& set, ImpactSubset subset,
                   Format format) {
  auto members = ranked_members(corpus, set, subset);
  if (format == Format::Machine) {
    for (const auto& m : members) out << set.query << '\t' << subset_name(subset) << '\t' << m.method << '\n';
    return;
  }
  out << "  " << std::left << std::setw(7) << subset_name(subset) << std::right << std::setw(4) << members.size();
  for (const auto& m : members) out << "  " << m.method << '@' << m.last_event;
  out << '\n';
}

int cmd_query(const std::vector<std::string>& traces, const std::vector<std::string>& query_args,
              const std::string& query_file, Format format, const std::string& baseline, std::ostream& out) {
  auto corpus = load_corpus(traces);
  auto queries = load_queries(query_args, query_file);

  int rc = kOk;
  for (const auto& q : queries) {
    ImpactSet is{q, ProcessId("-"), {}, {}, {}, {}};
    try {
      is = impact_set(corpus, q);
    } catch (const NoSuchQueryError&) {
      rc = kQueryFailed;
      if (format == Format::Machine) {
        out << q << "\terror\tnot-executed\n";
      } else {
        out << q << ": error: not executed in any process\n";
      }
      continue;
    }

    if (format == Format::Table) {
      out << q << "  [local process " << is.local_process << ", first entry "
          << query_origin(corpus, q).first_entry << "]\n";
    }
    for (auto subset : {ImpactSubset::All, ImpactSubset::Local, ImpactSubset::Remote, ImpactSubset::Common}) {
      print_members(out, corpus, is, subset, format);
    }

    if (baseline == "mcov") {
      auto row = effectiveness(corpus, QuerySet({q})).rows.front();
      if (format == Format::Machine) {
        out << q << "\tmcov-size\t" << row.mcov_all << '\n';
        out << q << "\tmcov-ratio-all\t" << fraction(row.ratio_all) << '\n';
        out << q << "\tmcov-ratio-local\t" << fraction(row.ratio_local) << '\n';
        out << q << "\tmcov-ratio-remote\t" << fraction(row.ratio_remote) << '\n';
      } else {
        out << "  mcov   " << std::setw(4) << row.mcov_all << "  ratio all " << row.impact_all << '/'
            << row.mcov_all << " = " << percent(row.ratio_all) << ", local " << percent(row.ratio_local)
            << ", remote " << percent(row.ratio_remote) << '\n';
      }
    }
  }
  return rc;
}

int cmd_report(const std::vector<std::string>& traces, const std::vector<std::string>& query_args,
               const std::string& query_file, Format format, std::ostream& out) {
  auto corpus = load_corpus(traces);
  auto queries = query_args.empty() && query_file.empty() ? executed_methods(corpus)
                                                          : load_queries(query_args, query_file);
  auto report = effectiveness(corpus, QuerySet(std::move(queries)));

  if (format == Format::Machine) {
    auto line = [&](const std::string& name, std::size_t is, std::size_t mcov, double a, double l, double r,
                    double lo, double ro, double c) {
      out << name << '\t' << is << '\t' << mcov << '\t' << fraction(a) << '\t' << fraction(l) << '\t'
          << fraction(r) << '\t' << fraction(lo) << '\t' << fraction(ro) << '\t' << fraction(c) << '\n';
    };
    for (const auto& r : report.rows) {
      line(r.query.str(), r.impact_all, r.mcov_all, r.ratio_all, r.ratio_local, r.ratio_remote,
           r.local_only_share, r.remote_only_share, r.common_share);
    }
    out << "#mean\t\t\t" << fraction(report.mean_ratio_all) << '\t' << fraction(report.mean_ratio_local) << '\t'
        << fraction(report.mean_ratio_remote) << '\t' << fraction(report.mean_local_only_share) << '\t'
        << fraction(report.mean_remote_only_share) << '\t' << fraction(report.mean_common_share) << '\n';
    return kOk;
  }

  std::size_t width = 5;
  for (const auto& r : report.rows) width = std::max(width, r.query.str().size());
  auto cell = [&](const std::string& s) { out << std::right << std::setw(10) << s; };

  out << "run " << corpus.run_id() << ": " << corpus.process_count() << " processes, " << corpus.record_count()
      << " method records\n\n";
  out << std::left << std::setw(static_cast<int>(width)) << "query";
  for (const char* h : {"|IS|", "|MCov|", "all", "local", "remote", "loc-only", "rem-only", "common"}) cell(h);
  out << '\n';
  for (const auto& r : report.rows) {
    out << std::left << std::setw(static_cast<int>(width)) << r.query.str();
    cell(std::to_string(r.impact_all));
    cell(std::to_string(r.mcov_all));
    cell(percent(r.ratio_all));
    cell(percent(r.ratio_local));
    cell(percent(r.ratio_remote));
    cell(percent(r.local_only_share));
    cell(percent(r.remote_only_share));
    cell(percent(r.common_share));
    out << '\n';
  }
  out << std::left << std::setw(static_cast<int>(width)) << "mean";
  cell("");
  cell("");
  cell(percent(report.mean_ratio_all));
  cell(percent(report.mean_ratio_local));
  cell(percent(report.mean_ratio_remote));
  cell(percent(report.mean_local_only_share));
  cell(percent(report.mean_remote_only_share));
  cell(percent(report.mean_common_share));
  out << '\n';
  return kOk;
}

int cmd_merge(const std::vector<std::string>& traces, std::ostream& out) {
  auto corpus = load_corpus(traces);
  out << "run " << corpus.run_id() << ": " << corpus.process_count() << " processes, " << corpus.record_count()
      << " method records\n";
  for (const auto& [process, trace] : corpus.traces()) {
    out << "  " << process << '\t' << trace.records().size() << " records";
    if (trace.full_sequence()) out << ", " << trace.full_sequence()->size() << " events";
    out << '\n';
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dynamic impact analysis for message-passing programs", "distea"};
  app.require_subcommand(1, 1);

  std::vector<std::string> files;
  std::string transport = "mem";
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  std::string run_id = "run";
  bool records_only = false;
  std::vector<std::string> queries;
  std::string query_file;
  std::string format_name = "table";
  std::string baseline;

  auto* run_cmd = app.add_subcommand("run", "Execute script files and write one trace per process");
  run_cmd->add_option("scripts", files, "distea-script v1 files")->required();
  run_cmd->add_option("--transport", transport, "mem or tcp")->check(CLI::IsMember({"mem", "tcp"}));
  run_cmd->add_option("--seed", seed, "Scheduler seed (mem transport)");
  run_cmd->add_option("--out-dir", out_dir, "Directory for trace files");
  run_cmd->add_option("--run-id", run_id, "Run identifier");
  run_cmd->add_flag("--records-only", records_only, "Omit the full event section");

  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", format_name, "table or machine")->check(CLI::IsMember({"table", "machine"}));
  };

  auto* query_cmd = app.add_subcommand("query", "Impact sets of the given methods");
  query_cmd->add_option("traces", files, "Trace files or directories")->required();
  query_cmd->add_option("-q,--query", queries, "Query method (repeatable)");
  query_cmd->add_option("--query-file", query_file, "File with one query method per line");
  query_cmd->add_option("--baseline", baseline, "Add size ratios against a baseline")->check(CLI::IsMember({"mcov"}));
  add_format(query_cmd);

  auto* report_cmd = app.add_subcommand("report", "Effectiveness and composition per query");
  report_cmd->add_option("traces", files, "Trace files or directories")->required();
  report_cmd->add_option("-q,--query", queries, "Query method (repeatable); default is every executed method");
  report_cmd->add_option("--query-file", query_file, "File with one query method per line");
  add_format(report_cmd);

  auto* merge_cmd = app.add_subcommand("merge", "Check that traces merge and summarize the corpus");
  merge_cmd->add_option("traces", files, "Trace files or directories")->required();

  std::vector<const char*> argv{"distea"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsageError;
  }

  const auto format = format_name == "machine" ? Format::Machine : Format::Table;
  try {
    if (run_cmd->parsed()) return cmd_run(files, transport, seed, out_dir, run_id, records_only, out);
    if (query_cmd->parsed()) return cmd_query(files, queries, query_file, format, baseline, out);
    if (report_cmd->parsed()) return cmd_report(files, queries, query_file, format, out);
    return cmd_merge(files, out);
  } catch (const std::exception& e) {
    err << "distea: " << e.what() << '\n';
    return kUsageError;
  }
}

}  // namespace distea::cli
