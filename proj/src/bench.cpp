#include "aadb/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <latch>
#include <set>
#include <thread>
#include <utility>

#include <sys/wait.h>

#include "aadb/error.hpp"
#include "aadb/triple_format.hpp"

namespace aadb {

namespace {

struct WorkerPlan {
  std::string table;
  RmatParams params;
  std::uint64_t first = 0;
  std::uint64_t last = 0;
};

std::string shellQuote(const std::string& raw) {
  std::string out = "'";
  for (char c : raw) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out.push_back(c);
    }
  }
  out.push_back('\'');
  return out;
}

void dropIfPresent(DatabaseHandle& db, const std::set<std::string>& existing,
                   const std::string& name) {
  if (existing.contains(name)) db.deleteTable(name);
}

BenchRow runThreadWorkers(const BenchOptions& options, const std::vector<WorkerPlan>& plans) {
  const auto p = plans.size();
  std::vector<AssociativeArray> arrays;
  arrays.reserve(p);
  for (const WorkerPlan& plan : plans) {
    arrays.push_back(edgesToArray(generateRmatRange(plan.params, plan.first, plan.last)));
  }

  std::vector<DatabaseHandle> handles;
  std::vector<TableBinding> bindings;
  handles.reserve(p);
  bindings.reserve(p);
  for (const WorkerPlan& plan : plans) {
    handles.push_back(connect(options.backend));
    bindings.push_back(handles.back().table(plan.table));
  }

  // Arrays, connections and bindings exist; the clock covers put() only.
  std::latch ready(static_cast<std::ptrdiff_t>(p));
  std::latch go(1);
  std::vector<std::size_t> written(p, 0);
  std::vector<std::exception_ptr> failures(p);
  std::vector<std::thread> workers;
  workers.reserve(p);
  for (std::size_t i = 0; i < p; ++i) {
    workers.emplace_back([&, i] {
      ready.count_down();
      go.wait();
      try {
        written[i] = bindings[i].put(arrays[i]);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    });
  }
  ready.wait();
  auto t0 = std::chrono::steady_clock::now();
  go.count_down();
  for (auto& worker : workers) worker.join();
  auto t1 = std::chrono::steady_clock::now();
  for (auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }

  BenchRow row;
  row.processes = static_cast<int>(p);
  row.scale = options.baseScale;
  for (std::size_t w : written) row.entriesInserted += w;
  row.seconds = std::max(std::chrono::duration<double>(t1 - t0).count(), 1e-9);
  row.ratePerSec = static_cast<double>(row.entriesInserted) / row.seconds;
  return row;
}

BenchRow runProcessWorkers(const BenchOptions& options, const std::vector<WorkerPlan>& plans) {
  const ConnectionSpec& backend = options.backend;
  std::vector<std::string> commands;
  commands.reserve(plans.size());
  for (const WorkerPlan& plan : plans) {
    std::string cmd = shellQuote(options.workerExe) + " bench-worker";
    cmd += " --host " + shellQuote(backend.host);
    if (!backend.instanceName.empty()) cmd += " --instance " + shellQuote(backend.instanceName);
    cmd += " --user " + shellQuote(backend.username);
    cmd += " --pass " + shellQuote(backend.password);
    cmd += " --table " + shellQuote(plan.table);
    cmd += " --scale " + std::to_string(plan.params.scale);
    cmd += " --seed " + std::to_string(plan.params.seed);
    cmd += " --first " + std::to_string(plan.first);
    cmd += " --last " + std::to_string(plan.last);
    cmd += " --batch-bytes " + std::to_string(backend.batchBytes);
    commands.push_back(std::move(cmd));
  }

  // Child lifetime includes generation and connection setup, so process-mode
  // timing is coarser than thread mode; it exists for cross-process
  // lock-contention measurements.
  auto t0 = std::chrono::steady_clock::now();
  std::vector<FILE*> pipes;
  pipes.reserve(commands.size());
  for (const std::string& cmd : commands) {
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) {
      for (FILE* open : pipes) ::pclose(open);
      throw Error(ErrorKind::IoError, "cannot spawn bench worker");
    }
    pipes.push_back(pipe);
  }
  BenchRow row;
  row.processes = static_cast<int>(plans.size());
  row.scale = options.baseScale;
  std::string problem;
  for (FILE* pipe : pipes) {
    std::string output;
    char buf[256];
    while (std::fgets(buf, sizeof buf, pipe)) output += buf;
    int status = ::pclose(pipe);
    if (status != 0) {
      problem = "bench worker exited with status " + std::to_string(status);
      continue;
    }
    try {
      row.entriesInserted += std::stoull(output);
    } catch (const std::exception&) {
      problem = "bench worker printed no count";
    }
  }
  auto t1 = std::chrono::steady_clock::now();
  if (!problem.empty()) throw Error(ErrorKind::Unreachable, problem);
  row.seconds = std::max(std::chrono::duration<double>(t1 - t0).count(), 1e-9);
  row.ratePerSec = static_cast<double>(row.entriesInserted) / row.seconds;
  return row;
}

BenchRow runAtConcurrency(const BenchOptions& options, int p) {
  RmatParams base;
  base.scale = options.baseScale;
  base.seed = options.seed;
  base.validate();
  const std::uint64_t m = base.edgeCount();

  std::vector<WorkerPlan> plans;
  plans.reserve(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) {
    WorkerPlan plan;
    plan.table = options.splitTables
                     ? options.tableBaseName + "_" + std::to_string(i)
                     : options.tableBaseName;
    plan.params = base;
    if (options.mode == BenchMode::Weak) {
      plan.params.seed = deriveSeed(options.seed, static_cast<std::uint64_t>(i));
      plan.first = 0;
      plan.last = m;
    } else {
      plan.first = m * static_cast<std::uint64_t>(i) / static_cast<std::uint64_t>(p);
      plan.last = m * static_cast<std::uint64_t>(i + 1) / static_cast<std::uint64_t>(p);
    }
    plans.push_back(std::move(plan));
  }

  auto control = connect(options.backend);
  {
    auto tables = control.listTables();
    std::set<std::string> existing(tables.begin(), tables.end());
    std::set<std::string> candidates;
    for (const WorkerPlan& plan : plans) candidates.insert(plan.table);
    if (options.splitTables) candidates.insert(options.tableBaseName + "_merged");
    for (const std::string& name : candidates) dropIfPresent(control, existing, name);
  }

  BenchRow row = options.processMode ? runProcessWorkers(options, plans)
                                     : runThreadWorkers(options, plans);

  if (options.splitTables) {
    std::vector<std::string> names;
    names.reserve(plans.size());
    for (const WorkerPlan& plan : plans) names.push_back(plan.table);
    mergeTables(control, names, options.tableBaseName + "_merged");
  }
  return row;
}

}  // namespace

BenchMode benchModeFromName(std::string_view name) {
  if (name == "weak") return BenchMode::Weak;
  if (name == "strong") return BenchMode::Strong;
  throw Error(ErrorKind::BadSpec, "bench mode must be weak or strong");
}

std::string_view benchModeName(BenchMode mode) {
  return mode == BenchMode::Weak ? "weak" : "strong";
}

BenchReport runIngestBench(const BenchOptions& options) {
  if (options.processCounts.empty()) {
    throw Error(ErrorKind::BadSpec, "no process counts to benchmark");
  }
  for (int p : options.processCounts) {
    if (p < 1) throw Error(ErrorKind::BadSpec, "process counts must be positive");
  }
  if (options.processMode) {
    if (options.backend.type != BackendType::Remote) {
      throw Error(ErrorKind::BadSpec, "process-mode ingest needs the remote backend");
    }
    if (options.workerExe.empty()) {
      throw Error(ErrorKind::BadSpec, "process-mode ingest needs the worker executable path");
    }
  }

  BenchReport report;
  report.mode = options.mode;
  report.backend = std::string(backendTypeName(options.backend.type));
  auto counts = options.processCounts;
  std::sort(counts.begin(), counts.end());
  for (int p : counts) {
    try {
      report.rows.push_back(runAtConcurrency(options, p));
    } catch (const Error& e) {
      BenchRow row;
      row.processes = p;
      row.scale = options.baseScale;
      row.failed = true;
      row.error = e.what();
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

std::string BenchReport::toCsv() const {
  std::string csv = "mode,processes,scale,entries,seconds,rate\n";
  for (const BenchRow& row : rows) {
    if (row.failed) continue;
    csv += std::string(benchModeName(mode)) + "," + std::to_string(row.processes) + "," +
           std::to_string(row.scale) + "," + std::to_string(row.entriesInserted) + "," +
           encodeNumeric(row.seconds) + "," + encodeNumeric(row.ratePerSec) + "\n";
  }
  return csv;
}

std::size_t mergeTables(DatabaseHandle& db, std::span<const std::string> names,
                        const std::string& dest) {
  auto destBinding = db.table(dest);
  std::size_t copied = 0;
  for (const std::string& name : names) {
    auto src = db.table(name);
    copied += castCopy(src, destBinding);
  }
  return copied;
}

std::string plotScript(const std::string& csvPath) {
  std::string script;
  script += "set datafile separator \",\"\n";
  script += "set xlabel \"ingest processes\"\n";
  script += "set ylabel \"entries per second\"\n";
  script += "set key left top\n";
  script += "set logscale x 2\n";
  script += "plot \"" + csvPath + "\" every ::1 using 2:6 with linespoints title \"insert rate\"\n";
  return script;
}

std::size_t runBenchWorker(const ConnectionSpec& backend, const std::string& table,
                           const RmatParams& params, std::uint64_t first, std::uint64_t last) {
  auto db = connect(backend);
  auto binding = db.table(table);
  auto array = edgesToArray(generateRmatRange(params, first, last));
  return binding.put(array);
}

}  // namespace aadb
