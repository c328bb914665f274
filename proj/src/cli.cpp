#include "aadb/cli.hpp"

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <unistd.h>

#include <CLI11.hpp>

#include "aadb/bench.hpp"
#include "aadb/binding.hpp"
#include "aadb/error.hpp"
#include "aadb/federated.hpp"
#include "aadb/schema.hpp"
#include "aadb/shim_server.hpp"
#include "aadb/triple_format.hpp"

namespace aadb {

namespace {

volatile std::sig_atomic_t gStopServer = 0;

void onStopSignal(int) { gStopServer = 1; }

struct BackendFlags {
  std::string type = "memory";
  std::string host;
  std::string instance;
  std::string user;
  std::string pass;
  std::uint64_t batchBytes = 128ull << 20;

  ConnectionSpec spec() const {
    ConnectionSpec s;
    s.type = backendTypeFromName(type);
    s.host = host;
    s.instanceName = instance;
    s.username = user;
    s.password = pass;
    s.batchBytes = batchBytes;
    return s;
  }
};

// prefix distinguishes the cast command's two backend families; only the
// unprefixed family reads the AADB_* environment fallbacks for host.
void addBackendFlags(CLI::App* sub, BackendFlags& flags, const std::string& prefix = "") {
  auto dashed = "--" + prefix;
  sub->add_option(dashed + "type", flags.type, "backend type")
      ->check(CLI::IsMember({"memory", "file", "remote"}));
  auto* host = sub->add_option(dashed + "host", flags.host, "remote host:port");
  if (prefix.empty()) host->envname("AADB_HOST");
  sub->add_option(dashed + "instance", flags.instance,
                  "memory instance name, file data directory, or remote path prefix");
  sub->add_option(dashed + "user", flags.user, "backend user")->envname("AADB_USER");
  sub->add_option(dashed + "pass", flags.pass, "backend password")->envname("AADB_PASS");
}

char decodeDelimiter(const std::string& text) {
  if (text == "comma" || text == ",") return ',';
  if (text == "tab" || text == "\\t" || text == "\t") return '\t';
  if (text.size() == 1) return text.front();
  throw Error(ErrorKind::BadSpec, "delimiter must be one byte, \"comma\" or \"tab\"");
}

std::string readSource(const std::string& path, std::istream& fallback) {
  if (path == "-") {
    std::ostringstream buffer;
    buffer << fallback.rdbuf();
    return std::move(buffer).str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::IoError, "cannot read " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return std::move(buffer).str();
}

std::string selfExecutable() {
  std::error_code ec;
  auto path = std::filesystem::read_symlink("/proc/self/exe", ec);
  if (ec) return "";
  return path.string();
}

struct ServeArgs {
  std::string bind = "127.0.0.1";
  int port = 8080;
  std::string dataDir;
  std::uint64_t maxBodyBytes = 128ull << 20;
  double sessionTtl = 3600.0;
  std::string user = "aadb";
  std::string pass = "aadb";
};

int runServe(const ServeArgs& args, std::ostream& out) {
  ShimConfig config;
  config.bindAddress = args.bind;
  config.port = args.port;
  config.dataDir = args.dataDir;
  config.maxBodyBytes = args.maxBodyBytes;
  config.sessionTtlSeconds = args.sessionTtl;
  config.credentials[args.user] = args.pass;

  ShimServer server(std::move(config));
  server.start();
  out << "listening on " << server.port() << std::endl;

  gStopServer = 0;
  std::signal(SIGINT, onStopSignal);
  std::signal(SIGTERM, onStopSignal);
  while (!gStopServer) {
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
  server.stop();
  out << "closed" << std::endl;
  return 0;
}

struct IngestArgs {
  BackendFlags backend;
  std::string table;
  std::string input = "-";
  std::string delimiter = ",";
  std::string format = "exploded";
  std::string keyField;
  std::string separator = "|";
};

int runIngest(const IngestArgs& args, std::ostream& out, std::ostream& err) {
  auto source = readSource(args.input, std::cin);

  AssociativeArray array(Semiring::plusTimes());
  if (args.format == "triples") {
    array = ingestTripleText(source, Semiring::plusTimes());
    err << "entries=" << array.nnz() << "\n";
  } else {
    if (args.keyField.empty()) {
      throw Error(ErrorKind::MissingKeyField, "--key-field is required for table ingest");
    }
    if (args.separator.size() != 1) {
      throw Error(ErrorKind::BadSpec, "--separator must be one byte");
    }
    SchemaMode schema;
    schema.mode = args.format == "dense" ? SchemaMode::Mode::Dense : SchemaMode::Mode::Exploded;
    schema.keyField = args.keyField;
    schema.separator = args.separator.front();
    auto [ingested, report] =
        ingestDelimited(source, decodeDelimiter(args.delimiter), schema, Semiring::plusTimes());
    array = std::move(ingested);
    err << "records=" << report.recordsRead << " bad=" << report.badRecords
        << " entries=" << report.entriesProduced << " elapsed=" << report.elapsedSeconds
        << "s\n";
  }

  auto db = connect(args.backend.spec());
  auto binding = db.table(args.table);
  out << binding.put(array) << "\n";
  return 0;
}

struct QueryArgs {
  BackendFlags backend;
  std::string table;
  std::string rows = ":";
  std::string cols = ":";
  std::string semiring = "plus-times";
};

int runQuery(const QueryArgs& args, std::ostream& out) {
  auto db = connect(args.backend.spec());
  auto binding = db.table(args.table);
  auto result = binding.queryRange(KeyRange::parse(args.rows), KeyRange::parse(args.cols),
                                   Semiring::byName(args.semiring));
  out << canonicalText(result);
  return 0;
}

int runTables(const BackendFlags& backend, std::ostream& out) {
  auto db = connect(backend.spec());
  for (const auto& name : db.listTables()) out << name << "\n";
  return 0;
}

struct CastArgs {
  BackendFlags src;
  BackendFlags dst;
  std::string srcTable;
  std::string dstTable;
  std::string rows = ":";
  std::string cols = ":";
};

int runCast(const CastArgs& args, std::ostream& out) {
  auto srcDb = connect(args.src.spec());
  auto dstDb = connect(args.dst.spec());
  auto src = srcDb.table(args.srcTable);
  auto dst = dstDb.table(args.dstTable);
  out << castCopy(src, dst, KeyRange::parse(args.rows), KeyRange::parse(args.cols)) << "\n";
  return 0;
}

struct BenchArgs {
  BackendFlags backend;
  std::string mode = "weak";
  int scale = 10;
  std::vector<int> procs = {1, 2, 4};
  bool splitTables = false;
  std::uint64_t seed = 1;
  std::string table = "bench";
  bool processMode = false;
  std::string outPath;
  std::string plotPath;
};

int runBench(const BenchArgs& args, std::ostream& out, std::ostream& err) {
  BenchOptions options;
  options.mode = benchModeFromName(args.mode);
  options.baseScale = args.scale;
  options.processCounts = args.procs;
  options.backend = args.backend.spec();
  options.splitTables = args.splitTables;
  options.seed = args.seed;
  options.tableBaseName = args.table;
  options.processMode = args.processMode;
  options.workerExe = selfExecutable();

  auto report = runIngestBench(options);
  auto csv = report.toCsv();
  out << csv;
  if (!args.outPath.empty()) {
    std::ofstream file(args.outPath, std::ios::binary | std::ios::trunc);
    file << csv;
    if (!file.flush()) throw Error(ErrorKind::IoError, "cannot write " + args.outPath);
  }
  if (!args.plotPath.empty()) {
    std::ofstream file(args.plotPath, std::ios::binary | std::ios::trunc);
    file << plotScript(args.outPath);
    if (!file.flush()) throw Error(ErrorKind::IoError, "cannot write " + args.plotPath);
  }

  bool anyFailed = false;
  for (const BenchRow& row : report.rows) {
    if (!row.failed) continue;
    anyFailed = true;
    err << "bench p=" << row.processes << " failed: " << row.error << "\n";
  }
  return anyFailed ? 2 : 0;
}

struct WorkerArgs {
  std::string host;
  std::string instance;
  std::string user;
  std::string pass;
  std::string table;
  int scale = 10;
  std::uint64_t seed = 1;
  std::uint64_t first = 0;
  std::uint64_t last = 0;
  std::uint64_t batchBytes = 128ull << 20;
};

int runWorker(const WorkerArgs& args, std::ostream& out) {
  ConnectionSpec spec;
  spec.type = BackendType::Remote;
  spec.host = args.host;
  spec.instanceName = args.instance;
  spec.username = args.user;
  spec.password = args.pass;
  spec.batchBytes = args.batchBytes;

  RmatParams params;
  params.scale = args.scale;
  params.seed = args.seed;
  out << runBenchWorker(spec, args.table, params, args.first, args.last) << "\n";
  return 0;
}

struct DemoArgs {
  int permutation = 0;
  std::string drug = "drugA";
  std::string dataDir;
};

int runDemo(const DemoArgs& args, std::ostream& out, std::ostream& err) {
  if (args.permutation < 0 || args.permutation > 5) {
    throw Error(ErrorKind::BadSpec, "--permutation must lie in 0..5");
  }
  auto tag = std::to_string(::getpid()) + "-" +
             std::to_string(std::chrono::steady_clock::now().time_since_epoch().count());

  auto fileDir = args.dataDir.empty()
                     ? (std::filesystem::temp_directory_path() / ("aadb-demo-" + tag)).string()
                     : args.dataDir;
  std::string memoryInstance = "demo-" + tag;

  ShimConfig serverConfig;
  serverConfig.port = 0;
  serverConfig.credentials["demo"] = "demo";
  ShimServer server(std::move(serverConfig));
  server.start();

  int exitCode = 0;
  {
    ConnectionSpec memSpec;
    memSpec.type = BackendType::Memory;
    memSpec.instanceName = memoryInstance;

    ConnectionSpec fileSpec;
    fileSpec.type = BackendType::File;
    fileSpec.instanceName = fileDir;

    ConnectionSpec remoteSpec;
    remoteSpec.type = BackendType::Remote;
    remoteSpec.host = "127.0.0.1:" + std::to_string(server.port());
    remoteSpec.username = "demo";
    remoteSpec.password = "demo";

    std::vector<DatabaseHandle> backends{connect(memSpec), connect(fileSpec),
                                         connect(remoteSpec)};
    auto perm = demoPermutations()[static_cast<std::size_t>(args.permutation)];
    err << "medications on " << backendTypeName(backends[perm[0]].spec().type)
        << ", waveform index on " << backendTypeName(backends[perm[1]].spec().type)
        << ", waveforms on " << backendTypeName(backends[perm[2]].spec().type) << "\n";

    seedDemoTables(backends[perm[0]], backends[perm[1]], backends[perm[2]]);
    auto result = chainDemoQuery(backends[perm[0]], backends[perm[1]], backends[perm[2]],
                                 args.drug);
    out << canonicalText(result);
    err << "rows=" << result.rowKeys().size() << " entries=" << result.nnz() << "\n";
    for (auto& handle : backends) handle.close();
  }

  server.stop();
  clearMemoryInstance(memoryInstance);
  if (args.dataDir.empty()) {
    std::error_code ec;
    std::filesystem::remove_all(fileDir, ec);
  }
  return exitCode;
}

}  // namespace

int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"associative array database tools"};
  app.name("aadb");
  app.require_subcommand(1);

  auto* serve = app.add_subcommand("serve", "run the HTTP table server");
  ServeArgs serveArgs;
  serve->add_option("--bind", serveArgs.bind, "bind address");
  serve->add_option("--port", serveArgs.port, "listen port")->envname("PORT");
  serve->add_option("--data-dir", serveArgs.dataDir, "durable table directory")
      ->envname("DATA_DIR");
  serve->add_option("--max-body-bytes", serveArgs.maxBodyBytes, "insert body cap")
      ->envname("MAX_BODY_BYTES");
  serve->add_option("--session-ttl-s", serveArgs.sessionTtl, "session idle timeout")
      ->envname("SESSION_TTL_S");
  serve->add_option("--user", serveArgs.user, "accepted user")->envname("AADB_USER");
  serve->add_option("--pass", serveArgs.pass, "accepted password")->envname("AADB_PASS");

  auto* ingest = app.add_subcommand("ingest", "load delimited text into a table");
  IngestArgs ingestArgs;
  addBackendFlags(ingest, ingestArgs.backend);
  ingest->add_option("--table", ingestArgs.table, "destination table")->required();
  ingest->add_option("--input", ingestArgs.input, "input path, - for stdin");
  ingest->add_option("--delimiter", ingestArgs.delimiter, "field delimiter");
  ingest->add_option("--format", ingestArgs.format, "exploded, dense or triples")
      ->check(CLI::IsMember({"exploded", "dense", "triples"}));
  ingest->add_option("--key-field", ingestArgs.keyField, "row key column");
  ingest->add_option("--separator", ingestArgs.separator, "exploded column separator");

  auto* query = app.add_subcommand("query", "print table contents as triple lines");
  QueryArgs queryArgs;
  addBackendFlags(query, queryArgs.backend);
  query->add_option("--table", queryArgs.table, "table to query")->required();
  query->add_option("--rows", queryArgs.rows, "row range start:end, : for all");
  query->add_option("--cols", queryArgs.cols, "column range start:end, : for all");
  query->add_option("--semiring", queryArgs.semiring, "semiring typing the result")
      ->check(CLI::IsMember({"plus-times", "max-plus", "min-plus"}));

  auto* tables = app.add_subcommand("tables", "list tables");
  BackendFlags tablesBackend;
  addBackendFlags(tables, tablesBackend);

  auto* cast = app.add_subcommand("cast", "copy a range between tables or backends");
  CastArgs castArgs;
  addBackendFlags(cast, castArgs.src, "src-");
  addBackendFlags(cast, castArgs.dst, "dst-");
  cast->add_option("--src-table", castArgs.srcTable, "source table")->required();
  cast->add_option("--dst-table", castArgs.dstTable, "destination table")->required();
  cast->add_option("--rows", castArgs.rows, "row range");
  cast->add_option("--cols", castArgs.cols, "column range");

  auto* bench = app.add_subcommand("bench", "run the ingest benchmark");
  BenchArgs benchArgs;
  addBackendFlags(bench, benchArgs.backend);
  bench->add_option("--mode", benchArgs.mode, "weak or strong")
      ->check(CLI::IsMember({"weak", "strong"}));
  bench->add_option("--scale", benchArgs.scale, "graph scale (N = 2^scale)");
  bench->add_option("--procs", benchArgs.procs, "ingestor counts")->delimiter(',');
  bench->add_flag("--split-tables", benchArgs.splitTables,
                  "one table per ingestor, merged afterward");
  bench->add_option("--seed", benchArgs.seed, "generator seed");
  bench->add_option("--table", benchArgs.table, "bench table base name");
  bench->add_option("--batch-bytes", benchArgs.backend.batchBytes, "insert batch size");
  bench->add_flag("--process-mode", benchArgs.processMode,
                  "fork one OS process per ingestor (remote backend)");
  bench->add_option("--out", benchArgs.outPath, "also write the CSV report here");
  auto* plotOpt =
      bench->add_option("--plot-script", benchArgs.plotPath, "write a gnuplot script here");
  plotOpt->needs(bench->get_option("--out"));

  auto* demo = app.add_subcommand("demo-federated",
                                  "three-backend chained query on a fixed fixture");
  DemoArgs demoArgs;
  demo->add_option("--permutation", demoArgs.permutation,
                   "which table-to-backend assignment (0..5)");
  demo->add_option("--drug", demoArgs.drug, "medication to chase through the chain");
  demo->add_option("--data-dir", demoArgs.dataDir, "file backend directory (default: temp)");

  auto* worker = app.add_subcommand("bench-worker", "");
  worker->group("");  // internal: spawned by bench --process-mode
  WorkerArgs workerArgs;
  worker->add_option("--host", workerArgs.host)->required();
  worker->add_option("--instance", workerArgs.instance);
  worker->add_option("--user", workerArgs.user);
  worker->add_option("--pass", workerArgs.pass);
  worker->add_option("--table", workerArgs.table)->required();
  worker->add_option("--scale", workerArgs.scale);
  worker->add_option("--seed", workerArgs.seed);
  worker->add_option("--first", workerArgs.first);
  worker->add_option("--last", workerArgs.last);
  worker->add_option("--batch-bytes", workerArgs.batchBytes);

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("aadb");
  for (const std::string& arg : args) argv.push_back(arg.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    err << "run \"aadb --help\" for usage\n";
    return 1;
  }

  try {
    if (serve->parsed()) return runServe(serveArgs, out);
    if (ingest->parsed()) return runIngest(ingestArgs, out, err);
    if (query->parsed()) return runQuery(queryArgs, out);
    if (tables->parsed()) return runTables(tablesBackend, out);
    if (cast->parsed()) return runCast(castArgs, out);
    if (bench->parsed()) return runBench(benchArgs, out, err);
    if (demo->parsed()) return runDemo(demoArgs, out, err);
    if (worker->parsed()) return runWorker(workerArgs, out);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  }
  err << "no subcommand given\n";
  return 1;
}

}  // namespace aadb
