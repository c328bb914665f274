#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <csignal>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include <sys/wait.h>
#include <unistd.h>

#include "aadb/binding.hpp"
#include "aadb/cli.hpp"
#include "aadb/rmat.hpp"
#include "aadb/shim_server.hpp"
#include "aadb/triple_format.hpp"
#include "testutil.hpp"

namespace {

struct CliResult {
  int exitCode = 0;
  std::string out;
  std::string err;
};

CliResult runCli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  CliResult result;
  result.exitCode = aadb::runCli(args, out, err);
  result.out = out.str();
  result.err = err.str();
  return result;
}

// Runs the installed binary through the shell, capturing stdout and exit code.
CliResult runBinary(const std::string& argsAndRedirects) {
  CliResult result;
  std::string cmd = std::string(AADB_BIN) + " " + argsAndRedirects;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buffer[4096];
  while (std::size_t n = std::fread(buffer, 1, sizeof(buffer), pipe)) {
    result.out.append(buffer, n);
    if (n < sizeof(buffer)) {
      if (std::feof(pipe)) break;
    }
  }
  int status = ::pclose(pipe);
  result.exitCode = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

}  // namespace

TEST_CASE("usage errors exit 1, help exits 0") {
  auto none = runCli({});
  CHECK(none.exitCode == 1);
  CHECK(none.err.find("aadb --help") != std::string::npos);

  auto help = runCli({"--help"});
  CHECK(help.exitCode == 0);
  CHECK(help.out.find("Usage: aadb") != std::string::npos);
  CHECK(help.out.find("demo-federated") != std::string::npos);
  // the internal worker subcommand stays out of the listing
  CHECK(help.out.find("bench-worker") == std::string::npos);

  CHECK(runCli({"frobnicate"}).exitCode == 1);
  CHECK(runCli({"query"}).exitCode == 1);                      // missing --table
  CHECK(runCli({"query", "--table"}).exitCode == 1);           // missing value
  CHECK(runCli({"ingest", "--type", "postal"}).exitCode == 1); // bad enum
  CHECK(runCli({"bench", "--mode", "diagonal"}).exitCode == 1);
}

TEST_CASE("runtime failures exit 2 with the error kind on stderr") {
  auto bad = runCli({"query", "--table", "t", "--type", "memory", "--instance", "cli-e",
                     "--rows", "z:a"});
  CHECK(bad.exitCode == 2);
  CHECK(bad.err.find("InvalidRange") != std::string::npos);
  aadb::clearMemoryInstance("cli-e");

  auto unreachable = runCli({"tables", "--type", "remote", "--host", "127.0.0.1:1",
                             "--user", "u", "--pass", "p"});
  CHECK(unreachable.exitCode == 2);
  CHECK(unreachable.err.find("Unreachable") != std::string::npos);
}

TEST_CASE("ingest, query, tables and cast compose") {
  testutil::TempDir dir;
  auto csvPath = dir.path() / "input.csv";
  {
    std::ofstream f(csvPath);
    f << "patient,drug,dose\np1,Lisinopril,10\np2,Metformin,500\np1,Aspirin,81\n";
  }

  auto ingest = runCli({"ingest", "--type", "file", "--instance", dir.str(), "--table",
                        "meds", "--input", csvPath.string(), "--key-field", "patient"});
  REQUIRE(ingest.exitCode == 0);
  CHECK(ingest.out == "6\n");
  CHECK(ingest.err.find("records=3") != std::string::npos);
  CHECK(ingest.err.find("bad=0") != std::string::npos);

  auto query = runCli({"query", "--type", "file", "--instance", dir.str(), "--table", "meds"});
  REQUIRE(query.exitCode == 0);
  CHECK(query.out ==
        "p1\tdose|10\t1\n"
        "p1\tdose|81\t1\n"
        "p1\tdrug|Aspirin\t1\n"
        "p1\tdrug|Lisinopril\t1\n"
        "p2\tdose|500\t1\n"
        "p2\tdrug|Metformin\t1\n");

  auto ranged = runCli({"query", "--type", "file", "--instance", dir.str(), "--table", "meds",
                        "--rows", "p1:p1", "--cols", "drug|:drug|~"});
  CHECK(ranged.out == "p1\tdrug|Aspirin\t1\np1\tdrug|Lisinopril\t1\n");

  auto tables = runCli({"tables", "--type", "file", "--instance", dir.str()});
  CHECK(tables.out == "meds\n");

  auto cast = runCli({"cast", "--src-type", "file", "--src-instance", dir.str(),
                      "--src-table", "meds", "--dst-type", "memory", "--dst-instance",
                      "cli-cast", "--dst-table", "copy", "--rows", "p1:p1"});
  REQUIRE(cast.exitCode == 0);
  CHECK(cast.out == "4\n");
  auto copied = runCli({"query", "--type", "memory", "--instance", "cli-cast", "--table",
                        "copy"});
  CHECK(copied.out ==
        "p1\tdose|10\t1\n"
        "p1\tdose|81\t1\n"
        "p1\tdrug|Aspirin\t1\n"
        "p1\tdrug|Lisinopril\t1\n");
  aadb::clearMemoryInstance("cli-cast");
}

TEST_CASE("triple format ingest reads canonical lines") {
  testutil::TempDir dir;
  auto path = dir.path() / "triples.tsv";
  {
    std::ofstream f(path);
    f << "a\tb\t1\na\tb\t2\nq\tz\ts:tag\n";
  }
  auto ingest = runCli({"ingest", "--type", "memory", "--instance", "cli-triples", "--table",
                        "t", "--input", path.string(), "--format", "triples"});
  REQUIRE(ingest.exitCode == 0);
  CHECK(ingest.out == "2\n");

  auto query = runCli({"query", "--type", "memory", "--instance", "cli-triples", "--table",
                       "t"});
  CHECK(query.out == "a\tb\t3\nq\tz\ts:tag\n");
  aadb::clearMemoryInstance("cli-triples");
}

TEST_CASE("dense ingest and the max-plus query semiring") {
  testutil::TempDir dir;
  auto path = dir.path() / "dense.csv";
  {
    std::ofstream f(path);
    f << "id,w\nr1,2.5\nr2,7\n";
  }
  auto ingest = runCli({"ingest", "--type", "memory", "--instance", "cli-dense", "--table",
                        "t", "--input", path.string(), "--format", "dense", "--key-field",
                        "id"});
  REQUIRE(ingest.exitCode == 0);

  auto query = runCli({"query", "--type", "memory", "--instance", "cli-dense", "--table", "t",
                       "--semiring", "max-plus"});
  CHECK(query.out == "r1\tw\t2.5\nr2\tw\t7\n");
  aadb::clearMemoryInstance("cli-dense");
}

TEST_CASE("bench subcommand writes csv and plot script") {
  testutil::TempDir dir;
  auto csvPath = (dir.path() / "bench.csv").string();
  auto plotPath = (dir.path() / "bench.gp").string();

  auto bench = runCli({"bench", "--type", "memory", "--instance", "cli-bench", "--mode",
                       "strong", "--scale", "5", "--procs", "1,2", "--table", "bt", "--out",
                       csvPath, "--plot-script", plotPath});
  REQUIRE(bench.exitCode == 0);
  CHECK(bench.out.find("mode,processes,scale,entries,seconds,rate\n") == 0);
  CHECK(bench.out.find("strong,1,5,") != std::string::npos);
  CHECK(bench.out.find("strong,2,5,") != std::string::npos);

  std::ifstream csv(csvPath);
  std::stringstream csvBody;
  csvBody << csv.rdbuf();
  CHECK(csvBody.str() == bench.out);

  std::ifstream plot(plotPath);
  std::stringstream plotBody;
  plotBody << plot.rdbuf();
  CHECK(plotBody.str().find(csvPath) != std::string::npos);

  // --plot-script without --out is a usage error
  CHECK(runCli({"bench", "--plot-script", plotPath}).exitCode == 1);
  aadb::clearMemoryInstance("cli-bench");
}

TEST_CASE("federated demo prints the fixture result for every permutation") {
  const std::string expected = "w43\tt|0001\t7\nw43\tt|0002\t9\n";
  for (int permutation = 0; permutation < 6; ++permutation) {
    auto demo = runCli({"demo-federated", "--permutation", std::to_string(permutation)});
    REQUIRE(demo.exitCode == 0);
    CHECK(demo.out == expected);
    CHECK(demo.err.find("medications on") != std::string::npos);
  }
  CHECK(runCli({"demo-federated", "--permutation", "6"}).exitCode == 2);

  // an unmatched drug yields an empty result, not an error
  auto empty = runCli({"demo-federated", "--drug", "nothing"});
  CHECK(empty.exitCode == 0);
  CHECK(empty.out.empty());
}

TEST_CASE("binary: exit codes and help") {
  CHECK(runBinary("--help 2>/dev/null").exitCode == 0);
  CHECK(runBinary("2>/dev/null").exitCode == 1);
  CHECK(runBinary("query 2>/dev/null").exitCode == 1);
  CHECK(runBinary("query --table t --type remote --host 127.0.0.1:1 --user u --pass p "
                  "2>/dev/null").exitCode == 2);
}

TEST_CASE("binary: serve lifecycle with remote clients") {
  testutil::TempDir dir;
  int pipefd[2];
  REQUIRE(::pipe(pipefd) == 0);

  pid_t pid = ::fork();
  REQUIRE(pid >= 0);
  if (pid == 0) {
    ::dup2(pipefd[1], STDOUT_FILENO);
    ::close(pipefd[0]);
    ::close(pipefd[1]);
    ::execl(AADB_BIN, "aadb", "serve", "--port", "0", "--data-dir", dir.str().c_str(),
            "--user", "u", "--pass", "p", static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(pipefd[1]);

  // wait for "listening on <port>"
  std::string banner;
  char c;
  while (banner.find('\n') == std::string::npos && ::read(pipefd[0], &c, 1) == 1) {
    banner.push_back(c);
  }
  REQUIRE(banner.rfind("listening on ", 0) == 0);
  int port = std::stoi(banner.substr(13));
  REQUIRE(port > 0);

  aadb::ConnectionSpec spec;
  spec.type = aadb::BackendType::Remote;
  spec.host = "127.0.0.1:" + std::to_string(port);
  spec.username = "u";
  spec.password = "p";
  {
    auto db = aadb::connect(spec);
    db.table("lifecycle").put(
        std::vector<aadb::TripleRecord>{{"r", "c", aadb::Value{5}}});
    CHECK(db.table("lifecycle").nnz() == 1);
    db.close();
  }

  ::kill(pid, SIGTERM);
  int status = 0;
  REQUIRE(::waitpid(pid, &status, 0) == pid);
  CHECK(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) == 0);
  ::close(pipefd[0]);

  // durable data written through the server is readable afterwards
  auto query = runCli({"query", "--type", "file", "--instance", dir.str(), "--table",
                       "lifecycle"});
  CHECK(query.out == "r\tc\t5\n");
}

TEST_CASE("binary: process-mode bench forks real workers") {
  aadb::ShimConfig config;
  config.port = 0;
  config.credentials["u"] = "p";
  aadb::ShimServer server(std::move(config));
  server.start();
  auto host = "127.0.0.1:" + std::to_string(server.port());

  auto bench = runBinary("bench --type remote --host " + host +
                         " --user u --pass p --mode strong --scale 5 --procs 1,2 "
                         "--process-mode --table pm 2>/dev/null");
  REQUIRE(bench.exitCode == 0);
  auto lines = bench.out;
  CHECK(lines.find("mode,processes,scale,entries,seconds,rate\n") == 0);
  CHECK(lines.find("strong,1,5,") != std::string::npos);
  CHECK(lines.find("strong,2,5,") != std::string::npos);

  // the two runs ended on the same folded table contents
  aadb::ConnectionSpec spec;
  spec.type = aadb::BackendType::Remote;
  spec.host = host;
  spec.username = "u";
  spec.password = "p";
  auto db = aadb::connect(spec);
  CHECK(db.table("pm").nnz() > 0);
  db.close();
  server.stop();
}

TEST_CASE("binary: worker subcommand prints its insert count") {
  aadb::ShimConfig config;
  config.port = 0;
  config.credentials["u"] = "p";
  aadb::ShimServer server(std::move(config));
  server.start();
  auto host = "127.0.0.1:" + std::to_string(server.port());

  // the worker assumes its table exists (bench pre-creates it)
  aadb::ConnectionSpec spec;
  spec.type = aadb::BackendType::Remote;
  spec.host = host;
  spec.username = "u";
  spec.password = "p";
  auto db = aadb::connect(spec);
  db.table("wk");

  auto run = runBinary("bench-worker --host " + host +
                       " --user u --pass p --table wk --scale 5 --seed 9 --first 0 --last 50 "
                       "2>/dev/null");
  REQUIRE(run.exitCode == 0);
  auto expected = aadb::edgesToArray(
      aadb::generateRmatRange([] {
        aadb::RmatParams p;
        p.scale = 5;
        p.seed = 9;
        return p;
      }(), 0, 50));
  CHECK(run.out == std::to_string(expected.nnz()) + "\n");
  CHECK(db.table("wk").queryRange(aadb::KeyRange::all(), aadb::KeyRange::all()) == expected);
  db.close();
  server.stop();
}
