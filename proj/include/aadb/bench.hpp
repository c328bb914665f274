#pragma once
// Ingest benchmarks. Weak mode gives every worker its own graph at
// baseScale; strong mode partitions one baseScale edge list across the
// workers by contiguous index ranges. Workers build their arrays first and
// the clock covers only the put() phase. With splitTables each worker
// writes "<table>_<i>" and the tables are merged (outside the clock) into
// "<table>_merged"; otherwise all workers share one table and serialize on
// its write latch.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "aadb/binding.hpp"
#include "aadb/rmat.hpp"

namespace aadb {

enum class BenchMode { Weak, Strong };

BenchMode benchModeFromName(std::string_view name);  // BadSpec on unknown
std::string_view benchModeName(BenchMode mode);

struct BenchOptions {
    BenchMode mode = BenchMode::Weak;
    int baseScale = 10;
    std::vector<int> processCounts = {1, 2, 4};
    ConnectionSpec backend;
    bool splitTables = false;
    std::uint64_t seed = 1;
    std::string tableBaseName = "bench";
    // Fork one OS process per ingestor instead of threads; remote backend
    // only. workerExe points at this binary so children can re-exec.
    bool processMode = false;
    std::string workerExe;
};

struct BenchRow {
    int processes = 0;
    int scale = 0;
    std::uint64_t entriesInserted = 0;
    double seconds = 0.0;
    double ratePerSec = 0.0;
    bool failed = false;
    std::string error;
};

struct BenchReport {
    BenchMode mode = BenchMode::Weak;
    std::string backend;
    std::vector<BenchRow> rows;

    // "mode,processes,scale,entries,seconds,rate" header; failed rows are
    // omitted (they live in rows[].error).
    std::string toCsv() const;
};

BenchReport runIngestBench(const BenchOptions& options);

// dst = fold of all source tables; sources untouched. Returns triples copied.
std::size_t mergeTables(DatabaseHandle& db,
                        std::span<const std::string> names,
                        const std::string& dest);

// gnuplot script plotting rate over processes from a CSV report file.
std::string plotScript(const std::string& csvPath);

// Strong-mode remote ingestor used by process mode: generates edge indexes
// [first, last), puts the folded array, returns its entry count.
std::size_t runBenchWorker(const ConnectionSpec& backend,
                           const std::string& table,
                           const RmatParams& params,
                           std::uint64_t first,
                           std::uint64_t last);

}  // namespace aadb
