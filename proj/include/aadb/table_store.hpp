#pragma once
// Triple storage shared by the memory backend, the file backend and the
// table server. Tables hold raw triples with no semiring attached; cell
// collisions fold with a fixed rule (numeric values add, text values keep
// the lexicographic max) and cells that fold to exactly 0.0 are dropped.
// The semiring is supplied again at query time by the caller.
//
// Durable stores keep one snapshot file plus one append log per table; the
// log is fdatasync'd per insert batch and folded into the snapshot on
// compact()/close. Replay applies log lines one at a time in order, so a
// reopened table is bit-identical to the live one.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aadb/assoc.hpp"

namespace aadb {

// Table names are non-empty and carry no TAB/LF; '/' and '%' are also
// refused so names survive URL paths and the filename encoding unchanged
// on every backend.
bool isValidTableName(std::string_view name);
void requireValidTableName(std::string_view name);

Value foldStoredValue(const Value& current, const Value& incoming);

struct TableMetrics {
    std::uint64_t inserts = 0;        // insert batches applied
    std::uint64_t entries = 0;        // current cell count
    std::uint64_t lockWaitNanos = 0;  // writer time spent blocked on the latch
};

class TableStore {
  public:
    TableStore();  // volatile, memory only
    // Durable. compactOnClose=false leaves the append logs in place at
    // destruction so a reopen exercises the replay path.
    explicit TableStore(const std::filesystem::path& dir, bool compactOnClose = true);
    ~TableStore();

    TableStore(const TableStore&) = delete;
    TableStore& operator=(const TableStore&) = delete;

    std::vector<std::string> tableNames() const;  // sorted
    bool hasTable(const std::string& name) const;
    void createTable(const std::string& name);  // idempotent
    void dropTable(const std::string& name);    // NoSuchTable when missing

    // Folds the batch into the table under its exclusive latch, appending to
    // the log first when durable. Returns the number of triples accepted.
    // Latch wait time lands in metrics only when the latch was contended.
    std::size_t insertTriples(const std::string& name, std::span<const TripleRecord> triples);

    // Same as insertTriples but parses the canonical triple body inside the
    // latch, so the whole cost of an insert serializes per table (the table
    // server's write path). A parse failure applies nothing.
    std::size_t insertText(const std::string& name, std::string_view body);

    std::vector<TripleRecord> scanRange(const std::string& name,
                                        const KeyRange& rows,
                                        const KeyRange& cols) const;
    std::size_t countEntries(const std::string& name) const;
    TableMetrics metrics(const std::string& name) const;

    // Folds every log into its snapshot and truncates the logs. Called by
    // the destructor for a clean close.
    void compact();

    const std::optional<std::filesystem::path>& directory() const { return directory_; }

  private:
    struct Table;

    std::shared_ptr<Table> find(const std::string& name) const;  // NoSuchTable when missing
    void loadExisting();

    std::optional<std::filesystem::path> directory_;
    bool compactOnClose_ = true;
    mutable std::shared_mutex tablesMutex_;
    std::map<std::string, std::shared_ptr<Table>> tables_;
};

}  // namespace aadb
