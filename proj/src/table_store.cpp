#include "aadb/table_store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <atomic>
#include <cctype>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <fstream>
#include <mutex>
#include <sstream>
#include <utility>

#include "aadb/error.hpp"
#include "aadb/triple_format.hpp"

namespace aadb {

namespace {

constexpr char kSnapshotExt[] = ".tbl";
constexpr char kLogExt[] = ".log";

bool isStoredZero(const Value& v) { return v.isNumeric() && v.asNumeric() == 0.0; }

// Table names map to filenames by percent-encoding everything outside
// [A-Za-z0-9._-]; '%' itself never appears in a valid name, so decoding is
// unambiguous.
std::string encodeTableFileName(std::string_view name) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(name.size());
  for (unsigned char c : name) {
    if (std::isalnum(c) || c == '.' || c == '_' || c == '-') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

int hexDigit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

std::optional<std::string> decodeTableFileName(std::string_view encoded) {
  std::string out;
  out.reserve(encoded.size());
  for (std::size_t i = 0; i < encoded.size(); ++i) {
    if (encoded[i] != '%') {
      out.push_back(encoded[i]);
      continue;
    }
    if (i + 2 >= encoded.size()) return std::nullopt;
    int hi = hexDigit(encoded[i + 1]);
    int lo = hexDigit(encoded[i + 2]);
    if (hi < 0 || lo < 0) return std::nullopt;
    out.push_back(static_cast<char>(hi << 4 | lo));
    i += 2;
  }
  return out;
}

std::string readWholeFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::IoError, "cannot read " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return std::move(buffer).str();
}

}  // namespace

bool isValidTableName(std::string_view name) {
  if (name.empty()) return false;
  return name.find_first_of("\t\n/%") == std::string_view::npos;
}

void requireValidTableName(std::string_view name) {
  if (!isValidTableName(name)) {
    throw Error(ErrorKind::InvalidName,
                "table names must be non-empty and avoid tab, newline, '/' and '%'");
  }
}

Value foldStoredValue(const Value& current, const Value& incoming) {
  if (current.isNumeric() && incoming.isNumeric()) {
    return Value{current.asNumeric() + incoming.asNumeric()};
  }
  if (current.isText() && incoming.isText()) {
    return current.asText() >= incoming.asText() ? current : incoming;
  }
  throw Error(ErrorKind::TypeMismatch,
              "a cell cannot mix numeric and text values across inserts");
}

struct TableStore::Table {
  mutable std::shared_mutex latch;
  AssociativeArray::CellMap cells;
  std::atomic<std::uint64_t> inserts{0};
  std::atomic<std::uint64_t> lockWaitNanos{0};

  // Durable tables only.
  std::filesystem::path snapshotPath;
  std::filesystem::path logPath;
  int logFd = -1;
  bool logDirty = false;

  ~Table() {
    if (logFd >= 0) ::close(logFd);
  }

  void openLog() {
    logFd = ::open(logPath.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
    if (logFd < 0) {
      throw Error(ErrorKind::IoError,
                  "cannot open " + logPath.string() + ": " + std::strerror(errno));
    }
  }

  using Overlay = std::map<AssociativeArray::CellKey, std::optional<Value>>;

  // Folds one batch in input order against the current cells without touching
  // them; a fold error (mixed types) therefore rejects the whole batch before
  // anything reaches memory or the log. nullopt marks a cell pruned to zero.
  Overlay stageLocked(std::span<const TripleRecord> triples) const {
    Overlay overlay;
    for (const TripleRecord& t : triples) {
      AssociativeArray::CellKey key{t.row, t.col};
      std::optional<Value> current;
      if (auto staged = overlay.find(key); staged != overlay.end()) {
        current = staged->second;
      } else if (auto it = cells.find(key); it != cells.end()) {
        current = it->second;
      }
      Value folded = current ? foldStoredValue(*current, t.value) : t.value;
      if (isStoredZero(folded)) {
        overlay[key] = std::nullopt;
      } else {
        overlay[key] = std::move(folded);
      }
    }
    return overlay;
  }

  void commitLocked(Overlay&& overlay) {
    for (auto& [key, value] : overlay) {
      if (value) {
        cells.insert_or_assign(key, std::move(*value));
      } else {
        cells.erase(key);
      }
    }
  }

  void applyLocked(std::span<const TripleRecord> triples) {
    commitLocked(stageLocked(triples));
  }

  void appendLogLocked(std::string_view text) {
    if (logFd < 0 || text.empty()) return;
    std::size_t written = 0;
    while (written < text.size()) {
      ssize_t n = ::write(logFd, text.data() + written, text.size() - written);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw Error(ErrorKind::IoError,
                    "log append to " + logPath.string() + " failed: " + std::strerror(errno));
      }
      written += static_cast<std::size_t>(n);
    }
    if (::fdatasync(logFd) != 0) {
      throw Error(ErrorKind::IoError,
                  "fdatasync on " + logPath.string() + " failed: " + std::strerror(errno));
    }
    logDirty = true;
  }

  // Snapshot + truncated log; caller holds the exclusive latch.
  void compactLocked() {
    if (logFd < 0 || !logDirty) return;
    std::vector<TripleRecord> triples;
    triples.reserve(cells.size());
    for (const auto& [key, value] : cells) triples.emplace_back(key.first, key.second, value);
    auto tmp = snapshotPath;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << serializeTriples(triples);
      if (!out.flush()) {
        throw Error(ErrorKind::IoError, "cannot write " + tmp.string());
      }
    }
    std::filesystem::rename(tmp, snapshotPath);
    if (::ftruncate(logFd, 0) != 0) {
      throw Error(ErrorKind::IoError,
                  "truncating " + logPath.string() + " failed: " + std::strerror(errno));
    }
    logDirty = false;
  }
};

TableStore::TableStore() = default;

TableStore::TableStore(const std::filesystem::path& dir, bool compactOnClose)
    : directory_(dir), compactOnClose_(compactOnClose) {
  std::error_code ec;
  std::filesystem::create_directories(*directory_, ec);
  if (ec) {
    throw Error(ErrorKind::IoError,
                "cannot create data directory " + directory_->string() + ": " + ec.message());
  }
  loadExisting();
}

TableStore::~TableStore() {
  if (!compactOnClose_) return;
  try {
    compact();
  } catch (...) {
    // Close must not throw; the log still holds everything the snapshot lacks.
  }
}

void TableStore::loadExisting() {
  std::map<std::string, std::shared_ptr<Table>> loaded;
  std::vector<std::string> names;
  for (const auto& entry : std::filesystem::directory_iterator(*directory_)) {
    if (!entry.is_regular_file()) continue;
    auto ext = entry.path().extension().string();
    if (ext != kSnapshotExt && ext != kLogExt) continue;
    auto name = decodeTableFileName(entry.path().stem().string());
    if (name && isValidTableName(*name)) names.push_back(*name);
  }
  for (const std::string& name : names) {
    if (loaded.contains(name)) continue;
    auto table = std::make_shared<Table>();
    auto base = *directory_ / encodeTableFileName(name);
    table->snapshotPath = base;
    table->snapshotPath += kSnapshotExt;
    table->logPath = base;
    table->logPath += kLogExt;
    if (std::filesystem::exists(table->snapshotPath)) {
      table->applyLocked(parseTriples(readWholeFile(table->snapshotPath)));
    }
    if (std::filesystem::exists(table->logPath)) {
      auto logged = parseTriples(readWholeFile(table->logPath));
      table->applyLocked(logged);
      table->logDirty = !logged.empty();
    }
    table->openLog();
    loaded.emplace(name, std::move(table));
  }
  tables_ = std::move(loaded);
}

std::shared_ptr<TableStore::Table> TableStore::find(const std::string& name) const {
  std::shared_lock lock(tablesMutex_);
  auto it = tables_.find(name);
  if (it == tables_.end()) {
    throw Error(ErrorKind::NoSuchTable, "no table \"" + name + "\"");
  }
  return it->second;
}

std::vector<std::string> TableStore::tableNames() const {
  std::shared_lock lock(tablesMutex_);
  std::vector<std::string> names;
  names.reserve(tables_.size());
  for (const auto& [name, table] : tables_) names.push_back(name);
  return names;
}

bool TableStore::hasTable(const std::string& name) const {
  std::shared_lock lock(tablesMutex_);
  return tables_.contains(name);
}

void TableStore::createTable(const std::string& name) {
  requireValidTableName(name);
  std::unique_lock lock(tablesMutex_);
  auto [it, fresh] = tables_.try_emplace(name);
  if (!fresh) return;
  auto table = std::make_shared<Table>();
  if (directory_) {
    auto base = *directory_ / encodeTableFileName(name);
    table->snapshotPath = base;
    table->snapshotPath += kSnapshotExt;
    table->logPath = base;
    table->logPath += kLogExt;
    std::ofstream touch(table->snapshotPath, std::ios::binary | std::ios::app);
    if (!touch) {
      tables_.erase(it);
      throw Error(ErrorKind::IoError, "cannot create " + table->snapshotPath.string());
    }
    touch.close();
    try {
      table->openLog();
    } catch (...) {
      tables_.erase(it);
      throw;
    }
  }
  it->second = std::move(table);
}

void TableStore::dropTable(const std::string& name) {
  std::shared_ptr<Table> table;
  {
    std::unique_lock lock(tablesMutex_);
    auto it = tables_.find(name);
    if (it == tables_.end()) {
      throw Error(ErrorKind::NoSuchTable, "no table \"" + name + "\"");
    }
    table = std::move(it->second);
    tables_.erase(it);
  }
  std::unique_lock latch(table->latch);  // waits out in-flight writers
  if (table->logFd >= 0) {
    ::close(table->logFd);
    table->logFd = -1;
    std::error_code ec;
    std::filesystem::remove(table->snapshotPath, ec);
    std::filesystem::remove(table->logPath, ec);
  }
}

namespace {

// try_lock first so the wait metric counts only real contention.
std::unique_lock<std::shared_mutex> lockForWrite(std::shared_mutex& latch,
                                                 std::atomic<std::uint64_t>& waitNanos) {
  std::unique_lock lock(latch, std::try_to_lock);
  if (!lock.owns_lock()) {
    auto started = std::chrono::steady_clock::now();
    lock.lock();
    waitNanos += static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(
            std::chrono::steady_clock::now() - started)
            .count());
  }
  return lock;
}

}  // namespace

std::size_t TableStore::insertTriples(const std::string& name,
                                      std::span<const TripleRecord> triples) {
  auto table = find(name);
  auto lock = lockForWrite(table->latch, table->lockWaitNanos);
  auto staged = table->stageLocked(triples);
  table->appendLogLocked(serializeTriples(triples));
  table->commitLocked(std::move(staged));
  table->inserts += 1;
  return triples.size();
}

std::size_t TableStore::insertText(const std::string& name, std::string_view body) {
  auto table = find(name);
  auto lock = lockForWrite(table->latch, table->lockWaitNanos);
  auto triples = parseTriples(body);  // inside the latch on purpose
  auto staged = table->stageLocked(triples);
  table->appendLogLocked(serializeTriples(triples));
  table->commitLocked(std::move(staged));
  table->inserts += 1;
  return triples.size();
}

std::vector<TripleRecord> TableStore::scanRange(const std::string& name,
                                                const KeyRange& rows,
                                                const KeyRange& cols) const {
  auto table = find(name);
  std::shared_lock lock(table->latch);
  std::vector<TripleRecord> out;
  auto it = rows.start() ? table->cells.lower_bound({*rows.start(), std::string()})
                         : table->cells.begin();
  for (; it != table->cells.end(); ++it) {
    if (rows.end() && it->first.first > *rows.end()) break;
    if (cols.contains(it->first.second)) {
      out.emplace_back(it->first.first, it->first.second, it->second);
    }
  }
  return out;
}

std::size_t TableStore::countEntries(const std::string& name) const {
  auto table = find(name);
  std::shared_lock lock(table->latch);
  return table->cells.size();
}

TableMetrics TableStore::metrics(const std::string& name) const {
  auto table = find(name);
  std::shared_lock lock(table->latch);
  return TableMetrics{table->inserts.load(), table->cells.size(), table->lockWaitNanos.load()};
}

void TableStore::compact() {
  std::vector<std::shared_ptr<Table>> tables;
  {
    std::shared_lock lock(tablesMutex_);
    tables.reserve(tables_.size());
    for (const auto& [name, table] : tables_) tables.push_back(table);
  }
  for (const auto& table : tables) {
    std::unique_lock latch(table->latch);
    table->compactLocked();
  }
}

}  // namespace aadb
