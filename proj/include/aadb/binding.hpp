#pragma once
// Server binding: one connection/query/insert surface over the memory, file
// and remote backends, plus cast (copying between backends through the
// client). All adapters satisfy the same observable contract; a table bound
// on one backend behaves like the same table bound on any other.

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aadb/assoc.hpp"
#include "aadb/semiring.hpp"

namespace aadb {

enum class BackendType { Memory, File, Remote };

BackendType backendTypeFromName(std::string_view name);  // BadSpec on unknown
std::string_view backendTypeName(BackendType type);

struct ConnectionSpec {
    std::string host;  // remote only: "host:port" authority
    BackendType type = BackendType::Memory;
    // memory: shared-instance name; file: data directory; remote: URL path
    // prefix under which the server mounts its endpoints (usually empty).
    std::string instanceName;
    std::string username;
    std::string password;
    std::size_t batchBytes = 128ull << 20;  // remote insert payload chunk size
};

class BackendAdapter {
  public:
    virtual ~BackendAdapter() = default;
    virtual std::vector<std::string> listTables() = 0;
    virtual void createTable(const std::string& name) = 0;
    virtual void deleteTable(const std::string& name) = 0;
    virtual std::vector<TripleRecord> scanRange(const std::string& name,
                                                const KeyRange& rows,
                                                const KeyRange& cols) = 0;
    virtual std::size_t insertTriples(const std::string& name,
                                      std::span<const TripleRecord> triples) = 0;
    virtual std::size_t countEntries(const std::string& name) = 0;
    virtual void close() {}
};

namespace detail {
// Shared between a handle and its bindings so close() is visible to both.
struct AdapterSlot {
    std::shared_ptr<BackendAdapter> adapter;
};
}  // namespace detail

class TableBinding {
  public:
    const std::string& name() const { return name_; }

    // Equals select(full table contents, rows, cols) typed by the semiring.
    AssociativeArray queryRange(const KeyRange& rows,
                                const KeyRange& cols,
                                const Semiring& semiring = Semiring::plusTimes()) const;

    std::size_t put(const AssociativeArray& array) const;
    std::size_t put(std::span<const TripleRecord> triples) const;
    std::size_t nnz() const;

  private:
    friend class DatabaseHandle;
    TableBinding(std::shared_ptr<detail::AdapterSlot> slot, std::string name);

    std::shared_ptr<detail::AdapterSlot> slot_;
    std::string name_;
};

class DatabaseHandle {
  public:
    const ConnectionSpec& spec() const { return spec_; }
    std::vector<std::string> listTables() const;
    TableBinding table(const std::string& name);  // creates the table when absent
    void deleteTable(const std::string& name);
    void close();  // ends the session; the handle's bindings fail afterward

  private:
    friend DatabaseHandle connect(const ConnectionSpec& spec);
    DatabaseHandle(ConnectionSpec spec, std::shared_ptr<BackendAdapter> adapter);

    ConnectionSpec spec_;
    std::shared_ptr<detail::AdapterSlot> slot_;
};

DatabaseHandle connect(const ConnectionSpec& spec);

// Copies queryRange(src, rows, cols) into dst through the client; src is
// untouched. Returns the number of triples written. A failure mid-copy
// carries the partial count on the thrown Error.
std::size_t castCopy(const TableBinding& src,
                     const TableBinding& dst,
                     const KeyRange& rows = KeyRange::all(),
                     const KeyRange& cols = KeyRange::all());

// Drops one shared in-process memory instance; test and CLI plumbing.
void clearMemoryInstance(const std::string& instanceName);

}  // namespace aadb
