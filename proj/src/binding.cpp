#include "aadb/binding.hpp"

#include <mutex>
#include <unordered_map>
#include <utility>

#include "aadb/error.hpp"
#include "aadb/table_store.hpp"
#include "remote_adapter.hpp"

namespace aadb {

namespace {

// Memory and file backends are both a TableStore; only its construction
// differs.
class LocalAdapter final : public BackendAdapter {
 public:
  explicit LocalAdapter(std::shared_ptr<TableStore> store) : store_(std::move(store)) {}

  std::vector<std::string> listTables() override { return store_->tableNames(); }
  void createTable(const std::string& name) override { store_->createTable(name); }
  void deleteTable(const std::string& name) override { store_->dropTable(name); }
  std::vector<TripleRecord> scanRange(const std::string& name, const KeyRange& rows,
                                      const KeyRange& cols) override {
    return store_->scanRange(name, rows, cols);
  }
  std::size_t insertTriples(const std::string& name,
                            std::span<const TripleRecord> triples) override {
    return store_->insertTriples(name, triples);
  }
  std::size_t countEntries(const std::string& name) override {
    return store_->countEntries(name);
  }

 private:
  std::shared_ptr<TableStore> store_;
};

// Named in-process instances shared by every handle in the process, so one
// command can seed what a later command reads.
std::mutex gMemoryMutex;
std::unordered_map<std::string, std::shared_ptr<TableStore>>& memoryInstances() {
  static std::unordered_map<std::string, std::shared_ptr<TableStore>> instances;
  return instances;
}

std::shared_ptr<TableStore> memoryInstance(const std::string& name) {
  std::scoped_lock lock(gMemoryMutex);
  auto& slot = memoryInstances()[name];
  if (!slot) slot = std::make_shared<TableStore>();
  return slot;
}

}  // namespace

void clearMemoryInstance(const std::string& instanceName) {
  std::scoped_lock lock(gMemoryMutex);
  memoryInstances().erase(instanceName);
}

BackendType backendTypeFromName(std::string_view name) {
  if (name == "memory") return BackendType::Memory;
  if (name == "file") return BackendType::File;
  if (name == "remote") return BackendType::Remote;
  throw Error(ErrorKind::BadSpec, "unknown backend type \"" + std::string(name) + "\"");
}

std::string_view backendTypeName(BackendType type) {
  switch (type) {
    case BackendType::Memory: return "memory";
    case BackendType::File: return "file";
    case BackendType::Remote: return "remote";
  }
  return "unknown";
}

DatabaseHandle connect(const ConnectionSpec& spec) {
  switch (spec.type) {
    case BackendType::Memory:
      return DatabaseHandle(spec, std::make_shared<LocalAdapter>(memoryInstance(spec.instanceName)));
    case BackendType::File: {
      if (spec.instanceName.empty()) {
        throw Error(ErrorKind::BadSpec, "file backend needs a data directory as instance name");
      }
      return DatabaseHandle(spec,
                            std::make_shared<LocalAdapter>(
                                std::make_shared<TableStore>(spec.instanceName)));
    }
    case BackendType::Remote:
      return DatabaseHandle(spec, makeRemoteAdapter(spec));
  }
  throw Error(ErrorKind::BadSpec, "unknown backend type");
}

DatabaseHandle::DatabaseHandle(ConnectionSpec spec, std::shared_ptr<BackendAdapter> adapter)
    : spec_(std::move(spec)),
      slot_(std::make_shared<detail::AdapterSlot>(detail::AdapterSlot{std::move(adapter)})) {}

namespace {

BackendAdapter& liveAdapter(const std::shared_ptr<detail::AdapterSlot>& slot) {
  if (!slot || !slot->adapter) {
    throw Error(ErrorKind::SessionExpired, "handle is closed");
  }
  return *slot->adapter;
}

}  // namespace

std::vector<std::string> DatabaseHandle::listTables() const {
  return liveAdapter(slot_).listTables();
}

TableBinding DatabaseHandle::table(const std::string& name) {
  requireValidTableName(name);
  liveAdapter(slot_).createTable(name);
  return TableBinding(slot_, name);
}

void DatabaseHandle::deleteTable(const std::string& name) {
  liveAdapter(slot_).deleteTable(name);
}

void DatabaseHandle::close() {
  if (!slot_ || !slot_->adapter) return;
  slot_->adapter->close();
  slot_->adapter.reset();
}

TableBinding::TableBinding(std::shared_ptr<detail::AdapterSlot> slot, std::string name)
    : slot_(std::move(slot)), name_(std::move(name)) {}

AssociativeArray TableBinding::queryRange(const KeyRange& rows, const KeyRange& cols,
                                          const Semiring& semiring) const {
  auto triples = liveAdapter(slot_).scanRange(name_, rows, cols);
  return AssociativeArray::fromTriples(triples, semiring);
}

std::size_t TableBinding::put(const AssociativeArray& array) const {
  auto triples = array.toTriples();
  return put(triples);
}

std::size_t TableBinding::put(std::span<const TripleRecord> triples) const {
  return liveAdapter(slot_).insertTriples(name_, triples);
}

std::size_t TableBinding::nnz() const { return liveAdapter(slot_).countEntries(name_); }

std::size_t castCopy(const TableBinding& src, const TableBinding& dst, const KeyRange& rows,
                     const KeyRange& cols) {
  auto pulled = src.queryRange(rows, cols);
  auto triples = pulled.toTriples();
  return dst.put(triples);
}

}  // namespace aadb
