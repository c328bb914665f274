#include "aadb/federated.hpp"

#include <vector>

namespace aadb {

namespace {

const Semiring& ring() { return Semiring::plusTimes(); }

std::vector<TripleRecord> medicationTriples() {
  return {
      {"drug|drugA", "p1", Value{1.0}},
      {"drug|drugA", "p3", Value{1.0}},
      {"drug|drugB", "p2", Value{1.0}},
      {"drug|drugC", "p4", Value{1.0}},
      {"drug|drugC", "p5", Value{1.0}},
  };
}

std::vector<TripleRecord> waveformIndexTriples() {
  return {
      {"p2", "w44", Value{1.0}},
      {"p3", "w43", Value{1.0}},
      {"p4", "w41", Value{1.0}},
  };
}

std::vector<TripleRecord> waveformTriples() {
  return {
      {"w41", "t|0001", Value{3.0}},
      {"w43", "t|0001", Value{7.0}},
      {"w43", "t|0002", Value{9.0}},
      {"w44", "t|0001", Value{5.0}},
  };
}

// Union of single-row queries: the previous stage's column keys become the
// next stage's row keys.
AssociativeArray pullRows(DatabaseHandle& db, const char* table,
                          const std::vector<std::string>& rowKeys) {
  AssociativeArray result(ring());
  auto binding = db.table(table);
  for (const std::string& key : rowKeys) {
    result = result.add(binding.queryRange(KeyRange::single(key), KeyRange::all(), ring()));
  }
  return result;
}

}  // namespace

void seedDemoTables(DatabaseHandle& medications, DatabaseHandle& waveformIndex,
                    DatabaseHandle& waveforms) {
  medications.table(kMedicationsTable).put(medicationTriples());
  waveformIndex.table(kWaveformIndexTable).put(waveformIndexTriples());
  waveforms.table(kWaveformsTable).put(waveformTriples());
}

AssociativeArray chainDemoQuery(DatabaseHandle& medications, DatabaseHandle& waveformIndex,
                                DatabaseHandle& waveforms, const std::string& drug) {
  auto takers = medications.table(kMedicationsTable)
                    .queryRange(KeyRange::single("drug|" + drug), KeyRange::all(), ring());
  auto indexed = pullRows(waveformIndex, kWaveformIndexTable, takers.colKeys());
  return pullRows(waveforms, kWaveformsTable, indexed.colKeys());
}

AssociativeArray expectedDemoResult() {
  std::vector<TripleRecord> triples{
      {"w43", "t|0001", Value{7.0}},
      {"w43", "t|0002", Value{9.0}},
  };
  return AssociativeArray::fromTriples(triples, ring());
}

std::array<std::array<int, 3>, 6> demoPermutations() {
  return {{{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
}

}  // namespace aadb
