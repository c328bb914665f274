#pragma once
// Three-backend chained-query demo. Three tables live on three different
// backends: a medication index (row "drug|<name>", column = patient id), a
// waveform index (row = patient id, column = waveform id) and a waveform
// store (row = waveform id, column = "t|<sample index>", numeric sample).
// The chain selects one medication row, feeds the resulting patient columns
// in as row keys of the waveform index, then feeds those waveform columns in
// as row keys of the waveform store. The result only depends on the data,
// not on which backend hosts which table.

#include <array>
#include <string>

#include "aadb/binding.hpp"

namespace aadb {

inline constexpr const char* kMedicationsTable = "medications";
inline constexpr const char* kWaveformIndexTable = "waveform_index";
inline constexpr const char* kWaveformsTable = "waveforms";

// Fixed fixture: five patients; drugA was taken by p1 and p3; only p2, p3
// and p4 have indexed waveforms (w44, w43, w41); w43 carries samples
// (t|0001)=7 and (t|0002)=9.
void seedDemoTables(DatabaseHandle& medications,
                    DatabaseHandle& waveformIndex,
                    DatabaseHandle& waveforms);

AssociativeArray chainDemoQuery(DatabaseHandle& medications,
                                DatabaseHandle& waveformIndex,
                                DatabaseHandle& waveforms,
                                const std::string& drug = "drugA");

// Result for the fixture above with drug "drugA"; the oracle the demo is
// checked against.
AssociativeArray expectedDemoResult();

// The six ways to deal three tables onto three backends; permutation[i] is
// the backend index hosting table i (0 medications, 1 waveform index,
// 2 waveforms).
std::array<std::array<int, 3>, 6> demoPermutations();

}  // namespace aadb
