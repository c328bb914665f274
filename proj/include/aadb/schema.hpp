#pragma once
// Tabular ingest: delimited text with a header row becomes an associative
// array. Exploded mode turns every non-empty field f with value v into a
// column "f|v" holding the semiring one; dense mode keeps the field name as
// the column and parses the cell (numeric when the whole cell parses as a
// double, text otherwise).

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aadb/assoc.hpp"

namespace aadb {

struct SchemaMode {
    enum class Mode { Exploded, Dense };
    Mode mode = Mode::Exploded;
    std::string keyField;  // header name of the row-key column
    char separator = '|';  // Exploded column glue; not TAB/LF
};

struct IngestReport {
    std::size_t recordsRead = 0;  // well-formed records + badRecords
    std::size_t entriesProduced = 0;
    std::size_t badRecords = 0;
    double elapsedSeconds = 0.0;
};

// Splits one delimited line. Double quotes guard embedded delimiters and
// "" escapes a quote inside a quoted cell.
std::vector<std::string> splitDelimited(std::string_view line, char delimiter);

std::pair<AssociativeArray, IngestReport> ingestDelimited(std::string_view source,
                                                          char delimiter,
                                                          const SchemaMode& schema,
                                                          const Semiring& semiring);

// Reads canonical triple lines (no header) straight into an array; the
// re-import path for exportDelimited output.
AssociativeArray ingestTripleText(std::string_view source, const Semiring& semiring);

// Writes canonical triple text, one line per entry; returns the line count.
std::size_t exportDelimited(const AssociativeArray& array, std::ostream& sink);

}  // namespace aadb
