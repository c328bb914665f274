#include "aadb/schema.hpp"

#include <charconv>
#include <chrono>
#include <ostream>
#include <system_error>

#include "aadb/error.hpp"
#include "aadb/triple_format.hpp"

namespace aadb {

namespace {

// Numeric when the whole cell parses as a double; everything else is text.
std::optional<Value> parseCell(std::string_view cell) {
  double number = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), number);
  if (ec == std::errc{} && ptr == cell.data() + cell.size()) {
    try {
      return Value{number};
    } catch (const Error&) {
      return std::nullopt;  // "nan" reads as a number but is unstorable
    }
  }
  return std::nullopt;
}

bool cleanField(std::string_view field) {
  return field.find('\t') == std::string_view::npos &&
         field.find('\n') == std::string_view::npos;
}

std::vector<std::string_view> splitLines(std::string_view source) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < source.size()) {
    auto eol = source.find('\n', pos);
    std::string_view line =
        eol == std::string_view::npos ? source.substr(pos) : source.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = eol == std::string_view::npos ? source.size() : eol + 1;
  }
  return lines;
}

}  // namespace

std::vector<std::string> splitDelimited(std::string_view line, char delimiter) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"' && current.empty()) {
      quoted = true;
    } else if (c == delimiter) {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

std::pair<AssociativeArray, IngestReport> ingestDelimited(std::string_view source,
                                                          char delimiter,
                                                          const SchemaMode& schema,
                                                          const Semiring& semiring) {
  if (schema.separator == '\t' || schema.separator == '\n') {
    throw Error(ErrorKind::BadSpec, "exploded separator must not be a tab or newline");
  }
  auto started = std::chrono::steady_clock::now();
  IngestReport report;

  auto lines = splitLines(source);
  if (lines.empty()) {
    return {AssociativeArray(semiring), report};
  }

  auto header = splitDelimited(lines.front(), delimiter);
  for (const std::string& name : header) {
    if (name.empty() || !cleanField(name)) {
      throw Error(ErrorKind::MalformedRecord, "header names must be non-empty and clean");
    }
  }
  std::size_t keyIndex = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == schema.keyField) {
      keyIndex = i;
      break;
    }
  }
  if (keyIndex == header.size()) {
    throw Error(ErrorKind::MissingKeyField,
                "header has no \"" + schema.keyField + "\" column");
  }

  std::vector<TripleRecord> triples;
  for (std::size_t lineNo = 1; lineNo < lines.size(); ++lineNo) {
    if (lines[lineNo].empty()) continue;
    auto fields = splitDelimited(lines[lineNo], delimiter);
    ++report.recordsRead;
    if (fields.size() != header.size()) {
      ++report.badRecords;
      continue;
    }

    const std::string& row = fields[keyIndex];
    bool bad = !isValidKey(row);
    std::vector<TripleRecord> recordTriples;
    for (std::size_t i = 0; i < fields.size() && !bad; ++i) {
      if (i == keyIndex || fields[i].empty()) continue;
      if (!cleanField(fields[i])) {
        bad = true;
        break;
      }
      if (schema.mode == SchemaMode::Mode::Exploded) {
        std::string col = header[i];
        col.push_back(schema.separator);
        col += escapeExplodedPart(fields[i], schema.separator);
        recordTriples.emplace_back(row, std::move(col), semiring.one());
      } else {
        auto value = parseCell(fields[i]);
        recordTriples.emplace_back(row, header[i],
                                   value ? *value : Value::text(fields[i]));
      }
    }
    if (bad) {
      ++report.badRecords;
      continue;
    }
    for (auto& t : recordTriples) triples.push_back(std::move(t));
  }

  report.entriesProduced = triples.size();
  auto array = AssociativeArray::fromTriples(triples, semiring);
  report.elapsedSeconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return {std::move(array), report};
}

AssociativeArray ingestTripleText(std::string_view source, const Semiring& semiring) {
  auto triples = parseTriples(source);
  return AssociativeArray::fromTriples(triples, semiring);
}

std::size_t exportDelimited(const AssociativeArray& array, std::ostream& sink) {
  sink << canonicalText(array);
  if (!sink) {
    throw Error(ErrorKind::IoError, "triple export failed mid-write");
  }
  return array.nnz();
}

}  // namespace aadb
