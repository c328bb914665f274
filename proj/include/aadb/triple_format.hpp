#pragma once
// Canonical triple text: one "row<TAB>col<TAB>value<LF>" line per entry,
// fields escaped with \t, \n and \\, numeric values as shortest
// round-trip decimals, text values prefixed "s:", lines sorted by
// (row, col). Files, the wire protocol and the golden tests share this
// encoding byte for byte.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aadb/assoc.hpp"

namespace aadb {

std::string escapeField(std::string_view raw);
std::string unescapeField(std::string_view escaped);  // MalformedRecord on bad escapes

std::string encodeNumeric(double v);
std::string encodeValue(const Value& v);
Value decodeValue(std::string_view field);  // MalformedRecord on garbage

std::string encodeTripleLine(const TripleRecord& t);  // includes trailing LF
TripleRecord parseTripleLine(std::string_view line);  // line without LF

// Serializes in the given order; callers pass sorted triples when the
// canonical order matters.
std::string serializeTriples(std::span<const TripleRecord> triples);
std::vector<TripleRecord> parseTriples(std::string_view body);  // strict, all-or-nothing

std::string canonicalText(const AssociativeArray& array);

}  // namespace aadb
