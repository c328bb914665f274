#pragma once
// Associative arrays: finite maps from (row key, column key) to semiring
// values. Keys carry their global labels, order is lexicographic byte
// order, and zero-valued cells are pruned eagerly so the support stays
// finite and every listed row/column key is backed by at least one entry.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aadb/semiring.hpp"

namespace aadb {

// Row/column keys: non-empty byte strings containing no tab or newline.
bool isValidKey(std::string_view key);
void requireValidKey(std::string_view key);  // throws InvalidKey

// Numeric keys only sort correctly when client-encoded as zero-padded
// decimal; width 20 covers the full uint64 range.
std::string numericKey(std::uint64_t n);

struct TripleRecord {
  std::string row;
  std::string col;
  Value value{0.0};

  TripleRecord() = default;
  TripleRecord(std::string r, std::string c, Value v);  // validates both keys

  friend bool operator==(const TripleRecord&, const TripleRecord&) = default;
};

// A d-dimensional key tuple (d >= 2) awaiting projection to 2-D.
struct MultiDimRecord {
  std::vector<std::string> keys;
  Value value{0.0};
};

// Inclusive key interval; an unset bound is unbounded. start > end is
// rejected at construction.
class KeyRange {
 public:
  KeyRange() = default;  // full range
  static KeyRange all() { return {}; }
  static KeyRange closed(std::string start, std::string end);
  static KeyRange atLeast(std::string start);
  static KeyRange atMost(std::string end);
  static KeyRange single(std::string key);
  // ":" | "a:d" | "a:" | ":d" | "k" (single key; splits at the first colon)
  static KeyRange parse(std::string_view text);
  // Wire shape: empty string means unbounded on that side.
  static KeyRange fromBounds(std::string_view start, std::string_view end);

  bool contains(std::string_view key) const;
  bool isAll() const { return !start_ && !end_; }
  const std::optional<std::string>& start() const { return start_; }
  const std::optional<std::string>& end() const { return end_; }

 private:
  std::optional<std::string> start_;
  std::optional<std::string> end_;
};

class AssociativeArray {
 public:
  using CellKey = std::pair<std::string, std::string>;  // (row, col)
  using CellMap = std::map<CellKey, Value>;

  explicit AssociativeArray(const Semiring& semiring);  // empty array

  // Duplicate (row,col) pairs fold with the semiring plus in input order;
  // zero-valued results are pruned.
  static AssociativeArray fromTriples(std::span<const TripleRecord> triples,
                                      const Semiring& semiring);

  std::vector<TripleRecord> toTriples() const;  // sorted by (row, col)

  AssociativeArray add(const AssociativeArray& other) const;
  AssociativeArray elementwiseMultiply(const AssociativeArray& other) const;
  AssociativeArray matmul(const AssociativeArray& other) const;
  AssociativeArray transpose() const;
  AssociativeArray select(const KeyRange& rows, const KeyRange& cols) const;
  AssociativeArray rowDegrees() const;  // one column "deg": entry count per row

  std::size_t nnz() const { return cells_.size(); }
  const std::vector<std::string>& rowKeys() const { return rowKeys_; }
  const std::vector<std::string>& colKeys() const { return colKeys_; }
  const CellMap& cells() const { return cells_; }
  std::optional<Value> at(std::string_view row, std::string_view col) const;
  const Semiring& semiring() const { return semiring_; }

  // Same semiring name and identical entries; numeric equality is exact.
  bool operator==(const AssociativeArray& other) const;

 private:
  AssociativeArray(Semiring semiring, CellMap cells);  // prunes, derives keys

  Semiring semiring_;
  CellMap cells_;
  std::vector<std::string> rowKeys_;
  std::vector<std::string> colKeys_;
};

// Project d-dimensional records into 2-D: the chosen dimension (1-based)
// keys the rows and every remaining key becomes its own column
// "<dim>|<key>" with value taken from the record; the prefix is dropped in
// the degenerate d == 2 case. Collisions fold with the semiring plus.
AssociativeArray project(std::span<const MultiDimRecord> records,
                         int dimension, const Semiring& semiring);

// Escapes the separator (and backslash) so exploded column keys stay
// unambiguous when field values contain the separator byte.
std::string escapeExplodedPart(std::string_view text, char separator = '|');

}  // namespace aadb
