#include "aadb/assoc.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <utility>

#include "aadb/error.hpp"

namespace aadb {

bool isValidKey(std::string_view key) {
  return !key.empty() && key.find('\t') == std::string_view::npos &&
         key.find('\n') == std::string_view::npos;
}

void requireValidKey(std::string_view key) {
  if (!isValidKey(key)) {
    throw Error(ErrorKind::InvalidKey,
                key.empty() ? "empty key" : "key contains a tab or newline");
  }
}

std::string numericKey(std::uint64_t n) {
  char digits[24];
  auto [end, ec] = std::to_chars(digits, digits + sizeof digits, n);
  (void)ec;
  std::string out(20 - static_cast<std::size_t>(end - digits), '0');
  out.append(digits, end);
  return out;
}

TripleRecord::TripleRecord(std::string r, std::string c, Value v)
    : row(std::move(r)), col(std::move(c)), value(std::move(v)) {
  requireValidKey(row);
  requireValidKey(col);
}

KeyRange KeyRange::closed(std::string start, std::string end) {
  if (start > end) {
    throw Error(ErrorKind::InvalidRange,
                "range start \"" + start + "\" sorts after end \"" + end + "\"");
  }
  KeyRange r;
  r.start_ = std::move(start);
  r.end_ = std::move(end);
  return r;
}

KeyRange KeyRange::atLeast(std::string start) {
  KeyRange r;
  r.start_ = std::move(start);
  return r;
}

KeyRange KeyRange::atMost(std::string end) {
  KeyRange r;
  r.end_ = std::move(end);
  return r;
}

KeyRange KeyRange::single(std::string key) {
  KeyRange r;
  r.start_ = key;
  r.end_ = std::move(key);
  return r;
}

KeyRange KeyRange::parse(std::string_view text) {
  if (text.empty()) return all();
  auto colon = text.find(':');
  if (colon == std::string_view::npos) return single(std::string(text));
  std::string_view start = text.substr(0, colon);
  std::string_view end = text.substr(colon + 1);
  return fromBounds(start, end);
}

KeyRange KeyRange::fromBounds(std::string_view start, std::string_view end) {
  if (start.empty() && end.empty()) return all();
  if (end.empty()) return atLeast(std::string(start));
  if (start.empty()) return atMost(std::string(end));
  return closed(std::string(start), std::string(end));
}

bool KeyRange::contains(std::string_view key) const {
  if (start_ && key < *start_) return false;
  if (end_ && key > *end_) return false;
  return true;
}

AssociativeArray::AssociativeArray(const Semiring& semiring) : semiring_(semiring) {}

AssociativeArray::AssociativeArray(Semiring semiring, CellMap cells)
    : semiring_(std::move(semiring)), cells_(std::move(cells)) {
  for (auto it = cells_.begin(); it != cells_.end();) {
    if (semiring_.isZero(it->second)) {
      it = cells_.erase(it);
    } else {
      ++it;
    }
  }
  std::set<std::string> cols;
  for (const auto& [key, value] : cells_) {
    if (rowKeys_.empty() || rowKeys_.back() != key.first) rowKeys_.push_back(key.first);
    cols.insert(key.second);
  }
  colKeys_.assign(cols.begin(), cols.end());
}

AssociativeArray AssociativeArray::fromTriples(std::span<const TripleRecord> triples,
                                               const Semiring& semiring) {
  CellMap cells;
  for (const TripleRecord& t : triples) {
    requireValidKey(t.row);
    requireValidKey(t.col);
    auto [it, fresh] = cells.try_emplace({t.row, t.col}, t.value);
    if (!fresh) it->second = semiring.plus(it->second, t.value);
  }
  return AssociativeArray(semiring, std::move(cells));
}

std::vector<TripleRecord> AssociativeArray::toTriples() const {
  std::vector<TripleRecord> out;
  out.reserve(cells_.size());
  for (const auto& [key, value] : cells_) out.emplace_back(key.first, key.second, value);
  return out;
}

AssociativeArray AssociativeArray::add(const AssociativeArray& other) const {
  if (!(semiring_ == other.semiring_)) {
    throw Error(ErrorKind::SemiringMismatch,
                "add over " + semiring_.name() + " and " + other.semiring_.name());
  }
  CellMap cells = cells_;
  for (const auto& [key, value] : other.cells_) {
    auto [it, fresh] = cells.try_emplace(key, value);
    if (!fresh) it->second = semiring_.plus(it->second, value);
  }
  return AssociativeArray(semiring_, std::move(cells));
}

AssociativeArray AssociativeArray::elementwiseMultiply(const AssociativeArray& other) const {
  if (!(semiring_ == other.semiring_)) {
    throw Error(ErrorKind::SemiringMismatch,
                "elementwiseMultiply over " + semiring_.name() + " and " +
                    other.semiring_.name());
  }
  const AssociativeArray& small = nnz() <= other.nnz() ? *this : other;
  const AssociativeArray& large = nnz() <= other.nnz() ? other : *this;
  CellMap cells;
  for (const auto& [key, value] : small.cells_) {
    auto it = large.cells_.find(key);
    if (it == large.cells_.end()) continue;
    const Value& a = (&small == this) ? value : it->second;
    const Value& b = (&small == this) ? it->second : value;
    cells.emplace(key, semiring_.times(a, b));
  }
  return AssociativeArray(semiring_, std::move(cells));
}

AssociativeArray AssociativeArray::matmul(const AssociativeArray& other) const {
  if (!(semiring_ == other.semiring_)) {
    throw Error(ErrorKind::SemiringMismatch,
                "matmul over " + semiring_.name() + " and " + other.semiring_.name());
  }
  for (const auto& [key, value] : cells_) {
    if (!value.isNumeric()) {
      throw Error(ErrorKind::TypeMismatch, "matmul requires numeric values");
    }
  }
  for (const auto& [key, value] : other.cells_) {
    if (!value.isNumeric()) {
      throw Error(ErrorKind::TypeMismatch, "matmul requires numeric values");
    }
  }
  CellMap cells;
  // cells_ is (row, col) sorted, so each left row is contiguous; the right
  // operand is walked once per contraction key via equal_range on its rows.
  for (auto leftIt = cells_.begin(); leftIt != cells_.end();) {
    const std::string& row = leftIt->first.first;
    auto rowEnd = leftIt;
    while (rowEnd != cells_.end() && rowEnd->first.first == row) ++rowEnd;

    std::map<std::string, Value> acc;
    for (auto a = leftIt; a != rowEnd; ++a) {
      const std::string& k = a->first.second;
      auto b = other.cells_.lower_bound({k, std::string()});
      for (; b != other.cells_.end() && b->first.first == k; ++b) {
        Value term = semiring_.times(a->second, b->second);
        auto [it, fresh] = acc.try_emplace(b->first.second, term);
        if (!fresh) it->second = semiring_.plus(it->second, term);
      }
    }
    for (auto& [col, value] : acc) cells.emplace(CellKey{row, col}, std::move(value));
    leftIt = rowEnd;
  }
  return AssociativeArray(semiring_, std::move(cells));
}

AssociativeArray AssociativeArray::transpose() const {
  CellMap cells;
  for (const auto& [key, value] : cells_) cells.emplace(CellKey{key.second, key.first}, value);
  return AssociativeArray(semiring_, std::move(cells));
}

AssociativeArray AssociativeArray::select(const KeyRange& rows, const KeyRange& cols) const {
  CellMap cells;
  auto it = rows.start() ? cells_.lower_bound({*rows.start(), std::string()}) : cells_.begin();
  for (; it != cells_.end(); ++it) {
    if (rows.end() && it->first.first > *rows.end()) break;
    if (cols.contains(it->first.second)) cells.insert(*it);
  }
  return AssociativeArray(semiring_, std::move(cells));
}

AssociativeArray AssociativeArray::rowDegrees() const {
  CellMap cells;
  for (auto it = cells_.begin(); it != cells_.end();) {
    const std::string& row = it->first.first;
    std::size_t count = 0;
    while (it != cells_.end() && it->first.first == row) {
      ++count;
      ++it;
    }
    cells.emplace(CellKey{row, "deg"}, Value{static_cast<double>(count)});
  }
  return AssociativeArray(semiring_, std::move(cells));
}

std::optional<Value> AssociativeArray::at(std::string_view row, std::string_view col) const {
  auto it = cells_.find({std::string(row), std::string(col)});
  if (it == cells_.end()) return std::nullopt;
  return it->second;
}

bool AssociativeArray::operator==(const AssociativeArray& other) const {
  return semiring_ == other.semiring_ && cells_ == other.cells_;
}

AssociativeArray project(std::span<const MultiDimRecord> records, int dimension,
                         const Semiring& semiring) {
  if (records.empty()) {
    if (dimension < 1) throw Error(ErrorKind::IndexOutOfRange, "dimension is 1-based");
    return AssociativeArray(semiring);
  }
  const std::size_t d = records.front().keys.size();
  if (d < 2) {
    throw Error(ErrorKind::DimensionMismatch, "records need at least two dimensions");
  }
  if (dimension < 1 || static_cast<std::size_t>(dimension) > d) {
    throw Error(ErrorKind::IndexOutOfRange,
                "dimension " + std::to_string(dimension) + " outside 1.." + std::to_string(d));
  }
  std::vector<TripleRecord> triples;
  triples.reserve(records.size() * (d - 1));
  for (const MultiDimRecord& record : records) {
    if (record.keys.size() != d) {
      throw Error(ErrorKind::DimensionMismatch, "records disagree on dimension count");
    }
    for (const std::string& key : record.keys) requireValidKey(key);
    const std::string& row = record.keys[static_cast<std::size_t>(dimension - 1)];
    for (std::size_t j = 0; j < d; ++j) {
      if (j == static_cast<std::size_t>(dimension - 1)) continue;
      std::string col = d == 2 ? record.keys[j]
                               : std::to_string(j + 1) + "|" + escapeExplodedPart(record.keys[j]);
      triples.emplace_back(row, std::move(col), record.value);
    }
  }
  return AssociativeArray::fromTriples(triples, semiring);
}

std::string escapeExplodedPart(std::string_view text, char separator) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == '\\' || c == separator) out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace aadb
