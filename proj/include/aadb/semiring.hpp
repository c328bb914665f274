#pragma once
// Values and semirings: the algebraic layer every array operation defers to.

#include <string>
#include <string_view>
#include <variant>

#include "aadb/error.hpp"

namespace aadb {

// A cell value: 64-bit float or byte string. Numeric values are never NaN,
// and -0 is normalized to +0 so exact equality and serialization behave.
// Text values never contain tab or newline bytes (reserved by the triple
// text format).
class Value {
 public:
  Value(double number);  // implicit: numeric literals read naturally in tests
  static Value text(std::string bytes);

  bool isNumeric() const { return rep_.index() == 0; }
  bool isText() const { return rep_.index() == 1; }
  double asNumeric() const;
  const std::string& asText() const;

  friend bool operator==(const Value&, const Value&) = default;

 private:
  std::variant<double, std::string> rep_;
};

// (V, plus, times, zero, one). Three fixed instances are registered; arrays
// reference them by name. Text values fold with lexicographic max under
// every semiring's plus; times rejects text.
class Semiring {
 public:
  static const Semiring& plusTimes();  // plus=+, times=*, 0, 1 (default)
  static const Semiring& maxPlus();    // plus=max, times=+, -inf, 0
  static const Semiring& minPlus();    // plus=min, times=+, +inf, 0
  static const Semiring& byName(std::string_view name);  // BadSpec on unknown

  const std::string& name() const { return name_; }
  const Value& zero() const { return zero_; }
  const Value& one() const { return one_; }
  bool isZero(const Value& v) const { return v == zero_; }

  Value plus(const Value& a, const Value& b) const;
  Value times(const Value& a, const Value& b) const;

  bool operator==(const Semiring& other) const { return name_ == other.name_; }

 private:
  enum class Kind { PlusTimes, MaxPlus, MinPlus };
  Semiring(Kind kind, std::string name, Value zero, Value one);

  Kind kind_;
  std::string name_;
  Value zero_;
  Value one_;
};

}  // namespace aadb
