#include "aadb/semiring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace aadb {

namespace {

bool cleanText(std::string_view bytes) {
  return bytes.find('\t') == std::string_view::npos &&
         bytes.find('\n') == std::string_view::npos;
}

}  // namespace

Value::Value(double number) {
  if (std::isnan(number)) {
    throw Error(ErrorKind::InvalidValue, "NaN is not a storable value");
  }
  if (number == 0.0) number = 0.0;  // collapse -0 so equality and text form agree
  rep_ = number;
}

Value Value::text(std::string bytes) {
  if (!cleanText(bytes)) {
    throw Error(ErrorKind::InvalidValue, "text value contains a tab or newline");
  }
  Value v{0.0};
  v.rep_ = std::move(bytes);
  return v;
}

double Value::asNumeric() const {
  if (!isNumeric()) {
    throw Error(ErrorKind::TypeMismatch, "text value used where a number is required");
  }
  return std::get<double>(rep_);
}

const std::string& Value::asText() const {
  if (!isText()) {
    throw Error(ErrorKind::TypeMismatch, "numeric value used where text is required");
  }
  return std::get<std::string>(rep_);
}

const Semiring& Semiring::plusTimes() {
  static const Semiring s{Kind::PlusTimes, "plus-times", Value{0.0}, Value{1.0}};
  return s;
}

const Semiring& Semiring::maxPlus() {
  static const Semiring s{Kind::MaxPlus, "max-plus",
                          Value{-std::numeric_limits<double>::infinity()}, Value{0.0}};
  return s;
}

const Semiring& Semiring::minPlus() {
  static const Semiring s{Kind::MinPlus, "min-plus",
                          Value{std::numeric_limits<double>::infinity()}, Value{0.0}};
  return s;
}

const Semiring& Semiring::byName(std::string_view name) {
  if (name == plusTimes().name()) return plusTimes();
  if (name == maxPlus().name()) return maxPlus();
  if (name == minPlus().name()) return minPlus();
  throw Error(ErrorKind::BadSpec, "unknown semiring \"" + std::string(name) + "\"");
}

Semiring::Semiring(Kind kind, std::string name, Value zero, Value one)
    : kind_(kind), name_(std::move(name)), zero_(std::move(zero)), one_(std::move(one)) {}

Value Semiring::plus(const Value& a, const Value& b) const {
  if (a.isText() && b.isText()) {
    // Text folds the same way under every semiring: greatest wins.
    return a.asText() >= b.asText() ? a : b;
  }
  if (a.isText() || b.isText()) {
    throw Error(ErrorKind::TypeMismatch, "plus applied across numeric and text values");
  }
  switch (kind_) {
    case Kind::PlusTimes: return Value{a.asNumeric() + b.asNumeric()};
    case Kind::MaxPlus: return Value{std::max(a.asNumeric(), b.asNumeric())};
    case Kind::MinPlus: return Value{std::min(a.asNumeric(), b.asNumeric())};
  }
  throw Error(ErrorKind::BadSpec, "corrupt semiring");
}

Value Semiring::times(const Value& a, const Value& b) const {
  if (a.isText() || b.isText()) {
    throw Error(ErrorKind::TypeMismatch, "times is undefined on text values");
  }
  switch (kind_) {
    case Kind::PlusTimes: return Value{a.asNumeric() * b.asNumeric()};
    case Kind::MaxPlus:
    case Kind::MinPlus: return Value{a.asNumeric() + b.asNumeric()};
  }
  throw Error(ErrorKind::BadSpec, "corrupt semiring");
}

}  // namespace aadb
