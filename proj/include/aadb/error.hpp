#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace aadb {

enum class ErrorKind {
  InvalidKey,
  InvalidValue,
  InvalidName,
  InvalidRange,
  TypeMismatch,
  SemiringMismatch,
  DimensionMismatch,
  IndexOutOfRange,
  MissingKeyField,
  MalformedRecord,
  BadSpec,
  AuthFailed,
  Unreachable,
  SessionExpired,
  NoSuchTable,
  PayloadRejected,
  IoError,
};

const char* errorKindName(ErrorKind kind);

// Inverse of errorKindName; empty when the name is unknown. The remote
// adapter uses it to rebuild the server's error kind from the wire reason.
std::optional<ErrorKind> errorKindByName(std::string_view name);

// Single exception type for the whole library; `kind` drives the CLI exit
// codes and the HTTP status mapping in the shim server.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(errorKindName(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

  // For chunked transfers that fail partway: entries applied before the
  // failure surfaced.
  std::optional<std::size_t> partialCount;

 private:
  ErrorKind kind_;
};

}  // namespace aadb
