#include "aadb/error.hpp"

namespace aadb {

const char* errorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidKey: return "InvalidKey";
    case ErrorKind::InvalidValue: return "InvalidValue";
    case ErrorKind::InvalidName: return "InvalidName";
    case ErrorKind::InvalidRange: return "InvalidRange";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::SemiringMismatch: return "SemiringMismatch";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::MissingKeyField: return "MissingKeyField";
    case ErrorKind::MalformedRecord: return "MalformedRecord";
    case ErrorKind::BadSpec: return "BadSpec";
    case ErrorKind::AuthFailed: return "AuthFailed";
    case ErrorKind::Unreachable: return "Unreachable";
    case ErrorKind::SessionExpired: return "SessionExpired";
    case ErrorKind::NoSuchTable: return "NoSuchTable";
    case ErrorKind::PayloadRejected: return "PayloadRejected";
    case ErrorKind::IoError: return "IoError";
  }
  return "Error";
}

std::optional<ErrorKind> errorKindByName(std::string_view name) {
  static constexpr ErrorKind kAll[] = {
      ErrorKind::InvalidKey,      ErrorKind::InvalidValue,
      ErrorKind::InvalidName,     ErrorKind::InvalidRange,
      ErrorKind::TypeMismatch,    ErrorKind::SemiringMismatch,
      ErrorKind::DimensionMismatch, ErrorKind::IndexOutOfRange,
      ErrorKind::MissingKeyField, ErrorKind::MalformedRecord,
      ErrorKind::BadSpec,         ErrorKind::AuthFailed,
      ErrorKind::Unreachable,     ErrorKind::SessionExpired,
      ErrorKind::NoSuchTable,     ErrorKind::PayloadRejected,
      ErrorKind::IoError,
  };
  for (ErrorKind kind : kAll) {
    if (name == errorKindName(kind)) return kind;
  }
  return std::nullopt;
}

}  // namespace aadb
