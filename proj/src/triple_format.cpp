#include "aadb/triple_format.hpp"

#include <charconv>
#include <system_error>

#include "aadb/error.hpp"

namespace aadb {

std::string escapeField(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    switch (c) {
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\\': out += "\\\\"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string unescapeField(std::string_view escaped) {
  std::string out;
  out.reserve(escaped.size());
  for (std::size_t i = 0; i < escaped.size(); ++i) {
    char c = escaped[i];
    if (c != '\\') {
      out.push_back(c);
      continue;
    }
    if (++i == escaped.size()) {
      throw Error(ErrorKind::MalformedRecord, "field ends in a lone backslash");
    }
    switch (escaped[i]) {
      case 't': out.push_back('\t'); break;
      case 'n': out.push_back('\n'); break;
      case '\\': out.push_back('\\'); break;
      default:
        throw Error(ErrorKind::MalformedRecord,
                    std::string("unknown escape \"\\") + escaped[i] + "\"");
    }
  }
  return out;
}

std::string encodeNumeric(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) {
    throw Error(ErrorKind::InvalidValue, "unencodable numeric value");
  }
  return std::string(buf, end);
}

std::string encodeValue(const Value& v) {
  if (v.isText()) return "s:" + v.asText();
  return encodeNumeric(v.asNumeric());
}

Value decodeValue(std::string_view field) {
  if (field.substr(0, 2) == "s:") {
    return Value::text(std::string(field.substr(2)));
  }
  double number = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), number);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw Error(ErrorKind::MalformedRecord,
                "value field \"" + std::string(field) + "\" is neither numeric nor s:-text");
  }
  return Value{number};
}

std::string encodeTripleLine(const TripleRecord& t) {
  std::string line = escapeField(t.row);
  line.push_back('\t');
  line += escapeField(t.col);
  line.push_back('\t');
  line += escapeField(encodeValue(t.value));
  line.push_back('\n');
  return line;
}

TripleRecord parseTripleLine(std::string_view line) {
  auto first = line.find('\t');
  if (first == std::string_view::npos) {
    throw Error(ErrorKind::MalformedRecord, "expected three tab-separated fields");
  }
  auto second = line.find('\t', first + 1);
  if (second == std::string_view::npos ||
      line.find('\t', second + 1) != std::string_view::npos) {
    throw Error(ErrorKind::MalformedRecord, "expected three tab-separated fields");
  }
  try {
    return TripleRecord(unescapeField(line.substr(0, first)),
                        unescapeField(line.substr(first + 1, second - first - 1)),
                        decodeValue(unescapeField(line.substr(second + 1))));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::MalformedRecord) throw;
    throw Error(ErrorKind::MalformedRecord, e.what());
  }
}

std::string serializeTriples(std::span<const TripleRecord> triples) {
  std::string out;
  for (const TripleRecord& t : triples) out += encodeTripleLine(t);
  return out;
}

std::vector<TripleRecord> parseTriples(std::string_view body) {
  std::vector<TripleRecord> out;
  std::size_t lineNumber = 0;
  std::size_t pos = 0;
  while (pos < body.size()) {
    ++lineNumber;
    auto eol = body.find('\n', pos);
    std::string_view line =
        eol == std::string_view::npos ? body.substr(pos) : body.substr(pos, eol - pos);
    try {
      out.push_back(parseTripleLine(line));
    } catch (const Error& e) {
      std::string_view detail = e.what();
      if (auto sep = detail.find(": "); sep != std::string_view::npos) {
        detail.remove_prefix(sep + 2);
      }
      throw Error(ErrorKind::MalformedRecord,
                  "line " + std::to_string(lineNumber) + ": " + std::string(detail));
    }
    pos = eol == std::string_view::npos ? body.size() : eol + 1;
  }
  return out;
}

std::string canonicalText(const AssociativeArray& array) {
  return serializeTriples(array.toTriples());
}

}  // namespace aadb
