// HTTP client side of the wire protocol; the only client translation unit
// that speaks to the table server.

#include "remote_adapter.hpp"

#include <charconv>
#include <mutex>

#include <httplib.h>

#include "aadb/error.hpp"
#include "aadb/table_store.hpp"
#include "aadb/triple_format.hpp"

namespace aadb {

namespace {

std::string encodePathSegment(std::string_view raw) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(raw.size());
  for (unsigned char c : raw) {
    bool plain = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                 (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '~' || c == '-';
    if (plain) {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

// Rebuilds the server-side error from "Kind: detail" reason bodies so remote
// failures carry the same kind as local ones.
[[noreturn]] void throwWireError(int status, const std::string& body) {
  std::string reason = body;
  while (!reason.empty() && (reason.back() == '\n' || reason.back() == '\r')) {
    reason.pop_back();
  }
  auto colon = reason.find(':');
  if (colon != std::string::npos) {
    if (auto kind = errorKindByName(reason.substr(0, colon))) {
      std::string detail = reason.substr(colon + 1);
      if (!detail.empty() && detail.front() == ' ') detail.erase(0, 1);
      throw Error(*kind, detail);
    }
  }
  switch (status) {
    case 401: throw Error(ErrorKind::SessionExpired, reason);
    case 404: throw Error(ErrorKind::NoSuchTable, reason);
    case 413: throw Error(ErrorKind::PayloadRejected, reason);
    case 400: throw Error(ErrorKind::MalformedRecord, reason);
    default:
      throw Error(ErrorKind::Unreachable,
                  "server answered " + std::to_string(status) + ": " + reason);
  }
}

std::uint64_t parseCount(const std::string& body) {
  std::uint64_t count = 0;
  auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), count);
  if (ec != std::errc{}) {
    throw Error(ErrorKind::Unreachable, "server sent a non-numeric count: " + body);
  }
  (void)ptr;
  return count;
}

class RemoteAdapter final : public BackendAdapter {
 public:
  explicit RemoteAdapter(const ConnectionSpec& spec)
      : spec_(spec), client_(baseUrl(spec)), prefix_(normalizePrefix(spec.instanceName)) {
    client_.set_connection_timeout(10, 0);
    client_.set_read_timeout(300, 0);
    client_.set_write_timeout(300, 0);
    httplib::Params params{{"user", spec_.username}, {"pass", spec_.password}};
    auto res = post(withParams("/session", params), "");
    token_ = res;
  }

  ~RemoteAdapter() override {
    try {
      close();
    } catch (...) {
    }
  }

  void close() override {
    std::scoped_lock lock(mutex_);
    if (token_.empty()) return;
    auto path = withParams("/session", httplib::Params{{"token", token_}});
    client_.Delete(path);  // best effort; the session also ages out
    token_.clear();
  }

  std::vector<std::string> listTables() override {
    auto body = get(tokenPath("/tables", {}));
    std::vector<std::string> names;
    std::size_t pos = 0;
    while (pos < body.size()) {
      auto eol = body.find('\n', pos);
      if (eol == std::string::npos) {
        names.push_back(body.substr(pos));
        break;
      }
      names.push_back(body.substr(pos, eol - pos));
      pos = eol + 1;
    }
    return names;
  }

  void createTable(const std::string& name) override {
    post(tokenPath(tablePath(name), {}), "");
  }

  void deleteTable(const std::string& name) override { del(tokenPath(tablePath(name), {})); }

  std::vector<TripleRecord> scanRange(const std::string& name, const KeyRange& rows,
                                      const KeyRange& cols) override {
    httplib::Params params{
        {"rowStart", rows.start().value_or("")},
        {"rowEnd", rows.end().value_or("")},
        {"colStart", cols.start().value_or("")},
        {"colEnd", cols.end().value_or("")},
    };
    auto body = get(tokenPath(tablePath(name) + "/scan", params));
    return parseTriples(body);
  }

  std::size_t insertTriples(const std::string& name,
                            std::span<const TripleRecord> triples) override {
    if (triples.empty()) return 0;
    std::size_t written = 0;
    std::string batch;
    auto flush = [&] {
      if (batch.empty()) return;
      std::string response;
      try {
        response = post(tokenPath(tablePath(name) + "/insert", {}), batch);
      } catch (Error& e) {
        e.partialCount = written;
        throw;
      }
      written += parseCount(response);
      batch.clear();
    };
    for (const TripleRecord& t : triples) {
      std::string line = encodeTripleLine(t);
      if (!batch.empty() && batch.size() + line.size() > spec_.batchBytes) flush();
      batch += line;
    }
    flush();
    return written;
  }

  std::size_t countEntries(const std::string& name) override {
    return parseCount(get(tokenPath(tablePath(name) + "/nnz", {})));
  }

 private:
  static std::string baseUrl(const ConnectionSpec& spec) {
    if (spec.host.empty()) {
      throw Error(ErrorKind::BadSpec, "remote backend needs host:port");
    }
    if (spec.host.rfind("http://", 0) == 0 || spec.host.rfind("https://", 0) == 0) {
      return spec.host;
    }
    return "http://" + spec.host;
  }

  static std::string normalizePrefix(const std::string& instanceName) {
    if (instanceName.empty() || instanceName == "/") return "";
    std::string prefix = instanceName;
    if (prefix.front() != '/') prefix.insert(prefix.begin(), '/');
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    return prefix;
  }

  std::string tablePath(const std::string& name) const {
    return "/table/" + encodePathSegment(name);
  }

  static std::string withParams(const std::string& path, const httplib::Params& params) {
    return httplib::append_query_params(path, params);
  }

  std::string tokenPath(const std::string& path, httplib::Params params) const {
    params.emplace("token", token_);
    return withParams(path, params);
  }

  std::string get(const std::string& path) {
    std::scoped_lock lock(mutex_);
    auto res = client_.Get(prefix_ + path);
    return check(res);
  }

  std::string post(const std::string& path, const std::string& body) {
    std::scoped_lock lock(mutex_);
    auto res = client_.Post(prefix_ + path, body, "text/plain");
    return check(res);
  }

  std::string del(const std::string& path) {
    std::scoped_lock lock(mutex_);
    auto res = client_.Delete(prefix_ + path);
    return check(res);
  }

  static std::string check(httplib::Result& res) {
    if (!res) {
      throw Error(ErrorKind::Unreachable,
                  "no response from server: " + httplib::to_string(res.error()));
    }
    if (res->status != 200) throwWireError(res->status, res->body);
    return res->body;
  }

  ConnectionSpec spec_;
  httplib::Client client_;
  std::string prefix_;
  std::string token_;
  std::mutex mutex_;
};

}  // namespace

std::shared_ptr<BackendAdapter> makeRemoteAdapter(const ConnectionSpec& spec) {
  return std::make_shared<RemoteAdapter>(spec);
}

}  // namespace aadb
