// HTTP server side of the wire protocol; the only server translation unit
// that includes the HTTP library.

#include "aadb/shim_server.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <random>
#include <thread>
#include <unordered_map>
#include <utility>

#include <httplib.h>

#include "aadb/error.hpp"
#include "aadb/triple_format.hpp"

namespace aadb {

namespace {

int statusFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::AuthFailed:
    case ErrorKind::SessionExpired:
      return 401;
    case ErrorKind::NoSuchTable:
      return 404;
    case ErrorKind::PayloadRejected:
      return 413;
    case ErrorKind::IoError:
    case ErrorKind::Unreachable:
      return 500;
    default:
      return 400;
  }
}

std::string reasonFor(int status) {
  switch (status) {
    case 404: return "NoSuchTable: no such endpoint or table\n";
    case 413: return "PayloadRejected: body exceeds the configured limit\n";
    case 401: return "SessionExpired: authentication required\n";
    default: return "IoError: request failed with status " + std::to_string(status) + "\n";
  }
}

}  // namespace

struct ShimServer::Impl {
  explicit Impl(ShimConfig cfg) : config(std::move(cfg)) {
    store = config.dataDir.empty() ? std::make_unique<TableStore>()
                                   : std::make_unique<TableStore>(config.dataDir);
    std::random_device entropy;
    rng.seed(static_cast<std::uint64_t>(entropy()) << 32 ^ entropy() ^
             static_cast<std::uint64_t>(
                 std::chrono::steady_clock::now().time_since_epoch().count()));
  }

  ShimConfig config;
  std::unique_ptr<TableStore> store;
  httplib::Server server;
  std::thread serveThread;
  std::atomic<bool> started{false};
  std::atomic<bool> stopped{false};
  int boundPort = -1;

  std::mutex sessionsMutex;
  struct Session {
    std::string user;
    std::chrono::steady_clock::time_point lastUsed;
  };
  std::unordered_map<std::string, Session> sessions;
  std::mt19937_64 rng;

  std::string newSession(const std::string& user, const std::string& pass) {
    auto cred = config.credentials.find(user);
    if (cred == config.credentials.end() || cred->second != pass) {
      throw Error(ErrorKind::AuthFailed, "unknown user or wrong password");
    }
    std::scoped_lock lock(sessionsMutex);
    std::string token;
    do {
      token = randomToken();
    } while (sessions.contains(token));
    sessions.emplace(token, Session{user, std::chrono::steady_clock::now()});
    return token;
  }

  std::string randomToken() {
    static constexpr char kHex[] = "0123456789abcdef";
    std::string token(32, '0');
    for (int half = 0; half < 2; ++half) {
      std::uint64_t bits = rng();
      for (int i = 0; i < 16; ++i) {
        token[static_cast<std::size_t>(half * 16 + i)] = kHex[bits & 0xF];
        bits >>= 4;
      }
    }
    return token;
  }

  void authenticate(const httplib::Request& req) {
    if (!req.has_param("token")) {
      throw Error(ErrorKind::SessionExpired, "missing session token");
    }
    auto token = req.get_param_value("token");
    auto now = std::chrono::steady_clock::now();
    std::scoped_lock lock(sessionsMutex);
    auto it = sessions.find(token);
    if (it == sessions.end()) {
      throw Error(ErrorKind::SessionExpired, "unknown session token");
    }
    if (std::chrono::duration<double>(now - it->second.lastUsed).count() >
        config.sessionTtlSeconds) {
      sessions.erase(it);
      throw Error(ErrorKind::SessionExpired, "session idled out");
    }
    it->second.lastUsed = now;
  }

  void endSession(const httplib::Request& req) {
    authenticate(req);
    std::scoped_lock lock(sessionsMutex);
    sessions.erase(req.get_param_value("token"));
  }

  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  httplib::Server::Handler guard(Handler handler) {
    return [handler = std::move(handler)](const httplib::Request& req,
                                          httplib::Response& res) {
      try {
        handler(req, res);
      } catch (const Error& e) {
        res.status = statusFor(e.kind());
        res.set_content(std::string(e.what()) + "\n", "text/plain");
      } catch (const std::exception& e) {
        res.status = 500;
        res.set_content(std::string("IoError: ") + e.what() + "\n", "text/plain");
      }
    };
  }

  void route() {
    server.set_payload_max_length(config.maxBodyBytes);
    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (res.body.empty()) {
        res.set_content(reasonFor(res.status), "text/plain");
      }
    });

    server.Post("/session", guard([this](const httplib::Request& req, httplib::Response& res) {
                  res.set_content(newSession(req.get_param_value("user"),
                                             req.get_param_value("pass")),
                                  "text/plain");
                }));

    server.Delete("/session", guard([this](const httplib::Request& req, httplib::Response&) {
                    endSession(req);
                  }));

    server.Get("/tables", guard([this](const httplib::Request& req, httplib::Response& res) {
                 authenticate(req);
                 std::string body;
                 for (const auto& name : store->tableNames()) {
                   body += name;
                   body.push_back('\n');
                 }
                 res.set_content(body, "text/plain");
               }));

    server.Post(R"(/table/([^/]+))",
                guard([this](const httplib::Request& req, httplib::Response&) {
                  authenticate(req);
                  store->createTable(req.matches[1].str());
                }));

    server.Delete(R"(/table/([^/]+))",
                  guard([this](const httplib::Request& req, httplib::Response&) {
                    authenticate(req);
                    store->dropTable(req.matches[1].str());
                  }));

    server.Post(R"(/table/([^/]+)/insert)",
                guard([this](const httplib::Request& req, httplib::Response& res) {
                  authenticate(req);
                  auto count = store->insertText(req.matches[1].str(), req.body);
                  res.set_content(std::to_string(count), "text/plain");
                }));

    server.Get(R"(/table/([^/]+)/scan)",
               guard([this](const httplib::Request& req, httplib::Response& res) {
                 authenticate(req);
                 auto rows = KeyRange::fromBounds(req.get_param_value("rowStart"),
                                                  req.get_param_value("rowEnd"));
                 auto cols = KeyRange::fromBounds(req.get_param_value("colStart"),
                                                  req.get_param_value("colEnd"));
                 auto payload = std::make_shared<std::string>(
                     serializeTriples(store->scanRange(req.matches[1].str(), rows, cols)));
                 res.set_chunked_content_provider(
                     "text/plain",
                     [payload](std::size_t offset, httplib::DataSink& sink) {
                       if (offset >= payload->size()) {
                         sink.done();
                         return true;
                       }
                       auto n = std::min<std::size_t>(std::size_t{64} << 10,
                                                      payload->size() - offset);
                       sink.write(payload->data() + offset, n);
                       if (offset + n >= payload->size()) sink.done();
                       return true;
                     });
               }));

    server.Get(R"(/table/([^/]+)/nnz)",
               guard([this](const httplib::Request& req, httplib::Response& res) {
                 authenticate(req);
                 res.set_content(std::to_string(store->countEntries(req.matches[1].str())),
                                 "text/plain");
               }));

    server.Get(R"(/table/([^/]+)/stats)",
               guard([this](const httplib::Request& req, httplib::Response& res) {
                 authenticate(req);
                 auto metrics = store->metrics(req.matches[1].str());
                 std::string body;
                 body += "inserts\t" + std::to_string(metrics.inserts) + "\n";
                 body += "entries\t" + std::to_string(metrics.entries) + "\n";
                 body += "lockWaitNanos\t" + std::to_string(metrics.lockWaitNanos) + "\n";
                 res.set_content(body, "text/plain");
               }));
  }
};

ShimServer::ShimServer(ShimConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}

ShimServer::~ShimServer() {
  try {
    stop();
  } catch (...) {
  }
}

void ShimServer::start() {
  if (impl_->started.exchange(true)) {
    throw Error(ErrorKind::BadSpec, "server already started");
  }
  impl_->route();
  if (impl_->config.port == 0) {
    impl_->boundPort = impl_->server.bind_to_any_port(impl_->config.bindAddress);
    if (impl_->boundPort < 0) {
      throw Error(ErrorKind::Unreachable,
                  "cannot bind a free port on " + impl_->config.bindAddress);
    }
  } else {
    if (!impl_->server.bind_to_port(impl_->config.bindAddress, impl_->config.port)) {
      throw Error(ErrorKind::Unreachable,
                  "cannot bind " + impl_->config.bindAddress + ":" +
                      std::to_string(impl_->config.port));
    }
    impl_->boundPort = impl_->config.port;
  }
  impl_->serveThread = std::thread([impl = impl_.get()] { impl->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void ShimServer::stop() {
  if (!impl_->started.load() || impl_->stopped.exchange(true)) return;
  impl_->server.stop();
  if (impl_->serveThread.joinable()) impl_->serveThread.join();
  impl_->store->compact();
}

bool ShimServer::running() const {
  return impl_->started.load() && !impl_->stopped.load();
}

int ShimServer::port() const { return impl_->boundPort; }

std::string ShimServer::baseUrl() const {
  return "http://" + impl_->config.bindAddress + ":" + std::to_string(impl_->boundPort);
}

TableMetrics ShimServer::tableMetrics(const std::string& name) const {
  return impl_->store->metrics(name);
}

}  // namespace aadb
