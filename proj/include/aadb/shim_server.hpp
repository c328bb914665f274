#pragma once
// HTTP table server. Sessions are opened against a static credential list
// and expire after an idle TTL; every data endpoint takes the token as the
// "token" query parameter. Bodies use the canonical triple text format.
//
//   POST   /session?user=U&pass=P          -> 32-hex token
//   DELETE /session?token=T                -> closes the session
//   GET    /tables?token=T                 -> one table name per line, sorted
//   POST   /table/{name}?token=T           -> create (idempotent)
//   DELETE /table/{name}?token=T           -> drop table and data
//   POST   /table/{name}/insert?token=T    -> body: triple lines; returns count
//   GET    /table/{name}/scan?token=T&rowStart=&rowEnd=&colStart=&colEnd=
//                                          -> chunked triple lines, sorted
//   GET    /table/{name}/nnz?token=T       -> decimal entry count
//   GET    /table/{name}/stats?token=T     -> "key<TAB>value" metric lines
//
// Inserts parse, fold and persist inside the table's exclusive write latch,
// so concurrent writers to one table serialize; range bounds are inclusive
// and an empty bound parameter means unbounded. Errors come back as an HTTP
// status plus a one-line reason.

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <string>

#include "aadb/table_store.hpp"

namespace aadb {

struct ShimConfig {
    std::string bindAddress = "127.0.0.1";
    int port = 0;  // 0 picks a free port
    std::filesystem::path dataDir;
    std::size_t maxBodyBytes = 128ull << 20;
    double sessionTtlSeconds = 3600.0;
    std::map<std::string, std::string> credentials;  // user -> password
};

class ShimServer {
  public:
    explicit ShimServer(ShimConfig config);
    ~ShimServer();

    ShimServer(const ShimServer&) = delete;
    ShimServer& operator=(const ShimServer&) = delete;

    void start();  // binds and serves on a background thread; Unreachable on failure
    void stop();   // drains requests and compacts the store; idempotent

    bool running() const;
    int port() const;
    std::string baseUrl() const;  // "http://<bindAddress>:<port>"

    TableMetrics tableMetrics(const std::string& name) const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace aadb
