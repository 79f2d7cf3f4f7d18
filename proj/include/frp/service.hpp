#pragma once

/**
 * @file service.hpp
 * @brief JSON-over-HTTP facade over the material DB and analysis modules.
 *
 * Endpoints:
 *   GET  /healthz
 *   GET  /api/polymers
 *   GET  /api/fibers
 *   POST /api/select/matrix     {requirements, top?}
 *   POST /api/select/fiber      {requirements, matrix?, tau_c_override?, top?}
 *   POST /api/fibers/classify   {sigma_f, d, l, tau_c}
 *   POST /api/laminate/analyze  LaminateSpec
 *   POST /api/laminate/sweep    LaminateSpec + {thetas}
 *
 * Every non-2xx body is one ApiError: {"code", "message", "detail"?}.
 * The DB is a snapshot taken at construction; handlers never mutate state.
 */

#include "frp/fuzzysim.hpp"
#include "frp/matdb.hpp"

#include <json.hpp>

#include <memory>
#include <string>
#include <string_view>

namespace frp::service {

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr std::string_view kDefaultListen = "127.0.0.1:8760";

struct Response {
    int status = 200;
    nlohmann::ordered_json body;
};

/// Request handlers as pure functions of (snapshot, request body).
class Api {
public:
    /// `db` may be null, in which case DB-backed endpoints return 500.
    explicit Api(std::shared_ptr<const matdb::MaterialDb> db, fuzzysim::RankOptions rank = {});

    Response healthz() const;
    Response polymers() const;
    Response fibers() const;
    Response select_matrix(std::string_view body) const;
    Response select_fiber(std::string_view body) const;
    Response classify_fiber(std::string_view body) const;
    Response analyze(std::string_view body) const;
    Response sweep(std::string_view body) const;

    /// Routes by method and path; unknown routes give 404 "not_found".
    Response dispatch(std::string_view method, std::string_view path, std::string_view body) const;

private:
    std::shared_ptr<const matdb::MaterialDb> db_;
    fuzzysim::RankOptions rank_;
};

Response api_error(int status, std::string_view code, std::string_view message,
                   std::string_view detail = {});

struct ListenAddress {
    std::string host;
    int port = 0;
};

/// Parses "host:port"; throws ValidationError on bad input.
ListenAddress parse_listen(std::string_view text);

/// HTTP transport around an Api. Same-host origins get CORS headers.
class Server {
public:
    explicit Server(Api api);
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    /// Binds; port 0 picks a free port. Returns the bound port or -1.
    int bind(const std::string& host, int port);
    /// Blocks until stop() is called.
    bool listen_after_bind();
    void stop();
    void wait_until_ready() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace frp::service
