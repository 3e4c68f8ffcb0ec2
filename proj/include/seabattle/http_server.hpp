#pragma once

#include <memory>
#include <string>
#include <string_view>

#include <json.hpp>

#include "seabattle/game_service.hpp"

namespace seabattle::service {

struct ApiResponse {
    unsigned status = 200;
    nlohmann::json body;
};

/// Transport-independent routing of the JSON API:
///   POST /games                   create (body: config) -> creator session
///   GET  /games                   lobby
///   POST /games/{id}/join         -> joiner session
///   POST /games/{id}/actions      bearer; body {action, expected_sequence?}
///   GET  /games/{id}/state        bearer; player-scoped view
///   POST /games/{id}/clock        test mode only; body {ticks}
ApiResponse handle_api(GameService& service, std::string_view method, std::string_view target,
                       std::string_view authorization, std::string_view body, bool test_mode);

nlohmann::json error_body(const ServiceError& e);
unsigned http_status(ServiceError::Code code);

struct ServerOptions {
    std::string address = "127.0.0.1";
    unsigned short port = 8080;  // 0 picks a free port
    unsigned threads = 2;
    bool test_mode = false;
};

/// HTTP + WebSocket front end. The socket at /games/{id}/ws?token=... pushes
/// {sequence, phase, event} for every event of the game and accepts
/// {action, expected_sequence?} messages, answered with {ack} or {error}.
class HttpServer {
public:
    HttpServer(GameService& service, ServerOptions options);
    ~HttpServer();

    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    [[nodiscard]] unsigned short port() const;
    /// Starts the I/O threads and returns.
    void start();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace seabattle::service
