#include "seabattle/http_server.hpp"

#include <boost/asio/dispatch.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/post.hpp>
#include <boost/asio/strand.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <deque>
#include <sstream>
#include <thread>
#include <vector>

#include "seabattle/codec.hpp"

namespace seabattle::service {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;
using nlohmann::json;

namespace {

std::string_view sv(beast::string_view v) { return {v.data(), v.size()}; }

struct Target {
    std::vector<std::string> segments;
    std::map<std::string, std::string> query;
};

Target parse_target(std::string_view target) {
    Target out;
    const auto q = target.find('?');
    const auto path = target.substr(0, q);
    std::size_t pos = 0;
    while (pos < path.size()) {
        const auto slash = path.find('/', pos);
        const auto end = slash == std::string_view::npos ? path.size() : slash;
        if (end > pos) out.segments.emplace_back(path.substr(pos, end - pos));
        pos = end + 1;
    }
    if (q != std::string_view::npos) {
        std::istringstream rest{std::string(target.substr(q + 1))};
        std::string pair;
        while (std::getline(rest, pair, '&')) {
            const auto eq = pair.find('=');
            if (eq != std::string::npos) out.query[pair.substr(0, eq)] = pair.substr(eq + 1);
        }
    }
    return out;
}

std::string bearer(std::string_view authorization) {
    constexpr std::string_view prefix = "Bearer ";
    if (authorization.substr(0, prefix.size()) != prefix) return {};
    return std::string(authorization.substr(prefix.size()));
}

json session_body(const Session& s) { return {{"game_id", s.game_id}, {"token", s.token}, {"player", s.player.value}}; }

json ack_body(const Ack& a) { return {{"sequence", a.sequence}, {"phase", a.phase}, {"effects", a.effects}}; }

ApiResponse error(unsigned status, std::string code, std::string message) {
    return {status, {{"error", std::move(code)}, {"message", std::move(message)}}};
}

json parse_body(std::string_view body) {
    if (body.empty()) return json::object();
    try {
        return json::parse(body);
    } catch (const json::parse_error& e) {
        throw ServiceError(ServiceError::Code::bad_request, std::string("malformed JSON: ") + e.what());
    }
}

Ack submit(GameService& service, const std::string& game_id, const std::string& token, const json& body) {
    if (!body.is_object()) throw ServiceError(ServiceError::Code::bad_request, "body must be an object");
    std::optional<std::uint64_t> expected;
    if (body.contains("expected_sequence")) expected = body["expected_sequence"].get<std::uint64_t>();
    const json& action = body.contains("action") ? body["action"] : body;
    return service.submit_action(game_id, token, action, expected);
}

}  // namespace

unsigned http_status(ServiceError::Code code) {
    using C = ServiceError::Code;
    switch (code) {
        case C::bad_request:
        case C::invalid_config: return 400;
        case C::auth_failed: return 401;
        case C::unknown_game: return 404;
        case C::game_full:
        case C::stale_sequence: return 409;
        case C::lobby_expired: return 410;
        case C::rejected: return 422;
    }
    return 500;
}

json error_body(const ServiceError& e) {
    json j{{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
    if (e.rejection()) j["rejection"] = std::string(arbiter::to_string(*e.rejection()));
    return j;
}

ApiResponse handle_api(GameService& service, std::string_view method, std::string_view target,
                       std::string_view authorization, std::string_view body, bool test_mode) {
    const auto t = parse_target(target);
    const auto& seg = t.segments;
    const std::string token = bearer(authorization);
    try {
        if (seg.empty() || seg[0] != "games") return error(404, "not_found", "no such route");
        if (seg.size() == 1) {
            if (method == "GET") return {200, service.lobby()};
            if (method == "POST") {
                GameConfig config;
                try {
                    config = decode_config(parse_body(body));
                } catch (const json::exception& e) {
                    throw ServiceError(ServiceError::Code::invalid_config, e.what());
                } catch (const std::invalid_argument& e) {
                    throw ServiceError(ServiceError::Code::invalid_config, e.what());
                }
                auto out = session_body(service.create_game(config));
                out["config"] = encode_config(config);
                return {201, out};
            }
            return error(405, "method_not_allowed", "use GET or POST");
        }
        if (seg.size() != 3) return error(404, "not_found", "no such route");
        const auto& id = seg[1];
        const auto& verb = seg[2];
        if (verb == "join" && method == "POST") return {200, session_body(service.join_game(id))};
        if (verb == "state" && method == "GET") return {200, service.get_state(id, token)};
        if (verb == "actions" && method == "POST") return {200, ack_body(submit(service, id, token, parse_body(body)))};
        if (verb == "clock" && method == "POST" && test_mode) {
            const auto j = parse_body(body);
            const auto ack = service.advance_clock(id, j.value("ticks", arbiter::Tick{1}));
            return {200, ack ? ack_body(*ack) : json{{"advanced", false}}};
        }
        return error(404, "not_found", "no such route");
    } catch (const ServiceError& e) {
        return {http_status(e.code()), error_body(e)};
    } catch (const json::exception& e) {
        return error(400, "bad_request", e.what());
    }
}

struct HttpServer::Impl {
    GameService& service;
    ServerOptions options;
    net::io_context ioc;
    tcp::acceptor acceptor;
    std::vector<std::thread> threads;

    Impl(GameService& s, ServerOptions o)
        : service(s), options(std::move(o)), ioc(static_cast<int>(std::max(1U, options.threads))), acceptor(ioc) {
        const tcp::endpoint ep{net::ip::make_address(options.address), options.port};
        acceptor.open(ep.protocol());
        acceptor.set_option(net::socket_base::reuse_address(true));
        acceptor.bind(ep);
        acceptor.listen(net::socket_base::max_listen_connections);
    }

    void accept();
};

namespace {

class WsSession : public std::enable_shared_from_this<WsSession> {
public:
    WsSession(tcp::socket&& socket, GameService& service, std::string game_id, std::string token)
        : ws_(std::move(socket)), service_(service), game_id_(std::move(game_id)), token_(std::move(token)) {}

    ~WsSession() {
        if (subscription_) service_.unsubscribe(*subscription_);
    }

    void run(http::request<http::string_body> req) {
        req_ = std::move(req);
        ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
        ws_.async_accept(req_, beast::bind_front_handler(&WsSession::on_accept, shared_from_this()));
    }

private:
    void on_accept(beast::error_code ec) {
        if (ec) return;
        std::weak_ptr<WsSession> weak = shared_from_this();
        auto exec = ws_.get_executor();
        try {
            subscription_ = service_.subscribe(game_id_, token_, [weak, exec](const json& push) {
                net::post(exec, [weak, text = push.dump()]() mutable {
                    if (auto self = weak.lock()) self->send(std::move(text));
                });
            });
            const auto view = service_.get_state(game_id_, token_);
            send(json{{"sequence", view["sequence"]}, {"phase", view["phase"]},
                      {"event", {{"type", "connected"}}}, {"state", view}}.dump());
        } catch (const ServiceError& e) {
            send(json{{"error", error_body(e)}}.dump());
            return;
        }
        read();
    }

    void read() {
        ws_.async_read(buffer_, beast::bind_front_handler(&WsSession::on_read, shared_from_this()));
    }

    void on_read(beast::error_code ec, std::size_t) {
        if (ec) return;
        const auto text = beast::buffers_to_string(buffer_.data());
        buffer_.consume(buffer_.size());
        json reply;
        try {
            const auto body = parse_body(text);
            reply = {{"ack", ack_body(submit(service_, game_id_, token_, body))}};
        } catch (const ServiceError& e) {
            reply = {{"error", error_body(e)}};
        } catch (const std::exception& e) {
            reply = {{"error", {{"error", "bad_request"}, {"message", e.what()}}}};
        }
        send(reply.dump());
        read();
    }

    void send(std::string text) {
        queue_.push_back(std::move(text));
        if (queue_.size() == 1) write();
    }

    void write() {
        ws_.text(true);
        ws_.async_write(net::buffer(queue_.front()),
                        beast::bind_front_handler(&WsSession::on_write, shared_from_this()));
    }

    void on_write(beast::error_code ec, std::size_t) {
        if (ec) return;
        queue_.pop_front();
        if (!queue_.empty()) write();
    }

    websocket::stream<beast::tcp_stream> ws_;
    http::request<http::string_body> req_;  // must outlive the handshake
    GameService& service_;
    std::string game_id_;
    std::string token_;
    beast::flat_buffer buffer_;
    std::deque<std::string> queue_;
    std::optional<std::uint64_t> subscription_;
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
public:
    HttpSession(tcp::socket&& socket, GameService& service, bool test_mode)
        : stream_(std::move(socket)), service_(service), test_mode_(test_mode) {}

    void run() {
        net::dispatch(stream_.get_executor(), beast::bind_front_handler(&HttpSession::read, shared_from_this()));
    }

private:
    void read() {
        req_ = {};
        stream_.expires_after(std::chrono::seconds(60));
        http::async_read(stream_, buffer_, req_, beast::bind_front_handler(&HttpSession::on_read, shared_from_this()));
    }

    void on_read(beast::error_code ec, std::size_t) {
        if (ec == http::error::end_of_stream) {
            stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
            return;
        }
        if (ec) return;

        if (websocket::is_upgrade(req_)) {
            upgrade();
            return;
        }
        const auto api = handle_api(service_, sv(req_.method_string()), sv(req_.target()),
                                    sv(req_[http::field::authorization]), req_.body(), test_mode_);
        respond(api);
    }

    void upgrade() {
        const auto t = parse_target(sv(req_.target()));
        if (t.segments.size() != 3 || t.segments[0] != "games" || t.segments[2] != "ws") {
            respond(ApiResponse{404, {{"error", "not_found"}, {"message", "no such socket"}}});
            return;
        }
        std::string token = bearer(sv(req_[http::field::authorization]));
        if (const auto it = t.query.find("token"); it != t.query.end()) token = it->second;
        try {
            service_.authenticate(t.segments[1], token);
        } catch (const ServiceError& e) {
            respond(ApiResponse{http_status(e.code()), error_body(e)});
            return;
        }
        stream_.expires_never();
        std::make_shared<WsSession>(stream_.release_socket(), service_, t.segments[1], token)->run(std::move(req_));
    }

    void respond(const ApiResponse& api) {
        auto res = std::make_shared<http::response<http::string_body>>(static_cast<http::status>(api.status),
                                                                       req_.version());
        res->set(http::field::content_type, "application/json");
        res->keep_alive(req_.keep_alive());
        res->body() = api.body.dump();
        res->prepare_payload();
        http::async_write(stream_, *res,
                          [self = shared_from_this(), res](beast::error_code ec, std::size_t) {
                              if (ec) return;
                              if (!res->keep_alive()) {
                                  self->stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
                                  return;
                              }
                              self->read();
                          });
    }

    beast::tcp_stream stream_;
    GameService& service_;
    bool test_mode_;
    beast::flat_buffer buffer_;
    http::request<http::string_body> req_;
};

}  // namespace

void HttpServer::Impl::accept() {
    acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
        if (ec == net::error::operation_aborted) return;
        if (!ec) std::make_shared<HttpSession>(std::move(socket), service, options.test_mode)->run();
        accept();
    });
}

HttpServer::HttpServer(GameService& service, ServerOptions options)
    : impl_(std::make_unique<Impl>(service, std::move(options))) {}

HttpServer::~HttpServer() { stop(); }

unsigned short HttpServer::port() const { return impl_->acceptor.local_endpoint().port(); }

void HttpServer::start() {
    impl_->accept();
    for (unsigned i = 0; i < std::max(1U, impl_->options.threads); ++i) {
        impl_->threads.emplace_back([this] { impl_->ioc.run(); });
    }
}

void HttpServer::stop() {
    if (impl_->threads.empty()) return;
    net::post(impl_->ioc, [this] {
        beast::error_code ec;
        impl_->acceptor.close(ec);
    });
    impl_->ioc.stop();
    for (auto& t : impl_->threads) t.join();
    impl_->threads.clear();
}

}  // namespace seabattle::service
