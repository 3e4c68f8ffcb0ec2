#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "seabattle/arbiter.hpp"
#include "seabattle/event_log.hpp"

namespace seabattle::service {

using nlohmann::json;

/// Fixed at creation and visible in the lobby before anyone joins.
struct GameConfig {
    arbiter::Amount deposit = 100;
    arbiter::Tick timeout_ticks = arbiter::kDefaultMoveWindow;
    BoardGeometry geometry = kStandardBoard;
    rules::FleetSpec fleet;
    arbiter::Tick lobby_expiry_ticks = 0;  // 0: a lobby never expires

    void check() const;
    [[nodiscard]] arbiter::GameRules rules() const;
    friend bool operator==(const GameConfig&, const GameConfig&) = default;
};

json encode_config(const GameConfig& c);
GameConfig decode_config(const json& j);

struct Session {
    std::string game_id;
    std::string token;
    arbiter::PlayerId player;
};

class ServiceError : public std::runtime_error {
public:
    enum class Code { bad_request, invalid_config, unknown_game, game_full, lobby_expired, auth_failed,
                      stale_sequence, rejected };

    ServiceError(Code code, const std::string& what,
                 std::optional<arbiter::RejectedAction::Code> rejection = std::nullopt)
        : std::runtime_error(what), code_(code), rejection_(rejection) {}

    [[nodiscard]] Code code() const { return code_; }
    /// The arbiter's reason, relayed verbatim when code() == rejected.
    [[nodiscard]] std::optional<arbiter::RejectedAction::Code> rejection() const { return rejection_; }

private:
    Code code_;
    std::optional<arbiter::RejectedAction::Code> rejection_;
};

std::string_view to_string(ServiceError::Code code);

struct Ack {
    std::uint64_t sequence = 0;
    json phase;
    json effects;
};

/// Push callback; receives {sequence, phase, event} for every appended event.
using Subscriber = std::function<void(const json&)>;

/// Hosts live games on top of the arbiter. Every accepted action is appended
/// to the game's event log before it is acknowledged; on construction all logs
/// in the data directory are folded back through the arbiter.
///
/// Thread safety: operations on one game are serialized by a per-game mutex,
/// different games proceed in parallel.
class GameService {
public:
    struct Options {
        std::optional<std::filesystem::path> data_dir;  // unset: in-memory only
        std::shared_ptr<RandomSource> random;           // ids and tokens; defaults to SystemRandom
    };

    explicit GameService(Options options = {});
    ~GameService();

    GameService(const GameService&) = delete;
    GameService& operator=(const GameService&) = delete;

    Session create_game(const GameConfig& config);
    Session join_game(const std::string& game_id);

    /// `action` is a wire action (commit_root, first_shot, play_turn,
    /// reveal_board, timeout_claim); the acting player comes from the token.
    Ack submit_action(const std::string& game_id, const std::string& token, const json& action,
                      std::optional<std::uint64_t> expected_sequence = std::nullopt);

    /// No-op (returns nullopt) for finished games and for lobbies that have
    /// already expired.
    std::optional<Ack> advance_clock(const std::string& game_id, arbiter::Tick ticks);
    /// One scheduler step: advances every game whose deadline is still ahead
    /// and every lobby that can still expire.
    void advance_all(arbiter::Tick ticks);

    /// Player-scoped projection. Contains the opponent's root and revealed
    /// cells only.
    json get_state(const std::string& game_id, const std::string& token) const;
    /// Games waiting for a second player.
    json lobby() const;

    /// Returns a subscription id; the subscriber is called under the game's
    /// lock, so it must not block or call back into the service.
    std::uint64_t subscribe(const std::string& game_id, const std::string& token, Subscriber subscriber);
    void unsubscribe(std::uint64_t subscription);

    /// Authenticates without touching the game.
    arbiter::PlayerId authenticate(const std::string& game_id, const std::string& token) const;

    // Introspection for tests and tooling.
    arbiter::ArbiterState snapshot(const std::string& game_id) const;
    std::vector<json> events(const std::string& game_id) const;
    std::vector<std::string> game_ids() const;

private:
    struct Game;

    std::shared_ptr<Game> find(const std::string& game_id) const;
    std::string random_hex(std::size_t bytes);
    void load(const std::filesystem::path& file);

    Options options_;
    mutable std::shared_mutex games_mutex_;
    std::map<std::string, std::shared_ptr<Game>> games_;
    std::mutex random_mutex_;
    std::mutex subs_mutex_;
    std::map<std::uint64_t, std::string> subscription_games_;
    std::uint64_t next_subscription_ = 1;
};

/// Drives the logical clock from wall time: one tick per interval.
class TickScheduler {
public:
    TickScheduler(GameService& service, std::chrono::milliseconds interval);
    ~TickScheduler();

private:
    std::jthread thread_;
};

}  // namespace seabattle::service
