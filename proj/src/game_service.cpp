#include "seabattle/game_service.hpp"

#include <algorithm>
#include <condition_variable>

#include "seabattle/codec.hpp"

namespace seabattle::service {

using arbiter::Action;
using arbiter::ArbiterState;
using arbiter::PhaseKind;
using arbiter::PlayerId;
using arbiter::RejectedAction;
using Code = ServiceError::Code;

namespace {

const std::vector<PlayerId> kSeats{PlayerId{"A"}, PlayerId{"B"}};

std::string token_hash(const std::string& token) {
    const auto d = sha256_hasher().hash({reinterpret_cast<const Byte*>(token.data()), token.size()});
    return to_hex(d);
}

std::int64_t now_ms() {
    using namespace std::chrono;
    return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

json encode_effects(const arbiter::Effects& e) {
    json j{{"ledger", codec::encode_ledger(e.ledger)}};
    if (e.outcome) j["outcome"] = codec::encode_outcome(*e.outcome);
    if (e.verdict) j["verdict"] = codec::encode_verdict(*e.verdict);
    return j;
}

bool lobby_expired(const GameConfig& config, const ArbiterState& s) {
    return s.phase.kind == PhaseKind::registration && config.lobby_expiry_ticks > 0 &&
           s.clock >= config.lobby_expiry_ticks;
}

}  // namespace

std::string_view to_string(ServiceError::Code code) {
    switch (code) {
        case Code::bad_request: return "bad_request";
        case Code::invalid_config: return "invalid_config";
        case Code::unknown_game: return "unknown_game";
        case Code::game_full: return "game_full";
        case Code::lobby_expired: return "lobby_expired";
        case Code::auth_failed: return "auth_failed";
        case Code::stale_sequence: return "stale_sequence";
        case Code::rejected: return "rejected";
    }
    return "unknown";
}

void GameConfig::check() const {
    if (deposit <= 0) throw std::invalid_argument("deposit must be positive");
    if (timeout_ticks <= 0) throw std::invalid_argument("timeout_ticks must be positive");
    if (lobby_expiry_ticks < 0) throw std::invalid_argument("lobby_expiry_ticks must not be negative");
    rules().check();
}

arbiter::GameRules GameConfig::rules() const { return {geometry, fleet, timeout_ticks}; }

json encode_config(const GameConfig& c) {
    return {{"deposit", c.deposit},
            {"timeout_ticks", c.timeout_ticks},
            {"rows", c.geometry.rows},
            {"cols", c.geometry.cols},
            {"fleet", c.fleet.sizes},
            {"lobby_expiry_ticks", c.lobby_expiry_ticks}};
}

GameConfig decode_config(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("config must be an object");
    GameConfig c;
    c.deposit = j.value("deposit", c.deposit);
    c.timeout_ticks = j.value("timeout_ticks", c.timeout_ticks);
    c.geometry.rows = j.value("rows", c.geometry.rows);
    c.geometry.cols = j.value("cols", c.geometry.cols);
    if (j.contains("fleet")) c.fleet.sizes = j.at("fleet").get<std::vector<int>>();
    c.lobby_expiry_ticks = j.value("lobby_expiry_ticks", c.lobby_expiry_ticks);
    return c;
}

struct GameService::Game {
    std::mutex mutex;
    std::string id;
    GameConfig config;
    ArbiterState state;
    std::uint64_t sequence = 0;
    std::map<std::string, PlayerId> sessions;  // token hash -> seat
    std::vector<std::optional<rules::ShotOutcome>> outcomes;  // parallel to state.shot_log
    std::unique_ptr<EventLog> log;
    std::vector<json> memory_log;
    std::map<std::uint64_t, Subscriber> subscribers;

    const std::vector<json>& records() const { return log ? log->records() : memory_log; }

    void write(const json& record) {
        if (log) {
            log->append(record);
        } else {
            memory_log.push_back(record);
        }
    }

    // Bookkeeping shared by live submission and replay.
    void absorb(const Action& action, arbiter::Step step) {
        if (std::holds_alternative<arbiter::PlayTurn>(action) && step.effects.outcome) {
            outcomes.push_back(step.effects.outcome);
        }
        state = std::move(step.state);
    }

    PlayerId authenticate(const std::string& token) const {
        const auto it = sessions.find(token_hash(token));
        if (token.empty() || it == sessions.end()) throw ServiceError(Code::auth_failed, "invalid session token");
        return it->second;
    }

    /// Applies, persists, then publishes. Throws RejectedAction with nothing
    /// written when the arbiter refuses.
    Ack record(const Action& action, const std::optional<std::string>& session_hash = std::nullopt) {
        auto step = arbiter::apply(state, action);
        json event{{"sequence", sequence + 1},
                   {"timestamp", now_ms()},
                   {"action", codec::encode_action(action)},
                   {"resulting_phase", codec::encode_phase(step.state.phase)}};
        if (session_hash) event["session"] = {{"token_sha256", *session_hash}};
        write(event);
        ++sequence;
        const auto effects = encode_effects(step.effects);
        const bool finishing = step.effects.verdict.has_value();
        if (session_hash) sessions[*session_hash] = std::get<arbiter::Register>(action).player;
        absorb(action, std::move(step));
        publish(event, effects);
        Ack ack{sequence, event["resulting_phase"], effects};
        // Payout follows the verdict immediately, as its own event.
        if (finishing) {
            const auto paid = record(arbiter::Settle{});
            ack.sequence = paid.sequence;
            ack.effects["ledger"] = paid.effects["ledger"];
        }
        return ack;
    }

    void publish(const json& event, const json& effects) {
        const json push{{"sequence", event["sequence"]},
                        {"phase", event["resulting_phase"]},
                        {"event", {{"action", event["action"]}, {"effects", effects}}}};
        for (const auto& [_, sub] : subscribers) {
            try {
                sub(push);
            } catch (...) {
                // A broken subscriber must not affect the game.
            }
        }
    }

    void replay(const json& event) {
        const auto seq = event.at("sequence").get<std::uint64_t>();
        if (seq != sequence + 1) {
            throw std::runtime_error("game " + id + ": event sequence " + std::to_string(seq) + " follows " +
                                     std::to_string(sequence));
        }
        const auto action = codec::decode_action(event.at("action"), config.geometry);
        auto step = arbiter::apply(state, action);
        if (codec::encode_phase(step.state.phase) != event.at("resulting_phase")) {
            throw std::runtime_error("game " + id + ": replay diverges at event " + std::to_string(seq));
        }
        if (event.contains("session")) {
            sessions[event["session"].at("token_sha256").get<std::string>()] =
                std::get<arbiter::Register>(action).player;
        }
        absorb(action, std::move(step));
        sequence = seq;
    }
};

GameService::GameService(Options options) : options_(std::move(options)) {
    if (!options_.random) options_.random = std::make_shared<SystemRandom>();
    if (!options_.data_dir) return;
    std::filesystem::create_directories(*options_.data_dir);
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(*options_.data_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".jsonl") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) load(f);
}

GameService::~GameService() = default;

void GameService::load(const std::filesystem::path& file) {
    auto game = std::make_shared<Game>();
    game->id = file.stem().string();
    game->log = std::make_unique<EventLog>(file);
    const auto& records = game->log->records();
    if (records.empty()) return;  // creation never acknowledged
    const auto& header = records.front();
    if (!header.contains("created") || header["created"].at("game_id") != game->id) {
        throw std::runtime_error("event log " + file.string() + " lacks a creation header");
    }
    game->config = decode_config(header["created"].at("config"));
    game->config.check();
    game->state = arbiter::new_game(game->config.rules());
    for (std::size_t i = 1; i < records.size(); ++i) game->replay(records[i]);
    games_[game->id] = std::move(game);
}

std::string GameService::random_hex(std::size_t bytes) {
    Bytes buf(bytes);
    std::lock_guard lock(random_mutex_);
    options_.random->fill(buf);
    return to_hex(buf);
}

std::shared_ptr<GameService::Game> GameService::find(const std::string& game_id) const {
    std::shared_lock lock(games_mutex_);
    const auto it = games_.find(game_id);
    if (it == games_.end()) throw ServiceError(Code::unknown_game, "no game '" + game_id + "'");
    return it->second;
}

Session GameService::create_game(const GameConfig& config) {
    try {
        config.check();
    } catch (const std::invalid_argument& e) {
        throw ServiceError(Code::invalid_config, e.what());
    }
    auto game = std::make_shared<Game>();
    game->id = random_hex(16);
    game->config = config;
    game->state = arbiter::new_game(config.rules());
    if (options_.data_dir) game->log = std::make_unique<EventLog>(*options_.data_dir / (game->id + ".jsonl"));
    game->write({{"sequence", 0},
                 {"timestamp", now_ms()},
                 {"created", {{"game_id", game->id}, {"config", encode_config(config)}}}});

    Session session{game->id, random_hex(32), kSeats[0]};
    game->record(arbiter::Register{session.player, config.deposit}, token_hash(session.token));

    std::unique_lock lock(games_mutex_);
    games_[game->id] = std::move(game);
    return session;
}

Session GameService::join_game(const std::string& game_id) {
    auto game = find(game_id);
    std::lock_guard lock(game->mutex);
    if (game->state.players.size() >= kSeats.size()) throw ServiceError(Code::game_full, "game is full");
    if (lobby_expired(game->config, game->state)) throw ServiceError(Code::lobby_expired, "lobby has expired");
    Session session{game_id, random_hex(32), kSeats[game->state.players.size()]};
    game->record(arbiter::Register{session.player, game->config.deposit}, token_hash(session.token));
    return session;
}

arbiter::PlayerId GameService::authenticate(const std::string& game_id, const std::string& token) const {
    auto game = find(game_id);
    std::lock_guard lock(game->mutex);
    return game->authenticate(token);
}

Ack GameService::submit_action(const std::string& game_id, const std::string& token, const json& action,
                               std::optional<std::uint64_t> expected_sequence) {
    static const std::vector<std::string> allowed{"commit_root", "first_shot", "play_turn", "reveal_board",
                                                  "timeout_claim"};
    auto game = find(game_id);
    std::lock_guard lock(game->mutex);
    const auto player = game->authenticate(token);
    if (expected_sequence && *expected_sequence != game->sequence) {
        throw ServiceError(Code::stale_sequence, "expected sequence " + std::to_string(*expected_sequence) +
                                                     ", game is at " + std::to_string(game->sequence));
    }

    Action decoded;
    try {
        if (!action.is_object()) throw std::invalid_argument("action must be an object");
        const auto type = action.at("type").get<std::string>();
        if (std::find(allowed.begin(), allowed.end(), type) == allowed.end()) {
            throw std::invalid_argument("action type '" + type + "' cannot be submitted by a player");
        }
        if (action.contains("player") && action["player"] != player.value) {
            throw std::invalid_argument("action names another player");
        }
        json stamped = action;
        stamped["player"] = player.value;
        decoded = codec::decode_action(stamped, game->config.geometry);
    } catch (const ServiceError&) {
        throw;
    } catch (const std::exception& e) {
        throw ServiceError(Code::bad_request, e.what());
    }

    try {
        return game->record(decoded);
    } catch (const RejectedAction& e) {
        throw ServiceError(Code::rejected, e.what(), e.code());
    }
}

std::optional<Ack> GameService::advance_clock(const std::string& game_id, arbiter::Tick ticks) {
    if (ticks < 1) throw ServiceError(Code::bad_request, "ticks must be positive");
    auto game = find(game_id);
    std::lock_guard lock(game->mutex);
    if (game->state.finished() || lobby_expired(game->config, game->state)) return std::nullopt;
    return game->record(arbiter::AdvanceClock{ticks});
}

void GameService::advance_all(arbiter::Tick ticks) {
    std::vector<std::shared_ptr<Game>> games;
    {
        std::shared_lock lock(games_mutex_);
        for (const auto& [_, g] : games_) games.push_back(g);
    }
    for (const auto& game : games) {
        std::lock_guard lock(game->mutex);
        const auto& s = game->state;
        if (s.finished()) continue;
        // An open lobby only needs the clock if it can expire.
        if (s.phase.kind == PhaseKind::registration &&
            (game->config.lobby_expiry_ticks == 0 || lobby_expired(game->config, s))) {
            continue;
        }
        // Past the deadline the claim is already open; further ticks change
        // nothing and would only grow the log.
        if (s.phase.kind != PhaseKind::registration && s.clock >= s.deadline) continue;
        game->record(arbiter::AdvanceClock{ticks});
    }
}

json GameService::get_state(const std::string& game_id, const std::string& token) const {
    auto game = find(game_id);
    std::lock_guard lock(game->mutex);
    const auto me = game->authenticate(token);
    const auto& s = game->state;
    const auto& g = s.rules.geometry;

    json view{{"game_id", game->id},
              {"you", me.value},
              {"config", encode_config(game->config)},
              {"sequence", game->sequence},
              {"phase", codec::encode_phase(s.phase)},
              {"clock", s.clock},
              {"deadline", s.deadline},
              {"pot", s.pot}};
    view["players"] = json::array();
    for (const auto& p : s.players) view["players"].push_back(p.value);
    view["roots"] = json::object();
    for (const auto& [p, r] : s.roots) view["roots"][p.value] = codec::encode_digest(r);

    // Only values admitted through verified proofs; nothing else about any
    // board is known to the server.
    view["revealed"] = json::object();
    for (const auto& [p, cells] : s.reveals) {
        json m = json::object();
        for (const auto& [cell, v] : cells) m[rules::Coordinate::from_index(cell, g).label()] = v;
        view["revealed"][p.value] = std::move(m);
    }
    view["shots"] = json::array();
    for (std::size_t i = 0; i < s.shot_log.size(); ++i) {
        const auto& rec = s.shot_log[i];
        json shot{{"shooter", rec.shooter.value},
                  {"target", codec::encode_coordinate(rules::Coordinate::from_index(rec.target, g))}};
        shot["outcome"] = i < game->outcomes.size() && game->outcomes[i] ? codec::encode_outcome(*game->outcomes[i])
                                                                         : json(nullptr);
        view["shots"].push_back(std::move(shot));
    }
    if (s.finished()) {
        view["verdict"] = codec::encode_verdict(*s.phase.verdict);
        view["ledger"] = codec::encode_ledger(s.payouts);
    }
    return view;
}

json GameService::lobby() const {
    std::vector<std::shared_ptr<Game>> games;
    {
        std::shared_lock lock(games_mutex_);
        for (const auto& [_, g] : games_) games.push_back(g);
    }
    json out = json::array();
    for (const auto& game : games) {
        std::lock_guard lock(game->mutex);
        const auto& s = game->state;
        if (s.phase.kind != PhaseKind::registration || lobby_expired(game->config, s)) continue;
        out.push_back({{"game_id", game->id},
                       {"config", encode_config(game->config)},
                       {"players", s.players.size()},
                       {"clock", s.clock}});
    }
    return out;
}

std::uint64_t GameService::subscribe(const std::string& game_id, const std::string& token, Subscriber subscriber) {
    auto game = find(game_id);
    std::lock_guard lock(game->mutex);
    game->authenticate(token);
    std::lock_guard subs(subs_mutex_);
    const auto id = next_subscription_++;
    game->subscribers[id] = std::move(subscriber);
    subscription_games_[id] = game_id;
    return id;
}

void GameService::unsubscribe(std::uint64_t subscription) {
    std::string game_id;
    {
        std::lock_guard subs(subs_mutex_);
        const auto it = subscription_games_.find(subscription);
        if (it == subscription_games_.end()) return;
        game_id = it->second;
        subscription_games_.erase(it);
    }
    auto game = find(game_id);
    std::lock_guard lock(game->mutex);
    game->subscribers.erase(subscription);
}

ArbiterState GameService::snapshot(const std::string& game_id) const {
    auto game = find(game_id);
    std::lock_guard lock(game->mutex);
    return game->state;
}

std::vector<json> GameService::events(const std::string& game_id) const {
    auto game = find(game_id);
    std::lock_guard lock(game->mutex);
    return game->records();
}

std::vector<std::string> GameService::game_ids() const {
    std::shared_lock lock(games_mutex_);
    std::vector<std::string> out;
    for (const auto& [id, _] : games_) out.push_back(id);
    return out;
}

TickScheduler::TickScheduler(GameService& service, std::chrono::milliseconds interval)
    : thread_([&service, interval](std::stop_token stop) {
          std::mutex m;
          std::condition_variable_any cv;
          auto next = std::chrono::steady_clock::now() + interval;
          while (!stop.stop_requested()) {
              std::unique_lock lock(m);
              if (cv.wait_until(lock, stop, next, [] { return false; })) break;
              if (stop.stop_requested()) break;
              try {
                  service.advance_all(1);
              } catch (...) {
                  // Keep ticking; a failing game surfaces on its next request.
              }
              next += interval;
          }
      }) {}

TickScheduler::~TickScheduler() = default;

}  // namespace seabattle::service
