#include "seabattle/arbiter.hpp"

#include <numeric>

namespace seabattle::arbiter {

using Code = RejectedAction::Code;
using rules::Coordinate;
using rules::ShotOutcome;

void GameRules::check() const {
    geometry.check();
    fleet.check();
    if (move_window < 1) throw std::invalid_argument("move window must be at least one tick");
    if (rules::total_ship_cells(fleet) > geometry.cell_count()) {
        throw std::invalid_argument("fleet does not fit on the board");
    }
    for (int s : fleet.sizes) {
        if (s > merkle::kMaxShipSize) throw std::invalid_argument("ship size exceeds leaf encoding range");
    }
}

bool ArbiterState::is_player(const PlayerId& p) const {
    return std::find(players.begin(), players.end(), p) != players.end();
}

const PlayerId& ArbiterState::opponent(const PlayerId& p) const {
    if (players.size() != 2 || !is_player(p)) throw std::logic_error("opponent of unregistered player");
    return players[0] == p ? players[1] : players[0];
}

Amount ArbiterState::total_deposits() const {
    Amount sum = 0;
    for (const auto& [_, amount] : deposits) sum += amount;
    return sum;
}

Amount ArbiterState::total_paid() const {
    return std::accumulate(payouts.begin(), payouts.end(), Amount{0},
                           [](Amount acc, const Transfer& t) { return acc + t.amount; });
}

ArbiterState new_game(GameRules rules) {
    rules.check();
    ArbiterState s;
    s.rules = std::move(rules);
    return s;
}

std::string_view to_string(RejectedAction::Code code) {
    switch (code) {
        case Code::wrong_phase: return "wrong_phase";
        case Code::wrong_player: return "wrong_player";
        case Code::unknown_player: return "unknown_player";
        case Code::duplicate_player: return "duplicate_player";
        case Code::game_full: return "game_full";
        case Code::invalid_deposit: return "invalid_deposit";
        case Code::unequal_deposit: return "unequal_deposit";
        case Code::already_committed: return "already_committed";
        case Code::deadline_passed: return "deadline_passed";
        case Code::deadline_not_reached: return "deadline_not_reached";
        case Code::delinquent_claimant: return "delinquent_claimant";
        case Code::repeated_target: return "repeated_target";
        case Code::target_out_of_bounds: return "target_out_of_bounds";
        case Code::incomplete_reveal: return "incomplete_reveal";
        case Code::not_finished: return "not_finished";
        case Code::invalid_ticks: return "invalid_ticks";
    }
    return "unknown";
}

std::string_view to_string(CheatReason reason) {
    switch (reason) {
        case CheatReason::unresponsive: return "unresponsive";
        case CheatReason::fake_proof: return "fake_proof";
        case CheatReason::inappropriate_placement: return "inappropriate_placement";
        case CheatReason::refused_reveal: return "refused_reveal";
    }
    return "unknown";
}

std::string_view to_string(Verdict::Kind kind) {
    switch (kind) {
        case Verdict::Kind::legitimate_win: return "legitimate_win";
        case Verdict::Kind::cheat_penalty: return "cheat_penalty";
        case Verdict::Kind::timeout_forfeit: return "timeout_forfeit";
    }
    return "unknown";
}

std::string_view to_string(PhaseKind kind) {
    switch (kind) {
        case PhaseKind::registration: return "registration";
        case PhaseKind::committing: return "committing";
        case PhaseKind::awaiting_first_shot: return "awaiting_first_shot";
        case PhaseKind::awaiting_turn: return "awaiting_turn";
        case PhaseKind::awaiting_reveal: return "awaiting_reveal";
        case PhaseKind::finished: return "finished";
    }
    return "unknown";
}

namespace {

[[noreturn]] void reject(Code code, const std::string& detail) {
    throw RejectedAction(code, std::string(to_string(code)) + ": " + detail);
}

void require_phase(const ArbiterState& s, PhaseKind kind) {
    if (s.phase.kind != kind) {
        reject(Code::wrong_phase, "game is in phase " + std::string(to_string(s.phase.kind)));
    }
}

void require_player(const ArbiterState& s, const PlayerId& p) {
    if (!s.is_player(p)) reject(Code::unknown_player, "'" + p.value + "' is not registered");
}

void require_awaited(const ArbiterState& s, const PlayerId& p) {
    require_player(s, p);
    if (s.phase.player != p) reject(Code::wrong_player, "not " + p.value + "'s move");
}

void require_before_deadline(const ArbiterState& s) {
    if (s.clock >= s.deadline) {
        reject(Code::deadline_passed, "clock " + std::to_string(s.clock) + " >= deadline " +
                                          std::to_string(s.deadline));
    }
}

void require_target(const ArbiterState& s, const Coordinate& target) {
    if (!target.in_bounds(s.rules.geometry)) reject(Code::target_out_of_bounds, target.label());
}

void restart_clock(ArbiterState& s) { s.deadline = s.clock + s.rules.move_window; }

void finish(ArbiterState& s, Verdict verdict) {
    s.phase = GamePhase{PhaseKind::finished, std::nullopt, std::nullopt, std::move(verdict)};
}

bool already_shot(const ArbiterState& s, const PlayerId& shooter, int target) {
    return std::any_of(s.shot_log.begin(), s.shot_log.end(),
                       [&](const ShotRecord& r) { return r.shooter == shooter && r.target == target; });
}

bool proof_admissible(const ArbiterState& s, const PlayerId& owner, const merkle::MerkleProof& proof,
                      const Hasher& hasher) {
    if (proof.cell_index < 0 || proof.cell_index >= s.rules.geometry.cell_count()) return false;
    const auto root = s.roots.find(owner);
    return root != s.roots.end() && merkle::verify_proof(root->second, proof, s.rules.geometry, hasher);
}

}  // namespace

ArbiterState register_player(const ArbiterState& s, const PlayerId& player, Amount deposit) {
    require_phase(s, PhaseKind::registration);
    if (s.players.size() >= 2) reject(Code::game_full, "two players already registered");
    if (s.is_player(player)) reject(Code::duplicate_player, "'" + player.value + "' already registered");
    if (player.value.empty()) reject(Code::unknown_player, "empty player id");
    if (deposit <= 0) reject(Code::invalid_deposit, "deposit must be positive");
    if (!s.players.empty() && deposit != s.deposits.at(s.players[0])) {
        reject(Code::unequal_deposit, "deposit " + std::to_string(deposit) + " differs from " +
                                          std::to_string(s.deposits.at(s.players[0])));
    }
    ArbiterState next = s;
    next.players.push_back(player);
    next.deposits[player] = deposit;
    next.pot += deposit;
    if (next.players.size() == 2) {
        next.phase = GamePhase{PhaseKind::committing, std::nullopt, std::nullopt, std::nullopt};
        restart_clock(next);
    }
    return next;
}

ArbiterState commit_root(const ArbiterState& s, const PlayerId& player, const Digest& root) {
    require_player(s, player);
    if (s.roots.contains(player)) reject(Code::already_committed, "root is write-once");
    require_phase(s, PhaseKind::committing);
    // A late commit stands only while nobody has committed; otherwise the
    // committed opponent may claim the timeout.
    if (s.clock >= s.deadline && !s.roots.empty()) require_before_deadline(s);

    ArbiterState next = s;
    next.roots[player] = root;
    if (next.roots.size() == 2) {
        next.phase = GamePhase{PhaseKind::awaiting_first_shot, next.players[0], std::nullopt, std::nullopt};
        restart_clock(next);
    }
    return next;
}

ArbiterState first_shot(const ArbiterState& s, const PlayerId& player, const Coordinate& target) {
    require_phase(s, PhaseKind::awaiting_first_shot);
    require_awaited(s, player);
    require_before_deadline(s);
    require_target(s, target);

    ArbiterState next = s;
    const int index = target.index(s.rules.geometry);
    next.shot_log.push_back({player, index});
    next.phase = GamePhase{PhaseKind::awaiting_turn, s.opponent(player), index, std::nullopt};
    restart_clock(next);
    return next;
}

TurnResult play_turn(const ArbiterState& s, const PlayerId& player, const merkle::MerkleProof& proof,
                     const Coordinate& next_target, const Hasher& hasher) {
    require_phase(s, PhaseKind::awaiting_turn);
    require_awaited(s, player);
    require_before_deadline(s);

    const PlayerId& other = s.opponent(player);
    if (proof.cell_index != s.phase.pending_target || !proof_admissible(s, player, proof, hasher)) {
        ArbiterState next = s;
        finish(next, {Verdict::Kind::cheat_penalty, other, CheatReason::fake_proof});
        return {std::move(next), std::nullopt};
    }

    const auto& prior = s.reveals.contains(player) ? s.reveals.at(player) : std::map<int, int>{};
    const int value = proof.leaf.ship_size;
    int same = 0;
    int total = 0;
    for (const auto& [cell, v] : prior) {
        if (v == 0 || cell == proof.cell_index) continue;
        ++total;
        if (v == value) ++same;
    }
    const ShotOutcome outcome = rules::classify_reveal(value, same, total, s.rules.fleet);

    ArbiterState next = s;
    next.reveals[player][proof.cell_index] = value;
    if (outcome.kind == ShotOutcome::Kind::fleet_sunk) {
        next.phase = GamePhase{PhaseKind::awaiting_reveal, other, std::nullopt, std::nullopt};
        restart_clock(next);
        return {std::move(next), outcome};
    }

    require_target(s, next_target);
    const int index = next_target.index(s.rules.geometry);
    if (already_shot(s, player, index)) reject(Code::repeated_target, next_target.label());
    next.shot_log.push_back({player, index});
    next.phase = GamePhase{PhaseKind::awaiting_turn, other, index, std::nullopt};
    restart_clock(next);
    return {std::move(next), outcome};
}

ArbiterState reveal_board(const ArbiterState& s, const PlayerId& player,
                          const std::vector<merkle::MerkleProof>& proofs, const Hasher& hasher) {
    require_phase(s, PhaseKind::awaiting_reveal);
    require_awaited(s, player);
    require_before_deadline(s);

    const PlayerId& other = s.opponent(player);
    for (const auto& proof : proofs) {
        if (!proof_admissible(s, player, proof, hasher)) {
            ArbiterState next = s;
            finish(next, {Verdict::Kind::cheat_penalty, other, CheatReason::fake_proof});
            return next;
        }
    }

    std::map<int, int> board = s.reveals.contains(player) ? s.reveals.at(player) : std::map<int, int>{};
    for (const auto& proof : proofs) board[proof.cell_index] = proof.leaf.ship_size;
    const int cell_count = s.rules.geometry.cell_count();
    if (static_cast<int>(board.size()) != cell_count) {
        reject(Code::incomplete_reveal, std::to_string(cell_count - static_cast<int>(board.size())) +
                                            " cells missing");
    }

    std::vector<int> cells;
    cells.reserve(board.size());
    for (const auto& [_, v] : board) cells.push_back(v);

    ArbiterState next = s;
    next.reveals[player] = std::move(board);
    const auto audit = rules::audit_revealed_board(cells, s.rules.fleet, s.rules.geometry);
    if (audit.valid()) {
        finish(next, {Verdict::Kind::legitimate_win, player, std::nullopt});
    } else {
        finish(next, {Verdict::Kind::cheat_penalty, other, CheatReason::inappropriate_placement});
    }
    return next;
}

ArbiterState tick(const ArbiterState& s, Tick n) {
    if (n < 1) reject(Code::invalid_ticks, "tick count must be positive");
    ArbiterState next = s;
    next.clock += n;
    return next;
}

std::vector<PlayerId> awaited_players(const ArbiterState& s) {
    switch (s.phase.kind) {
        case PhaseKind::registration:
        case PhaseKind::finished:
            return {};
        case PhaseKind::committing: {
            std::vector<PlayerId> out;
            for (const auto& p : s.players) {
                if (!s.roots.contains(p)) out.push_back(p);
            }
            return out;
        }
        default:
            return {*s.phase.player};
    }
}

ArbiterState timeout_claim(const ArbiterState& s, const PlayerId& claimant) {
    require_player(s, claimant);
    if (s.phase.kind == PhaseKind::registration || s.phase.kind == PhaseKind::finished) {
        reject(Code::wrong_phase, "no deadline in phase " + std::string(to_string(s.phase.kind)));
    }
    const auto awaited = awaited_players(s);
    if (std::find(awaited.begin(), awaited.end(), claimant) != awaited.end()) {
        reject(Code::delinquent_claimant, claimant.value + " is the party being waited on");
    }
    if (s.clock < s.deadline) {
        reject(Code::deadline_not_reached, "clock " + std::to_string(s.clock) + " < deadline " +
                                               std::to_string(s.deadline));
    }
    ArbiterState next = s;
    if (s.phase.kind == PhaseKind::awaiting_reveal) {
        finish(next, {Verdict::Kind::cheat_penalty, claimant, CheatReason::refused_reveal});
    } else {
        finish(next, {Verdict::Kind::timeout_forfeit, claimant, CheatReason::unresponsive});
    }
    return next;
}

Settlement settle(const ArbiterState& s) {
    if (!s.finished()) reject(Code::not_finished, "game is in phase " + std::string(to_string(s.phase.kind)));
    Settlement out{s, {}};
    if (s.pot > 0) {
        out.ledger.push_back({s.phase.verdict->winner, s.pot});
        out.state.payouts.push_back(out.ledger.back());
        out.state.pot = 0;
    }
    return out;
}

std::string_view action_name(const Action& action) {
    struct Namer {
        std::string_view operator()(const Register&) const { return "register"; }
        std::string_view operator()(const CommitRoot&) const { return "commit_root"; }
        std::string_view operator()(const FirstShot&) const { return "first_shot"; }
        std::string_view operator()(const PlayTurn&) const { return "play_turn"; }
        std::string_view operator()(const RevealBoard&) const { return "reveal_board"; }
        std::string_view operator()(const AdvanceClock&) const { return "advance_clock"; }
        std::string_view operator()(const TimeoutClaim&) const { return "timeout_claim"; }
        std::string_view operator()(const Settle&) const { return "settle"; }
    };
    return std::visit(Namer{}, action);
}

Step apply(const ArbiterState& s, const Action& action, const Hasher& hasher) {
    Step step = std::visit(
        [&](const auto& a) -> Step {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, Register>) {
                return {register_player(s, a.player, a.deposit), {}};
            } else if constexpr (std::is_same_v<T, CommitRoot>) {
                return {commit_root(s, a.player, a.root), {}};
            } else if constexpr (std::is_same_v<T, FirstShot>) {
                return {first_shot(s, a.player, a.target), {}};
            } else if constexpr (std::is_same_v<T, PlayTurn>) {
                auto r = play_turn(s, a.player, a.proof, a.next_target, hasher);
                return {std::move(r.state), {r.outcome, std::nullopt, {}}};
            } else if constexpr (std::is_same_v<T, RevealBoard>) {
                return {reveal_board(s, a.player, a.proofs, hasher), {}};
            } else if constexpr (std::is_same_v<T, AdvanceClock>) {
                return {tick(s, a.ticks), {}};
            } else if constexpr (std::is_same_v<T, TimeoutClaim>) {
                return {timeout_claim(s, a.claimant), {}};
            } else {
                auto r = settle(s);
                return {std::move(r.state), {std::nullopt, std::nullopt, std::move(r.ledger)}};
            }
        },
        action);
    if (!s.finished() && step.state.finished()) step.effects.verdict = step.state.phase.verdict;
    return step;
}

}  // namespace seabattle::arbiter
