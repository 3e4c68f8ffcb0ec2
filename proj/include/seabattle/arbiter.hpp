#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "seabattle/crypto.hpp"
#include "seabattle/geometry.hpp"
#include "seabattle/merkle.hpp"
#include "seabattle/rules.hpp"

namespace seabattle::arbiter {

using Amount = std::int64_t;
using Tick = std::int64_t;

inline constexpr Tick kDefaultMoveWindow = 64;

struct PlayerId {
    std::string value;

    friend auto operator<=>(const PlayerId&, const PlayerId&) = default;
};

enum class CheatReason { unresponsive, fake_proof, inappropriate_placement, refused_reveal };

struct Verdict {
    enum class Kind { legitimate_win, cheat_penalty, timeout_forfeit };

    Kind kind = Kind::legitimate_win;
    PlayerId winner;
    std::optional<CheatReason> reason;

    friend bool operator==(const Verdict&, const Verdict&) = default;
};

enum class PhaseKind { registration, committing, awaiting_first_shot, awaiting_turn, awaiting_reveal, finished };

struct GamePhase {
    PhaseKind kind = PhaseKind::registration;
    std::optional<PlayerId> player;      // awaited shooter or candidate winner
    std::optional<int> pending_target;   // cell the awaited player must prove
    std::optional<Verdict> verdict;      // set once finished

    friend bool operator==(const GamePhase&, const GamePhase&) = default;
};

struct Transfer {
    PlayerId to;
    Amount amount = 0;

    friend bool operator==(const Transfer&, const Transfer&) = default;
};

using Ledger = std::vector<Transfer>;

struct ShotRecord {
    PlayerId shooter;
    int target = 0;

    friend bool operator==(const ShotRecord&, const ShotRecord&) = default;
};

/// Parameters fixed at game creation.
struct GameRules {
    BoardGeometry geometry = kStandardBoard;
    rules::FleetSpec fleet;
    Tick move_window = kDefaultMoveWindow;

    void check() const;
    friend bool operator==(const GameRules&, const GameRules&) = default;
};

/// Immutable snapshot of one game. Every value in `reveals` was admitted
/// through a proof verified against that player's root.
struct ArbiterState {
    GameRules rules;
    GamePhase phase;
    std::vector<PlayerId> players;  // registration order; players[0] fires first
    std::map<PlayerId, Amount> deposits;
    std::map<PlayerId, Digest> roots;
    std::map<PlayerId, std::map<int, int>> reveals;
    std::vector<ShotRecord> shot_log;
    Tick clock = 0;
    Tick deadline = 0;
    Amount pot = 0;
    Ledger payouts;

    [[nodiscard]] bool finished() const { return phase.kind == PhaseKind::finished; }
    [[nodiscard]] bool is_player(const PlayerId& p) const;
    [[nodiscard]] const PlayerId& opponent(const PlayerId& p) const;
    [[nodiscard]] Amount total_deposits() const;
    [[nodiscard]] Amount total_paid() const;

    friend bool operator==(const ArbiterState&, const ArbiterState&) = default;
};

ArbiterState new_game(GameRules rules = {});

class RejectedAction : public std::runtime_error {
public:
    enum class Code {
        wrong_phase,
        wrong_player,
        unknown_player,
        duplicate_player,
        game_full,
        invalid_deposit,
        unequal_deposit,
        already_committed,
        deadline_passed,
        deadline_not_reached,
        delinquent_claimant,
        repeated_target,
        target_out_of_bounds,
        incomplete_reveal,
        not_finished,
        invalid_ticks,
    };

    RejectedAction(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
    [[nodiscard]] Code code() const { return code_; }

private:
    Code code_;
};

std::string_view to_string(RejectedAction::Code code);
std::string_view to_string(CheatReason reason);
std::string_view to_string(Verdict::Kind kind);
std::string_view to_string(PhaseKind kind);

// Transitions. Each returns the successor state or throws RejectedAction,
// leaving the input untouched. Cheating is not an error: it finishes the game.

ArbiterState register_player(const ArbiterState& s, const PlayerId& player, Amount deposit);
ArbiterState commit_root(const ArbiterState& s, const PlayerId& player, const Digest& root);
ArbiterState first_shot(const ArbiterState& s, const PlayerId& player, const rules::Coordinate& target);

struct TurnResult {
    ArbiterState state;
    std::optional<rules::ShotOutcome> outcome;  // absent when the proof was rejected as fake
};

TurnResult play_turn(const ArbiterState& s, const PlayerId& player, const merkle::MerkleProof& proof,
                     const rules::Coordinate& next_target, const Hasher& hasher = sha256_hasher());
ArbiterState reveal_board(const ArbiterState& s, const PlayerId& player,
                          const std::vector<merkle::MerkleProof>& proofs,
                          const Hasher& hasher = sha256_hasher());
ArbiterState tick(const ArbiterState& s, Tick n);
ArbiterState timeout_claim(const ArbiterState& s, const PlayerId& claimant);

struct Settlement {
    ArbiterState state;
    Ledger ledger;
};

/// Pays the whole pot to the verdict's winner. A second call pays nothing.
Settlement settle(const ArbiterState& s);

// Action form of the transitions, for logging and replay.

struct Register { PlayerId player; Amount deposit = 0; };
struct CommitRoot { PlayerId player; Digest root{}; };
struct FirstShot { PlayerId player; rules::Coordinate target; };
struct PlayTurn { PlayerId player; merkle::MerkleProof proof; rules::Coordinate next_target; };
struct RevealBoard { PlayerId player; std::vector<merkle::MerkleProof> proofs; };
struct AdvanceClock { Tick ticks = 1; };
struct TimeoutClaim { PlayerId claimant; };
struct Settle {};

using Action = std::variant<Register, CommitRoot, FirstShot, PlayTurn, RevealBoard, AdvanceClock,
                            TimeoutClaim, Settle>;

std::string_view action_name(const Action& action);

struct Effects {
    std::optional<rules::ShotOutcome> outcome;
    std::optional<Verdict> verdict;  // set on the transition that finishes the game
    Ledger ledger;
};

struct Step {
    ArbiterState state;
    Effects effects;
};

Step apply(const ArbiterState& s, const Action& action, const Hasher& hasher = sha256_hasher());

/// Players whose move the game is currently waiting on.
std::vector<PlayerId> awaited_players(const ArbiterState& s);

}  // namespace seabattle::arbiter
