#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "seabattle/arbiter.hpp"

namespace seabattle::sim {

using arbiter::PlayerId;

/// Scripted behaviour of one seat.
struct AdversaryScript {
    enum class Kind { honest, location_changer, bad_fleet, unresponsive, fake_proof };
    /// How bad_fleet breaks the rules. Only missing_ship guarantees the cheater
    /// out-shoots an honest opponent (14 cells can never be sunk as 15).
    enum class FleetFlaw { missing_ship, bent_ship, extra_cell };

    Kind kind = Kind::honest;
    int after_turn = 0;  // unresponsive: moves made before going silent; fake_proof: proofs before tampering
    FleetFlaw flaw = FleetFlaw::missing_ship;

    friend bool operator==(const AdversaryScript&, const AdversaryScript&) = default;
};

std::string to_string(const AdversaryScript& s);
/// "honest", "location_changer", "bad_fleet[:missing_ship|bent_ship|extra_cell]",
/// "unresponsive[:k]", "fake_proof[:k]".
AdversaryScript parse_script(std::string_view text);

/// Expected verdict reason when `s` plays against an honest opponent.
std::optional<arbiter::CheatReason> expected_reason(const AdversaryScript& s);

struct MatchConfig {
    arbiter::GameRules rules;
    arbiter::Amount deposit = 100;
    std::size_t blinding_bytes = merkle::kDefaultBlindingBytes;

    void check() const;
    friend bool operator==(const MatchConfig&, const MatchConfig&) = default;
};

/// Honest placement and targeting. Deterministic for a given seed.
class Strategy {
public:
    virtual ~Strategy() = default;
    virtual std::vector<rules::Placement> choose_placements(const rules::FleetSpec& spec,
                                                            const BoardGeometry& geometry) = 0;
    /// history: own previous targets with their outcomes once known.
    virtual rules::Coordinate choose_target(
        const std::vector<std::pair<int, std::optional<rules::ShotOutcome>>>& history) = 0;
};

/// Seeded random placement; seeded random cell order with adjacent hunting
/// after a hit.
class HuntStrategy final : public Strategy {
public:
    HuntStrategy(std::uint64_t seed, BoardGeometry geometry);
    std::vector<rules::Placement> choose_placements(const rules::FleetSpec& spec,
                                                    const BoardGeometry& geometry) override;
    rules::Coordinate choose_target(
        const std::vector<std::pair<int, std::optional<rules::ShotOutcome>>>& history) override;

private:
    std::mt19937_64 rng_;
    BoardGeometry geometry_;
    std::vector<int> order_;
};

enum class WirePhase { commit, shooting, reveal };

struct PhaseBytes {
    std::uint64_t commit = 0;
    std::uint64_t shooting = 0;
    std::uint64_t reveal = 0;

    friend bool operator==(const PhaseBytes&, const PhaseBytes&) = default;
};

/// One message a player sends to the arbiter, in canonical binary form.
struct Message {
    PlayerId sender;
    WirePhase phase = WirePhase::commit;
    Bytes payload;
    std::vector<int> revealed_cells;  // sender's cells whose blinding this message discloses
};

struct MatchReport {
    std::uint64_t seed = 0;
    AdversaryScript script_a;
    AdversaryScript script_b;
    MatchConfig config;
    arbiter::Verdict verdict;
    arbiter::Ledger ledger;
    int turns = 0;    // accepted proof-carrying turns
    int actions = 0;  // accepted arbiter actions, clock ticks excluded
    std::map<PlayerId, PhaseBytes> bytes_sent;
    std::vector<std::uint64_t> turn_message_bytes;
    std::uint64_t hash_invocations = 0;  // arbiter-side
    std::vector<arbiter::ShotRecord> shot_log;
    std::string transcript_digest;  // hex SHA-256 over all payloads

    friend bool operator==(const MatchReport&, const MatchReport&) = default;
};

/// Everything observable during a match, for invariant checks.
struct MatchTrace {
    MatchReport report;
    std::vector<Message> transcript;
    std::vector<arbiter::Action> actions;       // accepted, in order
    std::vector<arbiter::ArbiterState> states;  // states[0] initial, states[i+1] after actions[i]
    std::map<PlayerId, merkle::BoardTree> committed_trees;
};

inline const PlayerId kPlayerA{"A"};
inline const PlayerId kPlayerB{"B"};

/// Drives both seats through the arbiter until the game is finished and
/// settled. Misbehaviour becomes a verdict; only an invalid config throws.
MatchTrace run_match_traced(const AdversaryScript& a, const AdversaryScript& b, std::uint64_t seed,
                            const MatchConfig& config = {});
MatchReport run_match(const AdversaryScript& a, const AdversaryScript& b, std::uint64_t seed,
                      const MatchConfig& config = {});

/// Re-runs the match described by `original`; throws if `config` differs
/// from the one recorded in the report.
MatchReport replay(const MatchReport& original, const MatchConfig& config);

struct RoundCost {
    std::uint64_t commit_bytes_per_player = 0;
    int siblings = 0;
    std::uint64_t sibling_digest_bytes = 0;
    std::uint64_t leaf_bytes = 0;   // ship size, blinding length, blinding
    std::uint64_t index_bytes = 0;
    std::uint64_t proof_bytes = 0;
    std::uint64_t turn_message_bytes = 0;  // proof plus next target
    std::uint64_t verifier_hashes_per_proof = 0;
    std::uint64_t full_reveal_hashes = 0;
    std::uint64_t full_reveal_bound = 0;   // 2 * cells * hashes per proof
};

RoundCost measure_round_cost(const MatchConfig& config = {});

/// Number of (message, cell) pairs where a message carries the blinding of a
/// cell before the message that reveals it. Zero for a private transcript.
std::size_t privacy_violations(const MatchTrace& trace);

nlohmann::json report_to_json(const MatchReport& r);
MatchReport report_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const MatchConfig& c);
MatchConfig config_from_json(const nlohmann::json& j);

}  // namespace seabattle::sim
