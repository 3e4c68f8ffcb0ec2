#pragma once

// A player that only sees the service's player-scoped views and keeps its
// board, blinding factors and tree to itself, as a real client would.

#include <optional>
#include <string>

#include "seabattle/codec.hpp"
#include "seabattle/game_service.hpp"
#include "seabattle/simulator.hpp"

namespace seabattle::testing {

using nlohmann::json;

class WireClient {
public:
    WireClient(std::uint64_t seed, const service::GameConfig& config, std::optional<int> fake_proof_at = {})
        : config_(config), strategy_(seed, config.geometry), fake_proof_at_(fake_proof_at) {
        SeededRandom rng(seed, "wire-client");
        layout_ = rules::validate_fleet(strategy_.choose_placements(config.fleet, config.geometry), config.fleet,
                                        config.geometry);
        tree_.emplace(merkle::build_tree(layout_.cells, rng, config.geometry));
    }

    const merkle::BoardTree& tree() const { return *tree_; }
    const rules::BoardLayout& layout() const { return layout_; }

    /// The move this player should make in `view`, if it is their turn.
    std::optional<json> next_action(const json& view) {
        const std::string me = view.at("you");
        const auto& phase = view.at("phase");
        const std::string kind = phase.at("kind");
        const bool mine = phase.value("player", std::string()) == me;
        if (kind == "committing" && !view.at("roots").contains(me)) {
            return json{{"type", "commit_root"}, {"root", codec::encode_digest(tree_->root())}};
        }
        if (kind == "awaiting_first_shot" && mine) {
            return json{{"type", "first_shot"}, {"target", codec::encode_coordinate(choose(view))}};
        }
        if (kind == "awaiting_turn" && mine) {
            auto proof = merkle::prove_cell(*tree_, phase.at("pending_target").get<int>());
            if (fake_proof_at_ && proofs_ == *fake_proof_at_) proof.siblings.back()[3] ^= 0x40;
            ++proofs_;
            return json{{"type", "play_turn"},
                        {"proof", codec::encode_proof(proof)},
                        {"next_target", codec::encode_coordinate(choose(view))}};
        }
        if (kind == "awaiting_reveal" && mine) {
            const auto& shown = view.at("revealed").contains(me) ? view["revealed"][me] : json::object();
            json proofs = json::array();
            for (int cell = 0; cell < config_.geometry.cell_count(); ++cell) {
                if (!shown.contains(rules::Coordinate::from_index(cell, config_.geometry).label())) {
                    proofs.push_back(codec::encode_proof(merkle::prove_cell(*tree_, cell)));
                }
            }
            return json{{"type", "reveal_board"}, {"proofs", proofs}};
        }
        return std::nullopt;
    }

private:
    rules::Coordinate choose(const json& view) {
        std::vector<std::pair<int, std::optional<rules::ShotOutcome>>> history;
        for (const auto& shot : view.at("shots")) {
            if (shot.at("shooter") != view.at("you")) continue;
            const auto target = codec::decode_coordinate(shot.at("target")).index(config_.geometry);
            std::optional<rules::ShotOutcome> outcome;
            if (!shot.at("outcome").is_null()) {
                const auto& o = shot["outcome"];
                for (auto k : {rules::ShotOutcome::Kind::miss, rules::ShotOutcome::Kind::hit,
                               rules::ShotOutcome::Kind::sunk, rules::ShotOutcome::Kind::fleet_sunk}) {
                    if (rules::to_string(k) == o.at("kind").get<std::string>()) {
                        outcome = rules::ShotOutcome{k, o.at("ship_size").get<int>()};
                    }
                }
            }
            history.emplace_back(target, outcome);
        }
        return strategy_.choose_target(history);
    }

    service::GameConfig config_;
    sim::HuntStrategy strategy_;
    rules::BoardLayout layout_;
    std::optional<merkle::BoardTree> tree_;
    std::optional<int> fake_proof_at_;
    int proofs_ = 0;
};

}  // namespace seabattle::testing
