#include "seabattle/codec.hpp"

namespace seabattle::codec {

using namespace seabattle::arbiter;

json encode_digest(const Digest& d) { return to_base64(d); }

Digest decode_digest(const json& j) { return digest_from_bytes(from_base64(j.get<std::string>())); }

json encode_proof(const merkle::MerkleProof& p) { return to_base64(merkle::serialize_proof(p)); }

merkle::MerkleProof decode_proof(const json& j, const BoardGeometry& geometry) {
    return merkle::parse_proof(from_base64(j.get<std::string>()), geometry);
}

json encode_coordinate(const rules::Coordinate& c) { return {{"row", c.row}, {"col", c.col}}; }

rules::Coordinate decode_coordinate(const json& j) {
    if (j.is_string()) return rules::Coordinate::parse(j.get<std::string>());
    return {j.at("row").get<int>(), j.at("col").get<int>()};
}

json encode_outcome(const rules::ShotOutcome& o) {
    return {{"kind", std::string(rules::to_string(o.kind))}, {"ship_size", o.ship_size}};
}

CheatReason decode_cheat_reason(std::string_view s) {
    for (auto r : {CheatReason::unresponsive, CheatReason::fake_proof, CheatReason::inappropriate_placement,
                   CheatReason::refused_reveal}) {
        if (to_string(r) == s) return r;
    }
    throw std::invalid_argument("unknown cheat reason: " + std::string(s));
}

Verdict::Kind decode_verdict_kind(std::string_view s) {
    for (auto k : {Verdict::Kind::legitimate_win, Verdict::Kind::cheat_penalty, Verdict::Kind::timeout_forfeit}) {
        if (to_string(k) == s) return k;
    }
    throw std::invalid_argument("unknown verdict kind: " + std::string(s));
}

json encode_verdict(const Verdict& v) {
    json j{{"kind", std::string(to_string(v.kind))}, {"winner", v.winner.value}};
    j["reason"] = v.reason ? json(std::string(to_string(*v.reason))) : json(nullptr);
    return j;
}

Verdict decode_verdict(const json& j) {
    Verdict v;
    v.kind = decode_verdict_kind(j.at("kind").get<std::string>());
    v.winner = PlayerId{j.at("winner").get<std::string>()};
    if (j.contains("reason") && !j.at("reason").is_null()) {
        v.reason = decode_cheat_reason(j.at("reason").get<std::string>());
    }
    return v;
}

json encode_phase(const GamePhase& p) {
    json j{{"kind", std::string(to_string(p.kind))}};
    if (p.player) j["player"] = p.player->value;
    if (p.pending_target) j["pending_target"] = *p.pending_target;
    if (p.verdict) j["verdict"] = encode_verdict(*p.verdict);
    return j;
}

json encode_ledger(const Ledger& l) {
    json arr = json::array();
    for (const auto& t : l) arr.push_back({{"to", t.to.value}, {"amount", t.amount}});
    return arr;
}

json encode_rules(const GameRules& r) {
    return {{"rows", r.geometry.rows},
            {"cols", r.geometry.cols},
            {"fleet", r.fleet.sizes},
            {"move_window", r.move_window}};
}

GameRules decode_rules(const json& j) {
    GameRules r;
    r.geometry.rows = j.value("rows", 10);
    r.geometry.cols = j.value("cols", 10);
    if (j.contains("fleet")) r.fleet.sizes = j.at("fleet").get<std::vector<int>>();
    r.move_window = j.value("move_window", kDefaultMoveWindow);
    r.check();
    return r;
}

json encode_action(const Action& a) {
    json j{{"type", std::string(action_name(a))}};
    std::visit(
        [&](const auto& act) {
            using T = std::decay_t<decltype(act)>;
            if constexpr (std::is_same_v<T, Register>) {
                j["player"] = act.player.value;
                j["deposit"] = act.deposit;
            } else if constexpr (std::is_same_v<T, CommitRoot>) {
                j["player"] = act.player.value;
                j["root"] = encode_digest(act.root);
            } else if constexpr (std::is_same_v<T, FirstShot>) {
                j["player"] = act.player.value;
                j["target"] = encode_coordinate(act.target);
            } else if constexpr (std::is_same_v<T, PlayTurn>) {
                j["player"] = act.player.value;
                j["proof"] = encode_proof(act.proof);
                j["next_target"] = encode_coordinate(act.next_target);
            } else if constexpr (std::is_same_v<T, RevealBoard>) {
                j["player"] = act.player.value;
                json proofs = json::array();
                for (const auto& p : act.proofs) proofs.push_back(encode_proof(p));
                j["proofs"] = std::move(proofs);
            } else if constexpr (std::is_same_v<T, AdvanceClock>) {
                j["ticks"] = act.ticks;
            } else if constexpr (std::is_same_v<T, TimeoutClaim>) {
                j["player"] = act.claimant.value;
            }
        },
        a);
    return j;
}

Action decode_action(const json& j, const BoardGeometry& geometry) {
    const auto type = j.at("type").get<std::string>();
    auto player = [&] { return PlayerId{j.at("player").get<std::string>()}; };
    if (type == "register") return Register{player(), j.at("deposit").get<Amount>()};
    if (type == "commit_root") return CommitRoot{player(), decode_digest(j.at("root"))};
    if (type == "first_shot") return FirstShot{player(), decode_coordinate(j.at("target"))};
    if (type == "play_turn") {
        return PlayTurn{player(), decode_proof(j.at("proof"), geometry), decode_coordinate(j.at("next_target"))};
    }
    if (type == "reveal_board") {
        RevealBoard r{player(), {}};
        for (const auto& p : j.at("proofs")) r.proofs.push_back(decode_proof(p, geometry));
        return r;
    }
    if (type == "advance_clock") return AdvanceClock{j.at("ticks").get<Tick>()};
    if (type == "timeout_claim") return TimeoutClaim{player()};
    if (type == "settle") return Settle{};
    throw std::invalid_argument("unknown action type: " + type);
}

json encode_state(const ArbiterState& s) {
    json j;
    j["rules"] = encode_rules(s.rules);
    j["phase"] = encode_phase(s.phase);
    j["players"] = json::array();
    for (const auto& p : s.players) j["players"].push_back(p.value);
    j["deposits"] = json::object();
    for (const auto& [p, a] : s.deposits) j["deposits"][p.value] = a;
    j["roots"] = json::object();
    for (const auto& [p, r] : s.roots) j["roots"][p.value] = encode_digest(r);
    j["reveals"] = json::object();
    for (const auto& [p, cells] : s.reveals) {
        json m = json::object();
        for (const auto& [cell, v] : cells) m[std::to_string(cell)] = v;
        j["reveals"][p.value] = std::move(m);
    }
    j["shot_log"] = json::array();
    for (const auto& r : s.shot_log) j["shot_log"].push_back({{"shooter", r.shooter.value}, {"target", r.target}});
    j["clock"] = s.clock;
    j["deadline"] = s.deadline;
    j["pot"] = s.pot;
    j["payouts"] = encode_ledger(s.payouts);
    return j;
}

}  // namespace seabattle::codec
