#pragma once

#include <json.hpp>

#include "seabattle/arbiter.hpp"

// JSON encodings shared by the service wire protocol, the event log and
// simulator reports. Proofs and digests travel as base64 of their canonical
// binary form.
namespace seabattle::codec {

using nlohmann::json;

json encode_digest(const Digest& d);
Digest decode_digest(const json& j);

json encode_proof(const merkle::MerkleProof& p);
merkle::MerkleProof decode_proof(const json& j, const BoardGeometry& geometry);

json encode_coordinate(const rules::Coordinate& c);
rules::Coordinate decode_coordinate(const json& j);

json encode_outcome(const rules::ShotOutcome& o);
json encode_verdict(const arbiter::Verdict& v);
arbiter::Verdict decode_verdict(const json& j);
json encode_phase(const arbiter::GamePhase& p);
json encode_ledger(const arbiter::Ledger& l);

json encode_rules(const arbiter::GameRules& r);
arbiter::GameRules decode_rules(const json& j);

json encode_action(const arbiter::Action& a);
arbiter::Action decode_action(const json& j, const BoardGeometry& geometry);

/// Complete state, including reveals; used for replay comparison.
json encode_state(const arbiter::ArbiterState& s);

arbiter::CheatReason decode_cheat_reason(std::string_view s);
arbiter::Verdict::Kind decode_verdict_kind(std::string_view s);

}  // namespace seabattle::codec
