#include "seabattle/simulator.hpp"

#include <algorithm>
#include <set>

#include "seabattle/codec.hpp"

namespace seabattle::sim {

using namespace seabattle::arbiter;
using rules::Coordinate;
using rules::ShotOutcome;
using json = nlohmann::json;

namespace {

std::string_view kind_name(AdversaryScript::Kind k) {
    switch (k) {
        case AdversaryScript::Kind::honest: return "honest";
        case AdversaryScript::Kind::location_changer: return "location_changer";
        case AdversaryScript::Kind::bad_fleet: return "bad_fleet";
        case AdversaryScript::Kind::unresponsive: return "unresponsive";
        case AdversaryScript::Kind::fake_proof: return "fake_proof";
    }
    return "unknown";
}

std::string_view flaw_name(AdversaryScript::FleetFlaw f) {
    switch (f) {
        case AdversaryScript::FleetFlaw::missing_ship: return "missing_ship";
        case AdversaryScript::FleetFlaw::bent_ship: return "bent_ship";
        case AdversaryScript::FleetFlaw::extra_cell: return "extra_cell";
    }
    return "unknown";
}

}  // namespace

std::string to_string(const AdversaryScript& s) {
    std::string out(kind_name(s.kind));
    if (s.kind == AdversaryScript::Kind::unresponsive || s.kind == AdversaryScript::Kind::fake_proof) {
        out += ":" + std::to_string(s.after_turn);
    } else if (s.kind == AdversaryScript::Kind::bad_fleet) {
        out += ":" + std::string(flaw_name(s.flaw));
    }
    return out;
}

AdversaryScript parse_script(std::string_view text) {
    const auto colon = text.find(':');
    const std::string_view name = text.substr(0, colon);
    const std::string_view arg = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
    AdversaryScript s;
    for (auto k : {AdversaryScript::Kind::honest, AdversaryScript::Kind::location_changer,
                   AdversaryScript::Kind::bad_fleet, AdversaryScript::Kind::unresponsive,
                   AdversaryScript::Kind::fake_proof}) {
        if (kind_name(k) != name) continue;
        s.kind = k;
        if (arg.empty()) return s;
        if (k == AdversaryScript::Kind::bad_fleet) {
            for (auto f : {AdversaryScript::FleetFlaw::missing_ship, AdversaryScript::FleetFlaw::bent_ship,
                           AdversaryScript::FleetFlaw::extra_cell}) {
                if (flaw_name(f) == arg) {
                    s.flaw = f;
                    return s;
                }
            }
            throw std::invalid_argument("unknown fleet flaw: " + std::string(arg));
        }
        if (k == AdversaryScript::Kind::unresponsive || k == AdversaryScript::Kind::fake_proof) {
            s.after_turn = std::stoi(std::string(arg));
            if (s.after_turn < 0) throw std::invalid_argument("turn index must be non-negative");
            return s;
        }
        throw std::invalid_argument("script '" + std::string(name) + "' takes no argument");
    }
    throw std::invalid_argument("unknown script: " + std::string(text));
}

std::optional<CheatReason> expected_reason(const AdversaryScript& s) {
    switch (s.kind) {
        case AdversaryScript::Kind::honest: return std::nullopt;
        case AdversaryScript::Kind::location_changer: return CheatReason::fake_proof;
        case AdversaryScript::Kind::bad_fleet: return CheatReason::inappropriate_placement;
        case AdversaryScript::Kind::unresponsive: return CheatReason::unresponsive;
        case AdversaryScript::Kind::fake_proof: return CheatReason::fake_proof;
    }
    return std::nullopt;
}

void MatchConfig::check() const {
    rules.check();
    if (deposit <= 0) throw std::invalid_argument("deposit must be positive");
    if (blinding_bytes < merkle::kMinBlindingBytes || blinding_bytes > 255) {
        throw std::invalid_argument("blinding length must be 16..255 bytes");
    }
}

HuntStrategy::HuntStrategy(std::uint64_t seed, BoardGeometry geometry) : rng_(seed), geometry_(geometry) {
    order_.resize(static_cast<std::size_t>(geometry.cell_count()));
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = static_cast<int>(i);
    std::shuffle(order_.begin(), order_.end(), rng_);
}

std::vector<rules::Placement> HuntStrategy::choose_placements(const rules::FleetSpec& spec,
                                                              const BoardGeometry& geometry) {
    std::vector<int> sizes = spec.sizes;
    std::sort(sizes.rbegin(), sizes.rend());
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<rules::Placement> out;
        std::vector<bool> used(static_cast<std::size_t>(geometry.cell_count()), false);
        bool ok = true;
        for (int size : sizes) {
            bool placed = false;
            for (int tries = 0; tries < 200 && !placed; ++tries) {
                const auto orient = (rng_() & 1U) ? rules::Orientation::vertical : rules::Orientation::horizontal;
                const rules::Placement p{size,
                                         {static_cast<int>(rng_() % static_cast<unsigned>(geometry.rows)),
                                          static_cast<int>(rng_() % static_cast<unsigned>(geometry.cols))},
                                         orient};
                if (!p.in_bounds(geometry)) continue;
                const auto cells = p.cells();
                if (std::any_of(cells.begin(), cells.end(),
                                [&](const Coordinate& c) { return used[static_cast<std::size_t>(c.index(geometry))]; })) {
                    continue;
                }
                for (const auto& c : cells) used[static_cast<std::size_t>(c.index(geometry))] = true;
                out.push_back(p);
                placed = true;
            }
            if (!placed) {
                ok = false;
                break;
            }
        }
        if (ok) return out;
    }
    throw std::runtime_error("could not place fleet");
}

Coordinate HuntStrategy::choose_target(
    const std::vector<std::pair<int, std::optional<ShotOutcome>>>& history) {
    std::set<int> shot;
    for (const auto& [cell, _] : history) shot.insert(cell);

    // Neighbours of the most recent unsunk hits first.
    for (auto it = history.rbegin(); it != history.rend(); ++it) {
        if (!it->second || it->second->kind != ShotOutcome::Kind::hit) continue;
        const Coordinate c = Coordinate::from_index(it->first, geometry_);
        for (const Coordinate n : {Coordinate{c.row - 1, c.col}, Coordinate{c.row + 1, c.col},
                                   Coordinate{c.row, c.col - 1}, Coordinate{c.row, c.col + 1}}) {
            if (n.in_bounds(geometry_) && !shot.contains(n.index(geometry_))) return n;
        }
    }
    for (int cell : order_) {
        if (!shot.contains(cell)) return Coordinate::from_index(cell, geometry_);
    }
    return Coordinate::from_index(order_.front(), geometry_);
}

namespace {

std::uint64_t derive_seed(std::uint64_t seed, std::string_view domain) {
    return SeededRandom(seed, domain).next_u64();
}

class Agent {
public:
    Agent(PlayerId id, AdversaryScript script, std::uint64_t seed, const MatchConfig& config)
        : id_(std::move(id)),
          script_(script),
          config_(config),
          strategy_(derive_seed(seed, "strategy-" + id_.value), config.rules.geometry),
          blinding_rng_(seed, "blinding-" + id_.value) {
        const auto& g = config_.rules.geometry;
        const auto placements = strategy_.choose_placements(config_.rules.fleet, g);
        layout_ = script_.kind == AdversaryScript::Kind::bad_fleet ? flawed_layout(placements)
                                                                   : rules::validate_fleet(placements, config_.rules.fleet, g);
        committed_ = merkle::build_tree(layout_.cells, blinding_rng_, g, sha256_hasher(), config_.blinding_bytes);
        if (script_.kind == AdversaryScript::Kind::location_changer) {
            proving_ = merkle::build_tree(shifted(layout_), blinding_rng_, g, sha256_hasher(), config_.blinding_bytes);
        }
    }

    const PlayerId& id() const { return id_; }
    const merkle::BoardTree& committed() const { return *committed_; }
    const rules::BoardLayout& layout() const { return layout_; }

    std::optional<FirstShot> first_shot() {
        if (silent()) return std::nullopt;
        ++moves_;
        return FirstShot{id_, next_target()};
    }

    std::optional<PlayTurn> respond(int pending) {
        if (silent()) return std::nullopt;
        ++moves_;
        auto proof = merkle::prove_cell(proving(), pending);
        if (script_.kind == AdversaryScript::Kind::fake_proof && proofs_ == script_.after_turn) {
            auto& sibling = proof.siblings[static_cast<std::size_t>(proofs_) % proof.siblings.size()];
            sibling[0] ^= 0x01;
        }
        ++proofs_;
        return PlayTurn{id_, std::move(proof), next_target()};
    }

    std::optional<RevealBoard> reveal(const std::map<int, int>& on_record) {
        if (silent()) return std::nullopt;
        RevealBoard r{id_, {}};
        for (int cell = 0; cell < config_.rules.geometry.cell_count(); ++cell) {
            if (!on_record.contains(cell)) r.proofs.push_back(merkle::prove_cell(proving(), cell));
        }
        return r;
    }

    void learn_outcome(const ShotOutcome& outcome) {
        for (auto it = history_.rbegin(); it != history_.rend(); ++it) {
            if (!it->second) {
                it->second = outcome;
                return;
            }
        }
    }

private:
    bool silent() const {
        return script_.kind == AdversaryScript::Kind::unresponsive && moves_ >= script_.after_turn;
    }

    const merkle::BoardTree& proving() const { return proving_ ? *proving_ : *committed_; }

    Coordinate next_target() {
        const Coordinate t = strategy_.choose_target(history_);
        history_.emplace_back(t.index(config_.rules.geometry), std::nullopt);
        return t;
    }

    std::vector<int> shifted(const rules::BoardLayout& layout) const {
        const auto& g = layout.geometry;
        std::vector<int> out(layout.cells.size(), 0);
        for (int r = 0; r < g.rows; ++r) {
            for (int c = 0; c < g.cols; ++c) {
                out[static_cast<std::size_t>(r * g.cols + (c + 1) % g.cols)] = layout.at({r, c});
            }
        }
        return out;
    }

    rules::BoardLayout flawed_layout(std::vector<rules::Placement> placements) const {
        const auto& g = config_.rules.geometry;
        rules::BoardLayout layout{g, std::vector<int>(static_cast<std::size_t>(g.cell_count()), 0)};
        auto smallest = std::min_element(placements.begin(), placements.end(),
                                         [](const auto& x, const auto& y) { return x.size < y.size; });
        if (script_.flaw == AdversaryScript::FleetFlaw::missing_ship) placements.erase(smallest);
        for (const auto& p : placements) {
            for (const auto& c : p.cells()) layout.cells[static_cast<std::size_t>(c.index(g))] = p.size;
        }
        if (script_.flaw == AdversaryScript::FleetFlaw::extra_cell) {
            const auto empty = std::find(layout.cells.begin(), layout.cells.end(), 0);
            if (empty != layout.cells.end()) *empty = placements.front().size;
        } else if (script_.flaw == AdversaryScript::FleetFlaw::bent_ship) {
            bend_largest(layout, placements);
        }
        return layout;
    }

    // Moves the tail cell of the largest ship sideways, off its line.
    static void bend_largest(rules::BoardLayout& layout, const std::vector<rules::Placement>& placements) {
        const auto& g = layout.geometry;
        const auto largest = *std::max_element(placements.begin(), placements.end(),
                                               [](const auto& x, const auto& y) { return x.size < y.size; });
        if (largest.size < 2) return;
        const auto cells = largest.cells();
        for (std::size_t end : {cells.size() - 1, std::size_t{0}}) {
            const Coordinate anchor = end == 0 ? cells[1] : cells[cells.size() - 2];
            const bool horizontal = largest.orientation == rules::Orientation::horizontal;
            for (int d : {-1, 1}) {
                const Coordinate side = horizontal ? Coordinate{anchor.row + d, anchor.col}
                                                   : Coordinate{anchor.row, anchor.col + d};
                if (side.in_bounds(g) && layout.at(side) == 0) {
                    layout.cells[static_cast<std::size_t>(cells[end].index(g))] = 0;
                    layout.cells[static_cast<std::size_t>(side.index(g))] = largest.size;
                    return;
                }
            }
        }
    }

    PlayerId id_;
    AdversaryScript script_;
    MatchConfig config_;
    HuntStrategy strategy_;
    SeededRandom blinding_rng_;
    rules::BoardLayout layout_;
    std::optional<merkle::BoardTree> committed_;
    std::optional<merkle::BoardTree> proving_;
    std::vector<std::pair<int, std::optional<ShotOutcome>>> history_;
    int moves_ = 0;
    int proofs_ = 0;
};

Bytes digest_bytes(const Digest& d) { return Bytes(d.begin(), d.end()); }

}  // namespace

MatchTrace run_match_traced(const AdversaryScript& a, const AdversaryScript& b, std::uint64_t seed,
                            const MatchConfig& config) {
    config.check();
    CountingHasher hasher;
    MatchTrace trace;
    trace.report.seed = seed;
    trace.report.script_a = a;
    trace.report.script_b = b;
    trace.report.config = config;

    std::map<PlayerId, Agent> agents;
    agents.emplace(kPlayerA, Agent(kPlayerA, a, seed, config));
    agents.emplace(kPlayerB, Agent(kPlayerB, b, seed, config));
    for (const auto& [id, agent] : agents) trace.committed_trees.emplace(id, agent.committed());

    ArbiterState state = new_game(config.rules);
    trace.states.push_back(state);

    auto send = [&](const PlayerId& sender, WirePhase phase, Bytes payload, std::vector<int> cells = {}) {
        auto& bytes = trace.report.bytes_sent[sender];
        (phase == WirePhase::commit ? bytes.commit : phase == WirePhase::shooting ? bytes.shooting : bytes.reveal) +=
            payload.size();
        trace.transcript.push_back({sender, phase, std::move(payload), std::move(cells)});
    };

    auto submit = [&](const Action& action) -> std::optional<Effects> {
        try {
            Step step = apply(state, action, hasher);
            state = std::move(step.state);
            trace.actions.push_back(action);
            trace.states.push_back(state);
            if (!std::holds_alternative<AdvanceClock>(action)) ++trace.report.actions;
            return std::move(step.effects);
        } catch (const RejectedAction&) {
            return std::nullopt;
        }
    };

    auto expire_and_claim = [&](const std::vector<PlayerId>& delinquent) {
        if (state.clock < state.deadline) submit(AdvanceClock{state.deadline - state.clock});
        for (const auto& p : state.players) {
            if (std::find(delinquent.begin(), delinquent.end(), p) == delinquent.end()) {
                submit(TimeoutClaim{p});
                return;
            }
        }
    };

    submit(Register{kPlayerA, config.deposit});
    submit(Register{kPlayerB, config.deposit});
    for (auto& [id, agent] : agents) {
        send(id, WirePhase::commit, digest_bytes(agent.committed().root()));
        submit(CommitRoot{id, agent.committed().root()});
    }

    // Every non-clock step makes progress; this bounds a misbehaving driver.
    const int step_limit = 8 * config.rules.geometry.cell_count() + 64;
    for (int steps = 0; !state.finished() && steps < step_limit; ++steps) {
        submit(AdvanceClock{1});
        bool moved = false;
        switch (state.phase.kind) {
            case PhaseKind::awaiting_first_shot: {
                Agent& agent = agents.at(*state.phase.player);
                if (auto act = agent.first_shot()) {
                    send(agent.id(), WirePhase::shooting, Bytes{static_cast<Byte>(act->target.index(config.rules.geometry))});
                    moved = submit(*act).has_value();
                }
                break;
            }
            case PhaseKind::awaiting_turn: {
                Agent& agent = agents.at(*state.phase.player);
                if (auto act = agent.respond(*state.phase.pending_target)) {
                    Bytes payload = merkle::serialize_proof(act->proof);
                    payload.push_back(static_cast<Byte>(act->next_target.index(config.rules.geometry)));
                    trace.report.turn_message_bytes.push_back(payload.size());
                    send(agent.id(), WirePhase::shooting, std::move(payload), {act->proof.cell_index});
                    if (auto effects = submit(*act)) {
                        moved = true;
                        ++trace.report.turns;
                        if (effects->outcome) agents.at(state.opponent(agent.id())).learn_outcome(*effects->outcome);
                    }
                }
                break;
            }
            case PhaseKind::awaiting_reveal: {
                Agent& agent = agents.at(*state.phase.player);
                const auto record = state.reveals.contains(agent.id()) ? state.reveals.at(agent.id())
                                                                       : std::map<int, int>{};
                if (auto act = agent.reveal(record)) {
                    Bytes payload;
                    std::vector<int> cells;
                    for (const auto& p : act->proofs) {
                        const Bytes one = merkle::serialize_proof(p);
                        payload.insert(payload.end(), one.begin(), one.end());
                        cells.push_back(p.cell_index);
                    }
                    send(agent.id(), WirePhase::reveal, std::move(payload), std::move(cells));
                    moved = submit(*act).has_value();
                }
                break;
            }
            default:
                break;
        }
        if (!moved && !state.finished()) expire_and_claim(awaited_players(state));
    }

    if (auto effects = submit(Settle{})) trace.report.ledger = effects->ledger;
    if (state.phase.verdict) trace.report.verdict = *state.phase.verdict;
    trace.report.shot_log = state.shot_log;
    trace.report.hash_invocations = hasher.calls();

    Bytes all;
    for (const auto& m : trace.transcript) {
        all.insert(all.end(), m.sender.value.begin(), m.sender.value.end());
        all.push_back(static_cast<Byte>(m.phase));
        all.insert(all.end(), m.payload.begin(), m.payload.end());
    }
    trace.report.transcript_digest = to_hex(sha256_hasher().hash(all));
    return trace;
}

MatchReport run_match(const AdversaryScript& a, const AdversaryScript& b, std::uint64_t seed,
                      const MatchConfig& config) {
    return run_match_traced(a, b, seed, config).report;
}

MatchReport replay(const MatchReport& original, const MatchConfig& config) {
    if (!(config == original.config)) throw std::invalid_argument("replay config does not match the report");
    return run_match(original.script_a, original.script_b, original.seed, config);
}

RoundCost measure_round_cost(const MatchConfig& config) {
    config.check();
    const auto& g = config.rules.geometry;
    HuntStrategy strategy(0, g);
    const auto layout = rules::validate_fleet(strategy.choose_placements(config.rules.fleet, g), config.rules.fleet, g);
    SeededRandom rng(0, "round-cost");
    const auto tree = merkle::build_tree(layout.cells, rng, g, sha256_hasher(), config.blinding_bytes);

    RoundCost cost;
    cost.commit_bytes_per_player = tree.root().size();

    const auto proof = merkle::prove_cell(tree, 0);
    cost.siblings = static_cast<int>(proof.siblings.size());
    cost.sibling_digest_bytes = proof.siblings.size() * kDigestSize;
    cost.index_bytes = 1;
    cost.proof_bytes = merkle::serialize_proof(proof).size();
    cost.leaf_bytes = cost.proof_bytes - cost.sibling_digest_bytes - cost.index_bytes;
    cost.turn_message_bytes = cost.proof_bytes + 1;

    CountingHasher counter;
    if (!merkle::verify_proof(tree.root(), proof, g, counter)) throw std::logic_error("honest proof rejected");
    cost.verifier_hashes_per_proof = counter.calls();

    counter.reset();
    for (int cell = 0; cell < g.cell_count(); ++cell) {
        if (!merkle::verify_proof(tree.root(), merkle::prove_cell(tree, cell), g, counter)) {
            throw std::logic_error("honest proof rejected");
        }
    }
    cost.full_reveal_hashes = counter.calls();
    cost.full_reveal_bound = 2ULL * static_cast<std::uint64_t>(g.cell_count()) * cost.verifier_hashes_per_proof;
    return cost;
}

namespace {

bool contains(const Bytes& haystack, const Bytes& needle) {
    return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) != haystack.end();
}

}  // namespace

std::size_t privacy_violations(const MatchTrace& trace) {
    std::size_t violations = 0;
    for (const auto& [owner, tree] : trace.committed_trees) {
        const int cells = tree.geometry().cell_count();
        std::vector<std::size_t> first_reveal(static_cast<std::size_t>(cells), trace.transcript.size());
        for (std::size_t i = 0; i < trace.transcript.size(); ++i) {
            const auto& m = trace.transcript[i];
            if (m.sender != owner) continue;
            for (int c : m.revealed_cells) {
                auto& slot = first_reveal[static_cast<std::size_t>(c)];
                slot = std::min(slot, i);
            }
        }
        for (int c = 0; c < cells; ++c) {
            const auto& blinding = tree.leaves()[static_cast<std::size_t>(c)].blinding;
            if (!blinding) continue;
            for (std::size_t i = 0; i < first_reveal[static_cast<std::size_t>(c)]; ++i) {
                if (contains(trace.transcript[i].payload, blinding->bytes())) ++violations;
            }
        }
    }
    return violations;
}

json config_to_json(const MatchConfig& c) {
    return {{"rules", codec::encode_rules(c.rules)}, {"deposit", c.deposit}, {"blinding_bytes", c.blinding_bytes}};
}

MatchConfig config_from_json(const json& j) {
    MatchConfig c;
    c.rules = codec::decode_rules(j.at("rules"));
    c.deposit = j.at("deposit").get<Amount>();
    c.blinding_bytes = j.at("blinding_bytes").get<std::size_t>();
    c.check();
    return c;
}

json report_to_json(const MatchReport& r) {
    json j;
    j["seed"] = r.seed;
    j["script_a"] = to_string(r.script_a);
    j["script_b"] = to_string(r.script_b);
    j["config"] = config_to_json(r.config);
    j["verdict"] = codec::encode_verdict(r.verdict);
    j["ledger"] = codec::encode_ledger(r.ledger);
    j["turns"] = r.turns;
    j["actions"] = r.actions;
    j["bytes_sent"] = json::object();
    for (const auto& [p, b] : r.bytes_sent) {
        j["bytes_sent"][p.value] = {{"commit", b.commit}, {"shooting", b.shooting}, {"reveal", b.reveal}};
    }
    j["turn_message_bytes"] = r.turn_message_bytes;
    j["hash_invocations"] = r.hash_invocations;
    j["shot_log"] = json::array();
    for (const auto& s : r.shot_log) j["shot_log"].push_back({{"shooter", s.shooter.value}, {"target", s.target}});
    j["transcript_digest"] = r.transcript_digest;
    return j;
}

MatchReport report_from_json(const json& j) {
    MatchReport r;
    r.seed = j.at("seed").get<std::uint64_t>();
    r.script_a = parse_script(j.at("script_a").get<std::string>());
    r.script_b = parse_script(j.at("script_b").get<std::string>());
    r.config = config_from_json(j.at("config"));
    r.verdict = codec::decode_verdict(j.at("verdict"));
    for (const auto& t : j.at("ledger")) r.ledger.push_back({PlayerId{t.at("to").get<std::string>()}, t.at("amount").get<Amount>()});
    r.turns = j.at("turns").get<int>();
    r.actions = j.at("actions").get<int>();
    for (const auto& [p, b] : j.at("bytes_sent").items()) {
        r.bytes_sent[PlayerId{p}] = {b.at("commit").get<std::uint64_t>(), b.at("shooting").get<std::uint64_t>(),
                                     b.at("reveal").get<std::uint64_t>()};
    }
    r.turn_message_bytes = j.at("turn_message_bytes").get<std::vector<std::uint64_t>>();
    r.hash_invocations = j.at("hash_invocations").get<std::uint64_t>();
    for (const auto& s : j.at("shot_log")) r.shot_log.push_back({PlayerId{s.at("shooter").get<std::string>()}, s.at("target").get<int>()});
    r.transcript_digest = j.at("transcript_digest").get<std::string>();
    return r;
}

}  // namespace seabattle::sim
