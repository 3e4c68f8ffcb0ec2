// Acceptance suite: one PASS/FAIL line per property, non-zero exit on any
// failure. Runs without the web client.

#include <chrono>
#include <deque>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <unistd.h>

#include "oracle.hpp"
#include "seabattle/codec.hpp"
#include "seabattle/game_service.hpp"
#include "seabattle/simulator.hpp"
#include "wire_client.hpp"

using namespace seabattle;
using arbiter::ArbiterState;
using arbiter::CheatReason;
using arbiter::PlayerId;
using arbiter::Verdict;
using Kind = sim::AdversaryScript::Kind;

namespace {

struct Check {
    bool ok = true;
    std::ostringstream detail;
    std::vector<std::string> failures;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (failures.size() < 5) failures.push_back(what);
        }
    }
};

int failed = 0;

void report(const std::string& name, const std::function<void(Check&)>& body) {
    Check c;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.expect(false, std::string("exception: ") + e.what());
    }
    const auto ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    std::cout << (c.ok ? "PASS" : "FAIL") << "  " << name << ": " << c.detail.str() << " [" << ms << " ms]" << std::endl;
    for (const auto& f : c.failures) std::cout << "      - " << f << "\n";
    if (!c.ok) ++failed;
}

// --- cheat matrix ---------------------------------------------------------

void cheat_matrix(Check& c) {
    const auto start = std::chrono::steady_clock::now();
    const std::vector<std::pair<std::string, Kind>> scripts{{"location_changer", Kind::location_changer},
                                                            {"bad_fleet", Kind::bad_fleet},
                                                            {"unresponsive", Kind::unresponsive},
                                                            {"fake_proof", Kind::fake_proof}};
    int runs = 0;
    int caught = 0;
    const sim::MatchConfig config;
    for (const auto& [name, kind] : scripts) {
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            sim::AdversaryScript cheat{kind};
            // Vary when the deviation happens across the shooting phase.
            if (kind == Kind::unresponsive) cheat.after_turn = static_cast<int>(seed % 15);
            if (kind == Kind::fake_proof) cheat.after_turn = static_cast<int>(seed % 14);
            const auto expected_kind =
                kind == Kind::unresponsive ? Verdict::Kind::timeout_forfeit : Verdict::Kind::cheat_penalty;
            for (const bool cheater_first : {false, true}) {
                const auto r = cheater_first ? sim::run_match(cheat, {}, seed, config) : sim::run_match({}, cheat, seed, config);
                const auto& honest = cheater_first ? sim::kPlayerB : sim::kPlayerA;
                const Verdict expected{expected_kind, honest, sim::expected_reason(cheat)};
                const bool ok = r.verdict == expected &&
                                r.ledger == arbiter::Ledger{{honest, 2 * config.deposit}};
                ++runs;
                caught += ok;
                c.expect(ok, name + " seed " + std::to_string(seed) + (cheater_first ? " (cheater first)" : "") +
                                 ": got " + codec::encode_verdict(r.verdict).dump());
            }
        }
    }
    const auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.expect(secs < 10.0, "took " + std::to_string(secs) + " s");
    c.detail << caught << "/" << runs << " matches (4 scripts x 50 seeds x both seats) paid the honest player "
             << "with the matching reason in " << secs << " s";
}

// --- honest completion ----------------------------------------------------

void honest_completion(Check& c) {
    int wins = 0;
    int audited = 0;
    std::size_t states = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto t = sim::run_match_traced({}, {}, seed);
        const auto& r = t.report;
        const bool win = r.verdict.kind == Verdict::Kind::legitimate_win;
        wins += win;
        c.expect(win, "seed " + std::to_string(seed) + " ended " + codec::encode_verdict(r.verdict).dump());
        const auto& last = t.states.back();
        std::vector<int> board(static_cast<std::size_t>(last.rules.geometry.cell_count()), -1);
        for (const auto& [cell, v] : last.reveals.at(r.verdict.winner)) board[static_cast<std::size_t>(cell)] = v;
        const bool valid = rules::audit_revealed_board(board).valid();
        audited += valid;
        c.expect(valid, "seed " + std::to_string(seed) + ": winner board fails audit");
        for (const auto& s : t.states) {
            ++states;
            c.expect(s.pot + s.total_paid() == s.total_deposits(),
                     "seed " + std::to_string(seed) + ": conservation broken");
        }
        c.expect(last.pot == 0 && last.total_paid() == 200, "seed " + std::to_string(seed) + ": pot not paid out");
    }
    c.detail << wins << "/100 legitimate wins, " << audited << "/100 winner boards pass audit, conservation held in "
             << states << " states";
}

// --- binding and hiding ---------------------------------------------------

void binding_and_hiding(Check& c) {
    std::mt19937_64 rng(20240601);
    int false_accepts = 0;
    int parse_rejects = 0;
    constexpr int kMutations = 10000;
    std::optional<merkle::BoardTree> tree;
    for (int i = 0; i < kMutations; ++i) {
        if (i % 100 == 0) {
            sim::HuntStrategy s(static_cast<std::uint64_t>(i), kStandardBoard);
            const auto layout = rules::validate_fleet(s.choose_placements({}, kStandardBoard), {});
            SeededRandom blinding(static_cast<std::uint64_t>(i), "tamper");
            tree.emplace(merkle::build_tree(layout.cells, blinding));
        }
        const int cell = static_cast<int>(rng() % 100);
        auto bytes = merkle::serialize_proof(merkle::prove_cell(*tree, cell));
        if (i == 0) c.expect(merkle::verify_proof(tree->root(), merkle::parse_proof(bytes)), "honest proof rejected");
        const auto bit = rng() % (bytes.size() * 8);
        bytes[bit / 8] ^= static_cast<Byte>(1U << (bit % 8));
        try {
            if (merkle::verify_proof(tree->root(), merkle::parse_proof(bytes))) ++false_accepts;
        } catch (const std::exception&) {
            ++parse_rejects;
        }
    }
    c.expect(false_accepts == 0, std::to_string(false_accepts) + " mutated proofs verified");

    std::size_t leaks = 0;
    std::size_t messages = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto t = sim::run_match_traced({}, {}, 1000 + seed);
        leaks += sim::privacy_violations(t);
        messages += t.transcript.size();
    }
    c.expect(leaks == 0, std::to_string(leaks) + " blinding leaks before reveal");

    // The probe must be able to see a leak: plant one.
    auto planted = sim::run_match_traced({}, {}, 7);
    const auto& tree_a = planted.committed_trees.at(sim::kPlayerA);
    for (auto& m : planted.transcript) {
        if (m.sender != sim::kPlayerA) continue;
        int hidden = -1;
        for (int cell = 0; cell < 100 && hidden < 0; ++cell) {
            if (std::find(m.revealed_cells.begin(), m.revealed_cells.end(), cell) == m.revealed_cells.end()) hidden = cell;
        }
        const auto& b = tree_a.leaves()[static_cast<std::size_t>(hidden)].blinding->bytes();
        m.payload.insert(m.payload.end(), b.begin(), b.end());
        break;
    }
    c.expect(sim::privacy_violations(planted) > 0, "planted leak not detected");

    c.detail << false_accepts << "/" << kMutations << " single-bit mutations verified (" << parse_rejects
             << " rejected at parse); " << leaks << " leaks in " << messages << " messages over 20 matches";
}

// --- cost formulas --------------------------------------------------------

void cost_formulas(Check& c) {
    const auto cost = sim::measure_round_cost();
    c.expect(cost.commit_bytes_per_player == 32, "root is " + std::to_string(cost.commit_bytes_per_player) + " bytes");
    c.expect(cost.siblings == 7, "proof has " + std::to_string(cost.siblings) + " siblings");
    c.expect(cost.sibling_digest_bytes == 256 * 7 / 8, "sibling bytes " + std::to_string(cost.sibling_digest_bytes));
    c.expect(cost.full_reveal_hashes <= 800, "full reveal " + std::to_string(cost.full_reveal_hashes) + " hashes");
    c.expect(cost.full_reveal_hashes <= cost.full_reveal_bound, "full reveal exceeds 2 * cells * proof hashes");

    // The same numbers as observed in a played match.
    const auto t = sim::run_match_traced({}, {}, 3);
    for (const auto& p : {sim::kPlayerA, sim::kPlayerB}) {
        c.expect(t.report.bytes_sent.at(p).commit == 32, p.value + " sent more than one root in the commit phase");
    }
    std::uint64_t reveal_hashes = 0;
    for (std::size_t i = 0; i < t.actions.size(); ++i) {
        if (!std::holds_alternative<arbiter::RevealBoard>(t.actions[i])) continue;
        CountingHasher counter;
        arbiter::apply(t.states[i], t.actions[i], counter);
        reveal_hashes = counter.calls();
    }
    c.expect(reveal_hashes > 0 && reveal_hashes <= 800, "arbiter reveal used " + std::to_string(reveal_hashes));
    std::set<std::uint64_t> sizes(t.report.turn_message_bytes.begin(), t.report.turn_message_bytes.end());
    c.expect(sizes == std::set<std::uint64_t>{cost.turn_message_bytes}, "turn messages vary in size");

    c.detail << "commit " << cost.commit_bytes_per_player << " B/player; proof " << cost.siblings << " siblings = "
             << cost.sibling_digest_bytes << " digest bytes (" << cost.proof_bytes << " B serialized, "
             << cost.turn_message_bytes << " B per turn); full reveal " << cost.full_reveal_hashes
             << " hashes (match reveal " << reveal_hashes << ") <= 800";
}

// --- oracle equivalence ---------------------------------------------------

void oracle_equivalence(Check& c) {
    const BoardGeometry mini{2, 2};
    const rules::FleetSpec fleet{{2}};

    std::set<std::set<int>> brute;
    for (const auto& run : oracle::all_runs(2, 2, 2)) brute.insert(run);

    // validate_fleet over every origin/orientation, in bounds or not.
    std::set<std::set<int>> accepted;
    for (int r = -1; r <= 2; ++r) {
        for (int col = -1; col <= 2; ++col) {
            for (auto o : {rules::Orientation::horizontal, rules::Orientation::vertical}) {
                const std::vector<rules::Placement> p{{2, {r, col}, o}};
                try {
                    const auto layout = rules::validate_fleet(p, fleet, mini);
                    std::set<int> cells;
                    for (int i = 0; i < 4; ++i) {
                        if (layout.cells[static_cast<std::size_t>(i)] != 0) cells.insert(i);
                    }
                    accepted.insert(cells);
                } catch (const rules::FleetError&) {
                }
            }
        }
    }
    c.expect(brute.size() == 4, "brute force found " + std::to_string(brute.size()));
    c.expect(accepted == brute, "validate_fleet disagrees with brute force");

    // audit_revealed_board over every assignment of 0..5 to the four cells.
    std::set<std::set<int>> audited;
    int boards = 0;
    for (int code = 0; code < 6 * 6 * 6 * 6; ++code, ++boards) {
        std::vector<int> cells(4);
        for (int i = 0, x = code; i < 4; ++i, x /= 6) cells[static_cast<std::size_t>(i)] = x % 6;
        if (!rules::audit_revealed_board(cells, fleet, mini).valid()) continue;
        std::set<int> occupied;
        for (int i = 0; i < 4; ++i) {
            if (cells[static_cast<std::size_t>(i)] == 2) occupied.insert(i);
        }
        c.expect(occupied.size() == 2, "audit accepted a board without exactly one size-2 ship");
        audited.insert(occupied);
    }
    c.expect(audited == brute, "audit_revealed_board disagrees with brute force");

    // Merkle verification against a full recompute.
    std::mt19937_64 rng(77);
    int agree = 0;
    constexpr int kProbes = 1000;
    for (int i = 0; i < kProbes; ++i) {
        const bool small = i % 4 == 0;
        const BoardGeometry g = small ? mini : kStandardBoard;
        std::vector<int> cells(static_cast<std::size_t>(g.cell_count()));
        for (auto& v : cells) v = static_cast<int>(rng() % 6);
        SeededRandom blinding_rng(static_cast<std::uint64_t>(i), "oracle");
        const auto tree = merkle::build_tree(cells, blinding_rng, g);
        std::vector<oracle::Bytes> blindings;
        for (std::size_t k = 0; k < cells.size(); ++k) blindings.push_back(tree.leaves()[k].blinding->bytes());
        const auto oracle_root = oracle::full_root(cells, blindings, static_cast<std::size_t>(g.leaf_count()));
        const bool roots_match = oracle::Bytes(tree.root().begin(), tree.root().end()) == oracle_root;

        const int cell = static_cast<int>(rng() % static_cast<std::uint64_t>(g.cell_count()));
        auto proof = merkle::prove_cell(tree, cell);
        const int claimed = rng() % 2 ? proof.leaf.ship_size : static_cast<int>((proof.leaf.ship_size + 1 + rng() % 5) % 6);
        proof.leaf.ship_size = claimed;

        auto changed = cells;
        changed[static_cast<std::size_t>(cell)] = claimed;
        const bool oracle_says = oracle::full_root(changed, blindings, static_cast<std::size_t>(g.leaf_count())) ==
                                 oracle_root;
        const bool ok = roots_match && merkle::verify_proof(tree.root(), proof, g) == oracle_says;
        agree += ok;
        c.expect(ok, "probe " + std::to_string(i) + " disagrees");
    }
    c.detail << "miniature: " << brute.size() << " layouts by brute force, validate_fleet accepts " << accepted.size()
             << ", audit accepts " << audited.size() << " of " << boards << " boards; Merkle agrees with recompute on "
             << agree << "/" << kProbes << " probes";
}

// --- event-sourced replay -------------------------------------------------

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& tag)
        : path(std::filesystem::temp_directory_path() / ("seabattle-accept-" + std::to_string(::getpid()) + "-" + tag)) {
        std::filesystem::remove_all(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

struct Seat {
    service::Session session;
    seabattle::testing::WireClient client;
};

int drive(service::GameService& svc, std::vector<Seat*> seats, int max_moves) {
    int moves = 0;
    while (moves < max_moves) {
        bool moved = false;
        for (auto* seat : seats) {
            const auto view = svc.get_state(seat->session.game_id, seat->session.token);
            if (view.contains("verdict")) return moves;
            if (auto act = seat->client.next_action(view)) {
                svc.submit_action(seat->session.game_id, seat->session.token, *act);
                moved = true;
                if (++moves >= max_moves) break;
            }
        }
        if (!moved) break;
    }
    return moves;
}

std::vector<nlohmann::json> actions_of(const std::vector<nlohmann::json>& events) {
    std::vector<nlohmann::json> out;
    for (const auto& e : events) out.push_back(e.value("action", nlohmann::json()));
    return out;
}

void event_sourced_replay(Check& c) {
    const service::GameConfig config;
    int identical = 0;
    int restarts = 0;
    constexpr int kFixtures = 6;
    for (int f = 0; f < kFixtures; ++f) {
        const std::uint64_t seed_a = 100 + 2 * f, seed_b = 101 + 2 * f;
        auto ids = [f] { return std::make_shared<SeededRandom>(static_cast<std::uint64_t>(f), "ids"); };

        TempDir ref_dir("ref" + std::to_string(f));
        nlohmann::json ref_state;
        std::vector<nlohmann::json> ref_actions;
        {
            service::GameService svc({ref_dir.path, ids()});
            Seat a{svc.create_game(config), {seed_a, config}};
            Seat b{svc.join_game(a.session.game_id), {seed_b, config}};
            svc.advance_clock(a.session.game_id, 3);
            drive(svc, {&a, &b}, 100000);
            ref_state = codec::encode_state(svc.snapshot(a.session.game_id));
            ref_actions = actions_of(svc.events(a.session.game_id));
        }

        // Same match, with the service restarted at several points.
        TempDir dir("run" + std::to_string(f));
        Seat a{{}, {seed_a, config}};
        Seat b{{}, {seed_b, config}};
        {
            service::GameService svc({dir.path, ids()});
            a.session = svc.create_game(config);
            b.session = svc.join_game(a.session.game_id);
            svc.advance_clock(a.session.game_id, 3);
        }
        bool consistent = true;
        for (int leg = 0;; ++leg) {
            service::GameService svc({dir.path, nullptr});
            ++restarts;
            // Folding the log must reproduce what the previous process held.
            const auto& id = a.session.game_id;
            consistent &= svc.snapshot(id).clock >= 3;
            const int moves = drive(svc, {&a, &b}, 7 + 5 * f + leg);
            if (moves == 0 || svc.snapshot(id).finished()) {
                const bool same_state = codec::encode_state(svc.snapshot(id)) == ref_state;
                const bool same_actions = actions_of(svc.events(id)) == ref_actions;
                c.expect(same_state, "fixture " + std::to_string(f) + ": final state differs");
                c.expect(same_actions, "fixture " + std::to_string(f) + ": event stream differs");
                identical += same_state && same_actions && consistent;
                break;
            }
            const auto before = codec::encode_state(svc.snapshot(id));
            service::GameService reread({dir.path, nullptr});
            const bool folded = codec::encode_state(reread.snapshot(id)) == before;
            c.expect(folded, "fixture " + std::to_string(f) + ": folded state differs after leg " + std::to_string(leg));
            consistent &= folded;
        }
    }
    c.detail << identical << "/" << kFixtures << " restarted matches (" << restarts
             << " process restarts) finished identical to the uninterrupted fixture";
}

// --- progress -------------------------------------------------------------

/// Every action a player could send in the miniature game, honest or not.
class MiniatureAlphabet {
public:
    MiniatureAlphabet() {
        const std::vector<std::vector<int>> boards{{2, 2, 0, 0}, {2, 0, 0, 2}};  // second is bent
        for (const auto& p : players_) {
            for (std::size_t k = 0; k < boards.size(); ++k) {
                SeededRandom rng(k, "explore-" + p.value);
                auto tree = merkle::build_tree(boards[k], rng, rules_.geometry);
                by_root_.emplace(tree.root(), trees_.size());
                owned_[p].push_back(trees_.size());
                trees_.push_back(std::move(tree));
            }
        }
    }

    const arbiter::GameRules& rules() const { return rules_; }
    const std::vector<PlayerId>& players() const { return players_; }

    std::vector<arbiter::Action> actions(const ArbiterState& s) const {
        std::vector<arbiter::Action> out;
        for (const auto& p : players_) {
            out.push_back(arbiter::Register{p, 100});
            out.push_back(arbiter::Register{p, 50});
            for (auto t : owned_.at(p)) out.push_back(arbiter::CommitRoot{p, trees_[t].root()});
            for (int cell = 0; cell < 4; ++cell) {
                out.push_back(arbiter::FirstShot{p, rules::Coordinate::from_index(cell, rules_.geometry)});
            }
            out.push_back(arbiter::TimeoutClaim{p});
            if (s.phase.pending_target) {
                for (const auto& proof : candidate_proofs(s, p, *s.phase.pending_target)) {
                    for (int cell = 0; cell <= 4; ++cell) {
                        const auto next = cell < 4 ? rules::Coordinate::from_index(cell, rules_.geometry)
                                                   : rules::Coordinate{5, 5};
                        out.push_back(arbiter::PlayTurn{p, proof, next});
                    }
                }
            }
            if (const auto* tree = committed(s, p)) {
                arbiter::RevealBoard full{p, {}};
                for (int cell = 0; cell < 4; ++cell) {
                    if (!s.reveals.contains(p) || !s.reveals.at(p).contains(cell)) {
                        full.proofs.push_back(merkle::prove_cell(*tree, cell));
                    }
                }
                if (!full.proofs.empty()) {
                    auto partial = full;
                    partial.proofs.pop_back();
                    out.push_back(partial);
                }
                out.push_back(std::move(full));
            }
        }
        out.push_back(arbiter::AdvanceClock{1});
        out.push_back(arbiter::Settle{});
        return out;
    }

private:
    const merkle::BoardTree* committed(const ArbiterState& s, const PlayerId& p) const {
        const auto it = s.roots.find(p);
        return it == s.roots.end() ? nullptr : &trees_[by_root_.at(it->second)];
    }

    std::vector<merkle::MerkleProof> candidate_proofs(const ArbiterState& s, const PlayerId& p, int cell) const {
        std::vector<merkle::MerkleProof> out;
        for (auto t : owned_.at(p)) out.push_back(merkle::prove_cell(trees_[t], cell));  // honest or swapped board
        if (const auto* tree = committed(s, p)) {
            auto forged = merkle::prove_cell(*tree, cell);
            forged.leaf.ship_size = forged.leaf.ship_size == 0 ? 2 : 0;
            out.push_back(forged);
        }
        return out;
    }

    arbiter::GameRules rules_{{2, 2}, rules::FleetSpec{{2}}, 2};
    std::vector<PlayerId> players_{PlayerId{"A"}, PlayerId{"B"}};
    std::vector<merkle::BoardTree> trees_;
    std::map<Digest, std::size_t> by_root_;
    std::map<PlayerId, std::vector<std::size_t>> owned_;
};

// Compact identity of a state for the explorer; equivalent to comparing the
// full encoded state, minus the absolute clock (see below).
std::string state_key(const ArbiterState& s) {
    std::string k;
    k += std::to_string(static_cast<int>(s.phase.kind)) + "|" + (s.phase.player ? s.phase.player->value : "-") + "|" +
         std::to_string(s.phase.pending_target.value_or(-1)) + "|" + std::to_string(s.deadline - s.clock) + "|" +
         std::to_string(s.pot) + "|";
    for (const auto& p : s.players) k += p.value + ":" + std::to_string(s.deposits.at(p)) + ",";
    for (const auto& [p, root] : s.roots) k += p.value + "=" + std::string(root.begin(), root.begin() + 8);
    for (const auto& [p, cells] : s.reveals) {
        k += "|" + p.value;
        for (const auto& [cell, v] : cells) k += std::to_string(cell) + std::to_string(v);
    }
    k += "|";
    for (const auto& r : s.shot_log) k += r.shooter.value + std::to_string(r.target);
    return k;
}

void progress(Check& c) {
    const MiniatureAlphabet alphabet;
    std::unordered_map<std::string, std::size_t> index;
    std::vector<ArbiterState> states;
    std::vector<std::vector<std::size_t>> edges;
    std::deque<std::size_t> queue;
    std::set<std::string> verdicts;
    std::size_t finishing = 0;

    // Every finished state collapses into one terminal node (index 0).
    states.emplace_back();
    edges.emplace_back();

    // Rules only ever compare the clock with the deadline, and every deadline
    // is set relative to the clock, so states differing by a shift of both are
    // equivalent. Keying on the difference keeps the space finite.
    auto intern = [&](const ArbiterState& s) -> std::size_t {
        if (s.finished()) {
            const auto& v = *s.phase.verdict;
            verdicts.insert(std::string(arbiter::to_string(v.kind)) +
                            (v.reason ? "/" + std::string(arbiter::to_string(*v.reason)) : ""));
            ++finishing;
            return 0;
        }
        const auto [it, fresh] = index.emplace(state_key(s), states.size());
        if (fresh) {
            states.push_back(s);
            edges.emplace_back();
            queue.push_back(it->second);
        }
        return it->second;
    };

    intern(arbiter::new_game(alphabet.rules()));
    std::size_t transitions = 0;
    std::size_t stuck = 0;
    while (!queue.empty()) {
        const auto id = queue.front();
        queue.pop_front();
        const ArbiterState s = states[id];

        bool enabled = false;
        for (const auto& action : alphabet.actions(s)) {
            const bool is_tick = std::holds_alternative<arbiter::AdvanceClock>(action);
            // Past the deadline (and before any deadline exists) further ticks
            // cannot enable anything new, so the clock is not explored there.
            if (is_tick && (s.phase.kind == arbiter::PhaseKind::registration || s.clock >= s.deadline)) continue;
            try {
                auto step = arbiter::apply(s, action);
                ++transitions;
                if (!is_tick) enabled = true;
                const auto next = intern(step.state);  // may grow `edges`
                edges[id].push_back(next);
            } catch (const arbiter::RejectedAction&) {
            }
        }

        bool claim = false;
        if (s.phase.kind != arbiter::PhaseKind::registration) {
            const auto later = s.clock < s.deadline ? arbiter::tick(s, s.deadline - s.clock) : s;
            for (const auto& p : alphabet.players()) {
                try {
                    arbiter::timeout_claim(later, p);
                    claim = true;
                } catch (const arbiter::RejectedAction&) {
                }
            }
        }
        if (!enabled && !claim) {
            ++stuck;
            c.expect(false, "stuck state: " + codec::encode_state(s).dump());
        }
    }

    // Every explored state can still reach the terminal node.
    std::vector<std::vector<std::size_t>> reverse(states.size());
    for (std::size_t u = 0; u < states.size(); ++u) {
        for (auto v : edges[u]) reverse[v].push_back(u);
    }
    std::vector<bool> reaches(states.size(), false);
    reaches[0] = true;
    std::deque<std::size_t> back{0};
    while (!back.empty()) {
        const auto v = back.front();
        back.pop_front();
        for (auto u : reverse[v]) {
            if (!reaches[u]) {
                reaches[u] = true;
                back.push_back(u);
            }
        }
    }
    const auto dead_ends = static_cast<std::size_t>(std::count(reaches.begin(), reaches.end(), false));
    c.expect(dead_ends == 0, std::to_string(dead_ends) + " states cannot reach a finished state");
    c.expect(verdicts.size() == 5, "expected all five verdict kinds to be reachable");

    c.detail << states.size() - 1 << " live states, " << transitions << " transitions (" << finishing
             << " finishing); " << stuck << " without a legal action or reachable timeout claim, " << dead_ends
             << " unable to finish; verdicts reached:";
    for (const auto& v : verdicts) c.detail << " " << v;
}

}  // namespace

int main() {
    report("cheat matrix", cheat_matrix);
    report("honest completion", honest_completion);
    report("commitment binding and hiding", binding_and_hiding);
    report("cost formulas", cost_formulas);
    report("oracle equivalence", oracle_equivalence);
    report("event-sourced replay", event_sourced_replay);
    report("progress (no deadlock)", progress);
    std::cout << (failed == 0 ? "all acceptance criteria passed" : std::to_string(failed) + " criteria failed") << "\n";
    return failed == 0 ? 0 : 1;
}
