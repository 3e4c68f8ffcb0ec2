// Offline match driver: runs scripted players through the arbiter and prints
// one report line per match.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "seabattle/codec.hpp"
#include "seabattle/simulator.hpp"

using namespace seabattle;

namespace {

struct MatchOptions {
    std::string script_a = "honest";
    std::string script_b = "honest";
    arbiter::Tick timeout_ticks = arbiter::kDefaultMoveWindow;
    arbiter::Amount deposit = 100;
    std::string report = "text";
};

void add_match_options(CLI::App* cmd, MatchOptions& o) {
    cmd->add_option("--script-a", o.script_a, "Script for the first seat (honest, location_changer, "
                                              "bad_fleet[:flaw], unresponsive[:k], fake_proof[:k])");
    cmd->add_option("--script-b", o.script_b, "Script for the second seat");
    cmd->add_option("--timeout-ticks", o.timeout_ticks, "Move window in logical ticks")->check(CLI::PositiveNumber);
    cmd->add_option("--deposit", o.deposit, "Stake per player")->check(CLI::PositiveNumber);
    cmd->add_option("--report", o.report, "Report format")->check(CLI::IsMember({"text", "json"}));
}

std::string text_line(const sim::MatchReport& r) {
    std::ostringstream out;
    out << "seed=" << r.seed << " a=" << sim::to_string(r.script_a) << " b=" << sim::to_string(r.script_b)
        << " verdict=" << arbiter::to_string(r.verdict.kind) << " winner=" << r.verdict.winner.value;
    if (r.verdict.reason) out << " reason=" << arbiter::to_string(*r.verdict.reason);
    out << " turns=" << r.turns << " payout=";
    for (std::size_t i = 0; i < r.ledger.size(); ++i) {
        out << (i ? "," : "") << r.ledger[i].to.value << ":" << r.ledger[i].amount;
    }
    return out.str();
}

void run_one(const MatchOptions& o, std::uint64_t seed) {
    sim::MatchConfig config;
    config.rules.move_window = o.timeout_ticks;
    config.deposit = o.deposit;
    const auto r = sim::run_match(sim::parse_script(o.script_a), sim::parse_script(o.script_b), seed, config);
    std::cout << (o.report == "json" ? sim::report_to_json(r).dump() : text_line(r)) << "\n";
}

std::pair<std::uint64_t, std::uint64_t> parse_range(const std::string& text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) throw CLI::ValidationError("--seeds", "expected a..b");
    const auto lo = std::stoull(text.substr(0, dots));
    const auto hi = std::stoull(text.substr(dots + 2));
    if (hi < lo) throw CLI::ValidationError("--seeds", "empty range");
    return {lo, hi};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Battleships arbiter simulator"};
    app.require_subcommand(1);

    MatchOptions run_opts;
    std::uint64_t seed = 0;
    auto* run = app.add_subcommand("run", "Play one match");
    add_match_options(run, run_opts);
    run->add_option("--seed", seed, "Match seed");

    MatchOptions sweep_opts;
    std::string seeds = "0..49";
    auto* sweep = app.add_subcommand("sweep", "Play one match per seed in an inclusive range");
    add_match_options(sweep, sweep_opts);
    sweep->add_option("--seeds", seeds, "Inclusive seed range a..b");

    std::string layout_file;
    auto* audit = app.add_subcommand("audit", "Check a layout file ('.' empty, digit = ship size)");
    audit->add_option("layout", layout_file, "Layout file")->required();

    std::string commit_file;
    std::uint64_t blinding_seed = 0;
    auto* commit = app.add_subcommand("commit", "Print the Merkle root of a layout file");
    commit->add_option("layout", commit_file, "Layout file")->required();
    commit->add_option("--blinding-seed", blinding_seed, "Seed for the blinding factors");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            run_one(run_opts, seed);
        } else if (sweep->parsed()) {
            const auto [lo, hi] = parse_range(seeds);
            for (auto s = lo; s <= hi; ++s) run_one(sweep_opts, s);
        } else if (audit->parsed()) {
            const auto layout = rules::parse_layout(read_file(layout_file));
            const auto result = rules::audit_revealed_board(layout.cells);
            std::cout << (result.valid() ? "valid" : "invalid: " + std::string(rules::to_string(result.reason)) +
                                                         (result.detail.empty() ? "" : " (" + result.detail + ")"))
                      << "\n";
            return result.valid() ? 0 : 1;
        } else if (commit->parsed()) {
            const auto layout = rules::parse_layout(read_file(commit_file));
            SeededRandom rng(blinding_seed, "commit");
            const auto tree = merkle::build_tree(layout.cells, rng);
            std::cout << to_hex(tree.root()) << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
