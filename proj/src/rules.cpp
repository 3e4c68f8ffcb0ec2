#include "seabattle/rules.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace seabattle::rules {

std::string Coordinate::label() const {
    std::string s(1, static_cast<char>('A' + row));
    s += std::to_string(col + 1);
    return s;
}

Coordinate Coordinate::parse(std::string_view label) {
    if (label.size() < 2) throw std::invalid_argument("bad coordinate: " + std::string(label));
    const char letter = static_cast<char>(std::toupper(static_cast<unsigned char>(label[0])));
    if (letter < 'A' || letter > 'P') throw std::invalid_argument("bad coordinate row: " + std::string(label));
    int number = 0;
    for (char c : label.substr(1)) {
        if (c < '0' || c > '9') throw std::invalid_argument("bad coordinate column: " + std::string(label));
        number = number * 10 + (c - '0');
    }
    if (number < 1 || number > 16) throw std::invalid_argument("bad coordinate column: " + std::string(label));
    return {letter - 'A', number - 1};
}

std::vector<Coordinate> Placement::cells() const {
    std::vector<Coordinate> out;
    out.reserve(static_cast<std::size_t>(std::max(size, 0)));
    for (int k = 0; k < size; ++k) {
        if (orientation == Orientation::horizontal) {
            out.push_back({origin.row, origin.col + k});
        } else {
            out.push_back({origin.row + k, origin.col});
        }
    }
    return out;
}

bool Placement::in_bounds(const BoardGeometry& g) const {
    if (size < 1) return false;
    const auto c = cells();
    return std::all_of(c.begin(), c.end(), [&](const Coordinate& x) { return x.in_bounds(g); });
}

void FleetSpec::check() const {
    if (sizes.empty()) throw std::invalid_argument("fleet spec is empty");
    for (int s : sizes) {
        if (s < 1 || s > 10) throw std::invalid_argument("fleet ship size out of range: " + std::to_string(s));
    }
}

int FleetSpec::multiplicity(int size) const {
    return static_cast<int>(std::count(sizes.begin(), sizes.end(), size));
}

int total_ship_cells(const FleetSpec& spec) {
    return std::accumulate(spec.sizes.begin(), spec.sizes.end(), 0);
}

int BoardLayout::occupied_count() const {
    return static_cast<int>(std::count_if(cells.begin(), cells.end(), [](int v) { return v != 0; }));
}

BoardLayout validate_fleet(std::span<const Placement> placements, const FleetSpec& spec,
                           const BoardGeometry& geometry) {
    geometry.check();
    spec.check();

    std::multiset<int> remaining(spec.sizes.begin(), spec.sizes.end());
    for (std::size_t i = 0; i < placements.size(); ++i) {
        auto it = remaining.find(placements[i].size);
        if (it == remaining.end()) {
            throw FleetError(FleetError::Kind::size_mismatch, i,
                             "placement " + std::to_string(i) + ": no ship of size " +
                                 std::to_string(placements[i].size) + " left in the fleet");
        }
        remaining.erase(it);
    }
    if (!remaining.empty()) {
        throw FleetError(FleetError::Kind::size_mismatch, std::nullopt,
                         "fleet incomplete: missing ship of size " + std::to_string(*remaining.begin()));
    }

    BoardLayout layout{geometry, std::vector<int>(static_cast<std::size_t>(geometry.cell_count()), 0)};
    std::vector<int> owner(layout.cells.size(), -1);
    for (std::size_t i = 0; i < placements.size(); ++i) {
        const Placement& p = placements[i];
        if (!p.in_bounds(geometry)) {
            throw FleetError(FleetError::Kind::out_of_bounds, i,
                             "placement " + std::to_string(i) + " at " + p.origin.label() + " leaves the board");
        }
        for (const Coordinate& c : p.cells()) {
            const auto idx = static_cast<std::size_t>(c.index(geometry));
            if (owner[idx] >= 0) {
                throw FleetError(FleetError::Kind::overlap, i,
                                 "placement " + std::to_string(i) + " overlaps placement " +
                                     std::to_string(owner[idx]) + " at " + c.label());
            }
            owner[idx] = static_cast<int>(i);
            layout.cells[idx] = p.size;
        }
    }
    return layout;
}

std::string_view to_string(ShotOutcome::Kind kind) {
    switch (kind) {
        case ShotOutcome::Kind::miss: return "miss";
        case ShotOutcome::Kind::hit: return "hit";
        case ShotOutcome::Kind::sunk: return "sunk";
        case ShotOutcome::Kind::fleet_sunk: return "fleet_sunk";
    }
    return "unknown";
}

ShotOutcome classify_reveal(int value, int prior_hits_same_value, int prior_hits_total,
                            const FleetSpec& spec) {
    if (value == 0) return {ShotOutcome::Kind::miss, 0};
    if (prior_hits_total + 1 >= total_ship_cells(spec)) return {ShotOutcome::Kind::fleet_sunk, value};
    // Leaves carry only the size, so sinking is identifiable only for unique sizes.
    if (spec.multiplicity(value) == 1 && prior_hits_same_value + 1 == value) {
        return {ShotOutcome::Kind::sunk, value};
    }
    return {ShotOutcome::Kind::hit, value};
}

ShotOutcome resolve_shot(const BoardLayout& layout, const std::set<int>& revealed_hits,
                         const Coordinate& target, const FleetSpec& spec) {
    const int value = layout.at(target);
    int same = 0;
    int total = 0;
    for (int idx : revealed_hits) {
        if (idx == target.index(layout.geometry)) continue;
        const int v = layout.cells[static_cast<std::size_t>(idx)];
        if (v == 0) continue;
        ++total;
        if (v == value) ++same;
    }
    return classify_reveal(value, same, total, spec);
}

std::string_view to_string(AuditResult::Reason reason) {
    switch (reason) {
        case AuditResult::Reason::none: return "valid";
        case AuditResult::Reason::wrong_board_size: return "wrong_board_size";
        case AuditResult::Reason::extra_occupied: return "extra_occupied";
        case AuditResult::Reason::wrong_cell_count: return "wrong_cell_count";
        case AuditResult::Reason::bent_ship: return "bent_ship";
        case AuditResult::Reason::disconnected_run: return "disconnected_run";
    }
    return "unknown";
}

namespace {

// Covers every cell of `group` (indices holding value `size`) with straight
// runs of length `size`. The lowest uncovered cell must start a run.
bool partition_runs(std::vector<int>& group_mask, const BoardGeometry& g, int size,
                    std::vector<Placement>& out) {
    const auto first = std::find(group_mask.begin(), group_mask.end(), 1);
    if (first == group_mask.end()) return true;
    const Coordinate origin = Coordinate::from_index(static_cast<int>(first - group_mask.begin()), g);
    for (Orientation o : {Orientation::horizontal, Orientation::vertical}) {
        if (size == 1 && o == Orientation::vertical) break;
        const Placement p{size, origin, o};
        if (!p.in_bounds(g)) continue;
        const auto cells = p.cells();
        const bool fits = std::all_of(cells.begin(), cells.end(), [&](const Coordinate& c) {
            return group_mask[static_cast<std::size_t>(c.index(g))] == 1;
        });
        if (!fits) continue;
        for (const auto& c : cells) group_mask[static_cast<std::size_t>(c.index(g))] = 0;
        out.push_back(p);
        if (partition_runs(group_mask, g, size, out)) return true;
        out.pop_back();
        for (const auto& c : cells) group_mask[static_cast<std::size_t>(c.index(g))] = 1;
    }
    return false;
}

}  // namespace

AuditResult audit_revealed_board(std::span<const int> cells, const FleetSpec& spec,
                                 const BoardGeometry& geometry) {
    AuditResult result;
    if (static_cast<int>(cells.size()) != geometry.cell_count()) {
        result.reason = AuditResult::Reason::wrong_board_size;
        result.detail = "expected " + std::to_string(geometry.cell_count()) + " cells";
        return result;
    }

    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i] != 0 && spec.multiplicity(cells[i]) == 0) {
            result.reason = AuditResult::Reason::extra_occupied;
            result.detail = "cell " + Coordinate::from_index(static_cast<int>(i), geometry).label() +
                            " holds value " + std::to_string(cells[i]) + " not in the fleet";
            return result;
        }
    }

    std::set<int> distinct(spec.sizes.begin(), spec.sizes.end());
    std::vector<Placement> placements;
    for (int size : distinct) {
        std::vector<int> mask(cells.size(), 0);
        std::vector<Coordinate> members;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (cells[i] == size) {
                mask[i] = 1;
                members.push_back(Coordinate::from_index(static_cast<int>(i), geometry));
            }
        }
        const int expected = size * spec.multiplicity(size);
        if (static_cast<int>(members.size()) != expected) {
            result.reason = members.size() > static_cast<std::size_t>(expected)
                                ? AuditResult::Reason::extra_occupied
                                : AuditResult::Reason::wrong_cell_count;
            result.detail = "size " + std::to_string(size) + ": " + std::to_string(members.size()) +
                            " cells, expected " + std::to_string(expected);
            return result;
        }
        std::vector<Placement> runs;
        if (!partition_runs(mask, geometry, size, runs)) {
            const bool one_line =
                std::all_of(members.begin(), members.end(), [&](const Coordinate& c) { return c.row == members[0].row; }) ||
                std::all_of(members.begin(), members.end(), [&](const Coordinate& c) { return c.col == members[0].col; });
            result.reason = one_line ? AuditResult::Reason::disconnected_run : AuditResult::Reason::bent_ship;
            result.detail = "size " + std::to_string(size) + " cells do not form straight runs";
            return result;
        }
        placements.insert(placements.end(), runs.begin(), runs.end());
    }

    result.placements = std::move(placements);
    return result;
}

BoardLayout parse_layout(std::string_view text, const BoardGeometry& geometry) {
    geometry.check();
    BoardLayout layout{geometry, {}};
    layout.cells.reserve(static_cast<std::size_t>(geometry.cell_count()));
    int rows = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (static_cast<int>(line.size()) != geometry.cols) {
            throw std::invalid_argument("layout row " + std::to_string(rows + 1) + " has " +
                                        std::to_string(line.size()) + " columns");
        }
        for (char c : line) {
            if (c == '.') {
                layout.cells.push_back(0);
            } else if (c >= '1' && c <= '9') {
                layout.cells.push_back(c - '0');
            } else {
                throw std::invalid_argument(std::string("invalid layout character '") + c + "'");
            }
        }
        ++rows;
    }
    if (rows != geometry.rows) {
        throw std::invalid_argument("layout has " + std::to_string(rows) + " rows, expected " +
                                    std::to_string(geometry.rows));
    }
    return layout;
}

std::string format_layout(const BoardLayout& layout) {
    std::string out;
    for (int r = 0; r < layout.geometry.rows; ++r) {
        for (int c = 0; c < layout.geometry.cols; ++c) {
            const int v = layout.at({r, c});
            out.push_back(v == 0 ? '.' : static_cast<char>('0' + v));
        }
        out.push_back('\n');
    }
    return out;
}

std::vector<Placement> reference_placements() {
    return {
        {3, Coordinate::parse("A1"), Orientation::vertical},
        {4, Coordinate::parse("D3"), Orientation::horizontal},
        {5, Coordinate::parse("C8"), Orientation::vertical},
        {2, Coordinate::parse("F2"), Orientation::horizontal},
        {1, Coordinate::parse("G5"), Orientation::horizontal},
    };
}

}  // namespace seabattle::rules
