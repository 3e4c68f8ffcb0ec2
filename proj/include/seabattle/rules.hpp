#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "seabattle/geometry.hpp"

namespace seabattle::rules {

/// Row is the letter (A..J), col the number (1..10) in the usual notation.
struct Coordinate {
    int row = 0;
    int col = 0;

    [[nodiscard]] int index(const BoardGeometry& g = kStandardBoard) const { return row * g.cols + col; }
    [[nodiscard]] bool in_bounds(const BoardGeometry& g = kStandardBoard) const {
        return row >= 0 && row < g.rows && col >= 0 && col < g.cols;
    }
    static Coordinate from_index(int index, const BoardGeometry& g = kStandardBoard) {
        return {index / g.cols, index % g.cols};
    }
    /// "E5" style label.
    [[nodiscard]] std::string label() const;
    static Coordinate parse(std::string_view label);

    friend constexpr auto operator<=>(const Coordinate&, const Coordinate&) = default;
};

enum class Orientation { horizontal, vertical };

struct Placement {
    int size = 1;
    Coordinate origin;
    Orientation orientation = Orientation::horizontal;

    [[nodiscard]] std::vector<Coordinate> cells() const;
    [[nodiscard]] bool in_bounds(const BoardGeometry& g = kStandardBoard) const;

    friend bool operator==(const Placement&, const Placement&) = default;
};

/// Multiset of ship sizes.
struct FleetSpec {
    std::vector<int> sizes{1, 2, 3, 4, 5};

    static FleetSpec standard() { return {}; }

    void check() const;
    /// Number of ships of the given size.
    [[nodiscard]] int multiplicity(int size) const;

    friend bool operator==(const FleetSpec&, const FleetSpec&) = default;
};

int total_ship_cells(const FleetSpec& spec);

/// Ship-size value per cell, 0 = empty.
struct BoardLayout {
    BoardGeometry geometry = kStandardBoard;
    std::vector<int> cells = std::vector<int>(100, 0);

    [[nodiscard]] int at(const Coordinate& c) const { return cells[static_cast<std::size_t>(c.index(geometry))]; }
    [[nodiscard]] int occupied_count() const;

    friend bool operator==(const BoardLayout&, const BoardLayout&) = default;
};

class FleetError : public std::invalid_argument {
public:
    enum class Kind { size_mismatch, out_of_bounds, overlap };

    FleetError(Kind kind, std::optional<std::size_t> placement, const std::string& what)
        : std::invalid_argument(what), kind_(kind), placement_(placement) {}

    [[nodiscard]] Kind kind() const { return kind_; }
    /// Index into the placement list, absent when a required size is missing.
    [[nodiscard]] std::optional<std::size_t> placement() const { return placement_; }

private:
    Kind kind_;
    std::optional<std::size_t> placement_;
};

BoardLayout validate_fleet(std::span<const Placement> placements, const FleetSpec& spec = {},
                           const BoardGeometry& geometry = kStandardBoard);

struct ShotOutcome {
    enum class Kind { miss, hit, sunk, fleet_sunk };
    Kind kind = Kind::miss;
    int ship_size = 0;

    friend bool operator==(const ShotOutcome&, const ShotOutcome&) = default;
};

std::string_view to_string(ShotOutcome::Kind kind);

/// Outcome of revealing `value` given counts of previously revealed occupied
/// cells. Sinking is reported only for sizes that occur once in the fleet.
ShotOutcome classify_reveal(int value, int prior_hits_same_value, int prior_hits_total,
                            const FleetSpec& spec);

/// Outcome of a shot at `target`, where revealed_hits holds the indices of
/// this board's cells already revealed as hits.
ShotOutcome resolve_shot(const BoardLayout& layout, const std::set<int>& revealed_hits,
                         const Coordinate& target, const FleetSpec& spec = {});

struct AuditResult {
    enum class Reason { none, wrong_board_size, extra_occupied, wrong_cell_count, bent_ship, disconnected_run };

    Reason reason = Reason::none;
    std::string detail;
    std::vector<Placement> placements;  // reconstruction when valid

    [[nodiscard]] bool valid() const { return reason == Reason::none; }
};

std::string_view to_string(AuditResult::Reason reason);

/// Checks that a fully revealed board holds exactly the fleet as straight
/// consecutive runs and nothing else.
AuditResult audit_revealed_board(std::span<const int> cells, const FleetSpec& spec = {},
                                 const BoardGeometry& geometry = kStandardBoard);

/// Text layout: one line per row, '.' for empty, digit for ship size.
BoardLayout parse_layout(std::string_view text, const BoardGeometry& geometry = kStandardBoard);
std::string format_layout(const BoardLayout& layout);

/// The example board: size-3 at A1-C1, size-4 at D3-D6, size-5 at C8-G8,
/// size-2 at F2-F3 and size-1 at G5.
std::vector<Placement> reference_placements();

}  // namespace seabattle::rules
