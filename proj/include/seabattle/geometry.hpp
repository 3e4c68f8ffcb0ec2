#pragma once

#include <cstddef>
#include <stdexcept>

namespace seabattle {

/// Board dimensions and the derived Merkle tree shape. Cells are numbered
/// row-major: index = row * cols + col. The tree is padded with empty
/// leaves up to the next power of two.
struct BoardGeometry {
    int rows = 10;
    int cols = 10;

    [[nodiscard]] constexpr int cell_count() const { return rows * cols; }

    [[nodiscard]] constexpr int leaf_count() const {
        int n = 2;
        while (n < cell_count()) n *= 2;
        return n;
    }

    [[nodiscard]] constexpr int depth() const {
        int d = 0;
        for (int n = leaf_count(); n > 1; n /= 2) ++d;
        return d;
    }

    [[nodiscard]] constexpr bool valid() const {
        // Cell indices travel as a single byte on the wire.
        return rows >= 1 && cols >= 1 && rows <= 16 && cols <= 16 && leaf_count() <= 256;
    }

    void check() const {
        if (!valid()) throw std::invalid_argument("unsupported board geometry");
    }

    friend constexpr bool operator==(const BoardGeometry&, const BoardGeometry&) = default;
};

inline constexpr BoardGeometry kStandardBoard{10, 10};
static_assert(kStandardBoard.leaf_count() == 128);
static_assert(kStandardBoard.depth() == 7);

}  // namespace seabattle
