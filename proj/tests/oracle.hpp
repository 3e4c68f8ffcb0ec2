#pragma once

// Test-only reference computations. Kept independent of the library's tree
// code: raw OpenSSL SHA-256 and a recursive root over the flat leaf list.

#include <openssl/sha.h>

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

namespace oracle {

using Bytes = std::vector<std::uint8_t>;

inline Bytes sha256(const Bytes& in) {
    Bytes out(SHA256_DIGEST_LENGTH);
    SHA256(in.data(), in.size(), out.data());
    return out;
}

/// Leaf content: size byte, then blinding (board cells only).
struct Leaf {
    int value = 0;
    Bytes blinding;
};

inline Bytes leaf_hash(const Leaf& leaf) {
    Bytes buf{0x00, static_cast<std::uint8_t>(leaf.value)};
    buf.insert(buf.end(), leaf.blinding.begin(), leaf.blinding.end());
    return sha256(buf);
}

inline Bytes subtree_root(const std::vector<Leaf>& leaves, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return leaf_hash(leaves[lo]);
    const std::size_t mid = lo + (hi - lo) / 2;
    Bytes buf{0x01};
    const Bytes l = subtree_root(leaves, lo, mid);
    const Bytes r = subtree_root(leaves, mid, hi);
    buf.insert(buf.end(), l.begin(), l.end());
    buf.insert(buf.end(), r.begin(), r.end());
    return sha256(buf);
}

/// Root of a full tree over `cells` padded with bare zero leaves to `leaf_count`.
inline Bytes full_root(const std::vector<int>& cells, const std::vector<Bytes>& blindings, std::size_t leaf_count) {
    std::vector<Leaf> leaves(leaf_count);
    for (std::size_t i = 0; i < cells.size(); ++i) leaves[i] = {cells[i], blindings[i]};
    return subtree_root(leaves, 0, leaf_count);
}

/// Every straight placement of `size` on a rows x cols board, as cell-index sets.
inline std::vector<std::set<int>> all_runs(int rows, int cols, int size) {
    std::vector<std::set<int>> out;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            std::set<int> h;
            std::set<int> v;
            for (int k = 0; k < size; ++k) {
                if (c + k < cols) h.insert(r * cols + c + k);
                if (r + k < rows) v.insert((r + k) * cols + c);
            }
            if (static_cast<int>(h.size()) == size) out.push_back(h);
            if (size > 1 && static_cast<int>(v.size()) == size) out.push_back(v);
        }
    }
    return out;
}

}  // namespace oracle
