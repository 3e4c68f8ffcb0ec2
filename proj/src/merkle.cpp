#include "seabattle/merkle.hpp"

#include <stdexcept>
#include <string>

namespace seabattle::merkle {

BlindingFactor::BlindingFactor(Bytes bytes) : bytes_(std::move(bytes)) {
    if (bytes_.size() < kMinBlindingBytes) {
        throw std::invalid_argument("blinding factor shorter than 16 bytes");
    }
    if (bytes_.size() > 255) throw std::invalid_argument("blinding factor longer than 255 bytes");
}

BlindingFactor BlindingFactor::generate(RandomSource& rng, std::size_t length) {
    Bytes bytes(length);
    rng.fill(bytes);
    return BlindingFactor(std::move(bytes));
}

Bytes encode_leaf(int ship_size, const std::optional<BlindingFactor>& blinding) {
    if (ship_size < 0 || ship_size > kMaxShipSize) {
        throw std::invalid_argument("ship size out of range: " + std::to_string(ship_size));
    }
    const std::size_t blen = blinding ? blinding->bytes().size() : 0;
    Bytes out(1 + blen);
    out[0] = static_cast<Byte>(ship_size);
    if (blinding) std::copy(blinding->bytes().begin(), blinding->bytes().end(), out.begin() + 1);
    return out;
}

Bytes encode_leaf(const LeafData& leaf) { return encode_leaf(leaf.ship_size, leaf.blinding); }

Digest leaf_digest(ByteSpan encoded_leaf, const Hasher& hasher) {
    Bytes buf;
    buf.reserve(encoded_leaf.size() + 1);
    buf.push_back(kLeafPrefix);
    buf.insert(buf.end(), encoded_leaf.begin(), encoded_leaf.end());
    return hasher.hash(buf);
}

Digest node_digest(const Digest& left, const Digest& right, const Hasher& hasher) {
    std::array<Byte, 1 + 2 * kDigestSize> buf{};
    buf[0] = kNodePrefix;
    std::copy(left.begin(), left.end(), buf.begin() + 1);
    std::copy(right.begin(), right.end(), buf.begin() + 1 + kDigestSize);
    return hasher.hash(buf);
}

namespace {

void check_cells(std::span<const int> cells, const BoardGeometry& geometry) {
    geometry.check();
    if (static_cast<int>(cells.size()) != geometry.cell_count()) {
        throw std::invalid_argument("expected " + std::to_string(geometry.cell_count()) +
                                    " cells, got " + std::to_string(cells.size()));
    }
    for (int v : cells) {
        if (v < 0 || v > kMaxShipSize) {
            throw std::invalid_argument("cell value out of range: " + std::to_string(v));
        }
    }
}

}  // namespace

BoardTree build_tree(std::span<const int> cells, RandomSource& rng, BoardGeometry geometry,
                     const Hasher& hasher, std::size_t blinding_bytes) {
    check_cells(cells, geometry);
    std::vector<BlindingFactor> blindings;
    blindings.reserve(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        blindings.push_back(BlindingFactor::generate(rng, blinding_bytes));
    }
    return build_tree_with_blindings(cells, blindings, geometry, hasher);
}

BoardTree build_tree_with_blindings(std::span<const int> cells,
                                    std::span<const BlindingFactor> blindings,
                                    BoardGeometry geometry, const Hasher& hasher) {
    check_cells(cells, geometry);
    if (blindings.size() != cells.size()) {
        throw std::invalid_argument("one blinding factor per cell required");
    }

    BoardTree tree;
    tree.geometry_ = geometry;
    const int leaf_count = geometry.leaf_count();
    tree.leaves_.reserve(static_cast<std::size_t>(leaf_count));
    std::vector<Digest> level;
    level.reserve(static_cast<std::size_t>(leaf_count));
    for (int i = 0; i < leaf_count; ++i) {
        LeafData leaf{i, 0, std::nullopt};
        if (i < geometry.cell_count()) {
            leaf.ship_size = cells[static_cast<std::size_t>(i)];
            leaf.blinding = blindings[static_cast<std::size_t>(i)];
        }
        level.push_back(leaf_digest(encode_leaf(leaf), hasher));
        tree.leaves_.push_back(std::move(leaf));
    }

    tree.levels_.push_back(std::move(level));
    while (tree.levels_.back().size() > 1) {
        const auto& below = tree.levels_.back();
        std::vector<Digest> above;
        above.reserve(below.size() / 2);
        for (std::size_t i = 0; i < below.size(); i += 2) {
            above.push_back(node_digest(below[i], below[i + 1], hasher));
        }
        tree.levels_.push_back(std::move(above));
    }
    return tree;
}

MerkleProof prove_cell(const BoardTree& tree, int cell_index) {
    if (cell_index < 0 || cell_index >= tree.geometry().cell_count()) {
        throw std::out_of_range("cell index out of range: " + std::to_string(cell_index));
    }
    MerkleProof proof;
    proof.cell_index = cell_index;
    proof.leaf = tree.leaves()[static_cast<std::size_t>(cell_index)];
    std::size_t pos = static_cast<std::size_t>(cell_index);
    for (std::size_t level = 0; level + 1 < tree.levels().size(); ++level) {
        proof.siblings.push_back(tree.levels()[level][pos ^ 1U]);
        pos >>= 1U;
    }
    return proof;
}

std::optional<Digest> implied_root(const MerkleProof& proof, BoardGeometry geometry,
                                   const Hasher& hasher) {
    if (!geometry.valid()) return std::nullopt;
    if (static_cast<int>(proof.siblings.size()) != geometry.depth()) return std::nullopt;
    if (proof.cell_index < 0 || proof.cell_index >= geometry.leaf_count()) return std::nullopt;
    if (proof.leaf.cell_index != proof.cell_index) return std::nullopt;
    if (proof.leaf.ship_size < 0 || proof.leaf.ship_size > kMaxShipSize) return std::nullopt;
    const bool board_cell = proof.cell_index < geometry.cell_count();
    if (board_cell != proof.leaf.blinding.has_value()) return std::nullopt;
    if (!board_cell && proof.leaf.ship_size != 0) return std::nullopt;

    Digest acc = leaf_digest(encode_leaf(proof.leaf), hasher);
    auto index = static_cast<unsigned>(proof.cell_index);
    for (const Digest& sibling : proof.siblings) {
        acc = (index & 1U) ? node_digest(sibling, acc, hasher) : node_digest(acc, sibling, hasher);
        index >>= 1U;
    }
    return acc;
}

bool verify_proof(const Digest& root, const MerkleProof& proof, BoardGeometry geometry,
                  const Hasher& hasher) {
    const auto computed = implied_root(proof, geometry, hasher);
    return computed.has_value() && *computed == root;
}

Bytes serialize_proof(const MerkleProof& proof) {
    if (proof.cell_index < 0 || proof.cell_index > 255) {
        throw std::invalid_argument("cell index does not fit in one byte");
    }
    Bytes out;
    const std::size_t blen = proof.leaf.blinding ? proof.leaf.blinding->size() : 0;
    out.reserve(3 + blen + proof.siblings.size() * kDigestSize);
    out.push_back(static_cast<Byte>(proof.cell_index));
    out.push_back(static_cast<Byte>(proof.leaf.ship_size));
    out.push_back(static_cast<Byte>(blen));
    if (proof.leaf.blinding) {
        const auto& b = proof.leaf.blinding->bytes();
        out.insert(out.end(), b.begin(), b.end());
    }
    for (const Digest& d : proof.siblings) out.insert(out.end(), d.begin(), d.end());
    return out;
}

MerkleProof parse_proof(ByteSpan bytes, BoardGeometry geometry) {
    geometry.check();
    if (bytes.size() < 3) throw std::invalid_argument("proof too short");
    const std::size_t blen = bytes[2];
    const std::size_t expected = 3 + blen + static_cast<std::size_t>(geometry.depth()) * kDigestSize;
    if (bytes.size() != expected) {
        throw std::invalid_argument("proof has " + std::to_string(bytes.size()) +
                                    " bytes, expected " + std::to_string(expected));
    }
    MerkleProof proof;
    proof.cell_index = bytes[0];
    proof.leaf.cell_index = bytes[0];
    proof.leaf.ship_size = bytes[1];
    if (blen > 0) {
        proof.leaf.blinding = BlindingFactor(Bytes(bytes.begin() + 3, bytes.begin() + 3 + static_cast<std::ptrdiff_t>(blen)));
    }
    for (std::size_t off = 3 + blen; off < bytes.size(); off += kDigestSize) {
        proof.siblings.push_back(digest_from_bytes(bytes.subspan(off, kDigestSize)));
    }
    return proof;
}

std::size_t serialized_proof_size(BoardGeometry geometry, std::size_t blinding_bytes) {
    return 3 + blinding_bytes + static_cast<std::size_t>(geometry.depth()) * kDigestSize;
}

}  // namespace seabattle::merkle
