#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "seabattle/crypto.hpp"
#include "seabattle/geometry.hpp"

namespace seabattle::merkle {

inline constexpr int kMaxShipSize = 5;
inline constexpr std::size_t kMinBlindingBytes = 16;
inline constexpr std::size_t kDefaultBlindingBytes = 16;

inline constexpr Byte kLeafPrefix = 0x00;
inline constexpr Byte kNodePrefix = 0x01;

/// Per-cell randomness r concatenated to the cell value. At least 16 bytes.
class BlindingFactor {
public:
    explicit BlindingFactor(Bytes bytes);

    static BlindingFactor generate(RandomSource& rng, std::size_t length = kDefaultBlindingBytes);

    [[nodiscard]] const Bytes& bytes() const { return bytes_; }
    [[nodiscard]] std::size_t size() const { return bytes_.size(); }

    friend bool operator==(const BlindingFactor&, const BlindingFactor&) = default;

private:
    Bytes bytes_;
};

/// Content of one leaf. Board cells carry a blinding factor; padding leaves
/// (index >= cell count) are the bare value 0.
struct LeafData {
    int cell_index = 0;
    int ship_size = 0;
    std::optional<BlindingFactor> blinding;

    friend bool operator==(const LeafData&, const LeafData&) = default;
};

struct MerkleProof {
    int cell_index = 0;
    LeafData leaf;
    std::vector<Digest> siblings;  // leaf-to-root

    friend bool operator==(const MerkleProof&, const MerkleProof&) = default;
};

/// Blinded Merkle tree over a board. levels()[0] holds the leaf digests,
/// levels().back() the single root digest.
class BoardTree {
public:
    [[nodiscard]] const BoardGeometry& geometry() const { return geometry_; }
    [[nodiscard]] const std::vector<LeafData>& leaves() const { return leaves_; }
    [[nodiscard]] const std::vector<std::vector<Digest>>& levels() const { return levels_; }
    [[nodiscard]] const Digest& root() const { return levels_.back().front(); }

private:
    friend BoardTree build_tree_with_blindings(std::span<const int>, std::span<const BlindingFactor>,
                                               BoardGeometry, const Hasher&);

    BoardGeometry geometry_;
    std::vector<LeafData> leaves_;
    std::vector<std::vector<Digest>> levels_;
};

/// x || r: one ship-size byte followed by the blinding bytes, or the single
/// byte 0x00 for a padding leaf.
Bytes encode_leaf(int ship_size, const std::optional<BlindingFactor>& blinding);
Bytes encode_leaf(const LeafData& leaf);

Digest leaf_digest(ByteSpan encoded_leaf, const Hasher& hasher = sha256_hasher());
Digest node_digest(const Digest& left, const Digest& right, const Hasher& hasher = sha256_hasher());

/// Builds the tree with a fresh blinding factor per board cell drawn from rng.
BoardTree build_tree(std::span<const int> cells, RandomSource& rng,
                     BoardGeometry geometry = kStandardBoard,
                     const Hasher& hasher = sha256_hasher(),
                     std::size_t blinding_bytes = kDefaultBlindingBytes);

/// Builds the tree from an explicit blinding assignment (one per board cell).
BoardTree build_tree_with_blindings(std::span<const int> cells,
                                    std::span<const BlindingFactor> blindings,
                                    BoardGeometry geometry = kStandardBoard,
                                    const Hasher& hasher = sha256_hasher());

MerkleProof prove_cell(const BoardTree& tree, int cell_index);

/// Folds the leaf up through the siblings; bit k of cell_index selects
/// whether the running digest is the right (1) or left (0) child at level k.
/// Malformed proofs return false.
bool verify_proof(const Digest& root, const MerkleProof& proof,
                  BoardGeometry geometry = kStandardBoard,
                  const Hasher& hasher = sha256_hasher());

/// Recomputes the root implied by a proof, or nullopt if it is malformed.
std::optional<Digest> implied_root(const MerkleProof& proof, BoardGeometry geometry,
                                   const Hasher& hasher = sha256_hasher());

/// cell_index || ship_size || blinding length || blinding || siblings.
Bytes serialize_proof(const MerkleProof& proof);
MerkleProof parse_proof(ByteSpan bytes, BoardGeometry geometry = kStandardBoard);

std::size_t serialized_proof_size(BoardGeometry geometry = kStandardBoard,
                                  std::size_t blinding_bytes = kDefaultBlindingBytes);

}  // namespace seabattle::merkle
