#pragma once

#include <array>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace seabattle {

using Byte = std::uint8_t;
using Bytes = std::vector<Byte>;
using ByteSpan = std::span<const Byte>;

inline constexpr std::size_t kDigestSize = 32;

/// Fixed-length hash output, compared byte-wise.
using Digest = std::array<Byte, kDigestSize>;

/// Hash function used for leaf and node digests. Implementations must be
/// thread-safe for concurrent `hash` calls.
class Hasher {
public:
    virtual ~Hasher() = default;
    [[nodiscard]] virtual Digest hash(ByteSpan data) const = 0;
};

class Sha256Hasher final : public Hasher {
public:
    [[nodiscard]] Digest hash(ByteSpan data) const override;
};

/// Shared SHA-256 instance, the default hasher everywhere.
const Hasher& sha256_hasher();

/// Forwards to another hasher and counts invocations.
class CountingHasher final : public Hasher {
public:
    explicit CountingHasher(const Hasher& inner = sha256_hasher()) : inner_(inner) {}

    [[nodiscard]] Digest hash(ByteSpan data) const override {
        calls_.fetch_add(1, std::memory_order_relaxed);
        return inner_.hash(data);
    }

    [[nodiscard]] std::uint64_t calls() const { return calls_.load(std::memory_order_relaxed); }
    void reset() { calls_.store(0, std::memory_order_relaxed); }

private:
    const Hasher& inner_;
    mutable std::atomic<std::uint64_t> calls_{0};
};

/// Source of blinding bytes.
class RandomSource {
public:
    virtual ~RandomSource() = default;
    virtual void fill(std::span<Byte> out) = 0;

    std::uint64_t next_u64();
};

/// Operating-system CSPRNG (OpenSSL RAND_bytes).
class SystemRandom final : public RandomSource {
public:
    void fill(std::span<Byte> out) override;
};

/// Deterministic generator: SHA-256(seed || counter) blocks. Reproducible
/// for a fixed seed; unpredictable without it.
class SeededRandom final : public RandomSource {
public:
    explicit SeededRandom(std::uint64_t seed, std::string_view domain = {});
    void fill(std::span<Byte> out) override;

private:
    Bytes key_;
    std::uint64_t counter_ = 0;
    Digest block_{};
    std::size_t used_ = kDigestSize;
};

std::string to_hex(ByteSpan bytes);
Bytes from_hex(std::string_view hex);
std::string to_base64(ByteSpan bytes);
Bytes from_base64(std::string_view text);

Digest digest_from_bytes(ByteSpan bytes);

}  // namespace seabattle
