#include "seabattle/crypto.hpp"

#include <openssl/evp.h>
#include <openssl/rand.h>

#include <algorithm>
#include <memory>
#include <stdexcept>

namespace seabattle {

Digest Sha256Hasher::hash(ByteSpan data) const {
    Digest out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != kDigestSize) {
        throw std::runtime_error("sha256 failed");
    }
    return out;
}

const Hasher& sha256_hasher() {
    static const Sha256Hasher instance;
    return instance;
}

std::uint64_t RandomSource::next_u64() {
    std::array<Byte, 8> buf{};
    fill(buf);
    std::uint64_t v = 0;
    for (Byte b : buf) v = (v << 8) | b;
    return v;
}

void SystemRandom::fill(std::span<Byte> out) {
    if (out.empty()) return;
    if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
        throw std::runtime_error("RAND_bytes failed");
    }
}

SeededRandom::SeededRandom(std::uint64_t seed, std::string_view domain) {
    key_.reserve(8 + domain.size());
    for (int shift = 56; shift >= 0; shift -= 8) key_.push_back(static_cast<Byte>(seed >> shift));
    key_.insert(key_.end(), domain.begin(), domain.end());
}

void SeededRandom::fill(std::span<Byte> out) {
    std::size_t pos = 0;
    while (pos < out.size()) {
        if (used_ == kDigestSize) {
            Bytes input = key_;
            for (int shift = 56; shift >= 0; shift -= 8) {
                input.push_back(static_cast<Byte>(counter_ >> shift));
            }
            ++counter_;
            block_ = sha256_hasher().hash(input);
            used_ = 0;
        }
        const std::size_t n = std::min(out.size() - pos, kDigestSize - used_);
        std::copy_n(block_.begin() + static_cast<std::ptrdiff_t>(used_), n,
                    out.begin() + static_cast<std::ptrdiff_t>(pos));
        used_ += n;
        pos += n;
    }
}

std::string to_hex(ByteSpan bytes) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string s;
    s.reserve(bytes.size() * 2);
    for (Byte b : bytes) {
        s.push_back(digits[b >> 4]);
        s.push_back(digits[b & 0xF]);
    }
    return s;
}

namespace {
int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}
}  // namespace

Bytes from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) throw std::invalid_argument("odd-length hex string");
    Bytes out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        const int hi = hex_value(hex[i]);
        const int lo = hex_value(hex[i + 1]);
        if (hi < 0 || lo < 0) throw std::invalid_argument("invalid hex digit");
        out.push_back(static_cast<Byte>((hi << 4) | lo));
    }
    return out;
}

std::string to_base64(ByteSpan bytes) {
    std::string out(4 * ((bytes.size() + 2) / 3), '\0');
    const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                                  static_cast<int>(bytes.size()));
    out.resize(static_cast<std::size_t>(n));
    return out;
}

Bytes from_base64(std::string_view text) {
    if (text.size() % 4 != 0) throw std::invalid_argument("base64 length not a multiple of 4");
    Bytes out(3 * text.size() / 4);
    const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(text.data()),
                                  static_cast<int>(text.size()));
    if (n < 0) throw std::invalid_argument("invalid base64");
    // EVP_DecodeBlock keeps the zero bytes produced by '=' padding.
    std::size_t pad = 0;
    if (!text.empty() && text.back() == '=') ++pad;
    if (text.size() > 1 && text[text.size() - 2] == '=') ++pad;
    out.resize(static_cast<std::size_t>(n) - pad);
    return out;
}

Digest digest_from_bytes(ByteSpan bytes) {
    if (bytes.size() != kDigestSize) throw std::invalid_argument("digest must be 32 bytes");
    Digest d{};
    std::copy(bytes.begin(), bytes.end(), d.begin());
    return d;
}

}  // namespace seabattle
