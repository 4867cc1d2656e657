// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "intent/common/amount.hpp"
#include "intent/common/asset.hpp"

namespace intent {

using Bytes = std::vector<std::uint8_t>;
using Digest = std::array<std::uint8_t, 32>;
using PublicKey = std::array<std::uint8_t, 32>;
using Signature = std::array<std::uint8_t, 64>;

Digest sha256(std::span<const std::uint8_t> data);
Digest sha256(std::string_view data);

std::string toHex(std::span<const std::uint8_t> data);
/// Accepts optional `0x` prefix; throws std::invalid_argument.
Bytes fromHex(std::string_view hex);

template <std::size_t N>
std::array<std::uint8_t, N> fromHexFixed(std::string_view hex) {
    Bytes raw = fromHex(hex);
    if (raw.size() != N) {
        throw std::invalid_argument("hex value has wrong length");
    }
    std::array<std::uint8_t, N> out{};
    std::copy(raw.begin(), raw.end(), out.begin());
    return out;
}

/// Ed25519 key pair. Signing is deterministic (nonce derived from the key
/// and message). The secret never leaves this object except through
/// secretBytesForAudit(), which exists only so tests can scan outputs.
class SigningKey {
public:
    static SigningKey generate();
    static SigningKey fromSeed(const std::array<std::uint8_t, 32>& seed);

    SigningKey(const SigningKey&) = delete;
    SigningKey& operator=(const SigningKey&) = delete;
    SigningKey(SigningKey&& other) noexcept;
    SigningKey& operator=(SigningKey&& other) noexcept;
    ~SigningKey();

    const PublicKey& publicKey() const { return public_; }
    Signature sign(std::span<const std::uint8_t> message) const;

    Bytes secretBytesForAudit() const;

private:
    SigningKey() = default;
    std::array<std::uint8_t, 64> secret_{};
    PublicKey public_{};
};

bool verifySignature(const PublicKey& key, std::span<const std::uint8_t> message,
                     const Signature& signature);

/// Account address controlled by a public key: first 20 bytes of
/// SHA-256(pk), hex encoded.
Address addressOf(const PublicKey& key);

/// Little-endian canonical byte writer used by every signed/hashed encoding.
class ByteWriter {
public:
    ByteWriter& u8(std::uint8_t v);
    ByteWriter& u32(std::uint32_t v);
    ByteWriter& u64(std::uint64_t v);
    ByteWriter& i64(std::int64_t v);
    /// u32 length then raw bytes.
    ByteWriter& str(std::string_view s);
    ByteWriter& raw(std::span<const std::uint8_t> data);
    /// Non-negative integer: u32 byte length then little-endian magnitude.
    ByteWriter& bigint(const boost::multiprecision::cpp_int& v);

    const Bytes& bytes() const { return out_; }
    Bytes take() { return std::move(out_); }

private:
    Bytes out_;
};

/// Mirror of ByteWriter; throws std::out_of_range on truncated input.
class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

    std::uint8_t u8();
    std::uint32_t u32();
    std::uint64_t u64();
    std::int64_t i64();
    std::string str();
    boost::multiprecision::cpp_int bigint();
    bool done() const { return pos_ == data_.size(); }

private:
    void need(std::size_t n) const;
    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

}  // namespace intent
