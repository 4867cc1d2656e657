// SPDX-License-Identifier: Apache-2.0
#include "intent/common/crypto.hpp"

#include <sodium.h>

#include <stdexcept>

namespace intent {
namespace {

void ensureSodium() {
    static const bool ready = [] { return sodium_init() >= 0; }();
    if (!ready) {
        throw std::runtime_error("libsodium initialisation failed");
    }
}

}  // namespace

Digest sha256(std::span<const std::uint8_t> data) {
    ensureSodium();
    Digest out{};
    crypto_hash_sha256(out.data(), data.data(), data.size());
    return out;
}

Digest sha256(std::string_view data) {
    return sha256(std::span(reinterpret_cast<const std::uint8_t*>(data.data()), data.size()));
}

std::string toHex(std::span<const std::uint8_t> data) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (auto b : data) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 0xF]);
    }
    return out;
}

Bytes fromHex(std::string_view hex) {
    if (hex.size() >= 2 && hex[0] == '0' && (hex[1] == 'x' || hex[1] == 'X')) {
        hex.remove_prefix(2);
    }
    if (hex.size() % 2 != 0) {
        throw std::invalid_argument("odd-length hex string");
    }
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw std::invalid_argument("invalid hex digit");
    };
    Bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<std::uint8_t>((nibble(hex[2 * i]) << 4) | nibble(hex[2 * i + 1]));
    }
    return out;
}

SigningKey SigningKey::generate() {
    ensureSodium();
    SigningKey key;
    crypto_sign_keypair(key.public_.data(), key.secret_.data());
    return key;
}

SigningKey SigningKey::fromSeed(const std::array<std::uint8_t, 32>& seed) {
    ensureSodium();
    SigningKey key;
    crypto_sign_seed_keypair(key.public_.data(), key.secret_.data(), seed.data());
    return key;
}

SigningKey::SigningKey(SigningKey&& other) noexcept
    : secret_(other.secret_), public_(other.public_) {
    sodium_memzero(other.secret_.data(), other.secret_.size());
}

SigningKey& SigningKey::operator=(SigningKey&& other) noexcept {
    if (this != &other) {
        secret_ = other.secret_;
        public_ = other.public_;
        sodium_memzero(other.secret_.data(), other.secret_.size());
    }
    return *this;
}

SigningKey::~SigningKey() { sodium_memzero(secret_.data(), secret_.size()); }

Signature SigningKey::sign(std::span<const std::uint8_t> message) const {
    Signature sig{};
    crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(), secret_.data());
    return sig;
}

Bytes SigningKey::secretBytesForAudit() const { return Bytes(secret_.begin(), secret_.begin() + 32); }

bool verifySignature(const PublicKey& key, std::span<const std::uint8_t> message,
                     const Signature& signature) {
    ensureSodium();
    return crypto_sign_verify_detached(signature.data(), message.data(), message.size(),
                                       key.data()) == 0;
}

Address addressOf(const PublicKey& key) {
    Digest d = sha256(std::span<const std::uint8_t>(key.data(), key.size()));
    return Address::parse("0x" + toHex(std::span<const std::uint8_t>(d.data(), 20)));
}

ByteWriter& ByteWriter::u8(std::uint8_t v) {
    out_.push_back(v);
    return *this;
}

ByteWriter& ByteWriter::u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    return *this;
}

ByteWriter& ByteWriter::u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    return *this;
}

ByteWriter& ByteWriter::i64(std::int64_t v) { return u64(static_cast<std::uint64_t>(v)); }

ByteWriter& ByteWriter::str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.insert(out_.end(), s.begin(), s.end());
    return *this;
}

ByteWriter& ByteWriter::raw(std::span<const std::uint8_t> data) {
    out_.insert(out_.end(), data.begin(), data.end());
    return *this;
}

ByteWriter& ByteWriter::bigint(const boost::multiprecision::cpp_int& v) {
    if (v < 0) {
        throw std::invalid_argument("canonical encoding requires non-negative integers");
    }
    Bytes mag;
    boost::multiprecision::export_bits(v, std::back_inserter(mag), 8, false);
    // export_bits emits a single zero byte for zero; canonical zero is empty.
    while (!mag.empty() && mag.back() == 0) {
        mag.pop_back();
    }
    u32(static_cast<std::uint32_t>(mag.size()));
    return raw(mag);
}

void ByteReader::need(std::size_t n) const {
    if (data_.size() - pos_ < n) {
        throw std::out_of_range("truncated canonical encoding");
    }
}

std::uint8_t ByteReader::u8() {
    need(1);
    return data_[pos_++];
}

std::uint32_t ByteReader::u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
        v |= static_cast<std::uint32_t>(data_[pos_++]) << (8 * i);
    }
    return v;
}

std::uint64_t ByteReader::u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
        v |= static_cast<std::uint64_t>(data_[pos_++]) << (8 * i);
    }
    return v;
}

std::int64_t ByteReader::i64() { return static_cast<std::int64_t>(u64()); }

std::string ByteReader::str() {
    auto n = u32();
    need(n);
    std::string s(reinterpret_cast<const char*>(data_.data() + pos_), n);
    pos_ += n;
    return s;
}

boost::multiprecision::cpp_int ByteReader::bigint() {
    auto n = u32();
    need(n);
    boost::multiprecision::cpp_int v = 0;
    if (n > 0) {
        boost::multiprecision::import_bits(v, data_.begin() + static_cast<std::ptrdiff_t>(pos_),
                                           data_.begin() + static_cast<std::ptrdiff_t>(pos_ + n), 8,
                                           false);
    }
    pos_ += n;
    return v;
}

}  // namespace intent
