// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace intent {

/// Closed set of fungible assets the language admits.
enum class Asset { USDT, USDC, ETH, DAI, BTC, WBTC, WETH, UNI, SUSHI, AAVE, MATIC, COMP };

/// Closed set of protocol platforms the language admits.
enum class Platform { Aave, Uniswap, Compound, Yearn, Sushiswap, Curve, OneInch, Polygon, Avax };

std::string_view symbol(Asset asset);
std::string_view name(Platform platform);
std::optional<Asset> parseAsset(std::string_view text);
std::optional<Platform> parsePlatform(std::string_view text);

/// Base-unit decimals: 6 for the dollar stablecoins, 18 otherwise.
unsigned decimals(Asset asset);

/// Lowercase-normalised `0x` hex account or token key.
class Address {
public:
    Address() = default;
    /// Accepts `0x`/`0X` followed by at least one hex digit; throws
    /// std::invalid_argument otherwise.
    static Address parse(std::string_view text);

    const std::string& str() const { return text_; }
    bool empty() const { return text_.empty(); }

    auto operator<=>(const Address&) const = default;

private:
    explicit Address(std::string text) : text_(std::move(text)) {}
    std::string text_;
};

/// Ledger-level asset identifier: a fungible symbol, an LP share of a pool,
/// or a single NFT. Ordering is by the canonical string.
class AssetId {
public:
    AssetId() = default;
    AssetId(Asset asset);  // NOLINT(google-explicit-constructor)

    static AssetId lpShare(Platform platform, Asset a, Asset b);
    static AssetId nft(const Address& collection, const Address& token);
    /// Inverse of str(); throws std::invalid_argument.
    static AssetId parse(std::string_view text);

    const std::string& str() const { return text_; }
    bool isFungibleSymbol() const;
    bool isLpShare() const;
    bool isNft() const;
    /// Set only for fungible symbols.
    std::optional<Asset> fungible() const;
    /// Base-unit decimals; LP shares and NFTs are raw units.
    unsigned decimals() const;

    auto operator<=>(const AssetId&) const = default;

private:
    explicit AssetId(std::string text) : text_(std::move(text)) {}
    std::string text_;
};

/// (wallet, asset) key used by balances, deltas and predicted balances.
struct BalanceKey {
    Address wallet;
    AssetId asset;
    auto operator<=>(const BalanceKey&) const = default;
};

std::string toString(const BalanceKey& key);

}  // namespace intent
