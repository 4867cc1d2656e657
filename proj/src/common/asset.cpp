// SPDX-License-Identifier: Apache-2.0
#include "intent/common/asset.hpp"

#include <array>
#include <cctype>
#include <stdexcept>
#include <utility>

namespace intent {
namespace {

constexpr std::array<std::pair<Asset, std::string_view>, 12> kAssets{{
    {Asset::USDT, "USDT"},
    {Asset::USDC, "USDC"},
    {Asset::ETH, "ETH"},
    {Asset::DAI, "DAI"},
    {Asset::BTC, "BTC"},
    {Asset::WBTC, "WBTC"},
    {Asset::WETH, "WETH"},
    {Asset::UNI, "UNI"},
    {Asset::SUSHI, "SUSHI"},
    {Asset::AAVE, "AAVE"},
    {Asset::MATIC, "MATIC"},
    {Asset::COMP, "COMP"},
}};

constexpr std::array<std::pair<Platform, std::string_view>, 9> kPlatforms{{
    {Platform::Aave, "Aave"},
    {Platform::Uniswap, "Uniswap"},
    {Platform::Compound, "Compound"},
    {Platform::Yearn, "Yearn"},
    {Platform::Sushiswap, "Sushiswap"},
    {Platform::Curve, "Curve"},
    {Platform::OneInch, "1inch"},
    {Platform::Polygon, "Polygon"},
    {Platform::Avax, "Avax"},
}};

constexpr std::string_view kLpPrefix = "LP:";
constexpr std::string_view kNftPrefix = "NFT:";

}  // namespace

std::string_view symbol(Asset asset) {
    for (const auto& [a, s] : kAssets) {
        if (a == asset) {
            return s;
        }
    }
    return "?";
}

std::string_view name(Platform platform) {
    for (const auto& [p, s] : kPlatforms) {
        if (p == platform) {
            return s;
        }
    }
    return "?";
}

std::optional<Asset> parseAsset(std::string_view text) {
    for (const auto& [a, s] : kAssets) {
        if (s == text) {
            return a;
        }
    }
    return std::nullopt;
}

std::optional<Platform> parsePlatform(std::string_view text) {
    for (const auto& [p, s] : kPlatforms) {
        if (s == text) {
            return p;
        }
    }
    return std::nullopt;
}

unsigned decimals(Asset asset) {
    return (asset == Asset::USDC || asset == Asset::USDT) ? 6U : 18U;
}

Address Address::parse(std::string_view text) {
    if (text.size() < 3 || text[0] != '0' || (text[1] != 'x' && text[1] != 'X')) {
        throw std::invalid_argument("address must start with 0x: " + std::string(text));
    }
    std::string out = "0x";
    for (std::size_t i = 2; i < text.size(); ++i) {
        auto c = static_cast<unsigned char>(text[i]);
        if (!std::isxdigit(c)) {
            throw std::invalid_argument("address has non-hex digit: " + std::string(text));
        }
        out.push_back(static_cast<char>(std::tolower(c)));
    }
    return Address(std::move(out));
}

AssetId::AssetId(Asset asset) : text_(symbol(asset)) {}

AssetId AssetId::lpShare(Platform platform, Asset a, Asset b) {
    if (b < a) {
        std::swap(a, b);
    }
    return AssetId(std::string(kLpPrefix) + std::string(name(platform)) + ":" +
                   std::string(symbol(a)) + ":" + std::string(symbol(b)));
}

AssetId AssetId::nft(const Address& collection, const Address& token) {
    return AssetId(std::string(kNftPrefix) + collection.str() + ":" + token.str());
}

AssetId AssetId::parse(std::string_view text) {
    if (auto a = parseAsset(text)) {
        return AssetId(*a);
    }
    if (text.substr(0, kLpPrefix.size()) == kLpPrefix) {
        auto rest = text.substr(kLpPrefix.size());
        auto c1 = rest.find(':');
        auto c2 = rest.find(':', c1 == std::string_view::npos ? c1 : c1 + 1);
        if (c1 != std::string_view::npos && c2 != std::string_view::npos) {
            auto p = parsePlatform(rest.substr(0, c1));
            auto a = parseAsset(rest.substr(c1 + 1, c2 - c1 - 1));
            auto b = parseAsset(rest.substr(c2 + 1));
            if (p && a && b) {
                return lpShare(*p, *a, *b);
            }
        }
    }
    if (text.substr(0, kNftPrefix.size()) == kNftPrefix) {
        auto rest = text.substr(kNftPrefix.size());
        auto c = rest.find(':');
        if (c != std::string_view::npos) {
            return nft(Address::parse(rest.substr(0, c)), Address::parse(rest.substr(c + 1)));
        }
    }
    throw std::invalid_argument("unknown asset id: " + std::string(text));
}

bool AssetId::isFungibleSymbol() const { return parseAsset(text_).has_value(); }
bool AssetId::isLpShare() const { return text_.rfind(kLpPrefix, 0) == 0; }
bool AssetId::isNft() const { return text_.rfind(kNftPrefix, 0) == 0; }
std::optional<Asset> AssetId::fungible() const { return parseAsset(text_); }

unsigned AssetId::decimals() const {
    if (auto a = fungible()) {
        return intent::decimals(*a);
    }
    return 0;
}

std::string toString(const BalanceKey& key) { return key.wallet.str() + "/" + key.asset.str(); }

}  // namespace intent
