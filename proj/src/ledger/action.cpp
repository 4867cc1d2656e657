// SPDX-License-Identifier: Apache-2.0
#include "intent/ledger/action.hpp"

namespace intent::ledger {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string poolObject(Platform p, Asset a, Asset b) { return "pool:" + AssetId::lpShare(p, a, b).str().substr(3); }

std::string wallet(const Address& a) { return "wallet:" + a.str(); }

}  // namespace

std::string_view name(ActionKind kind) {
    switch (kind) {
        case ActionKind::TokenTransfer: return "TokenTransfer";
        case ActionKind::DexSwap: return "DexSwap";
        case ActionKind::LendingBorrow: return "LendingBorrow";
        case ActionKind::LendingRepay: return "LendingRepay";
        case ActionKind::DexMint: return "DexMint";
        case ActionKind::DexBurn: return "DexBurn";
        case ActionKind::StakeDeposit: return "StakeDeposit";
        case ActionKind::NftPurchase: return "NftPurchase";
        case ActionKind::NftListing: return "NftListing";
    }
    return "?";
}

std::optional<ActionKind> parseActionKind(std::string_view text) {
    for (ActionKind k : kAllActionKinds) {
        if (name(k) == text) return k;
    }
    return std::nullopt;
}

ActionKind kindOf(const Action& action) {
    return std::visit(Overloaded{
                          [](const TokenTransfer&) { return ActionKind::TokenTransfer; },
                          [](const DexSwap&) { return ActionKind::DexSwap; },
                          [](const LendingBorrow&) { return ActionKind::LendingBorrow; },
                          [](const LendingRepay&) { return ActionKind::LendingRepay; },
                          [](const DexMint&) { return ActionKind::DexMint; },
                          [](const DexBurn&) { return ActionKind::DexBurn; },
                          [](const StakeDeposit&) { return ActionKind::StakeDeposit; },
                          [](const NftPurchase&) { return ActionKind::NftPurchase; },
                          [](const NftListing&) { return ActionKind::NftListing; },
                      },
                      action);
}

std::string describe(const Action& action) {
    auto sym = [](Asset a) { return std::string(symbol(a)); };
    auto plat = [](Platform p) { return std::string(name(p)); };
    return std::visit(
        Overloaded{
            [&](const TokenTransfer& a) {
                return "transfer " + toString(a.amount) + " " + sym(a.asset) + " " + a.from.str() + "->" + a.to.str();
            },
            [&](const DexSwap& a) {
                return "swap " + toString(a.amountIn) + " " + sym(a.assetIn) + "->" + sym(a.assetOut) + " on " +
                       plat(a.platform) + " (min " + toString(a.amountOutMin) + ")";
            },
            [&](const LendingBorrow& a) {
                return "borrow " + toString(a.amount) + " " + sym(a.asset) + " from " + plat(a.platform);
            },
            [&](const LendingRepay& a) {
                return "repay " + toString(a.amount) + " " + sym(a.asset) + " to " + plat(a.platform);
            },
            [&](const DexMint& a) {
                return "add liquidity " + toString(a.amountA) + " " + sym(a.assetA) + " + " + toString(a.amountB) +
                       " " + sym(a.assetB) + " on " + plat(a.platform);
            },
            [&](const DexBurn& a) {
                return "remove " + toString(a.liquidity) + " LP of " + sym(a.assetA) + "/" + sym(a.assetB) + " on " +
                       plat(a.platform);
            },
            [&](const StakeDeposit& a) {
                return "stake " + toString(a.amount) + " " + sym(a.asset) + " on " + plat(a.platform);
            },
            [&](const NftPurchase& a) {
                return "buy NFT " + a.collection.str() + "/" + a.token.str() + " for at most " + toString(a.maxPrice) +
                       " " + sym(a.currency);
            },
            [&](const NftListing& a) {
                return "list NFT " + a.collection.str() + "/" + a.token.str() + " at " + toString(a.price) + " " +
                       sym(a.currency);
            },
        },
        action);
}

std::vector<std::string> touchedObjects(const Action& action) {
    return std::visit(
        Overloaded{
            [](const TokenTransfer& a) { return std::vector<std::string>{wallet(a.from), wallet(a.to)}; },
            [](const DexSwap& a) {
                return std::vector<std::string>{wallet(a.wallet), poolObject(a.platform, a.assetIn, a.assetOut)};
            },
            [](const LendingBorrow& a) {
                return std::vector<std::string>{
                    wallet(a.wallet), "lending:" + std::string(name(a.platform)) + ":" + std::string(symbol(a.asset))};
            },
            [](const LendingRepay& a) {
                return std::vector<std::string>{
                    wallet(a.wallet), "lending:" + std::string(name(a.platform)) + ":" + std::string(symbol(a.asset))};
            },
            [](const DexMint& a) {
                return std::vector<std::string>{wallet(a.wallet), poolObject(a.platform, a.assetA, a.assetB)};
            },
            [](const DexBurn& a) {
                return std::vector<std::string>{wallet(a.wallet), poolObject(a.platform, a.assetA, a.assetB)};
            },
            [](const StakeDeposit& a) {
                return std::vector<std::string>{
                    wallet(a.wallet), "staking:" + std::string(name(a.platform)) + ":" + std::string(symbol(a.asset))};
            },
            [](const NftPurchase& a) {
                return std::vector<std::string>{wallet(a.wallet), "nft:" + AssetId::nft(a.collection, a.token).str()};
            },
            [](const NftListing& a) {
                return std::vector<std::string>{wallet(a.wallet), "nft:" + AssetId::nft(a.collection, a.token).str()};
            },
        },
        action);
}

}  // namespace intent::ledger
