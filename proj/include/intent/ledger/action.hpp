// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "intent/common/amount.hpp"
#include "intent/common/asset.hpp"

namespace intent::ledger {

enum class ActionKind {
    TokenTransfer,
    DexSwap,
    LendingBorrow,
    LendingRepay,
    DexMint,
    DexBurn,
    StakeDeposit,
    NftPurchase,
    NftListing,
};

inline constexpr ActionKind kAllActionKinds[] = {
    ActionKind::TokenTransfer, ActionKind::DexSwap,      ActionKind::LendingBorrow,
    ActionKind::LendingRepay,  ActionKind::DexMint,      ActionKind::DexBurn,
    ActionKind::StakeDeposit,  ActionKind::NftPurchase,  ActionKind::NftListing,
};

std::string_view name(ActionKind kind);
std::optional<ActionKind> parseActionKind(std::string_view text);

struct TokenTransfer {
    Address from;
    Address to;
    Asset asset;
    Amount amount;
};

struct DexSwap {
    Platform platform;
    Address wallet;
    Asset assetIn;
    Amount amountIn;
    Asset assetOut;
    Amount amountOutMin;
    Amount quotedOut;  // compile-time quote, the reference for realised slippage
};

struct LendingBorrow {
    Platform platform;
    Address wallet;
    Asset asset;
    Amount amount;
};

struct LendingRepay {
    Platform platform;
    Address wallet;
    Asset asset;
    Amount amount;
};

/// Deposit up to (amountA, amountB) into the pool; the pool takes the
/// largest pair at its current ratio and mints LP shares to `wallet`.
struct DexMint {
    Platform platform;
    Address wallet;
    Asset assetA;
    Amount amountA;
    Asset assetB;
    Amount amountB;
    Amount minLiquidity;
};

/// Burn `liquidity` LP shares for at least (minA, minB).
struct DexBurn {
    Platform platform;
    Address wallet;
    Asset assetA;
    Amount minA;
    Asset assetB;
    Amount minB;
    Amount liquidity;
    std::optional<Address> positionKey;
};

struct StakeDeposit {
    Platform platform;
    Address wallet;
    Asset asset;
    Amount amount;
};

struct NftPurchase {
    Address collection;
    Address token;
    Address wallet;
    Asset currency;
    Amount maxPrice;
};

struct NftListing {
    Address collection;
    Address token;
    Address wallet;
    Asset currency;
    Amount price;
};

using Action = std::variant<TokenTransfer, DexSwap, LendingBorrow, LendingRepay, DexMint, DexBurn,
                            StakeDeposit, NftPurchase, NftListing>;

ActionKind kindOf(const Action& action);

/// Short human-readable summary, e.g. "swap 400000000000 USDC->USDT on Uniswap".
std::string describe(const Action& action);

/// Shared-state objects the action reads or writes (wallets, pools,
/// markets). Two actions can interfere only if these sets intersect.
std::vector<std::string> touchedObjects(const Action& action);

}  // namespace intent::ledger
