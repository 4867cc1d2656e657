// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "intent/common/amount.hpp"
#include "intent/common/asset.hpp"
#include "intent/icl/eval.hpp"
#include "intent/ledger/action.hpp"

namespace intent::ledger {

/// Allowance value that is never decremented.
Amount unlimitedAllowance();

/// Allowance asset "*" covers every asset of the owner.
inline constexpr const char* kAnyAsset = "*";

struct AllowanceKey {
    Address owner;
    Address spender;
    std::string asset;  // AssetId string or kAnyAsset
    auto operator<=>(const AllowanceKey&) const = default;
};

/// Assets are stored in enum order, a < b.
struct PoolKey {
    Platform platform;
    Asset a;
    Asset b;
    static PoolKey of(Platform p, Asset x, Asset y);
    AssetId lpShare() const { return AssetId::lpShare(platform, a, b); }
    auto operator<=>(const PoolKey&) const = default;
};

struct Pool {
    Amount reserveA;
    Amount reserveB;
    Amount lpSupply;
    bool operator==(const Pool&) const = default;
};

struct MarketKey {
    Platform platform;
    Asset asset;
    auto operator<=>(const MarketKey&) const = default;
};

struct PositionKey {
    Platform platform;
    Address wallet;
    Asset asset;
    auto operator<=>(const PositionKey&) const = default;
};

struct StakingPool {
    std::int64_t apyPpm = 0;   // annual yield, parts per million
    std::int64_t riskPpm = 0;  // risk score in [0, 1e6]
    Amount depth;
    bool operator==(const StakingPool&) const = default;
};

struct Listing {
    Address seller;
    Amount ask;
    Asset currency = Asset::ETH;
    Amount volume7d;
    std::int64_t trendPpm = 0;
    std::int64_t holderCount = 0;
    bool active = true;
    bool operator==(const Listing&) const = default;
};

struct LedgerConfig {
    std::uint64_t blockGasLimit = 30'000'000;
    std::int64_t genesisTime = 1'735'689'600;  // 2025-01-01T00:00:00Z
    std::int64_t blockTimeSeconds = 12;
    bool operator==(const LedgerConfig&) const = default;
};

std::map<ActionKind, std::uint64_t> defaultGasSchedule();

/// Complete simulated chain state. Plain value type: copying it forks.
class LedgerState : public icl::ConditionState {
public:
    LedgerState();

    std::uint64_t height = 0;
    LedgerConfig config;
    std::map<BalanceKey, Amount> balances;
    std::map<AllowanceKey, Amount> allowances;
    std::map<PoolKey, Pool> pools;
    std::map<MarketKey, Amount> lendingReserves;
    std::map<PositionKey, Amount> debts;
    std::map<MarketKey, StakingPool> stakingPools;
    std::map<PositionKey, Amount> stakes;
    std::map<AssetId, Listing> listings;
    std::map<Asset, Amount> prices;
    std::map<ActionKind, std::uint64_t> gasSchedule;

    std::int64_t time() const {
        return config.genesisTime + static_cast<std::int64_t>(height) * config.blockTimeSeconds;
    }

    Amount balanceOf(const Address& wallet, const AssetId& asset) const override;
    std::optional<Amount> priceMicroUsd(Asset asset) const override;

    /// Writes through zero-omission: a zero balance erases the entry.
    void setBalance(const Address& wallet, const AssetId& asset, Amount value);
    void setPrice(Asset asset, std::int64_t usd);
    Amount allowance(const Address& owner, const Address& spender, const AssetId& asset) const;
    std::uint64_t gasCost(ActionKind kind) const;

    /// Per-asset total of balances, pool reserves, lending reserves and
    /// stake positions. LP shares and NFTs are reported by their id.
    std::map<AssetId, Amount> supply() const;

    bool operator==(const LedgerState& other) const;
};

/// Constant-product output with the 0.3% fee, or nullopt without a pool.
std::optional<Amount> quoteSwap(const LedgerState& state, Platform platform, Asset in, const Amount& amountIn,
                                Asset out);

Amount constantProductOut(const Amount& reserveIn, const Amount& reserveOut, const Amount& amountIn);

/// USD value in micro-USD of `amount` base units, floored.
std::optional<Amount> valueMicroUsd(const LedgerState& state, Asset asset, const Amount& amount);

}  // namespace intent::ledger
