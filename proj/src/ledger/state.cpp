// SPDX-License-Identifier: Apache-2.0
#include "intent/ledger/state.hpp"

namespace intent::ledger {

Amount unlimitedAllowance() {
    static const Amount kMax = (Amount(1) << 256) - 1;
    return kMax;
}

PoolKey PoolKey::of(Platform p, Asset x, Asset y) {
    if (y < x) std::swap(x, y);
    return PoolKey{p, x, y};
}

std::map<ActionKind, std::uint64_t> defaultGasSchedule() {
    return {
        {ActionKind::TokenTransfer, 22'176}, {ActionKind::DexSwap, 110'793},   {ActionKind::LendingBorrow, 298'082},
        {ActionKind::LendingRepay, 157'122}, {ActionKind::DexMint, 346'948},   {ActionKind::DexBurn, 147'062},
        {ActionKind::StakeDeposit, 199'840}, {ActionKind::NftPurchase, 332'154}, {ActionKind::NftListing, 341'908},
    };
}

LedgerState::LedgerState() : gasSchedule(defaultGasSchedule()) {}

Amount LedgerState::balanceOf(const Address& wallet, const AssetId& asset) const {
    auto it = balances.find(BalanceKey{wallet, asset});
    return it == balances.end() ? Amount(0) : it->second;
}

std::optional<Amount> LedgerState::priceMicroUsd(Asset asset) const {
    auto it = prices.find(asset);
    if (it == prices.end()) return std::nullopt;
    return it->second;
}

void LedgerState::setBalance(const Address& wallet, const AssetId& asset, Amount value) {
    BalanceKey key{wallet, asset};
    if (value == 0) {
        balances.erase(key);
    } else {
        balances[key] = std::move(value);
    }
}

void LedgerState::setPrice(Asset asset, std::int64_t usd) { prices[asset] = Amount(usd) * 1'000'000; }

Amount LedgerState::allowance(const Address& owner, const Address& spender, const AssetId& asset) const {
    Amount best = 0;
    if (auto it = allowances.find(AllowanceKey{owner, spender, asset.str()}); it != allowances.end()) best = it->second;
    if (auto it = allowances.find(AllowanceKey{owner, spender, kAnyAsset}); it != allowances.end()) {
        if (it->second > best) best = it->second;
    }
    return best;
}

std::uint64_t LedgerState::gasCost(ActionKind kind) const {
    auto it = gasSchedule.find(kind);
    return it == gasSchedule.end() ? 0 : it->second;
}

std::map<AssetId, Amount> LedgerState::supply() const {
    std::map<AssetId, Amount> out;
    for (const auto& [k, v] : balances) out[k.asset] += v;
    for (const auto& [k, p] : pools) {
        out[AssetId(k.a)] += p.reserveA;
        out[AssetId(k.b)] += p.reserveB;
    }
    for (const auto& [k, v] : lendingReserves) out[AssetId(k.asset)] += v;
    for (const auto& [k, v] : stakes) out[AssetId(k.asset)] += v;
    return out;
}

bool LedgerState::operator==(const LedgerState& o) const {
    return height == o.height && config == o.config && balances == o.balances && allowances == o.allowances &&
           pools == o.pools && lendingReserves == o.lendingReserves && debts == o.debts &&
           stakingPools == o.stakingPools && stakes == o.stakes && listings == o.listings && prices == o.prices &&
           gasSchedule == o.gasSchedule;
}

Amount constantProductOut(const Amount& reserveIn, const Amount& reserveOut, const Amount& amountIn) {
    if (amountIn <= 0 || reserveIn <= 0 || reserveOut <= 0) return 0;
    Amount inWithFee = amountIn * 997;
    return (reserveOut * inWithFee) / (reserveIn * 1000 + inWithFee);
}

std::optional<Amount> quoteSwap(const LedgerState& state, Platform platform, Asset in, const Amount& amountIn,
                                Asset out) {
    if (in == out) return std::nullopt;
    auto key = PoolKey::of(platform, in, out);
    auto it = state.pools.find(key);
    if (it == state.pools.end() || it->second.reserveA == 0 || it->second.reserveB == 0) return std::nullopt;
    const Pool& p = it->second;
    return in == key.a ? constantProductOut(p.reserveA, p.reserveB, amountIn)
                       : constantProductOut(p.reserveB, p.reserveA, amountIn);
}

std::optional<Amount> valueMicroUsd(const LedgerState& state, Asset asset, const Amount& amount) {
    auto price = state.priceMicroUsd(asset);
    if (!price) return std::nullopt;
    return amount * *price / pow10(decimals(asset));
}

}  // namespace intent::ledger
