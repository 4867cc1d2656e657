// SPDX-License-Identifier: Apache-2.0
#include "intent/ledger/apply.hpp"

#include <functional>
#include <vector>

#include "intent/icl/eval.hpp"

namespace intent::ledger {
namespace {

using J = nlohmann::ordered_json;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

struct Revert {
    std::string reason;
};

class Journal {
public:
    Journal(LedgerState& state, Address sender) : s_(state), sender_(std::move(sender)) {}

    template <class Map, class Key>
    void save(Map& m, const Key& k) {
        auto it = m.find(k);
        if (it == m.end()) {
            undo_.push_back([&m, k] { m.erase(k); });
        } else {
            undo_.push_back([&m, k, v = it->second] { m[k] = v; });
        }
    }

    void rollback() {
        for (auto it = undo_.rbegin(); it != undo_.rend(); ++it) (*it)();
        undo_.clear();
        deltas_.clear();
    }

    void credit(const Address& w, const AssetId& a, const Amount& amount) {
        if (amount == 0) return;
        save(s_.balances, BalanceKey{w, a});
        s_.setBalance(w, a, s_.balanceOf(w, a) + amount);
        deltas_[BalanceKey{w, a}] += amount;
    }

    void debit(const Address& w, const AssetId& a, const Amount& amount) {
        if (amount == 0) return;
        if (amount < 0) throw Revert{"NegativeAmount"};
        Amount have = s_.balanceOf(w, a);
        if (have < amount) throw Revert{"InsufficientBalance"};
        authorize(w, a, amount);
        save(s_.balances, BalanceKey{w, a});
        s_.setBalance(w, a, have - amount);
        deltas_[BalanceKey{w, a}] -= amount;
    }

    // The signer may move its own funds; anything else needs an allowance
    // from the owner to the signer.
    void authorize(const Address& owner, const AssetId& a, const Amount& amount) {
        if (owner == sender_) return;
        for (const std::string& assetKey : {a.str(), std::string(kAnyAsset)}) {
            AllowanceKey key{owner, sender_, assetKey};
            auto it = s_.allowances.find(key);
            if (it == s_.allowances.end() || it->second < amount) continue;
            if (it->second != unlimitedAllowance()) {
                save(s_.allowances, key);
                it->second -= amount;
            }
            return;
        }
        throw Revert{"InsufficientAllowance"};
    }

    LedgerState& state() { return s_; }
    std::map<BalanceKey, Amount> takeDeltas() {
        std::map<BalanceKey, Amount> out;
        for (auto& [k, v] : deltas_) {
            if (v != 0) out.emplace(k, std::move(v));
        }
        deltas_.clear();
        return out;
    }

private:
    LedgerState& s_;
    Address sender_;
    std::vector<std::function<void()>> undo_;
    std::map<BalanceKey, Amount> deltas_;
};

Amount positionValue(const LedgerState& s, const std::map<PositionKey, Amount>& positions, Platform platform,
                     const Address& wallet) {
    Amount total = 0;
    for (const auto& [k, v] : positions) {
        if (k.platform != platform || k.wallet != wallet || v == 0) continue;
        auto value = valueMicroUsd(s, k.asset, v);
        if (!value) throw Revert{"MissingPrice"};
        total += *value;
    }
    return total;
}

struct Outcome {
    std::optional<Rational> slippage;
    std::optional<Amount> amountOut;
};

Outcome execute(Journal& j, const Action& action) {
    LedgerState& s = j.state();
    Outcome out;
    std::visit(
        Overloaded{
            [&](const TokenTransfer& a) {
                j.debit(a.from, a.asset, a.amount);
                j.credit(a.to, a.asset, a.amount);
            },
            [&](const DexSwap& a) {
                if (a.amountIn <= 0) throw Revert{"ZeroAmount"};
                auto key = PoolKey::of(a.platform, a.assetIn, a.assetOut);
                auto it = s.pools.find(key);
                if (a.assetIn == a.assetOut || it == s.pools.end()) throw Revert{"NoPool"};
                bool inIsA = a.assetIn == key.a;
                Pool& p = it->second;
                Amount& rIn = inIsA ? p.reserveA : p.reserveB;
                Amount& rOut = inIsA ? p.reserveB : p.reserveA;
                Amount got = constantProductOut(rIn, rOut, a.amountIn);
                if (got < a.amountOutMin || got == 0) throw Revert{"SlippageExceeded"};
                j.debit(a.wallet, a.assetIn, a.amountIn);
                j.save(s.pools, key);
                rIn += a.amountIn;
                rOut -= got;
                j.credit(a.wallet, a.assetOut, got);
                out.amountOut = got;
                if (a.quotedOut > 0) {
                    out.slippage = Rational(a.quotedOut - got, a.quotedOut);
                } else {
                    out.slippage = Rational(0);
                }
            },
            [&](const LendingBorrow& a) {
                MarketKey market{a.platform, a.asset};
                auto reserve = s.lendingReserves.find(market);
                if (reserve == s.lendingReserves.end()) throw Revert{"NoLendingMarket"};
                if (reserve->second < a.amount) throw Revert{"InsufficientLiquidity"};
                j.save(s.lendingReserves, market);
                reserve->second -= a.amount;
                PositionKey pos{a.platform, a.wallet, a.asset};
                j.save(s.debts, pos);
                s.debts[pos] += a.amount;
                j.credit(a.wallet, a.asset, a.amount);
                Amount collateral = positionValue(s, s.stakes, a.platform, a.wallet);
                Amount debt = positionValue(s, s.debts, a.platform, a.wallet);
                if (collateral * 2 < debt * 3) throw Revert{"Undercollateralized"};
            },
            [&](const LendingRepay& a) {
                PositionKey pos{a.platform, a.wallet, a.asset};
                auto debt = s.debts.find(pos);
                Amount owed = debt == s.debts.end() ? Amount(0) : debt->second;
                if (a.amount > owed) throw Revert{"RepayExceedsDebt"};
                j.debit(a.wallet, a.asset, a.amount);
                j.save(s.debts, pos);
                if (owed == a.amount) {
                    s.debts.erase(pos);
                } else {
                    s.debts[pos] = owed - a.amount;
                }
                MarketKey market{a.platform, a.asset};
                j.save(s.lendingReserves, market);
                s.lendingReserves[market] += a.amount;
            },
            [&](const DexMint& a) {
                if (a.assetA == a.assetB) throw Revert{"NoPool"};
                auto key = PoolKey::of(a.platform, a.assetA, a.assetB);
                bool ordered = a.assetA == key.a;
                const Amount& wantA = ordered ? a.amountA : a.amountB;
                const Amount& wantB = ordered ? a.amountB : a.amountA;
                if (wantA <= 0 || wantB <= 0) throw Revert{"ZeroAmount"};
                j.save(s.pools, key);
                Pool& p = s.pools[key];
                Amount useA;
                Amount useB;
                Amount minted;
                if (p.lpSupply == 0 || p.reserveA == 0 || p.reserveB == 0) {
                    useA = wantA;
                    useB = wantB;
                    minted = isqrt(useA * useB);
                } else {
                    Amount optB = wantA * p.reserveB / p.reserveA;
                    if (optB <= wantB) {
                        useA = wantA;
                        useB = optB;
                    } else {
                        useA = wantB * p.reserveA / p.reserveB;
                        useB = wantB;
                    }
                    Amount byA = useA * p.lpSupply / p.reserveA;
                    Amount byB = useB * p.lpSupply / p.reserveB;
                    minted = byA < byB ? byA : byB;
                }
                if (minted == 0 || minted < a.minLiquidity) throw Revert{"InsufficientLiquidityMinted"};
                j.debit(a.wallet, key.a, useA);
                j.debit(a.wallet, key.b, useB);
                p.reserveA += useA;
                p.reserveB += useB;
                p.lpSupply += minted;
                j.credit(a.wallet, key.lpShare(), minted);
                out.amountOut = minted;
            },
            [&](const DexBurn& a) {
                auto key = PoolKey::of(a.platform, a.assetA, a.assetB);
                auto it = s.pools.find(key);
                if (a.assetA == a.assetB || it == s.pools.end()) throw Revert{"NoPool"};
                Pool& p = it->second;
                if (a.liquidity <= 0 || a.liquidity > p.lpSupply) throw Revert{"InvalidLiquidity"};
                Amount outA = a.liquidity * p.reserveA / p.lpSupply;
                Amount outB = a.liquidity * p.reserveB / p.lpSupply;
                bool ordered = a.assetA == key.a;
                const Amount& minA = ordered ? a.minA : a.minB;
                const Amount& minB = ordered ? a.minB : a.minA;
                if (outA < minA || outB < minB) throw Revert{"BurnBelowMinimum"};
                j.debit(a.wallet, key.lpShare(), a.liquidity);
                j.save(s.pools, key);
                p.reserveA -= outA;
                p.reserveB -= outB;
                p.lpSupply -= a.liquidity;
                j.credit(a.wallet, key.a, outA);
                j.credit(a.wallet, key.b, outB);
            },
            [&](const StakeDeposit& a) {
                MarketKey market{a.platform, a.asset};
                auto pool = s.stakingPools.find(market);
                if (pool == s.stakingPools.end()) throw Revert{"NoStakingPool"};
                if (a.amount <= 0) throw Revert{"ZeroAmount"};
                j.debit(a.wallet, a.asset, a.amount);
                j.save(s.stakingPools, market);
                pool->second.depth += a.amount;
                PositionKey pos{a.platform, a.wallet, a.asset};
                j.save(s.stakes, pos);
                s.stakes[pos] += a.amount;
            },
            [&](const NftPurchase& a) {
                AssetId nft = AssetId::nft(a.collection, a.token);
                auto it = s.listings.find(nft);
                if (it == s.listings.end() || !it->second.active) throw Revert{"ListingUnavailable"};
                Listing& l = it->second;
                if (l.currency != a.currency || l.ask > a.maxPrice) throw Revert{"PriceAboveBudget"};
                if (s.balanceOf(l.seller, nft) < 1) throw Revert{"ListingUnavailable"};
                Address seller = l.seller;
                Amount price = l.ask;
                j.debit(a.wallet, a.currency, price);
                j.credit(seller, a.currency, price);
                j.save(s.balances, BalanceKey{seller, nft});
                s.setBalance(seller, nft, s.balanceOf(seller, nft) - 1);
                j.credit(a.wallet, nft, 1);
                j.save(s.listings, nft);
                l.active = false;
                l.volume7d += price;
                out.amountOut = price;
            },
            [&](const NftListing& a) {
                AssetId nft = AssetId::nft(a.collection, a.token);
                if (s.balanceOf(a.wallet, nft) < 1) throw Revert{"NotOwner"};
                if (a.price <= 0) throw Revert{"ZeroAmount"};
                j.authorize(a.wallet, nft, 1);
                j.save(s.listings, nft);
                auto it = s.listings.find(nft);
                if (it == s.listings.end()) {
                    Listing l;
                    for (const auto& [id, other] : s.listings) {
                        if (id.str().rfind("NFT:" + a.collection.str() + ":", 0) == 0) {
                            l.volume7d = other.volume7d;
                            l.trendPpm = other.trendPpm;
                            l.holderCount = other.holderCount;
                            break;
                        }
                    }
                    it = s.listings.emplace(nft, l).first;
                }
                it->second.seller = a.wallet;
                it->second.ask = a.price;
                it->second.currency = a.currency;
                it->second.active = true;
            },
        },
        action);
    return out;
}

}  // namespace

J toJson(const Receipt& r) {
    J deltas = J::array();
    for (const auto& [k, v] : r.realizedDeltas) {
        deltas.push_back(J{{"wallet", k.wallet.str()}, {"asset", k.asset.str()}, {"delta", toString(v)}});
    }
    return J{{"txHash", r.txHash},
             {"txId", r.txId},
             {"status", r.success() ? "SUCCESS" : "REVERT"},
             {"reason", r.reason},
             {"gasUsed", r.gasUsed},
             {"blockHeight", r.blockHeight},
             {"position", r.position},
             {"realizedDeltas", deltas},
             {"realizedSlippage", r.realizedSlippage ? J(toString(*r.realizedSlippage)) : J(nullptr)},
             {"amountOut", r.amountOut ? J(toString(*r.amountOut)) : J(nullptr)}};
}

Receipt applyPlan(LedgerState& state, const TransactionPlan& plan) {
    Receipt r;
    r.txId = plan.id;
    ActionKind kind = kindOf(plan.action);
    std::uint64_t cost = state.gasCost(kind);
    if (plan.gasLimit < cost) {
        r.status = ReceiptStatus::Revert;
        r.reason = "OutOfGas";
        r.gasUsed = plan.gasLimit;
        return r;
    }
    r.gasUsed = cost;
    Journal j(state, plan.senderAddress());
    try {
        Outcome o = execute(j, plan.action);
        if (plan.constraint) {
            icl::RuntimeObservations obs{o.slippage.value_or(Rational(0)), Amount(cost)};
            icl::EvalContext ctx{state, state.time(), obs};
            bool ok = false;
            try {
                ok = icl::evaluateCondition(*plan.constraint, ctx);
            } catch (const icl::EvalError& e) {
                throw Revert{std::string("ConstraintError: ") + e.what()};
            }
            if (!ok) throw Revert{"ConstraintViolated"};
        }
        r.realizedSlippage = o.slippage;
        r.amountOut = o.amountOut;
        r.realizedDeltas = j.takeDeltas();
    } catch (const Revert& rev) {
        j.rollback();
        r.status = ReceiptStatus::Revert;
        r.reason = rev.reason;
    }
    return r;
}

Receipt applyTransaction(LedgerState& state, const SignedTransaction& tx, bool checkSignature) {
    if (checkSignature && !verifyTransaction(tx)) {
        Receipt r;
        r.txId = tx.plan.id;
        r.txHash = txHashHex(tx);
        r.status = ReceiptStatus::Revert;
        r.reason = "InvalidSignature";
        return r;
    }
    Receipt r = applyPlan(state, tx.plan);
    r.txHash = txHashHex(tx);
    return r;
}

}  // namespace intent::ledger
