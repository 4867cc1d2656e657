// SPDX-License-Identifier: Apache-2.0
#include "intent/compiler/compiler.hpp"

#include <algorithm>

#include "intent/icl/eval.hpp"
#include "intent/icl/printer.hpp"

namespace intent::compiler {

using ledger::DeltaMap;
using ledger::LedgerState;
using ledger::TransactionPlan;

namespace {

using J = nlohmann::ordered_json;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool isDex(Platform p) {
    return p == Platform::Uniswap || p == Platform::Sushiswap || p == Platform::Curve || p == Platform::OneInch;
}

Rational median(std::vector<Rational> v) {
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    if (n == 0) return 0;
    return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

// lower first quartile: the value at rank floor((n-1)/4)
Rational firstQuartile(std::vector<Rational> v) {
    std::sort(v.begin(), v.end());
    if (v.empty()) return 0;
    return v[(v.size() - 1) / 4];
}

Rational ratio(const Amount& x, const Amount& max) { return max == 0 ? Rational(0) : Rational(x, max); }

std::string tieKey(const StakeCandidate& c) {
    return std::string(name(c.platform)) + "/" + std::string(symbol(c.asset));
}

void addDelta(DeltaMap& m, const Address& w, const AssetId& a, const Amount& v) {
    if (v > 0) m[BalanceKey{w, a}] += v;
}

template <class F>
void forConjuncts(const icl::ConditionPtr& c, F&& f) {
    if (!c) return;
    std::visit(Overloaded{
                   [&](const icl::AndCondition& a) {
                       for (const auto& t : a.terms) forConjuncts(t, f);
                   },
                   [&](const icl::GroupCondition& g) { forConjuncts(g.inner, f); },
                   [&](const icl::Comparison& cmp) { f(cmp); },
                   [](const auto&) {},
               },
               c->node);
}

// `ref < n` or `n > ref` (and the <= / >= forms) -> n
template <class Ref>
std::optional<Rational> upperBoundOn(const icl::Comparison& cmp) {
    using icl::CompareOp;
    auto number = [](const icl::ComparisonElement& e) -> std::optional<Rational> {
        if (auto n = std::get_if<icl::NumberLiteral>(&e)) return n->value;
        return std::nullopt;
    };
    if (std::holds_alternative<Ref>(cmp.lhs) && (cmp.op == CompareOp::Lt || cmp.op == CompareOp::Le)) {
        return number(cmp.rhs);
    }
    if (std::holds_alternative<Ref>(cmp.rhs) && (cmp.op == CompareOp::Gt || cmp.op == CompareOp::Ge)) {
        return number(cmp.lhs);
    }
    return std::nullopt;
}

Amount amountOf(const icl::AmountExpr& e, int index) {
    Amount v;
    try {
        v = icl::toBaseUnits(e);
    } catch (const icl::EvalError& err) {
        throw CompileError(index, CompileError::Cause::InvalidAmount, err.what());
    }
    if (v < 0) throw CompileError(index, CompileError::Cause::InvalidAmount, "negative amount");
    return v;
}

const ledger::Pool* findPool(const LedgerState& s, Platform p, Asset x, Asset y) {
    auto it = s.pools.find(ledger::PoolKey::of(p, x, y));
    return it == s.pools.end() ? nullptr : &it->second;
}

// Deposit the pool would accept and the LP it would mint, mirroring DexMint.
Amount expectedMint(const LedgerState& s, Platform p, Asset x, const Amount& ax, Asset y, const Amount& ay) {
    auto key = ledger::PoolKey::of(p, x, y);
    const Amount& wantA = key.a == x ? ax : ay;
    const Amount& wantB = key.a == x ? ay : ax;
    const ledger::Pool* pool = findPool(s, p, x, y);
    if (!pool || pool->lpSupply == 0 || pool->reserveA == 0 || pool->reserveB == 0) return isqrt(wantA * wantB);
    Amount optB = wantA * pool->reserveB / pool->reserveA;
    Amount useA = wantA;
    Amount useB = optB;
    if (optB > wantB) {
        useA = wantB * pool->reserveA / pool->reserveB;
        useB = wantB;
    }
    Amount byA = useA * pool->lpSupply / pool->reserveA;
    Amount byB = useB * pool->lpSupply / pool->reserveB;
    return byA < byB ? byA : byB;
}

Amount applySlippage(const Amount& v, const Rational& bound) {
    Rational keep = Rational(1) - bound;
    if (keep < 0) keep = 0;
    return floorRational(Rational(v) * keep);
}

}  // namespace

CompileError::CompileError(int statementIndex, Cause cause, const std::string& detail)
    : std::runtime_error("statement " + std::to_string(statementIndex) + ": " + std::string(name(cause)) + ": " +
                         detail),
      index_(statementIndex),
      cause_(cause),
      detail_(detail) {}

std::string_view name(CompileError::Cause cause) {
    switch (cause) {
        case CompileError::Cause::UnknownPairing: return "UnknownPairing";
        case CompileError::Cause::NoCandidate: return "NoCandidate";
        case CompileError::Cause::QuoteUnavailable: return "QuoteUnavailable";
        case CompileError::Cause::InvalidAmount: return "InvalidAmount";
        case CompileError::Cause::NotOwner: return "NotOwner";
    }
    return "?";
}

MarketInfo MarketInfo::fromState(const LedgerState& s) {
    MarketInfo m;
    for (const auto& [k, p] : s.stakingPools) m.stakingPools.push_back({k.platform, k.asset, p.apyPpm, p.riskPpm, p.depth});
    for (const auto& [id, l] : s.listings) {
        if (!l.active) continue;
        auto body = id.str().substr(4);
        auto colon = body.find(':');
        m.nftListings.push_back({Address::parse(body.substr(0, colon)), Address::parse(body.substr(colon + 1)), l.seller,
                                 l.ask, l.currency, l.volume7d, l.trendPpm, l.holderCount});
    }
    return m;
}

Rational slippageBound(const icl::ConditionPtr& constraint) {
    std::optional<Rational> best;
    forConjuncts(constraint, [&](const icl::Comparison& cmp) {
        if (auto v = upperBoundOn<icl::SlippageRef>(cmp)) {
            if (!best || *v < *best) best = *v;
        }
    });
    return best.value_or(Rational(1, 100));
}

std::optional<std::uint64_t> feeBound(const icl::ConditionPtr& constraint) {
    std::optional<std::uint64_t> best;
    forConjuncts(constraint, [&](const icl::Comparison& cmp) {
        if (auto v = upperBoundOn<icl::FeeRef>(cmp)) {
            Amount n = floorRational(*v);
            if (n < 0) n = 0;
            auto g = n.convert_to<std::uint64_t>();
            if (!best || g < *best) best = g;
        }
    });
    return best;
}

Rational stakeScore(const StakeCandidate& pool, const std::vector<StakeCandidate>& peers,
                    const std::vector<icl::StakeQualifier>& strategy, const DecisionPolicy& policy) {
    Rational wApy = policy.apy;
    Rational wDepth = policy.poolDepth;
    Rational wRisk = policy.riskScore;
    for (auto q : strategy) {
        switch (q) {
            case icl::StakeQualifier::LowRisk: wRisk = policy.riskScore * 2; break;
            case icl::StakeQualifier::MiddleRisk: wRisk = policy.riskScore; break;
            case icl::StakeQualifier::HighRisk: wRisk = policy.riskScore / 4; break;
            case icl::StakeQualifier::LongTerm: wApy = policy.apy * 3 / 2; break;
            case icl::StakeQualifier::MiddleTerm: break;
            case icl::StakeQualifier::ShortTerm: wDepth = policy.poolDepth * 2; break;
        }
    }
    std::int64_t maxApy = 0;
    Amount maxDepth = 0;
    for (const auto& p : peers) {
        maxApy = std::max(maxApy, p.apyPpm);
        if (p.depth > maxDepth) maxDepth = p.depth;
    }
    Rational nApy = maxApy == 0 ? Rational(0) : Rational(pool.apyPpm, maxApy);
    return wApy * nApy + wDepth * ratio(pool.depth, maxDepth) - wRisk * Rational(pool.riskPpm, 1'000'000);
}

StakeCandidate decideStake(const MarketInfo& market, Asset asset, const std::vector<icl::StakeQualifier>& strategy,
                           const DecisionPolicy& policy) {
    std::vector<StakeCandidate> pools;
    for (const auto& p : market.stakingPools) {
        if (p.asset == asset) pools.push_back(p);
    }
    if (pools.empty()) {
        throw CompileError(0, CompileError::Cause::NoCandidate, "no staking pool for " + std::string(symbol(asset)));
    }
    const StakeCandidate* best = nullptr;
    Rational bestScore;
    for (const auto& p : pools) {
        Rational s = stakeScore(p, pools, strategy, policy);
        if (!best || s > bestScore || (s == bestScore && tieKey(p) < tieKey(*best))) {
            best = &p;
            bestScore = s;
        }
    }
    return *best;
}

std::vector<NftCandidate> filterNftListings(const MarketInfo& market, Asset currency, const Amount& budget,
                                            const std::vector<icl::NftQualifier>& qualifiers, const Address& buyer) {
    std::vector<Rational> volumes, holders, asks;
    for (const auto& l : market.nftListings) {
        if (l.currency != currency) continue;
        volumes.emplace_back(l.volume7d);
        holders.emplace_back(l.holderCount);
        asks.emplace_back(l.ask);
    }
    Rational medVolume = median(volumes);
    Rational medHolders = median(holders);
    Rational q1Holders = firstQuartile(holders);
    Rational medAsk = median(asks);
    std::vector<NftCandidate> out;
    for (const auto& l : market.nftListings) {
        if (l.currency != currency || l.ask > budget || l.seller == buyer) continue;
        bool pass = true;
        for (auto q : qualifiers) {
            switch (q) {
                case icl::NftQualifier::Popular: pass = pass && Rational(l.volume7d) >= medVolume; break;
                case icl::NftQualifier::Rare: pass = pass && Rational(l.holderCount) <= q1Holders; break;
                case icl::NftQualifier::Mainstream: pass = pass && Rational(l.holderCount) >= medHolders; break;
                case icl::NftQualifier::Inexpensive: pass = pass && Rational(l.ask) <= medAsk; break;
                case icl::NftQualifier::PriceIncreasing: pass = pass && l.trendPpm > 0; break;
                case icl::NftQualifier::PriceDecreasing: pass = pass && l.trendPpm < 0; break;
            }
        }
        if (pass) out.push_back(l);
    }
    return out;
}

NftCandidate decideNftPurchase(const MarketInfo& market, Asset currency, const Amount& budget,
                               const std::vector<icl::NftQualifier>& qualifiers, const Address& buyer,
                               const DecisionPolicy& policy) {
    auto candidates = filterNftListings(market, currency, budget, qualifiers, buyer);
    if (candidates.empty()) throw CompileError(0, CompileError::Cause::NoCandidate, "no NFT listing passes the filters");
    bool wantFalling =
        std::find(qualifiers.begin(), qualifiers.end(), icl::NftQualifier::PriceDecreasing) != qualifiers.end();
    Amount maxVolume = 0;
    std::int64_t maxTrend = 0;
    std::map<Address, Amount> floors;
    for (const auto& l : market.nftListings) {
        if (l.currency != currency) continue;
        if (l.volume7d > maxVolume) maxVolume = l.volume7d;
        maxTrend = std::max(maxTrend, l.trendPpm < 0 ? -l.trendPpm : l.trendPpm);
        auto f = floors.find(l.collection);
        if (f == floors.end() || l.ask < f->second) floors[l.collection] = l.ask;
    }
    auto key = [](const NftCandidate& c) { return c.collection.str() + ":" + c.token.str(); };
    const NftCandidate* best = nullptr;
    Rational bestScore;
    for (const auto& c : candidates) {
        Rational trend = maxTrend == 0 ? Rational(0) : Rational(wantFalling ? -c.trendPpm : c.trendPpm, maxTrend);
        Rational nearFloor = c.ask == 0 ? Rational(1) : Rational(floors[c.collection], c.ask);
        Rational s = policy.volume * ratio(c.volume7d, maxVolume) + policy.priceTrend * trend +
                     policy.floorDistance * nearFloor;
        if (!best || s > bestScore || (s == bestScore && key(c) < key(*best))) {
            best = &c;
            bestScore = s;
        }
    }
    return *best;
}

std::pair<Amount, Asset> decideSalePrice(const MarketInfo& market, const Address& collection, const Address& token,
                                         const std::vector<icl::SellQualifier>& strategy) {
    std::optional<Amount> floor;
    std::optional<Amount> top;
    Asset currency = Asset::ETH;
    for (const auto& l : market.nftListings) {
        if (l.collection != collection || l.token == token) continue;
        if (!floor || l.ask < *floor) floor = l.ask;
        if (!top || l.ask > *top) top = l.ask;
        currency = l.currency;
    }
    if (!floor) throw CompileError(0, CompileError::Cause::NoCandidate, "no comparable listings in the collection");
    bool profitable = std::find(strategy.begin(), strategy.end(), icl::SellQualifier::Profitable) != strategy.end();
    bool fast = std::find(strategy.begin(), strategy.end(), icl::SellQualifier::TimeSaving) != strategy.end();
    if (profitable) return {*top, currency};
    if (fast) return {*floor * 98 / 100, currency};
    return {*floor, currency};
}

std::pair<DeltaMap, DeltaMap> estimateDeltas(const TransactionPlan& plan, const LedgerState&) {
    DeltaMap inc;
    DeltaMap dec;
    std::visit(Overloaded{
                   [&](const ledger::TokenTransfer& a) {
                       addDelta(dec, a.from, a.asset, a.amount);
                       addDelta(inc, a.to, a.asset, a.amount);
                   },
                   [&](const ledger::DexSwap& a) {
                       addDelta(dec, a.wallet, a.assetIn, a.amountIn);
                       addDelta(inc, a.wallet, a.assetOut, a.amountOutMin);
                   },
                   [&](const ledger::LendingBorrow& a) { addDelta(inc, a.wallet, a.asset, a.amount); },
                   [&](const ledger::LendingRepay& a) { addDelta(dec, a.wallet, a.asset, a.amount); },
                   [&](const ledger::DexMint& a) {
                       addDelta(dec, a.wallet, a.assetA, a.amountA);
                       addDelta(dec, a.wallet, a.assetB, a.amountB);
                       addDelta(inc, a.wallet, AssetId::lpShare(a.platform, a.assetA, a.assetB), a.minLiquidity);
                   },
                   [&](const ledger::DexBurn& a) {
                       addDelta(dec, a.wallet, AssetId::lpShare(a.platform, a.assetA, a.assetB), a.liquidity);
                       addDelta(inc, a.wallet, a.assetA, a.minA);
                       addDelta(inc, a.wallet, a.assetB, a.minB);
                   },
                   [&](const ledger::StakeDeposit& a) { addDelta(dec, a.wallet, a.asset, a.amount); },
                   [&](const ledger::NftPurchase& a) {
                       addDelta(dec, a.wallet, a.currency, a.maxPrice);
                       addDelta(inc, a.wallet, AssetId::nft(a.collection, a.token), 1);
                   },
                   // a listing may never fill, so it promises nothing
                   [&](const ledger::NftListing&) {},
               },
               plan.action);
    return {inc, dec};
}

TransactionPlan compileStatement(const icl::TriggerStatement& ts, const LedgerState& snap,
                                 const DecisionPolicy& policy, const PublicKey& sender, const CompileOptions& options) {
    const int idx = ts.index;
    TransactionPlan plan;
    plan.id = options.idPrefix + std::to_string(idx);
    plan.intentIndex = idx;
    plan.sender = sender;
    plan.gasPrice = options.gasPrice;
    plan.trigger = ts.trigger;
    plan.constraint = ts.constraint;
    const MarketInfo market = MarketInfo::fromState(snap);
    auto rethrow = [&](const CompileError& e) { return CompileError(idx, e.cause(), e.detail()); };

    plan.action = std::visit(
        Overloaded{
            [&](const icl::TransferStmt& s) -> ledger::Action {
                return ledger::TokenTransfer{s.from, s.to, s.amount.asset, amountOf(s.amount, idx)};
            },
            [&](const icl::BorrowStmt& s) -> ledger::Action {
                if (!snap.lendingReserves.count(ledger::MarketKey{s.platform, s.amount.asset})) {
                    throw CompileError(idx, CompileError::Cause::UnknownPairing,
                                       std::string(name(s.platform)) + " has no " +
                                           std::string(symbol(s.amount.asset)) + " lending market");
                }
                return ledger::LendingBorrow{s.platform, s.wallet, s.amount.asset, amountOf(s.amount, idx)};
            },
            [&](const icl::RepayStmt& s) -> ledger::Action {
                if (!snap.lendingReserves.count(ledger::MarketKey{s.platform, s.amount.asset})) {
                    throw CompileError(idx, CompileError::Cause::UnknownPairing,
                                       std::string(name(s.platform)) + " has no " +
                                           std::string(symbol(s.amount.asset)) + " lending market");
                }
                return ledger::LendingRepay{s.platform, s.wallet, s.amount.asset, amountOf(s.amount, idx)};
            },
            [&](const icl::SwapStmt& s) -> ledger::Action {
                Amount in = amountOf(s.amount, idx);
                auto quote = ledger::quoteSwap(snap, s.platform, s.amount.asset, in, s.toAsset);
                if (!quote || *quote == 0) {
                    throw CompileError(idx, CompileError::Cause::QuoteUnavailable,
                                       "no " + std::string(symbol(s.amount.asset)) + "/" +
                                           std::string(symbol(s.toAsset)) + " pool on " +
                                           std::string(name(s.platform)));
                }
                Amount minOut = applySlippage(*quote, slippageBound(ts.constraint));
                return ledger::DexSwap{s.platform, s.wallet, s.amount.asset, in, s.toAsset, minOut, *quote};
            },
            [&](const icl::AddLiquidityStmt& s) -> ledger::Action {
                Asset x = s.amountA.asset;
                Asset y = s.amountB.asset;
                if (x == y || !isDex(s.platform)) {
                    throw CompileError(idx, CompileError::Cause::UnknownPairing,
                                       "cannot add liquidity on " + std::string(name(s.platform)));
                }
                Amount ax = amountOf(s.amountA, idx);
                Amount ay = amountOf(s.amountB, idx);
                Amount minted = expectedMint(snap, s.platform, x, ax, y, ay);
                return ledger::DexMint{s.platform, s.receiver, x, ax, y, ay, applySlippage(minted, Rational(1, 100))};
            },
            [&](const icl::RemoveLiquidityStmt& s) -> ledger::Action {
                Asset x = s.amountA.asset;
                Asset y = s.amountB.asset;
                const ledger::Pool* pool = x == y ? nullptr : findPool(snap, s.platform, x, y);
                if (!pool || pool->lpSupply == 0) {
                    throw CompileError(idx, CompileError::Cause::QuoteUnavailable,
                                       "no " + std::string(symbol(x)) + "/" + std::string(symbol(y)) + " pool on " +
                                           std::string(name(s.platform)));
                }
                Amount ax = amountOf(s.amountA, idx);
                Amount ay = amountOf(s.amountB, idx);
                Amount liquidity = parseAmount(s.liquidity);
                if (liquidity == 0) {
                    auto key = ledger::PoolKey::of(s.platform, x, y);
                    const Amount& wantA = key.a == x ? ax : ay;
                    const Amount& wantB = key.a == x ? ay : ax;
                    auto ceilDiv = [](const Amount& n, const Amount& d) { return d == 0 ? Amount(0) : (n + d - 1) / d; };
                    Amount byA = ceilDiv(wantA * pool->lpSupply, pool->reserveA);
                    Amount byB = ceilDiv(wantB * pool->lpSupply, pool->reserveB);
                    liquidity = byA > byB ? byA : byB;
                }
                return ledger::DexBurn{s.platform, s.wallet, x, ax, y, ay, liquidity, s.tokenKey};
            },
            [&](const icl::StakeStmt& s) -> ledger::Action {
                StakeCandidate pool;
                try {
                    pool = decideStake(market, s.amount.asset, s.strategy.value_or(std::vector<icl::StakeQualifier>{}),
                                       policy);
                } catch (const CompileError& e) {
                    throw rethrow(e);
                }
                return ledger::StakeDeposit{pool.platform, s.wallet, s.amount.asset, amountOf(s.amount, idx)};
            },
            [&](const icl::SimpleStakeStmt& s) -> ledger::Action {
                if (!snap.stakingPools.count(ledger::MarketKey{s.platform, s.amount.asset})) {
                    throw CompileError(idx, CompileError::Cause::UnknownPairing,
                                       std::string(name(s.platform)) + " has no " +
                                           std::string(symbol(s.amount.asset)) + " staking pool");
                }
                return ledger::StakeDeposit{s.platform, s.wallet, s.amount.asset, amountOf(s.amount, idx)};
            },
            [&](const icl::BuyNftStmt& s) -> ledger::Action {
                Amount budget = amountOf(s.budget, idx);
                NftCandidate pick;
                try {
                    pick = decideNftPurchase(market, s.budget.asset, budget, s.qualifiers, s.wallet, policy);
                } catch (const CompileError& e) {
                    throw rethrow(e);
                }
                return ledger::NftPurchase{pick.collection, pick.token, s.wallet, pick.currency, pick.ask};
            },
            [&](const icl::SimpleBuyNftStmt& s) -> ledger::Action {
                Amount budget = amountOf(s.budget, idx);
                for (const auto& l : market.nftListings) {
                    if (l.collection == s.collection && l.token == s.nft && l.currency == s.budget.asset &&
                        l.ask <= budget) {
                        return ledger::NftPurchase{l.collection, l.token, s.wallet, l.currency, l.ask};
                    }
                }
                throw CompileError(idx, CompileError::Cause::NoCandidate, "no listing within budget for the NFT");
            },
            [&](const icl::SellNftStmt& s) -> ledger::Action {
                if (snap.balanceOf(s.wallet, AssetId::nft(s.collection, s.nft)) < 1) {
                    throw CompileError(idx, CompileError::Cause::NotOwner, "wallet does not hold the NFT");
                }
                std::pair<Amount, Asset> price;
                try {
                    price = decideSalePrice(market, s.collection, s.nft,
                                            s.strategy.value_or(std::vector<icl::SellQualifier>{}));
                } catch (const CompileError& e) {
                    throw rethrow(e);
                }
                return ledger::NftListing{s.collection, s.nft, s.wallet, price.second, price.first};
            },
            [&](const icl::SimpleSellNftStmt& s) -> ledger::Action {
                if (snap.balanceOf(s.wallet, AssetId::nft(s.collection, s.nft)) < 1) {
                    throw CompileError(idx, CompileError::Cause::NotOwner, "wallet does not hold the NFT");
                }
                return ledger::NftListing{s.collection, s.nft, s.wallet, s.minAmount.asset,
                                          amountOf(s.minAmount, idx)};
            },
        },
        ts.statement);

    std::uint64_t scheduled = snap.gasCost(ledger::kindOf(plan.action));
    plan.gasLimit = feeBound(ts.constraint).value_or(scheduled == 0 ? 500'000 : scheduled);
    std::tie(plan.declaredIncreases, plan.declaredDecreases) = estimateDeltas(plan, snap);
    return plan;
}

TransactionSet compileProgram(const icl::IclProgram& program, const LedgerState& snapshot,
                              const DecisionPolicy& policy, const PublicKey& sender, const CompileOptions& options) {
    TransactionSet set;
    set.snapshotHeight = snapshot.height;
    for (const auto& ts : program.statements) set.plans.push_back(compileStatement(ts, snapshot, policy, sender, options));
    return set;
}

J toJson(const TransactionSet& set) {
    J entries = J::array();
    for (const auto& p : set.plans) {
        entries.push_back(J{{"idx", p.intentIndex},
                            {"trigger", p.trigger ? J(icl::print(*p.trigger)) : J(nullptr)},
                            {"mainOperation", ledger::describe(p.action)},
                            {"constraint", p.constraint ? J(icl::print(*p.constraint)) : J(nullptr)},
                            {"gasLimit", p.gasLimit},
                            {"plan", ledger::toJson(p)}});
    }
    return J{{"snapshotHeight", set.snapshotHeight}, {"snapshotRoot", toHex(set.snapshotRoot)}, {"entries", entries}};
}

}  // namespace intent::compiler
