// SPDX-License-Identifier: Apache-2.0
#include "intent/ledger/transaction.hpp"

#include <stdexcept>

#include "intent/icl/parser.hpp"
#include "intent/icl/printer.hpp"

namespace intent::ledger {
namespace {

using J = nlohmann::ordered_json;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void writeDeltas(ByteWriter& w, const DeltaMap& deltas) {
    w.u32(static_cast<std::uint32_t>(deltas.size()));
    for (const auto& [key, amount] : deltas) {
        w.str(key.wallet.str()).str(key.asset.str()).bigint(amount);
    }
}

void writeCondition(ByteWriter& w, const icl::ConditionPtr& c) {
    if (c) {
        w.u8(1).str(icl::print(*c));
    } else {
        w.u8(0);
    }
}

std::string sym(Asset a) { return std::string(symbol(a)); }
std::string plat(Platform p) { return std::string(name(p)); }

Asset assetField(const J& j, const char* key) {
    auto a = parseAsset(j.at(key).get<std::string>());
    if (!a) throw std::invalid_argument(std::string("unknown asset in field ") + key);
    return *a;
}

Platform platformField(const J& j, const char* key) {
    auto p = parsePlatform(j.at(key).get<std::string>());
    if (!p) throw std::invalid_argument(std::string("unknown platform in field ") + key);
    return *p;
}

Address addr(const J& j, const char* key) { return Address::parse(j.at(key).get<std::string>()); }
Amount amt(const J& j, const char* key) { return parseAmount(j.at(key).get<std::string>()); }

icl::ConditionPtr conditionFromJson(const J& j) {
    if (j.is_null()) return nullptr;
    return icl::parseCondition(j.get<std::string>());
}

}  // namespace

Bytes encodePlan(const TransactionPlan& plan) {
    ByteWriter w;
    w.raw(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>("ITX1"), 4));
    w.str(plan.id);
    w.u32(static_cast<std::uint32_t>(plan.intentIndex));
    w.raw(plan.sender);
    w.u64(plan.gasLimit);
    w.u64(plan.gasPrice);
    w.u8(static_cast<std::uint8_t>(kindOf(plan.action)));
    std::visit(Overloaded{
                   [&](const TokenTransfer& a) {
                       w.str(a.from.str()).str(a.to.str()).str(sym(a.asset)).bigint(a.amount);
                   },
                   [&](const DexSwap& a) {
                       w.str(plat(a.platform)).str(a.wallet.str()).str(sym(a.assetIn)).bigint(a.amountIn);
                       w.str(sym(a.assetOut)).bigint(a.amountOutMin).bigint(a.quotedOut);
                   },
                   [&](const LendingBorrow& a) {
                       w.str(plat(a.platform)).str(a.wallet.str()).str(sym(a.asset)).bigint(a.amount);
                   },
                   [&](const LendingRepay& a) {
                       w.str(plat(a.platform)).str(a.wallet.str()).str(sym(a.asset)).bigint(a.amount);
                   },
                   [&](const DexMint& a) {
                       w.str(plat(a.platform)).str(a.wallet.str());
                       w.str(sym(a.assetA)).bigint(a.amountA).str(sym(a.assetB)).bigint(a.amountB);
                       w.bigint(a.minLiquidity);
                   },
                   [&](const DexBurn& a) {
                       w.str(plat(a.platform)).str(a.wallet.str());
                       w.str(sym(a.assetA)).bigint(a.minA).str(sym(a.assetB)).bigint(a.minB);
                       w.bigint(a.liquidity);
                       if (a.positionKey) {
                           w.u8(1).str(a.positionKey->str());
                       } else {
                           w.u8(0);
                       }
                   },
                   [&](const StakeDeposit& a) {
                       w.str(plat(a.platform)).str(a.wallet.str()).str(sym(a.asset)).bigint(a.amount);
                   },
                   [&](const NftPurchase& a) {
                       w.str(a.collection.str()).str(a.token.str()).str(a.wallet.str());
                       w.str(sym(a.currency)).bigint(a.maxPrice);
                   },
                   [&](const NftListing& a) {
                       w.str(a.collection.str()).str(a.token.str()).str(a.wallet.str());
                       w.str(sym(a.currency)).bigint(a.price);
                   },
               },
               plan.action);
    writeDeltas(w, plan.declaredIncreases);
    writeDeltas(w, plan.declaredDecreases);
    writeCondition(w, plan.trigger);
    writeCondition(w, plan.constraint);
    return w.take();
}

Bytes signingPayload(const TransactionPlan& plan, const Digest& stateRoot) {
    Bytes out = encodePlan(plan);
    out.insert(out.end(), stateRoot.begin(), stateRoot.end());
    return out;
}

Digest txHash(const SignedTransaction& tx) { return sha256(signingPayload(tx.plan, tx.stateRoot)); }

std::string txHashHex(const SignedTransaction& tx) { return toHex(txHash(tx)); }

bool verifyTransaction(const SignedTransaction& tx) {
    if (tx.signer != tx.plan.sender) return false;
    return verifySignature(tx.signer, signingPayload(tx.plan, tx.stateRoot), tx.signature);
}

J deltasToJson(const DeltaMap& deltas) {
    J arr = J::array();
    for (const auto& [key, amount] : deltas) {
        arr.push_back(J{{"wallet", key.wallet.str()}, {"asset", key.asset.str()}, {"amount", toString(amount)}});
    }
    return arr;
}

DeltaMap deltasFromJson(const J& j) {
    DeltaMap out;
    for (const auto& e : j) {
        out[BalanceKey{addr(e, "wallet"), AssetId::parse(e.at("asset").get<std::string>())}] = amt(e, "amount");
    }
    return out;
}

J actionToJson(const Action& action) {
    J j{{"kind", name(kindOf(action))}};
    std::visit(Overloaded{
                   [&](const TokenTransfer& a) {
                       j["from"] = a.from.str();
                       j["to"] = a.to.str();
                       j["asset"] = sym(a.asset);
                       j["amount"] = toString(a.amount);
                   },
                   [&](const DexSwap& a) {
                       j["platform"] = plat(a.platform);
                       j["wallet"] = a.wallet.str();
                       j["assetIn"] = sym(a.assetIn);
                       j["amountIn"] = toString(a.amountIn);
                       j["assetOut"] = sym(a.assetOut);
                       j["amountOutMin"] = toString(a.amountOutMin);
                       j["quotedOut"] = toString(a.quotedOut);
                   },
                   [&](const LendingBorrow& a) {
                       j["platform"] = plat(a.platform);
                       j["wallet"] = a.wallet.str();
                       j["asset"] = sym(a.asset);
                       j["amount"] = toString(a.amount);
                   },
                   [&](const LendingRepay& a) {
                       j["platform"] = plat(a.platform);
                       j["wallet"] = a.wallet.str();
                       j["asset"] = sym(a.asset);
                       j["amount"] = toString(a.amount);
                   },
                   [&](const DexMint& a) {
                       j["platform"] = plat(a.platform);
                       j["wallet"] = a.wallet.str();
                       j["assetA"] = sym(a.assetA);
                       j["amountA"] = toString(a.amountA);
                       j["assetB"] = sym(a.assetB);
                       j["amountB"] = toString(a.amountB);
                       j["minLiquidity"] = toString(a.minLiquidity);
                   },
                   [&](const DexBurn& a) {
                       j["platform"] = plat(a.platform);
                       j["wallet"] = a.wallet.str();
                       j["assetA"] = sym(a.assetA);
                       j["minA"] = toString(a.minA);
                       j["assetB"] = sym(a.assetB);
                       j["minB"] = toString(a.minB);
                       j["liquidity"] = toString(a.liquidity);
                       j["positionKey"] = a.positionKey ? J(a.positionKey->str()) : J(nullptr);
                   },
                   [&](const StakeDeposit& a) {
                       j["platform"] = plat(a.platform);
                       j["wallet"] = a.wallet.str();
                       j["asset"] = sym(a.asset);
                       j["amount"] = toString(a.amount);
                   },
                   [&](const NftPurchase& a) {
                       j["collection"] = a.collection.str();
                       j["token"] = a.token.str();
                       j["wallet"] = a.wallet.str();
                       j["currency"] = sym(a.currency);
                       j["maxPrice"] = toString(a.maxPrice);
                   },
                   [&](const NftListing& a) {
                       j["collection"] = a.collection.str();
                       j["token"] = a.token.str();
                       j["wallet"] = a.wallet.str();
                       j["currency"] = sym(a.currency);
                       j["price"] = toString(a.price);
                   },
               },
               action);
    return j;
}

Action actionFromJson(const J& j) {
    auto kind = parseActionKind(j.at("kind").get<std::string>());
    if (!kind) throw std::invalid_argument("unknown action kind");
    switch (*kind) {
        case ActionKind::TokenTransfer:
            return TokenTransfer{addr(j, "from"), addr(j, "to"), assetField(j, "asset"), amt(j, "amount")};
        case ActionKind::DexSwap:
            return DexSwap{platformField(j, "platform"), addr(j, "wallet"),      assetField(j, "assetIn"),
                           amt(j, "amountIn"),           assetField(j, "assetOut"), amt(j, "amountOutMin"),
                           amt(j, "quotedOut")};
        case ActionKind::LendingBorrow:
            return LendingBorrow{platformField(j, "platform"), addr(j, "wallet"), assetField(j, "asset"),
                                 amt(j, "amount")};
        case ActionKind::LendingRepay:
            return LendingRepay{platformField(j, "platform"), addr(j, "wallet"), assetField(j, "asset"),
                                amt(j, "amount")};
        case ActionKind::DexMint:
            return DexMint{platformField(j, "platform"), addr(j, "wallet"),        assetField(j, "assetA"),
                           amt(j, "amountA"),            assetField(j, "assetB"), amt(j, "amountB"),
                           amt(j, "minLiquidity")};
        case ActionKind::DexBurn: {
            DexBurn b{platformField(j, "platform"), addr(j, "wallet"), assetField(j, "assetA"), amt(j, "minA"),
                      assetField(j, "assetB"),      amt(j, "minB"),    amt(j, "liquidity"),     std::nullopt};
            if (j.contains("positionKey") && !j.at("positionKey").is_null()) b.positionKey = addr(j, "positionKey");
            return b;
        }
        case ActionKind::StakeDeposit:
            return StakeDeposit{platformField(j, "platform"), addr(j, "wallet"), assetField(j, "asset"),
                                amt(j, "amount")};
        case ActionKind::NftPurchase:
            return NftPurchase{addr(j, "collection"), addr(j, "token"), addr(j, "wallet"), assetField(j, "currency"),
                               amt(j, "maxPrice")};
        case ActionKind::NftListing:
            return NftListing{addr(j, "collection"), addr(j, "token"), addr(j, "wallet"), assetField(j, "currency"),
                              amt(j, "price")};
    }
    throw std::invalid_argument("unknown action kind");
}

J toJson(const TransactionPlan& plan) {
    return J{{"id", plan.id},
             {"intentIndex", plan.intentIndex},
             {"sender", toHex(plan.sender)},
             {"gasLimit", plan.gasLimit},
             {"gasPrice", plan.gasPrice},
             {"action", actionToJson(plan.action)},
             {"declaredIncreases", deltasToJson(plan.declaredIncreases)},
             {"declaredDecreases", deltasToJson(plan.declaredDecreases)},
             {"trigger", plan.trigger ? J(icl::print(*plan.trigger)) : J(nullptr)},
             {"constraint", plan.constraint ? J(icl::print(*plan.constraint)) : J(nullptr)}};
}

TransactionPlan planFromJson(const J& j) {
    TransactionPlan p;
    p.id = j.at("id").get<std::string>();
    p.intentIndex = j.at("intentIndex").get<int>();
    p.sender = fromHexFixed<32>(j.at("sender").get<std::string>());
    p.gasLimit = j.at("gasLimit").get<std::uint64_t>();
    p.gasPrice = j.at("gasPrice").get<std::uint64_t>();
    p.action = actionFromJson(j.at("action"));
    p.declaredIncreases = deltasFromJson(j.at("declaredIncreases"));
    p.declaredDecreases = deltasFromJson(j.at("declaredDecreases"));
    p.trigger = conditionFromJson(j.at("trigger"));
    p.constraint = conditionFromJson(j.at("constraint"));
    return p;
}

J toJson(const SignedTransaction& tx) {
    return J{{"hash", txHashHex(tx)},
             {"plan", toJson(tx.plan)},
             {"stateRoot", toHex(tx.stateRoot)},
             {"signer", toHex(tx.signer)},
             {"signature", toHex(tx.signature)}};
}

SignedTransaction signedFromJson(const J& j) {
    SignedTransaction tx;
    tx.plan = planFromJson(j.at("plan"));
    tx.stateRoot = fromHexFixed<32>(j.at("stateRoot").get<std::string>());
    tx.signer = fromHexFixed<32>(j.at("signer").get<std::string>());
    tx.signature = fromHexFixed<64>(j.at("signature").get<std::string>());
    return tx;
}

}  // namespace intent::ledger
