// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>

#include "intent/feasibility/checker.hpp"
#include "intent/ledger/apply.hpp"
#include "intent/ledger/genesis.hpp"
#include "support.hpp"

using namespace intent;
using namespace intent::feasibility;
using intent::testing::keyFromByte;
using intent::testing::plan;
using intent::testing::sign;

namespace {

const Address kSink = Address::parse("0xdead");

struct Market {
    ledger::LedgerState state;
    SigningKey target = keyFromByte(1);
    SigningKey funder = keyFromByte(2);
    SigningKey rival = keyFromByte(3);
    SigningKey bystander = keyFromByte(4);

    Market() {
        auto key = ledger::PoolKey::of(Platform::Uniswap, Asset::USDC, Asset::ETH);
        ledger::Pool p;
        Amount usdc = ledger::units(Asset::USDC, "4000000");
        Amount eth = ledger::units(Asset::ETH, "1000");
        p.reserveA = key.a == Asset::USDC ? usdc : eth;
        p.reserveB = key.a == Asset::USDC ? eth : usdc;
        p.lpSupply = 1;
        state.pools[key] = p;
        for (const auto* k : {&target, &funder, &bystander}) {
            state.setBalance(addr(*k), Asset::ETH, ledger::units(Asset::ETH, "100"));
        }
        state.config.blockGasLimit = 3'000'000;
    }

    static Address addr(const SigningKey& k) { return addressOf(k.publicKey()); }

    Digest root{};

    ledger::SignedTransaction swap(const SigningKey& k, const std::string& id, const char* eth, bool tight,
                                   std::uint64_t price = 5) {
        Amount in = ledger::units(Asset::ETH, eth);
        auto q = ledger::quoteSwap(state, Platform::Uniswap, Asset::ETH, in, Asset::USDC);
        ledger::DexSwap s{Platform::Uniswap, addr(k), Asset::ETH, in, Asset::USDC, tight ? *q : Amount(0), *q};
        return sign(k, plan(k, id, s, price, 200'000), root);
    }

    ledger::SignedTransaction transfer(const SigningKey& k, const std::string& id, const Address& to, const char* eth,
                                       std::uint64_t price = 5) {
        ledger::TokenTransfer t{addr(k), to, Asset::ETH, ledger::units(Asset::ETH, eth)};
        return sign(k, plan(k, id, t, price, 100'000), root);
    }
};

ledger::PendingTx pending(ledger::SignedTransaction tx, std::uint64_t seq) {
    return ledger::PendingTx{tx, ledger::txHashHex(tx), seq};
}

std::vector<std::string> ids(const std::vector<ledger::PendingTx>& txs) {
    std::vector<std::string> out;
    for (const auto& p : txs) out.push_back(p.tx.plan.id);
    return out;
}

}  // namespace

TEST_CASE("next-block prediction packs by price within the horizon") {
    Market m;
    std::vector<ledger::PendingTx> pool;
    auto t = [&](const std::string& id, std::uint64_t price, std::uint64_t limit) {
        auto tx = sign(m.funder, plan(m.funder, id, ledger::TokenTransfer{Market::addr(m.funder), kSink, Asset::ETH, 1},
                                      price, limit),
                       {});
        pool.push_back(pending(tx, pool.size()));
    };
    t("g200", 9, 200'000);
    t("g150", 8, 150'000);
    t("g90", 7, 90'000);
    FeasibilityConfig cfg;
    CHECK(ids(predictNextBlock(pool, cfg, 300'000)) == std::vector<std::string>{"g200", "g90"});
    cfg.k = 2;
    CHECK(ids(predictNextBlock(pool, cfg, 300'000)) == std::vector<std::string>{"g200", "g150", "g90"});
    cfg.k = 0.5;
    CHECK(ids(predictNextBlock(pool, cfg, 300'000)) == std::vector<std::string>{"g150"});
    CHECK(predictNextBlock({}, cfg, 300'000).empty());

    cfg.k = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.contexts = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.thetaLow = 0.95;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("classification thresholds") {
    FeasibilityConfig cfg;
    CHECK(classify(1.0, cfg) == Risk::Low);
    CHECK(classify(0.9, cfg) == Risk::Low);
    CHECK(classify(0.85, cfg) == Risk::Warn);
    CHECK(classify(0.5, cfg) == Risk::Warn);
    CHECK(classify(0.45, cfg) == Risk::High);
    CHECK(classify(0.0, cfg) == Risk::High);
}

TEST_CASE("interference follows shared wallets and pools transitively") {
    Market m;
    auto target = m.swap(m.target, "target", "1", true);
    std::vector<ledger::PendingTx> predicted{
        pending(m.transfer(m.funder, "c1", Market::addr(m.rival), "10"), 0),
        pending(m.transfer(m.bystander, "d", kSink, "1"), 1),
        pending(m.swap(m.rival, "c2", "10", false), 2),
    };
    // c2 shares the pool; c1 reaches the target only through c2's wallet
    CHECK(interferenceSet(target, predicted) == std::vector<std::size_t>{0, 2});
    CHECK(interferenceSet(target, {predicted[0], predicted[1]}).empty());
    CHECK(interferenceSet(target, {}).empty());

    FeasibilityConfig cfg;
    auto contexts = buildContexts(target, predicted, cfg);
    REQUIRE(contexts.size() == cfg.contexts);
    std::set<std::vector<std::string>> orders;
    for (const auto& c : contexts) {
        auto order = ids(c.prefix);
        std::sort(order.begin(), order.end());
        CHECK(order == std::vector<std::string>{"c1", "c2"});
        orders.insert(ids(c.prefix));
    }
    CHECK(orders.size() == 2);

    // a target already in the mempool is never part of its own prefix
    predicted.push_back(pending(target, 3));
    for (const auto& c : buildContexts(target, predicted, cfg)) CHECK(c.prefix.size() == 2);
}

TEST_CASE("an isolated feasible transaction scores one") {
    Market m;
    auto target = m.transfer(m.target, "target", kSink, "1");
    std::vector<ledger::PendingTx> mempool{pending(m.swap(m.bystander, "other", "5", false), 0)};
    auto v = checkFeasibility(target, m.state, mempool, m.state.config.blockGasLimit, {});
    CHECK(v.rho == 1.0);
    CHECK(v.risk == Risk::Low);
    CHECK(v.interference == 0);
    CHECK(v.perContext.size() == 20);
    CHECK(naiveCheck(target, m.state));
}

TEST_CASE("an overdrawn transaction scores zero") {
    Market m;
    auto target = m.transfer(m.target, "target", kSink, "1000");
    auto v = checkFeasibility(target, m.state, {}, m.state.config.blockGasLimit, {});
    CHECK(v.rho == 0.0);
    CHECK(v.risk == Risk::High);
    CHECK_FALSE(v.reasons.front().empty());
    CHECK_FALSE(naiveCheck(target, m.state));
}

TEST_CASE("order-dependent interference matches the enumerated oracle") {
    Market m;
    auto target = m.swap(m.target, "target", "1", true);
    // c2 can only pay after c1 funds it; once it lands, the target's tight bound fails
    auto c1 = m.transfer(m.funder, "c1", Market::addr(m.rival), "10");
    auto c2 = m.swap(m.rival, "c2", "10", false);
    std::vector<ledger::PendingTx> mempool{pending(c1, 0), pending(c2, 1)};

    // oracle: both orders by hand
    auto runOrder = [&](const std::vector<const ledger::SignedTransaction*>& order) {
        auto fork = m.state;
        fork.height += 1;
        for (const auto* tx : order) ledger::applyTransaction(fork, *tx, false);
        return ledger::applyTransaction(fork, target, false).success();
    };
    CHECK_FALSE(runOrder({&c1, &c2}));
    CHECK(runOrder({&c2, &c1}));
    CHECK(naiveCheck(target, m.state));

    FeasibilityConfig cfg;
    cfg.contexts = 200;
    auto v = checkFeasibility(target, m.state, mempool, m.state.config.blockGasLimit, cfg);
    auto contexts = buildContexts(target, predictNextBlock(mempool, cfg, m.state.config.blockGasLimit), cfg);
    std::size_t expected = 0;
    for (std::size_t i = 0; i < contexts.size(); ++i) {
        bool c2First = contexts[i].prefix.front().tx.plan.id == "c2";
        CHECK(v.perContext[i] == c2First);
        expected += c2First;
    }
    CHECK(v.rho == doctest::Approx(static_cast<double>(expected) / 200));
    CHECK(v.rho == doctest::Approx(0.5).epsilon(0.2));
    CHECK(v.interference == 2);
    CHECK(v.risk == classify(v.rho, cfg));
}

TEST_CASE("checks are deterministic and leave the node untouched") {
    Market m;
    auto mk = [&]() { return std::make_unique<ledger::Node>(m.state); };
    auto node = mk();
    m.root = node->headRoot();
    node->sendRawTransaction(m.transfer(m.funder, "c1", Market::addr(m.rival), "10"));
    node->sendRawTransaction(m.swap(m.rival, "c2", "10", false));
    auto target = m.swap(m.target, "target", "1", true);
    auto before = node->headState();
    auto root = node->headRoot();
    FeasibilityConfig cfg;
    cfg.seed = 99;
    auto a = checkFeasibility(target, *node, cfg);
    auto b = checkFeasibility(target, *node, cfg);
    CHECK(a.perContext == b.perContext);
    CHECK(a.rho == b.rho);
    CHECK(toJson(a).dump() == toJson(b).dump());
    CHECK_FALSE(toJson(a).contains("latencyMs"));
    CHECK(toJson(a, true).contains("latencyMs"));
    CHECK(node->headRoot() == root);
    CHECK(node->headState() == before);
    CHECK(node->pendingCount() == 2);

    auto hook = makeHook(cfg);
    auto fv = hook(target, *node);
    CHECK(fv.score == a.rho);
    CHECK(fv.risk == a.risk);
}
