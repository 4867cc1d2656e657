// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "../support/random_flows.hpp"
#include "intent/compiler/compiler.hpp"
#include "intent/icl/parser.hpp"
#include "intent/ledger/genesis.hpp"
#include "intent/optimizer/executor.hpp"
#include "intent/optimizer/knapsack.hpp"
#include "intent/optimizer/prune.hpp"
#include "support.hpp"

using namespace intent;
using namespace intent::optimizer;

namespace {

std::string sampleSource() {
    std::ifstream in(std::string(INTENT_CORPUS_DIR) + "/valid/sample_program.icl");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

BalanceKey key(const char* wallet, Asset a) { return BalanceKey{Address::parse(wallet), a}; }

ledger::TransactionPlan flowPlan(int index, ledger::DeltaMap inc, ledger::DeltaMap dec) {
    ledger::TransactionPlan p;
    p.id = "n" + std::to_string(index);
    p.intentIndex = index;
    p.action = ledger::TokenTransfer{Address::parse("0x1"), Address::parse("0x2"), Asset::USDC, 0};
    p.declaredIncreases = std::move(inc);
    p.declaredDecreases = std::move(dec);
    return p;
}

// Compiles and signs a program against the node's head.
struct Session {
    ledger::Node node;
    SigningKey signer = testing::keyFromByte(0x42);

    explicit Session(ledger::LedgerState genesis) : node(std::move(genesis)) {}

    std::vector<ledger::SignedTransaction> compile(const std::string& source,
                                                   const std::vector<Address>& owners = {Address::parse("0xa")}) {
        for (const auto& o : owners) node.approve(o, addressOf(signer.publicKey()), ledger::kAnyAsset,
                                                  ledger::unlimitedAllowance());
        node.mineBlock();
        auto set = compiler::compileProgram(icl::parse(source), node.headState(), {}, signer.publicKey());
        std::vector<ledger::SignedTransaction> out;
        for (auto& p : set.plans) out.push_back(testing::sign(signer, p, node.headRoot()));
        return out;
    }

    DependencyGraph graph(const std::vector<ledger::SignedTransaction>& txs) {
        std::vector<ledger::TransactionPlan> plans;
        for (const auto& t : txs) plans.push_back(t.plan);
        return buildDependencyGraph(txs, baseBalances(plans, node.headState()));
    }
};

std::set<std::pair<std::string, std::string>> edgeIds(const DependencyGraph& g) {
    std::set<std::pair<std::string, std::string>> out;
    for (const auto& [e, kind] : g.edges()) out.insert({g.nodes[e.first].plan.id, g.nodes[e.second].plan.id});
    return out;
}

}  // namespace

TEST_CASE("knapsack examples and brute-force agreement") {
    using C = Contents<std::string>;
    CHECK(multipleKnapsack<std::string>({}, C{{"A", 5}}).empty());
    auto one = multipleKnapsack<std::string>({C{{"A", 3}}, C{{"A", 2}}, C{{"A", 4}}}, C{{"A", 5}});
    CHECK(one == std::vector<std::size_t>{0, 1});
    auto two = multipleKnapsack<std::string>({C{{"A", 1}, {"B", 2}}, C{{"A", 2}, {"B", 1}}, C{{"A", 2}, {"B", 2}}},
                                             C{{"A", 3}, {"B", 3}});
    CHECK(two == std::vector<std::size_t>{0, 1});
    CHECK(multipleKnapsack<std::string>({C{{"Z", 1}}}, C{{"A", 5}}).empty());
    CHECK(multipleKnapsack<std::string>({C{{"A", 0}}, C{}}, C{{"A", 0}}).size() == 2);

    Rng rng(11);
    for (int trial = 0; trial < 1500; ++trial) {
        std::size_t m = rng.below(9);
        std::size_t types = 1 + rng.below(3);
        const char* names[] = {"A", "B", "C"};
        C caps;
        for (std::size_t t = 0; t < types; ++t) caps[names[t]] = rng.between(0, 30);
        std::vector<C> packs(m);
        for (auto& p : packs) {
            for (std::size_t t = 0; t < types; ++t) {
                if (rng.chance(0.7)) p[names[t]] = rng.between(0, 15);
            }
        }
        auto chosen = multipleKnapsack(packs, caps);
        C used;
        for (std::size_t i : chosen) {
            for (const auto& [k, v] : packs[i]) used[k] += v;
        }
        for (const auto& [k, v] : used) CHECK(v <= caps[k]);
        CHECK(chosen.size() == testing::bruteForceKnapsack(packs, caps));
        auto greedy = greedyKnapsack(packs, caps);
        CHECK(greedy.size() <= chosen.size());
    }
}

TEST_CASE("the sample set builds the expected graph") {
    Session s(ledger::sampleGenesis());
    auto txs = s.compile(sampleSource());
    AssetFlowIndex wa;
    std::vector<ledger::TransactionPlan> plans;
    for (const auto& t : txs) plans.push_back(t.plan);
    auto g = buildDependencyGraph(txs, baseBalances(plans, s.node.headState()), &wa);
    std::set<std::pair<std::string, std::string>> expected{{"tx1", "tx4"}, {"tx2", "tx3"}, {"tx2", "tx5"}};
    CHECK(edgeIds(g) == expected);
    CHECK(wa.in.at(key("0xa", Asset::USDT)) == std::vector<std::size_t>{0});
    CHECK(wa.de.at(key("0xa", Asset::USDC)) == std::vector<std::size_t>{0, 1, 3});
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (const auto& [k, v] : g.nodes[i].plan.declaredIncreases) {
            auto& list = wa.in.at(k);
            CHECK(std::find(list.begin(), list.end(), i) != list.end());
        }
    }
    // 1,000,000 - 400,000 (tx1) - 200,000 (tx2)
    CHECK(g.nodes[3].predicted.at(key("0xa", Asset::USDC)) == ledger::units(Asset::USDC, "400000"));
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(g.safe(i));

    auto stats = pruneGraph(g, PruneOptions{12, true});
    CHECK(stats.incrementalConsistent);
    CHECK(stats.removedEdges == 0);
    CHECK(edgeIds(g) == expected);

    std::string dot = toDot(g);
    CHECK(dot.find("\"tx2\" -> \"tx5\"") != std::string::npos);
    CHECK(toJson(g)["criticalPath"] == 1);
}

TEST_CASE("independent transfers have no edges") {
    auto g = buildDependencyGraph(
        {flowPlan(1, {{key("0x2", Asset::USDC), 5}}, {{key("0x1", Asset::USDC), 5}}),
         flowPlan(2, {{key("0x4", Asset::USDC), 5}}, {{key("0x3", Asset::USDC), 5}})},
        {{key("0x1", Asset::USDC), 10}, {key("0x3", Asset::USDC), 10}});
    CHECK(g.edges().empty());
}

TEST_CASE("pruning removes exactly the parents the slack can spare") {
    auto w = key("0x1", Asset::USDC);
    auto v = key("0x9", Asset::USDC);
    // three producers of 10, a consumer of 25 with 18 already on hand:
    // slack 18 + 30 - 25 = 23 covers two producers, not three
    std::vector<ledger::TransactionPlan> plans{
        flowPlan(1, {{w, 10}}, {{v, 1}}),
        flowPlan(2, {{w, 10}}, {{v, 1}}),
        flowPlan(3, {{w, 10}}, {{v, 1}}),
        flowPlan(4, {}, {{w, 25}}),
    };
    auto g = buildDependencyGraph(plans, {{w, 18}, {v, 3}});
    REQUIRE(g.nodes[3].parents.size() == 3);
    auto stats = pruneGraph(g, PruneOptions{12, true});
    CHECK(stats.incrementalConsistent);
    CHECK(stats.removedEdges == 2);
    CHECK(g.nodes[3].parents.size() == 1);
    CHECK(g.safe(3));

    // slack 5 covers any single producer of 10? no; of 4, yes but not two
    std::vector<ledger::TransactionPlan> single{
        flowPlan(1, {{w, 4}}, {{v, 1}}),
        flowPlan(2, {{w, 4}}, {{v, 1}}),
        flowPlan(3, {}, {{w, 10}}),
    };
    auto g1 = buildDependencyGraph(single, {{w, 7}, {v, 2}});
    pruneGraph(g1);
    CHECK(g1.nodes[2].parents.size() == 1);

    // zero slack: nothing can go
    auto g0 = buildDependencyGraph({flowPlan(1, {{w, 10}}, {{v, 1}}), flowPlan(2, {}, {{w, 10}})}, {{v, 1}});
    auto s0 = pruneGraph(g0);
    CHECK(s0.removedEdges == 0);
    CHECK(g0.hasEdge(0, 1));
}

TEST_CASE("rewiring keeps a chain ordered after a pruned edge") {
    auto u = key("0x1", Asset::USDC);
    auto e = key("0x1", Asset::ETH);
    auto d = key("0x1", Asset::DAI);
    // A produces USDC for B, but B holds enough already; C needs B's ETH.
    std::vector<ledger::TransactionPlan> plans{
        flowPlan(1, {{u, 5}}, {{d, 1}}),
        flowPlan(2, {{e, 3}, {d, 1}}, {{u, 5}}),
        flowPlan(3, {}, {{e, 3}}),
    };
    auto g = buildDependencyGraph(plans, {{u, 100}, {d, 1}});
    REQUIRE(g.hasEdge(0, 1));
    REQUIRE(g.hasEdge(1, 2));
    pruneGraph(g, PruneOptions{12, true});
    CHECK_FALSE(g.hasEdge(0, 1));
    CHECK(g.hasEdge(0, 2));
    CHECK(g.edgeKind(0, 2) == EdgeKind::Rewired);
    std::vector<bool> safe(3, true);
    auto check = testing::allTopologicalOrders(g, safe);
    CHECK(check.violations == 0);
}

TEST_CASE("pruning is safe over every topological order") {
    Rng rng(2024);
    std::size_t totalOrders = 0, removed = 0;
    for (int trial = 0; trial < 250; ++trial) {
        ledger::DeltaMap base;
        auto plans = testing::randomFlowPlans(rng, 2 + rng.below(6), base);
        auto g = buildDependencyGraph(plans, base);
        std::vector<bool> wasSafe(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) wasSafe[i] = g.safe(i);
        std::size_t before = g.criticalPath();
        auto edgesBefore = g.edges().size();
        auto stats = pruneGraph(g, PruneOptions{12, true});
        removed += stats.removedEdges;
        CHECK(stats.incrementalConsistent);
        CHECK(g.criticalPath() <= before);
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (wasSafe[i]) CHECK(g.safe(i));
            for (std::size_t p : g.nodes[i].parents) CHECK(p < i);
        }
        auto check = testing::allTopologicalOrders(g, wasSafe);
        totalOrders += check.orders;
        CHECK(check.violations == 0);
        (void)edgesBefore;
    }
    CHECK(removed > 0);
    CHECK(totalOrders > 1000);
}

TEST_CASE("greedy pruning above the exact limit keeps safety") {
    Rng rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        ledger::DeltaMap base;
        auto plans = testing::randomFlowPlans(rng, 40, base);
        auto g = buildDependencyGraph(plans, base);
        std::vector<bool> wasSafe(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) wasSafe[i] = g.safe(i);
        auto stats = pruneGraph(g, PruneOptions{2, false});
        CHECK(stats.greedyNodes > 0);
        for (int k = 0; k < 50; ++k) {
            CHECK(testing::playOrder(g, wasSafe, testing::randomTopologicalOrder(g, rng)) == 0);
        }
    }
}

TEST_CASE("protocol edges survive pruning") {
    auto w = key("0x1", Asset::ETH);
    ledger::TransactionPlan stake = flowPlan(1, {}, {{w, 1}});
    stake.action = ledger::StakeDeposit{Platform::Aave, Address::parse("0x1"), Asset::ETH, 1};
    ledger::TransactionPlan borrow = flowPlan(2, {{key("0x1", Asset::USDC), 5}}, {});
    borrow.action = ledger::LendingBorrow{Platform::Aave, Address::parse("0x1"), Asset::USDC, 5};
    ledger::TransactionPlan repay = flowPlan(3, {}, {{key("0x1", Asset::USDC), 5}});
    repay.action = ledger::LendingRepay{Platform::Aave, Address::parse("0x1"), Asset::USDC, 5};
    ledger::TransactionPlan other = flowPlan(4, {}, {});
    other.action = ledger::LendingBorrow{Platform::Compound, Address::parse("0x1"), Asset::USDC, 5};
    auto g = buildDependencyGraph({stake, borrow, repay, other}, {{w, 10}, {key("0x1", Asset::USDC), 100}});
    CHECK(g.edgeKind(0, 1) == EdgeKind::Protocol);
    CHECK(g.edgeKind(1, 2) == EdgeKind::Protocol);
    CHECK(g.nodes[3].parents.empty());
    pruneGraph(g);
    CHECK(g.hasEdge(0, 1));
    CHECK(g.hasEdge(1, 2));
}

TEST_CASE("execution of independent transfers uses block rounds") {
    ledger::LedgerState genesis = ledger::builtinGenesis();
    Session s(genesis);
    std::string src;
    std::vector<Address> owners;
    for (int i = 0; i < 10; ++i) {
        char from[16], to[16];
        std::snprintf(from, sizeof from, "0xb0%02x", i);
        std::snprintf(to, sizeof to, "0xb0%02x", 0x80 + i);
        src += std::string("transfer 1 USDC from wallet[") + from + "] to wallet[" + to + "];\n";
        owners.push_back(Address::parse(from));
    }
    auto txs = s.compile(src, owners);
    auto g = s.graph(txs);
    CHECK(g.edges().empty());
    auto report = executeGraph(g, s.node);
    CHECK(report.count(NodeStatus::Executed) == 10);
    CHECK(report.blocks == 2);
    CHECK(report.wallClockMs == 200);
    for (std::size_t i = 0; i < 10; ++i) CHECK(*report.nodes[i].confirmedAt == (i < 8 ? 100u : 200u));

    Session serial(genesis);
    auto g2 = serial.graph(serial.compile(src, owners));
    auto r2 = executeGraph(g2, serial.node, {}, ExecOptions{8, 64, true});
    CHECK(r2.count(NodeStatus::Executed) == 10);
    CHECK(r2.blocks == 10);
}

TEST_CASE("the sample program executes in two blocks") {
    Session s(ledger::sampleGenesis());
    auto txs = s.compile(sampleSource());
    auto g = s.graph(txs);
    pruneGraph(g);
    auto report = executeGraph(g, s.node);
    for (const auto& n : report.nodes) {
        CAPTURE(n.id);
        CAPTURE(n.reason);
        CHECK(n.status == NodeStatus::Executed);
    }
    std::vector<std::uint64_t> heights;
    for (const auto& n : report.nodes) heights.push_back(n.receipt->blockHeight - s.node.headHeight() + 2);
    CHECK(heights == std::vector<std::uint64_t>{1, 1, 2, 2, 2});
    CHECK(*report.nodes[3].submittedAt >= *report.nodes[0].confirmedAt);
    CHECK(report.wallClockMs == 200);
    auto j1 = toJson(report).dump();
    CHECK(j1.find("latencyMs") == std::string::npos);
}

TEST_CASE("failures and refusals cascade as skips") {
    Session s(ledger::sampleGenesis());
    auto txs = s.compile(
        "transfer 10 USDC from wallet[0xA] to wallet[0xB] checking price ETH < 1;\n"
        "transfer 10 USDC from wallet[0xB] to wallet[0xC];\n"
        "transfer 10 USDC from wallet[0xC] to wallet[0xD];\n"
        "transfer 10 ETH from wallet[0xA] to wallet[0xE];\n",
        {Address::parse("0xa"), Address::parse("0xb"), Address::parse("0xc")});
    auto g = s.graph(txs);
    pruneGraph(g);
    REQUIRE(g.hasEdge(0, 1));
    REQUIRE(g.hasEdge(1, 2));
    auto report = executeGraph(g, s.node);
    CHECK(report.nodes[0].status == NodeStatus::Failed);
    CHECK(report.nodes[0].reason == "ConstraintViolated");
    for (std::size_t i : {1u, 2u}) {
        CHECK(report.nodes[i].status == NodeStatus::Skipped);
        CHECK_FALSE(report.nodes[i].submittedAt);
        CHECK_FALSE(report.nodes[i].receipt);
    }
    CHECK(report.nodes[3].status == NodeStatus::Executed);

    Session s2(ledger::sampleGenesis());
    auto txs2 = s2.compile(
        "transfer 10 USDC from wallet[0xA] to wallet[0xB];\n"
        "transfer 10 USDC from wallet[0xB] to wallet[0xC];\n",
        {Address::parse("0xa"), Address::parse("0xb")});
    auto g2 = s2.graph(txs2);
    int asked = 0;
    ExecutionHooks deny{[](const ledger::SignedTransaction&, const ledger::Node&) {
                            return FeasibilityVerdict{Risk::Warn, 0.6, 0};
                        },
                        [&](const ledger::SignedTransaction&, const FeasibilityVerdict&) {
                            ++asked;
                            return false;
                        }};
    auto r2 = executeGraph(g2, s2.node, deny);
    CHECK(asked == 1);
    CHECK(r2.nodes[0].reason == "NotConfirmed");
    CHECK(r2.nodes[1].status == NodeStatus::Skipped);
    CHECK(r2.count(NodeStatus::Skipped) == 2);

    Session s3(ledger::sampleGenesis());
    auto g3 = s3.graph(s3.compile("transfer 1 USDC from wallet[0xA] to wallet[0xB];"));
    ExecutionHooks high{[](const ledger::SignedTransaction&, const ledger::Node&) {
        return FeasibilityVerdict{Risk::High, 0.1, 0};
    }, {}};
    auto r3 = executeGraph(g3, s3.node, high);
    CHECK(r3.nodes[0].status == NodeStatus::Skipped);
    CHECK(r3.nodes[0].feasibility->risk == Risk::High);
}

TEST_CASE("a trigger that never fires runs into the deadline") {
    Session s(ledger::sampleGenesis());
    auto g = s.graph(s.compile("trigger balance wallet[0xA] > 999999999 USDT then transfer 1 USDC from wallet[0xA] to wallet[0xB];"));
    auto report = executeGraph(g, s.node, {}, ExecOptions{8, 5});
    CHECK(report.nodes[0].status == NodeStatus::Skipped);
    CHECK(report.nodes[0].reason.rfind("DeadlineExceeded", 0) == 0);
    CHECK(report.blocks == 5);
}
