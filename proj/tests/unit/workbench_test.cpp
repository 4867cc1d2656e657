// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <fstream>
#include <map>
#include <sstream>

#include "intent/compiler/compiler.hpp"
#include "intent/icl/parser.hpp"
#include "intent/ledger/apply.hpp"
#include "intent/ledger/genesis.hpp"
#include "intent/workbench/evaluate.hpp"
#include "intent/workbench/flows.hpp"
#include "intent/workbench/generator.hpp"
#include "intent/workbench/pipeline.hpp"
#include "support.hpp"

using namespace intent;
using namespace intent::workbench;

namespace {

const ledger::LedgerState& genesis() {
    static const ledger::LedgerState g = ledger::builtinGenesis();
    return g;
}

// Genesis with every builtin wallet approving the signer.
ledger::LedgerState approved(const SigningKey& key) {
    auto s = genesis();
    for (const auto& w : ledger::builtinWallets()) {
        s.allowances[ledger::AllowanceKey{w, addressOf(key.publicKey()), ledger::kAnyAsset}] =
            ledger::unlimitedAllowance();
    }
    return s;
}

}  // namespace

TEST_CASE("human amounts render exactly") {
    CHECK(humanAmount(Asset::USDC, 1'500'000) == "1.5");
    CHECK(humanAmount(Asset::USDC, 7) == "0.000007");
    CHECK(humanAmount(Asset::ETH, ledger::units(Asset::ETH, "12")) == "12");
    CHECK(humanAmount(Asset::ETH, ledger::units(Asset::ETH, "0.0625")) == "0.0625");
}

TEST_CASE("intent mixes parse by family name") {
    auto mix = parseMix("swap:2,transfer");
    CHECK(mix[static_cast<std::size_t>(Family::Swap)] == 2.0);
    CHECK(mix[static_cast<std::size_t>(Family::Transfer)] == 1.0);
    CHECK(mix[static_cast<std::size_t>(Family::Stake)] == 0.0);
    CHECK_THROWS_AS(parseMix("teleport:1"), std::invalid_argument);
    for (std::size_t i = 0; i < kFamilyCount; ++i) CHECK(parseFamily(name(static_cast<Family>(i))));
}

TEST_CASE("dependency index extremes") {
    GeneratorConfig cfg;
    cfg.statementCount = 50;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        cfg.seed = seed;
        cfg.dependencyIndex = 0.0;
        auto none = generateProgram(cfg, genesis());
        CHECK(none.statements.size() == 50);
        CHECK(none.dependencyFraction() == 0.0);
        cfg.dependencyIndex = 1.0;
        auto all = generateProgram(cfg, genesis());
        CHECK(all.dependencyFraction() == 1.0);
        for (std::size_t x = 1; x < all.statements.size(); ++x) {
            REQUIRE(all.statements[x].dependsOn);
            CHECK(*all.statements[x].dependsOn < x);
        }
    }
}

TEST_CASE("dependency fraction concentrates around the index") {
    GeneratorConfig cfg;
    cfg.statementCount = 1000;
    cfg.dependencyIndex = 0.5;
    cfg.seed = 7;
    auto p = generateProgram(cfg, genesis());
    // binomial(999, 0.5): five standard deviations is about 0.079
    CHECK(p.dependencyFraction() >= 0.45);
    CHECK(p.dependencyFraction() <= 0.55);
    CHECK_NOTHROW(icl::parse(p.source()));
}

TEST_CASE("generated programs parse, compile and execute serially") {
    auto key = testing::keyFromByte(0x42);
    auto base = approved(key);
    std::map<std::string, int> failures;
    std::size_t total = 0;
    for (double di : {0.0, 0.5, 1.0}) {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            GeneratorConfig cfg;
            cfg.dependencyIndex = di;
            cfg.seed = seed;
            auto p = generateProgram(cfg, genesis());
            auto program = icl::parse(p.source());
            REQUIRE(program.statements.size() == 50);
            auto set = compiler::compileProgram(program, genesis(), {}, key.publicKey());
            auto s = base;
            for (const auto& plan : set.plans) {
                auto r = ledger::applyPlan(s, plan);
                ++total;
                if (!r.success()) failures[r.reason]++;
            }
        }
    }
    std::size_t failed = 0;
    for (const auto& [reason, n] : failures) {
        MESSAGE(reason << ": " << n);
        failed += n;
    }
    CHECK(failed == 0);
    CHECK(total == 3000);
}

TEST_CASE("single-family mixes and exhaustion") {
    GeneratorConfig cfg;
    cfg.statementCount = 30;
    cfg.mix = parseMix("swap:1");
    cfg.dependencyIndex = 0.5;
    for (const auto& s : generateProgram(cfg, genesis()).statements) CHECK(s.family == Family::Swap);
    cfg.mix = parseMix("borrow:1");
    CHECK_THROWS_AS(generateProgram(cfg, genesis()), GenerationExhausted);
    cfg.dependencyIndex = 1.5;
    CHECK_THROWS_AS(generateProgram(cfg, genesis()), std::invalid_argument);
}

TEST_CASE("generation is deterministic per seed") {
    GeneratorConfig cfg;
    cfg.dependencyIndex = 0.5;
    cfg.seed = 3;
    CHECK(toJson(generateProgram(cfg, genesis())).dump() == toJson(generateProgram(cfg, genesis())).dump());
    cfg.seed = 4;
    auto other = generateProgram(cfg, genesis()).source();
    cfg.seed = 3;
    CHECK(other != generateProgram(cfg, genesis()).source());
}

TEST_CASE("flows: zero rate submits nothing, swap-only mix submits swaps") {
    ledger::Node node(genesis());
    FlowConfig cfg;
    cfg.ratePerBlock = 0;
    FlowGenerator idle(cfg);
    idle.fund(node);
    node.mineBlock();
    for (int b = 0; b < 5; ++b) CHECK(idle.submitBlock(node) == 0);
    CHECK(node.pendingCount() == 0);

    cfg.ratePerBlock = 7.5;
    cfg.mix = FlowConfig::parseMix("swap:1");
    FlowGenerator swaps(cfg);
    swaps.fund(node);
    node.mineBlock();
    std::size_t total = 0;
    for (int b = 0; b < 4; ++b) total += swaps.submitBlock(node);
    CHECK(total == 30);
    CHECK(swaps.count(FlowKind::Swap) == 30);
    CHECK(swaps.count(FlowKind::Transfer) == 0);
    CHECK(swaps.rejected() == 0);
}

TEST_CASE("flows: backlog grows when demand exceeds block gas") {
    auto g = genesis();
    g.config.blockGasLimit = 1'000'000;
    ledger::Node node(g);
    FlowConfig cfg;
    cfg.ratePerBlock = 20;  // roughly 2.4M gas of demand per block
    FlowGenerator flows(cfg);
    flows.fund(node);
    node.mineBlock();
    std::vector<std::size_t> backlog;
    for (int b = 0; b < 6; ++b) {
        flows.submitBlock(node);
        node.mineBlock();
        backlog.push_back(node.pendingCount());
    }
    CHECK(backlog.back() > backlog.front());
    CHECK(backlog.back() >= 40);
}

TEST_CASE("flows trace is deterministic per seed") {
    FlowConfig cfg;
    cfg.durationBlocks = 8;
    cfg.seed = 5;
    ledger::Node a(genesis());
    ledger::Node b(genesis());
    CHECK(runFlows(cfg, a).dump() == runFlows(cfg, b).dump());
    CHECK(a.headRoot() == b.headRoot());
}

namespace {

std::string sampleProgram() {
    std::ifstream in(std::string(INTENT_CORPUS_DIR) + "/valid/sample_program.icl");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("pipeline runs the example program end to end") {
    PipelineOptions opts;
    opts.compareSerial = true;
    opts.enclave.keySeed = std::array<std::uint8_t, 32>{7};
    auto r = runPipeline(sampleProgram(), ledger::sampleGenesis(), opts);
    CHECK(r.signedTxs.size() == 5);
    CHECK(r.report.count(optimizer::NodeStatus::Executed) == 5);
    REQUIRE(r.serialReport);
    CHECK(r.serialReport->count(optimizer::NodeStatus::Executed) == 5);
    for (std::size_t i = 0; i < r.report.nodes.size(); ++i) {
        CHECK(r.report.nodes[i].status == r.serialReport->nodes[i].status);
    }
    CHECK(r.serialReport->wallClockMs > r.report.wallClockMs);
    REQUIRE(r.report.speedupVsSerial);
    CHECK(*r.report.speedupVsSerial > 1.0);
    bool same = toJson(r).dump() == toJson(runPipeline(sampleProgram(), ledger::sampleGenesis(), opts)).dump();
    CHECK(same);
}

TEST_CASE("pipeline errors name their stage") {
    try {
        runPipeline("this is not a program", ledger::sampleGenesis());
        FAIL("expected a parse failure");
    } catch (const PipelineError& e) {
        CHECK(e.stage() == "parse");
    }
    try {
        // parses, but the wallet holds no such NFT
        runPipeline("sell NFT [0x999999] in collection [0xC011] from wallet[0xA];\n", ledger::sampleGenesis());
        FAIL("expected a compile failure");
    } catch (const PipelineError& e) {
        CHECK(e.stage() == "compile");
    }
}

TEST_CASE("confusion matrix arithmetic") {
    Confusion c;
    for (int i = 0; i < 6; ++i) c.add(true, true);
    c.add(true, false);
    c.add(false, false);
    c.add(false, false);
    c.add(false, true);
    CHECK(c.total() == 10);
    CHECK(c.accuracy() == doctest::Approx(0.8));
    CHECK(c.precision() == doctest::Approx(6.0 / 7.0));
    CHECK(c.recall() == doctest::Approx(6.0 / 7.0));
    Confusion empty;
    CHECK(empty.accuracy() == 1.0);
    CHECK(empty.precision() == 1.0);
}

TEST_CASE("uncongested workload leaves nothing to mispredict") {
    CheckerWorkload wl;
    wl.flows.ratePerBlock = 0;
    wl.candidates = 20;
    wl.warmupBlocks = 1;
    feasibility::FeasibilityConfig k1;
    auto e = evaluateChecker(wl, {k1});
    CHECK(e.candidates == 20);
    CHECK(e.notIncluded == 0);
    CHECK(e.configs[0].confusion.total() == 20);
    CHECK(e.configs[0].confusion.accuracy() == 1.0);
    CHECK(e.baseline.confusion.accuracy() == 1.0);
}
