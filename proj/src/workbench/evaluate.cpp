// SPDX-License-Identifier: Apache-2.0
#include "intent/workbench/evaluate.hpp"

#include <algorithm>
#include <chrono>

#include "intent/ledger/apply.hpp"
#include "intent/ledger/genesis.hpp"
#include "intent/workbench/pipeline.hpp"

namespace intent::workbench {

using J = nlohmann::ordered_json;

void Confusion::add(bool predicted, bool actual) {
    if (predicted && actual) ++tp;
    if (predicted && !actual) ++fp;
    if (!predicted && !actual) ++tn;
    if (!predicted && actual) ++fn;
}

double Confusion::accuracy() const {
    return total() == 0 ? 1.0 : static_cast<double>(tp + tn) / static_cast<double>(total());
}

double Confusion::precision() const {
    return tp + fp == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
}

double Confusion::recall() const {
    return tp + fn == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
}

namespace {

struct LatencyStats {
    double sum = 0;
    double max = 0;
    std::size_t n = 0;
    void add(double ms) {
        sum += ms;
        max = std::max(max, ms);
        ++n;
    }
    void into(EvalMetrics& m) const {
        m.meanLatencyMs = n == 0 ? 0 : sum / static_cast<double>(n);
        m.maxLatencyMs = max;
    }
};

std::array<std::uint8_t, 32> seedBytes(std::uint64_t seed, std::string_view tag) {
    Rng rng(deriveSeed(seed, hashTag(tag)));
    std::array<std::uint8_t, 32> out{};
    for (auto& b : out) b = static_cast<std::uint8_t>(rng.below(256));
    return out;
}

ledger::SignedTransaction candidateSwap(const SigningKey& key, const ledger::LedgerState& head,
                                        const Digest& root, Rng& rng, double slippage, std::uint64_t price,
                                        std::size_t index) {
    auto pools = hotPools();
    const auto& pk = pools[rng.below(pools.size())];
    bool forward = rng.chance(0.5);
    Asset in = forward ? pk.a : pk.b;
    Asset out = forward ? pk.b : pk.a;
    Amount amount = worthAt(head, in, rng.between(5'000, 50'000));
    Amount quote = ledger::quoteSwap(head, pk.platform, in, amount, out).value_or(Amount(0));
    auto keep = static_cast<std::int64_t>((1.0 - slippage) * 1'000'000);
    Address me = addressOf(key.publicKey());

    ledger::TransactionPlan plan;
    plan.id = "candidate-" + std::to_string(index);
    plan.sender = key.publicKey();
    plan.gasPrice = price;
    plan.action = ledger::DexSwap{pk.platform, me, in, amount, out, quote * keep / 1'000'000, quote};
    plan.gasLimit = head.gasCost(ledger::ActionKind::DexSwap);
    ledger::SignedTransaction tx;
    tx.plan = std::move(plan);
    tx.stateRoot = root;
    tx.signer = key.publicKey();
    tx.signature = key.sign(ledger::signingPayload(tx.plan, root));
    return tx;
}

std::string labelFor(const feasibility::FeasibilityConfig& cfg) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "K=%.2f,M=%zu", cfg.k, cfg.contexts);
    return buf;
}

}  // namespace

CheckerEvaluation evaluateChecker(const CheckerWorkload& workload,
                                  const std::vector<feasibility::FeasibilityConfig>& configs) {
    for (const auto& c : configs) c.validate();
    auto genesis = ledger::builtinGenesis();
    genesis.config.blockGasLimit = workload.blockGasLimit;
    ledger::Node node(genesis);

    auto flowCfg = workload.flows;
    flowCfg.seed = deriveSeed(workload.seed, flowCfg.seed);
    FlowGenerator flows(flowCfg);
    flows.fund(node);

    std::vector<SigningKey> solvers;
    for (std::size_t i = 0; i < 16; ++i) {
        solvers.push_back(SigningKey::fromSeed(seedBytes(workload.seed, "solver-" + std::to_string(i))));
        for (Asset a : {Asset::USDC, Asset::USDT, Asset::DAI, Asset::ETH}) {
            node.mint(addressOf(solvers.back().publicKey()), a, worthAt(genesis, a, 50'000'000));
        }
    }
    node.mineBlock();
    for (std::uint64_t b = 0; b < workload.warmupBlocks; ++b) {
        flows.submitBlock(node);
        node.mineBlock();
    }

    CheckerEvaluation out;
    std::vector<LatencyStats> latency(configs.size());
    LatencyStats baseLatency;
    out.configs.resize(configs.size());
    for (std::size_t i = 0; i < configs.size(); ++i) out.configs[i].label = labelFor(configs[i]);
    out.baseline.label = "naive";

    Rng rng(deriveSeed(workload.seed, hashTag("candidates")));
    feasibility::FeasibilityConfig bidCfg;
    for (std::size_t c = 0; c < workload.candidates; ++c) {
        flows.submitBlock(node);
        auto head = node.headState();
        auto pending = node.getPending();
        auto predicted = feasibility::predictNextBlock(pending, bidCfg, workload.blockGasLimit);
        // cheapest bid that still leaves room for the candidate in the predicted block
        std::uint64_t room = workload.blockGasLimit - head.gasCost(ledger::ActionKind::DexSwap);
        std::uint64_t used = 0;
        std::uint64_t bid = 1;
        for (const auto& p : predicted) {
            if (used + p.tx.plan.gasLimit > room) {
                bid = p.tx.plan.gasPrice + 1;
                break;
            }
            used += p.tx.plan.gasLimit;
        }

        const SigningKey& key = solvers[c % solvers.size()];
        auto tx = candidateSwap(key, head, node.headRoot(), rng, workload.slippage, bid, c);

        std::vector<bool> predictions;
        for (std::size_t i = 0; i < configs.size(); ++i) {
            auto v = feasibility::checkFeasibility(tx, head, pending, workload.blockGasLimit, configs[i]);
            predictions.push_back(v.rho >= configs[i].thetaHigh);
            latency[i].add(v.latencyMs);
        }
        auto t0 = std::chrono::steady_clock::now();
        bool naive = feasibility::naiveCheck(tx, head);
        baseLatency.add(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());

        auto hash = node.sendRawTransaction(tx);
        node.mineBlock();
        auto receipt = node.getReceipt(hash);
        if (!receipt) ++out.notIncluded;
        for (int extra = 0; !receipt && extra < 64; ++extra) {
            node.mineBlock();
            receipt = node.getReceipt(hash);
        }
        bool actual = receipt && receipt->success();
        out.actualSuccesses += actual ? 1 : 0;
        for (std::size_t i = 0; i < configs.size(); ++i) out.configs[i].confusion.add(predictions[i], actual);
        out.baseline.confusion.add(naive, actual);
        ++out.candidates;
    }
    for (std::size_t i = 0; i < configs.size(); ++i) latency[i].into(out.configs[i]);
    baseLatency.into(out.baseline);
    return out;
}

namespace {

J metricsJson(const EvalMetrics& m, bool timing) {
    const auto& c = m.confusion;
    J j{{"label", m.label},
        {"confusion", {{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn}}},
        {"accuracy", c.accuracy()},
        {"precision", c.precision()},
        {"recall", c.recall()}};
    if (timing) {
        j["meanLatencyMs"] = m.meanLatencyMs;
        j["maxLatencyMs"] = m.maxLatencyMs;
    }
    return j;
}

}  // namespace

J toJson(const CheckerEvaluation& e, bool timing) {
    J cfgs = J::array();
    for (const auto& m : e.configs) cfgs.push_back(metricsJson(m, timing));
    return {{"candidates", e.candidates},
            {"actualSuccesses", e.actualSuccesses},
            {"notIncludedNextBlock", e.notIncluded},
            {"checker", cfgs},
            {"baseline", metricsJson(e.baseline, timing)}};
}

SpeedupEvaluation evaluateSpeedup(const SpeedupWorkload& workload, const ledger::LedgerState& genesis) {
    SpeedupEvaluation out;
    for (double di : workload.dependencyIndices) {
        double sum = 0;
        for (std::size_t s = 0; s < workload.seeds; ++s) {
            GeneratorConfig gen;
            gen.statementCount = workload.statements;
            gen.dependencyIndex = di;
            gen.mix = workload.mix;
            gen.seed = deriveSeed(workload.seed, s);
            auto program = generateProgram(gen, genesis);

            PipelineOptions opts;
            opts.seed = gen.seed;
            opts.enclave.keySeed = seedBytes(gen.seed, "enclave");
            opts.exec.workers = workload.workers;
            opts.exec.blockLatencyMs = workload.blockLatencyMs;
            opts.compareSerial = true;
            auto result = runPipeline(program.source(), genesis, opts);

            SpeedupRun run;
            run.dependencyIndex = di;
            run.seed = gen.seed;
            run.dependencyFraction = program.dependencyFraction();
            run.parallelMs = result.report.wallClockMs;
            run.serialMs = result.serialReport->wallClockMs;
            run.executed = result.report.count(optimizer::NodeStatus::Executed);
            run.serialExecuted = result.serialReport->count(optimizer::NodeStatus::Executed);
            run.speedup = result.report.speedupVsSerial.value_or(0.0);
            sum += run.speedup;
            out.runs.push_back(run);
        }
        out.meanByIndex.emplace_back(di, workload.seeds == 0 ? 0.0 : sum / static_cast<double>(workload.seeds));
    }
    return out;
}

J toJson(const SpeedupEvaluation& e) {
    J runs = J::array();
    for (const auto& r : e.runs) {
        runs.push_back({{"dependencyIndex", r.dependencyIndex},
                        {"seed", r.seed},
                        {"dependencyFraction", r.dependencyFraction},
                        {"parallelMs", r.parallelMs},
                        {"serialMs", r.serialMs},
                        {"executed", r.executed},
                        {"serialExecuted", r.serialExecuted},
                        {"speedup", r.speedup}});
    }
    J means = J::array();
    for (const auto& [di, m] : e.meanByIndex) means.push_back({{"dependencyIndex", di}, {"meanSpeedup", m}});
    return {{"means", means}, {"runs", runs}};
}

}  // namespace intent::workbench
