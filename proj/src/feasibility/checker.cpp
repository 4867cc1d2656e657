// SPDX-License-Identifier: Apache-2.0
#include "intent/feasibility/checker.hpp"

#include <chrono>
#include <numeric>
#include <set>
#include <stdexcept>

#include "intent/common/random.hpp"
#include "intent/ledger/apply.hpp"

namespace intent::feasibility {

using ledger::PendingTx;
using ledger::SignedTransaction;
using J = nlohmann::ordered_json;

void FeasibilityConfig::validate() const {
    if (!(k > 0)) throw std::invalid_argument("K must be positive");
    if (contexts < 1) throw std::invalid_argument("at least one context is required");
    if (!(0 <= thetaLow && thetaLow <= thetaHigh && thetaHigh <= 1)) {
        throw std::invalid_argument("thresholds must satisfy 0 <= low <= high <= 1");
    }
}

std::vector<PendingTx> predictNextBlock(const std::vector<PendingTx>& pending, const FeasibilityConfig& cfg,
                                        std::uint64_t blockGasLimit) {
    auto budget = static_cast<std::uint64_t>(cfg.k * static_cast<double>(blockGasLimit));
    std::vector<ledger::PackCandidate> cands;
    cands.reserve(pending.size());
    for (const auto& p : pending) cands.push_back({p.tx.plan.gasPrice, p.tx.plan.gasLimit});
    std::vector<PendingTx> out;
    for (std::size_t i : ledger::packByGasPrice(cands, budget)) out.push_back(pending[i]);
    return out;
}

namespace {

struct DisjointSet {
    std::vector<std::size_t> parent;
    explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

ledger::LedgerState nextBlockFork(const ledger::LedgerState& state) {
    ledger::LedgerState fork = state;
    fork.height += 1;
    return fork;
}

}  // namespace

std::vector<std::size_t> interferenceSet(const SignedTransaction& target, const std::vector<PendingTx>& predicted) {
    // index 0 is the target
    DisjointSet ds(predicted.size() + 1);
    std::map<std::string, std::size_t> owner;
    auto touch = [&](std::size_t i, const ledger::Action& a) {
        for (const auto& obj : ledger::touchedObjects(a)) {
            auto [it, inserted] = owner.emplace(obj, i);
            if (!inserted) ds.unite(it->second, i);
        }
    };
    touch(0, target.plan.action);
    for (std::size_t i = 0; i < predicted.size(); ++i) touch(i + 1, predicted[i].tx.plan.action);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (ds.find(i + 1) == ds.find(0)) out.push_back(i);
    }
    return out;
}

std::vector<ExecutionContext> buildContexts(const SignedTransaction& target, const std::vector<PendingTx>& predicted,
                                            const FeasibilityConfig& cfg) {
    std::string targetHash = ledger::txHashHex(target);
    std::vector<PendingTx> others;
    for (const auto& p : predicted) {
        if (p.hash != targetHash) others.push_back(p);
    }
    auto members = interferenceSet(target, others);
    std::uint64_t base = deriveSeed(cfg.seed, hashTag(targetHash));
    std::vector<ExecutionContext> out;
    for (std::size_t m = 0; m < cfg.contexts; ++m) {
        ExecutionContext ctx;
        ctx.seed = deriveSeed(base, m);
        for (std::size_t i : members) ctx.prefix.push_back(others[i]);
        Rng rng(ctx.seed);
        rng.shuffle(std::span<PendingTx>(ctx.prefix));
        out.push_back(std::move(ctx));
    }
    return out;
}

Risk classify(double rho, const FeasibilityConfig& cfg) {
    if (rho >= cfg.thetaHigh) return Risk::Low;
    if (rho < cfg.thetaLow) return Risk::High;
    return Risk::Warn;
}

Verdict checkFeasibility(const SignedTransaction& target, const ledger::LedgerState& state,
                         const std::vector<PendingTx>& mempool, std::uint64_t blockGasLimit,
                         const FeasibilityConfig& cfg) {
    cfg.validate();
    auto start = std::chrono::steady_clock::now();
    auto predicted = predictNextBlock(mempool, cfg, blockGasLimit);
    auto contexts = buildContexts(target, predicted, cfg);
    Verdict v;
    v.interference = contexts.empty() ? 0 : contexts.front().prefix.size();
    std::size_t ok = 0;
    for (const auto& ctx : contexts) {
        std::string reason;
        if (ctx.prefix.empty() && !v.reasons.empty()) {
            reason = v.reasons.front();
        } else {
            ledger::LedgerState fork = nextBlockFork(state);
            for (const auto& p : ctx.prefix) ledger::applyTransaction(fork, p.tx, false);
            auto r = ledger::applyTransaction(fork, target, false);
            if (!r.success()) reason = r.reason.empty() ? "Revert" : r.reason;
        }
        v.perContext.push_back(reason.empty());
        v.reasons.push_back(reason);
        if (reason.empty()) ++ok;
    }
    v.rho = static_cast<double>(ok) / static_cast<double>(contexts.size());
    v.risk = classify(v.rho, cfg);
    v.latencyMs = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return v;
}

Verdict checkFeasibility(const SignedTransaction& target, const ledger::Node& node, const FeasibilityConfig& cfg) {
    return checkFeasibility(target, node.headState(), node.getPending(), node.blockGasLimit(), cfg);
}

bool naiveCheck(const SignedTransaction& target, const ledger::LedgerState& state) {
    ledger::LedgerState fork = nextBlockFork(state);
    return ledger::applyTransaction(fork, target, false).success();
}

optimizer::FeasibilityHook makeHook(FeasibilityConfig cfg) {
    return [cfg](const SignedTransaction& tx, const ledger::Node& node) {
        auto v = checkFeasibility(tx, node, cfg);
        return optimizer::FeasibilityVerdict{v.risk, v.rho, v.latencyMs};
    };
}

J toJson(const Verdict& v, bool timing) {
    J ctx = J::array();
    for (std::size_t i = 0; i < v.perContext.size(); ++i) {
        J c{{"success", static_cast<bool>(v.perContext[i])}};
        if (!v.reasons[i].empty()) c["reason"] = v.reasons[i];
        ctx.push_back(c);
    }
    J out{{"rho", v.rho}, {"risk", optimizer::name(v.risk)}, {"interference", v.interference}, {"perContext", ctx}};
    if (timing) out["latencyMs"] = v.latencyMs;
    return out;
}

}  // namespace intent::feasibility
