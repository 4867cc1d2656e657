// SPDX-License-Identifier: Apache-2.0
#include "intent/workbench/pipeline.hpp"

#include <memory>

#include "intent/icl/parser.hpp"
#include "intent/optimizer/graph.hpp"

namespace intent::workbench {

using J = nlohmann::ordered_json;

namespace {

template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const PipelineError&) {
        throw;
    } catch (const std::exception& e) {
        throw PipelineError(name, e.what());
    }
}

void approveAll(ledger::Node& node, const std::set<Address>& wallets, const Address& eoa) {
    for (const auto& w : wallets) node.approve(w, eoa, ledger::kAnyAsset, ledger::unlimitedAllowance());
    node.mineBlock();
}

optimizer::DependencyGraph graphFor(const std::vector<ledger::SignedTransaction>& txs, const ledger::Node& node) {
    std::vector<ledger::TransactionPlan> plans;
    for (const auto& t : txs) plans.push_back(t.plan);
    return optimizer::buildDependencyGraph(txs, optimizer::baseBalances(plans, node.headState()));
}

}  // namespace

PipelineResult runPipeline(const std::string& source, const ledger::LedgerState& genesis,
                           const PipelineOptions& options) {
    PipelineResult out;
    auto program = stage("parse", [&] { return icl::parse(source); });
    auto wallets = enclave::programWallets(program);

    auto node = std::make_unique<ledger::Node>(genesis);
    enclave::Enclave enc(options.enclave);

    stage("attest", [&] {
        enclave::AttestationVerifier verifier(enclave::measure(options.enclave), enclave::rootOfTrustKey(),
                                              options.seed);
        out.attestation = enc.attest(verifier.challenge());
        if (!verifier.verify(out.attestation)) throw enclave::ProtocolError("attestation report did not verify");
        out.eoa = addressOf(enc.exportPk());
        return 0;
    });

    stage("approve", [&] {
        approveAll(*node, wallets, out.eoa);
        return 0;
    });

    stage("acquire", [&] {
        enclave::NodeSource src(node.get());
        out.snapshotHeight = node->headHeight();
        enc.acquireVerifiedState(src, out.snapshotHeight, enclave::neededKeys(program));
        return 0;
    });

    out.signedTxs = stage("compile", [&] { return enc.compileAndSign(program); });

    auto graph = stage("build", [&] { return graphFor(out.signedTxs, *node); });
    out.graphBefore = optimizer::toJson(graph);
    out.prune = stage("prune", [&] { return optimizer::pruneGraph(graph, options.prune); });
    out.graphAfter = optimizer::toJson(graph);

    optimizer::ExecutionHooks hooks;
    if (options.checkFeasibility) hooks.feasibility = feasibility::makeHook(options.feasibility);
    hooks.confirm = options.confirm;
    out.report = stage("execute", [&] { return optimizer::executeGraph(graph, *node, hooks, options.exec); });

    if (options.compareSerial && !options.exec.serial) {
        // same genesis and approvals give the same roots, so the signatures stay valid
        auto fresh = std::make_unique<ledger::Node>(genesis);
        stage("approve", [&] {
            approveAll(*fresh, wallets, out.eoa);
            return 0;
        });
        auto serialGraph = stage("build", [&] { return graphFor(out.signedTxs, *fresh); });
        auto serialOpts = options.exec;
        serialOpts.serial = true;
        out.serialReport =
            stage("execute", [&] { return optimizer::executeGraph(serialGraph, *fresh, hooks, serialOpts); });
        if (out.report.wallClockMs > 0) {
            out.report.speedupVsSerial =
                static_cast<double>(out.serialReport->wallClockMs) / static_cast<double>(out.report.wallClockMs);
        }
    }
    return out;
}

J toJson(const PipelineResult& r, bool timing) {
    J txs = J::array();
    for (const auto& t : r.signedTxs) txs.push_back(ledger::toJson(t));
    J prune{{"removedEdges", r.prune.removedEdges},
            {"addedEdges", r.prune.addedEdges},
            {"infeasibleNodes", r.prune.infeasibleNodes},
            {"greedyNodes", r.prune.greedyNodes}};
    J out{{"attestation", enclave::toJson(r.attestation)},
          {"eoa", r.eoa.str()},
          {"snapshotHeight", r.snapshotHeight},
          {"transactions", txs},
          {"graph", r.graphBefore},
          {"prunedGraph", r.graphAfter},
          {"prune", prune},
          {"execution", optimizer::toJson(r.report, timing)}};
    if (r.serialReport) out["serialExecution"] = optimizer::toJson(*r.serialReport, timing);
    return out;
}

}  // namespace intent::workbench
