// SPDX-License-Identifier: Apache-2.0
#include "intent/optimizer/executor.hpp"

#include <algorithm>
#include <future>

#include "intent/icl/eval.hpp"

namespace intent::optimizer {

using J = nlohmann::ordered_json;

std::string_view name(Risk risk) {
    switch (risk) {
        case Risk::Low: return "LOW";
        case Risk::Warn: return "WARN";
        case Risk::High: return "HIGH";
    }
    return "?";
}

std::size_t ExecutionReport::count(NodeStatus status) const {
    return static_cast<std::size_t>(
        std::count_if(nodes.begin(), nodes.end(), [&](const NodeReport& n) { return n.status == status; }));
}

namespace {

bool terminal(NodeStatus s) {
    return s == NodeStatus::Executed || s == NodeStatus::Failed || s == NodeStatus::Skipped;
}

struct Run {
    DependencyGraph& g;
    ledger::Node& node;
    const ExecutionHooks& hooks;
    std::size_t width;
    std::uint64_t deadline;
    std::uint64_t latency;
    std::vector<NodeReport> report{};
    std::vector<std::uint64_t> readySince{};  // block height when first ready
    std::vector<std::string> hashes{};
    std::vector<std::size_t> inFlight{};
    std::uint64_t round = 0;

    std::uint64_t now() const { return round * latency; }

    void finish(std::size_t i, NodeStatus s, std::string reason) {
        g.nodes[i].status = s;
        report[i].status = s;
        report[i].reason = std::move(reason);
    }

    // FAILED or SKIPPED parents skip all their descendants.
    void propagateSkips() {
        for (std::size_t i : g.topologicalOrder()) {
            if (terminal(g.nodes[i].status)) continue;
            for (std::size_t p : g.nodes[i].parents) {
                auto ps = g.nodes[p].status;
                if (ps == NodeStatus::Failed || ps == NodeStatus::Skipped) {
                    finish(i, NodeStatus::Skipped, "dependency " + g.nodes[p].plan.id + " did not execute");
                    break;
                }
            }
        }
    }

    bool triggerFires(std::size_t i, const ledger::LedgerState& head) {
        const auto& trig = g.nodes[i].plan.trigger;
        if (!trig) return true;
        try {
            return icl::evaluateCondition(*trig, icl::EvalContext{head, head.time(), std::nullopt});
        } catch (const icl::EvalError&) {
            return false;
        }
    }

    void dispatch() {
        std::vector<std::size_t> candidates;
        ledger::LedgerState head = node.headState();
        for (std::size_t i = 0; i < g.size(); ++i) {
            auto& n = g.nodes[i];
            if (n.status != NodeStatus::Pending && n.status != NodeStatus::Ready) continue;
            bool parentsDone = std::all_of(n.parents.begin(), n.parents.end(), [&](std::size_t p) {
                return g.nodes[p].status == NodeStatus::Executed;
            });
            if (!parentsDone) continue;
            if (n.status == NodeStatus::Pending) {
                n.status = NodeStatus::Ready;
                report[i].status = NodeStatus::Ready;
                report[i].queuedAt = now();
                readySince[i] = head.height;
            }
            if (inFlight.size() + candidates.size() >= width) continue;
            if (!triggerFires(i, head)) {
                if (head.height - readySince[i] >= deadline) {
                    finish(i, NodeStatus::Skipped, "DeadlineExceeded: trigger did not fire");
                }
                continue;
            }
            candidates.push_back(i);
        }
        if (candidates.empty()) return;

        std::vector<FeasibilityVerdict> verdicts(candidates.size());
        if (hooks.feasibility) {
            std::vector<std::future<FeasibilityVerdict>> futures;
            for (std::size_t i : candidates) {
                futures.push_back(std::async(std::launch::async, [this, i] {
                    return hooks.feasibility(*g.nodes[i].tx, node);
                }));
            }
            for (std::size_t k = 0; k < futures.size(); ++k) verdicts[k] = futures[k].get();
        }
        for (std::size_t k = 0; k < candidates.size(); ++k) {
            std::size_t i = candidates[k];
            const auto& v = verdicts[k];
            if (hooks.feasibility) report[i].feasibility = v;
            if (v.risk == Risk::High) {
                finish(i, NodeStatus::Skipped, "FeasibilityHigh");
                continue;
            }
            if (v.risk == Risk::Warn && hooks.confirm && !hooks.confirm(*g.nodes[i].tx, v)) {
                finish(i, NodeStatus::Skipped, "NotConfirmed");
                continue;
            }
            try {
                hashes[i] = node.sendRawTransaction(*g.nodes[i].tx);
                report[i].submittedAt = now();
                inFlight.push_back(i);
            } catch (const ledger::NodeError& e) {
                finish(i, NodeStatus::Failed, std::string("Rejected: ") + e.what());
            }
        }
    }

    void collect() {
        std::vector<std::size_t> still;
        for (std::size_t i : inFlight) {
            auto r = node.getReceipt(hashes[i]);
            if (!r) {
                if (round * latency - *report[i].submittedAt >= deadline * latency) {
                    finish(i, NodeStatus::Failed, "NotIncluded");
                } else {
                    still.push_back(i);
                }
                continue;
            }
            report[i].confirmedAt = now();
            report[i].receipt = *r;
            if (r->success()) {
                finish(i, NodeStatus::Executed, "");
            } else {
                finish(i, NodeStatus::Failed, r->reason);
            }
        }
        inFlight = std::move(still);
    }
};

}  // namespace

ExecutionReport executeGraph(DependencyGraph& g, ledger::Node& node, const ExecutionHooks& hooks,
                             const ExecOptions& options) {
    Run run{g, node, hooks, options.serial ? 1 : std::max<std::size_t>(1, options.workers),
            options.triggerDeadlineBlocks, options.blockLatencyMs};
    run.report.resize(g.size());
    run.readySince.resize(g.size());
    run.hashes.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        run.report[i].id = g.nodes[i].plan.id;
        g.nodes[i].status = NodeStatus::Pending;
        if (!g.nodes[i].tx) run.finish(i, NodeStatus::Failed, "Unsigned");
    }
    auto allDone = [&] {
        return std::all_of(g.nodes.begin(), g.nodes.end(), [](const GraphNode& n) { return terminal(n.status); });
    };
    while (true) {
        run.propagateSkips();
        run.dispatch();
        run.propagateSkips();
        if (allDone()) break;
        node.mineBlock();
        ++run.round;
        run.collect();
    }
    ExecutionReport out;
    out.nodes = std::move(run.report);
    out.blocks = run.round;
    out.wallClockMs = run.round * options.blockLatencyMs;
    return out;
}

J toJson(const ExecutionReport& report, bool timing) {
    J nodes = J::array();
    for (const auto& n : report.nodes) {
        J j{{"id", n.id}, {"status", name(n.status)}};
        if (!n.reason.empty()) j["reason"] = n.reason;
        if (n.feasibility) {
            J f{{"risk", name(n.feasibility->risk)}, {"score", n.feasibility->score}};
            if (timing) f["latencyMs"] = n.feasibility->latencyMs;
            j["feasibility"] = f;
        }
        if (n.queuedAt) j["queuedAt"] = *n.queuedAt;
        if (n.submittedAt) j["submittedAt"] = *n.submittedAt;
        if (n.confirmedAt) j["confirmedAt"] = *n.confirmedAt;
        if (n.receipt) j["receipt"] = ledger::toJson(*n.receipt);
        nodes.push_back(j);
    }
    J agg{{"blocks", report.blocks}, {"wallClockMs", report.wallClockMs}};
    if (report.speedupVsSerial) agg["speedupVsSerial"] = *report.speedupVsSerial;
    return J{{"nodes", nodes}, {"aggregate", agg}};
}

}  // namespace intent::optimizer
