// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "intent/ledger/node.hpp"
#include "intent/optimizer/graph.hpp"

namespace intent::optimizer {

enum class Risk { Low, Warn, High };
std::string_view name(Risk risk);

struct FeasibilityVerdict {
    Risk risk = Risk::Low;
    double score = 1.0;       // estimated success probability
    double latencyMs = 0.0;   // measured, not part of deterministic output
};

using FeasibilityHook = std::function<FeasibilityVerdict(const ledger::SignedTransaction&, const ledger::Node&)>;
using ConfirmHook = std::function<bool(const ledger::SignedTransaction&, const FeasibilityVerdict&)>;

struct ExecutionHooks {
    FeasibilityHook feasibility;  // empty: every node is Low
    ConfirmHook confirm;          // empty: auto-confirm
};

struct ExecOptions {
    std::size_t workers = 8;
    std::uint64_t triggerDeadlineBlocks = 64;
    bool serial = false;  // one submission per block
    std::uint64_t blockLatencyMs = 100;
};

struct NodeReport {
    std::string id;
    NodeStatus status = NodeStatus::Pending;
    std::string reason;
    std::optional<ledger::Receipt> receipt;
    std::optional<FeasibilityVerdict> feasibility;
    std::optional<std::uint64_t> queuedAt;  // virtual ms
    std::optional<std::uint64_t> submittedAt;
    std::optional<std::uint64_t> confirmedAt;
};

struct ExecutionReport {
    std::vector<NodeReport> nodes;  // intent order
    std::uint64_t blocks = 0;
    std::uint64_t wallClockMs = 0;
    std::optional<double> speedupVsSerial;

    std::size_t count(NodeStatus status) const;
};

/// Runs the graph against the node on a block-round clock: each round
/// dispatches up to `workers` ready nodes, then mines one block. Nodes must
/// carry signed transactions. Statuses in `g` are updated in place.
ExecutionReport executeGraph(DependencyGraph& g, ledger::Node& node, const ExecutionHooks& hooks = {},
                             const ExecOptions& options = {});

/// Measured hook latencies are left out unless `timing` is set so that
/// reports are byte-stable.
nlohmann::ordered_json toJson(const ExecutionReport& report, bool timing = false);

}  // namespace intent::optimizer
