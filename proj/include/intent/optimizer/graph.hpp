// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "intent/ledger/apply.hpp"
#include "intent/ledger/transaction.hpp"

namespace intent::optimizer {

using ledger::DeltaMap;

enum class NodeStatus { Pending, Ready, Executed, Failed, Skipped };
std::string_view name(NodeStatus status);

enum class EdgeKind { Flow, Protocol, Rewired };
std::string_view name(EdgeKind kind);

struct GraphNode {
    ledger::TransactionPlan plan;
    std::optional<ledger::SignedTransaction> tx;
    std::vector<std::size_t> parents;   // sorted
    std::vector<std::size_t> children;  // sorted
    DeltaMap predicted;                 // B-hat before this node runs
    NodeStatus status = NodeStatus::Pending;
    bool infeasible = false;            // negative slack at pruning time
};

/// Producers and consumers per (wallet, asset), in intent order.
struct AssetFlowIndex {
    std::map<BalanceKey, std::vector<std::size_t>> in;
    std::map<BalanceKey, std::vector<std::size_t>> de;
};

class DependencyGraph {
public:
    std::vector<GraphNode> nodes;  // intent order
    DeltaMap base;                 // B0

    std::size_t size() const { return nodes.size(); }
    std::optional<std::size_t> find(const std::string& id) const;

    bool hasEdge(std::size_t from, std::size_t to) const { return edges_.count({from, to}) != 0; }
    EdgeKind edgeKind(std::size_t from, std::size_t to) const { return edges_.at({from, to}); }
    bool addEdge(std::size_t from, std::size_t to, EdgeKind kind);
    void removeEdge(std::size_t from, std::size_t to);
    const std::map<std::pair<std::size_t, std::size_t>, EdgeKind>& edges() const { return edges_; }

    /// Kahn's algorithm, lowest index first among ready nodes.
    std::vector<std::size_t> topologicalOrder() const;
    /// reach[i][j]: a path i -> j exists (i != j).
    std::vector<std::vector<bool>> reachability() const;
    /// Longest path, counted in edges.
    std::size_t criticalPath() const;

    /// From scratch: B0 + sum over ancestors of (inc - dec), minus the
    /// decreases of every node left unordered with j.
    DeltaMap predictedFromScratch(std::size_t j) const;
    void recomputePredicted();

    /// B-hat covers every consumed key of the node.
    bool safe(std::size_t j) const;

private:
    std::map<std::pair<std::size_t, std::size_t>, EdgeKind> edges_;
};

/// Balances of every key any plan touches, read from a state.
DeltaMap baseBalances(const std::vector<ledger::TransactionPlan>& plans, const ledger::LedgerState& state);

DependencyGraph buildDependencyGraph(std::vector<ledger::TransactionPlan> plans, DeltaMap base,
                                     AssetFlowIndex* index = nullptr);
DependencyGraph buildDependencyGraph(const std::vector<ledger::SignedTransaction>& txs, DeltaMap base,
                                     AssetFlowIndex* index = nullptr);

/// Graphviz text.
std::string toDot(const DependencyGraph& g);
nlohmann::ordered_json toJson(const DependencyGraph& g);

}  // namespace intent::optimizer
